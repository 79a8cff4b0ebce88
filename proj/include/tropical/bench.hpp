// Instrumented matrix-product benchmark: the same generic kernel runs on
// a counting double for the ordinary product and on tropical scalars for
// the max-plus product, so the counted path is the production algorithm.
// The point is the exact operation census (a max-plus product spends no
// multiplications); wall time is reported for context only.

#pragma once

#include "tropical/matrix.hpp"
#include "tropical/opcount.hpp"
#include "tropical/scalar.hpp"

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace tropical {

enum class MatmulKind { Classical, TropicalLimit };

inline const char* matmul_kind_name(MatmulKind kind) {
    return kind == MatmulKind::Classical ? "classical" : "tropical";
}

namespace detail {

inline std::vector<double> random_entries(std::size_t count, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> out(count);
    for (auto& v : out) v = dist(rng);
    return out;
}

} // namespace detail

// One n x n by n x n product on seeded random data, routed through the
// counters. Exact census: Classical spends n^3 mults and n^2(n-1) adds;
// TropicalLimit spends 0 mults, n^3 adds, n^2(n-1) comparisons.
inline OpCounters counted_matmul(MatmulKind kind, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("counted_matmul: n must be positive");
    std::mt19937_64 rng(seed);
    const auto lhs = detail::random_entries(n * n, rng);
    const auto rhs = detail::random_entries(n * n, rng);

    OpCounters counters;
    if (kind == MatmulKind::Classical) {
        Matrix<Counted> a(n, n), b(n, n);
        for (std::size_t i = 0; i < n * n; ++i) {
            a.data()[i] = Counted{lhs[i]};
            b.data()[i] = Counted{rhs[i]};
        }
        CountingScope scope(counters);
        (void)mat_mul_generic(a, b, ClassicalOps<Counted>{});
    } else {
        TropicalMatrix a(n, n), b(n, n);
        for (std::size_t i = 0; i < n * n; ++i) {
            a.data()[i] = TropicalScalar(lhs[i]);
            b.data()[i] = TropicalScalar(rhs[i]);
        }
        CountingScope scope(counters);
        (void)mat_mul(a, b, HbarParam::infinity());
    }
    return counters;
}

struct BenchRow {
    std::string algorithm;
    std::size_t n = 0;
    std::uint64_t mults = 0;
    std::uint64_t adds = 0;
    std::uint64_t comparisons = 0;
    double wall_time_s = 0.0;
};

// One row per (kind, size): the counters from a counted run plus the
// median wall time of `repetitions` runs.
inline std::vector<BenchRow> bench_sweep(const std::vector<MatmulKind>& kinds,
                                         const std::vector<std::size_t>& sizes,
                                         std::size_t repetitions, std::uint64_t seed) {
    if (kinds.empty()) throw std::invalid_argument("bench_sweep: empty kind list");
    if (sizes.empty()) throw std::invalid_argument("bench_sweep: empty size list");
    if (repetitions == 0) throw std::invalid_argument("bench_sweep: repetitions must be positive");

    std::vector<BenchRow> rows;
    for (MatmulKind kind : kinds) {
        for (std::size_t n : sizes) {
            BenchRow row;
            row.algorithm = matmul_kind_name(kind);
            row.n = n;
            std::vector<double> times(repetitions);
            for (std::size_t r = 0; r < repetitions; ++r) {
                const auto start = std::chrono::steady_clock::now();
                const OpCounters counters = counted_matmul(kind, n, seed);
                const auto stop = std::chrono::steady_clock::now();
                times[r] = std::chrono::duration<double>(stop - start).count();
                if (r == 0) {
                    row.mults = counters.mults;
                    row.adds = counters.adds;
                    row.comparisons = counters.comparisons;
                }
            }
            std::sort(times.begin(), times.end());
            row.wall_time_s = times[repetitions / 2];
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "algorithm,n,mults,adds,comparisons,wall_time_s\n";
    char buf[64];
    for (const auto& row : rows) {
        out += row.algorithm;
        out += ',' + std::to_string(row.n);
        out += ',' + std::to_string(row.mults);
        out += ',' + std::to_string(row.adds);
        out += ',' + std::to_string(row.comparisons);
        std::snprintf(buf, sizeof buf, "%.6e", row.wall_time_s);
        out += ',';
        out += buf;
        out += '\n';
    }
    return out;
}

} // namespace tropical
