#include "tropical/bench.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

using namespace tropical;

namespace {

// Strip the wall-time column (the only nondeterministic field).
std::string drop_last_column(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        const auto cut = line.rfind(',');
        out += line.substr(0, cut);
        out += '\n';
    }
    return out;
}

} // namespace

TEST_CASE("operation census of a counted product") {
    for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{8}}) {
        const OpCounters classical = counted_matmul(MatmulKind::Classical, n, 99);
        CHECK(classical.mults == n * n * n);
        CHECK(classical.adds == n * n * (n - 1));
        CHECK(classical.comparisons == 0);

        const OpCounters tropical = counted_matmul(MatmulKind::TropicalLimit, n, 99);
        CHECK(tropical.mults == 0);
        CHECK(tropical.adds == n * n * n);
        CHECK(tropical.comparisons == n * n * (n - 1));
    }
    CHECK_THROWS_AS(counted_matmul(MatmulKind::Classical, 0, 1), std::invalid_argument);
}

TEST_CASE("counting scopes nest and detach") {
    OpCounters outer, inner;
    {
        CountingScope outer_scope(outer);
        (void)(Counted{2.0} * Counted{3.0});
        {
            CountingScope inner_scope(inner);
            (void)(Counted{1.0} + Counted{1.0});
            (void)(Counted{1.0} < Counted{2.0});
        }
        (void)(Counted{2.0} * Counted{3.0});
    }
    (void)(Counted{5.0} * Counted{5.0}); // no active scope: not recorded
    CHECK(outer.mults == 2);
    CHECK(outer.adds == 0);
    CHECK(inner.adds == 1);
    CHECK(inner.comparisons == 1);
    CHECK(inner.mults == 0);
    CHECK(outer.total_scalar_ops() == 2);
}

TEST_CASE("sweep rows cover every kind and size with exact counts") {
    const std::vector<std::size_t> sizes{1, 2, 4};
    const auto rows = bench_sweep({MatmulKind::Classical, MatmulKind::TropicalLimit}, sizes, 2, 7);
    REQUIRE(rows.size() == 6);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(rows[i].algorithm == "classical");
        CHECK(rows[i].n == sizes[i]);
        CHECK(rows[i].mults == sizes[i] * sizes[i] * sizes[i]);
        CHECK(rows[i].wall_time_s >= 0.0);
    }
    for (std::size_t i = 3; i < 6; ++i) {
        CHECK(rows[i].algorithm == "tropical");
        CHECK(rows[i].mults == 0);
        CHECK(rows[i].adds == rows[i].n * rows[i].n * rows[i].n);
    }
    CHECK_THROWS_AS(bench_sweep({}, sizes, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(bench_sweep({MatmulKind::Classical}, {}, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(bench_sweep({MatmulKind::Classical}, sizes, 0, 0), std::invalid_argument);
}

TEST_CASE("csv formatting is frozen") {
    BenchRow row;
    row.algorithm = "classical";
    row.n = 2;
    row.mults = 8;
    row.adds = 4;
    row.comparisons = 0;
    row.wall_time_s = 0.000123;
    CHECK(bench_csv({row}) == "algorithm,n,mults,adds,comparisons,wall_time_s\n"
                              "classical,2,8,4,0,1.230000e-04\n");
    CHECK(bench_csv({}) == "algorithm,n,mults,adds,comparisons,wall_time_s\n");
}

TEST_CASE("csv output is byte-stable apart from wall time") {
    const std::vector<std::size_t> sizes{1, 2, 4, 8};
    const auto a = bench_csv(bench_sweep({MatmulKind::Classical, MatmulKind::TropicalLimit}, sizes, 2, 3));
    const auto b = bench_csv(bench_sweep({MatmulKind::Classical, MatmulKind::TropicalLimit}, sizes, 2, 3));
    CHECK(drop_last_column(a) == drop_last_column(b));
}

TEST_CASE("kind names") {
    CHECK(std::string(matmul_kind_name(MatmulKind::Classical)) == "classical");
    CHECK(std::string(matmul_kind_name(MatmulKind::TropicalLimit)) == "tropical");
}
