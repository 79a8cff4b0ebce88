#include "tropical/matrix.hpp"
#include "tropical/opcount.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace tropical;

namespace {

struct MatGen {
    std::mt19937_64 rng;
    std::uniform_real_distribution<double> dist{-20.0, 20.0};
    std::uniform_int_distribution<int> inf_roll{0, 4};
    std::uniform_int_distribution<std::size_t> dim{1, 6};

    explicit MatGen(std::uint64_t seed) : rng(seed) {}

    TropicalScalar entry(bool allow_neg_inf = true) {
        if (allow_neg_inf && inf_roll(rng) == 0) return TropicalScalar::neg_infinity();
        return TropicalScalar(dist(rng));
    }

    TropicalMatrix matrix(std::size_t rows, std::size_t cols, bool allow_neg_inf = true) {
        TropicalMatrix m(rows, cols);
        for (auto& e : m.data()) e = entry(allow_neg_inf);
        return m;
    }

    // Entries on the dyadic lattice (multiples of 2^-10 in [-10, 10]):
    // sums of a few such entries round nowhere, so max-plus identities
    // that hold in exact arithmetic must hold bitwise.
    TropicalMatrix dyadic_matrix(std::size_t rows, std::size_t cols) {
        std::uniform_int_distribution<long> ticks(-10L * 1024, 10L * 1024);
        TropicalMatrix m(rows, cols);
        for (auto& e : m.data())
            e = inf_roll(rng) == 0 ? TropicalScalar::neg_infinity()
                                   : TropicalScalar(static_cast<double>(ticks(rng)) / 1024.0);
        return m;
    }
};

// Independent brute-force max-plus product, written directly rather than
// through the shared kernel.
TropicalMatrix brute_force_maxplus(const TropicalMatrix& a, const TropicalMatrix& b) {
    TropicalMatrix c(a.rows(), b.cols(), TropicalScalar::neg_infinity());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double best = kNegInf;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                const double term = a(i, k).v + b(k, j).v;
                if (term > best) best = term;
            }
            c(i, j) = best == kNegInf ? TropicalScalar::neg_infinity() : TropicalScalar(best);
        }
    return c;
}

} // namespace

TEST_CASE("a frozen 2x2 max-plus product") {
    const auto a = TropicalMatrix::from_rows(
        {{TropicalScalar(0.0), TropicalScalar::neg_infinity()}, {TropicalScalar(2.0), TropicalScalar(1.0)}});
    const auto b = TropicalMatrix::from_rows(
        {{TropicalScalar(1.0), TropicalScalar(3.0)}, {TropicalScalar(0.0), TropicalScalar::neg_infinity()}});
    const auto c = mat_mul(a, b, HbarParam::infinity());
    const auto expected = TropicalMatrix::from_rows(
        {{TropicalScalar(1.0), TropicalScalar(3.0)}, {TropicalScalar(3.0), TropicalScalar(5.0)}});
    CHECK(c == expected);
}

TEST_CASE("limit products agree exactly with brute force") {
    MatGen gen(201);
    for (int i = 0; i < 200; ++i) {
        const std::size_t m = gen.dim(gen.rng), k = gen.dim(gen.rng), n = gen.dim(gen.rng);
        const auto a = gen.matrix(m, k);
        const auto b = gen.matrix(k, n);
        CHECK(mat_mul(a, b, HbarParam::infinity()) == brute_force_maxplus(a, b));
    }
}

TEST_CASE("the tropical identity is a two-sided unit") {
    MatGen gen(202);
    for (int i = 0; i < 50; ++i) {
        const std::size_t n = gen.dim(gen.rng);
        const auto a = gen.matrix(n, n);
        const auto id = trop_identity(n);
        CHECK(mat_mul(a, id, HbarParam::infinity()) == a);
        CHECK(mat_mul(id, a, HbarParam::infinity()) == a);
    }
    CHECK_THROWS_AS(trop_identity(0), std::invalid_argument);
}

TEST_CASE("limit matrix products are associative") {
    MatGen gen(203);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    for (int i = 0; i < 100; ++i) {
        const std::size_t m = dim(gen.rng), k = dim(gen.rng), l = dim(gen.rng), n = dim(gen.rng);
        const auto a = gen.dyadic_matrix(m, k);
        const auto b = gen.dyadic_matrix(k, l);
        const auto c = gen.dyadic_matrix(l, n);
        const HbarParam inf = HbarParam::infinity();
        CHECK(mat_mul(mat_mul(a, b, inf), c, inf) == mat_mul(a, mat_mul(b, c, inf), inf));
    }
}

TEST_CASE("elementwise addition, scalar product, transpose") {
    MatGen gen(204);
    const HbarParam inf = HbarParam::infinity();
    for (int i = 0; i < 100; ++i) {
        const std::size_t m = gen.dim(gen.rng), n = gen.dim(gen.rng);
        const auto a = gen.matrix(m, n);
        const auto b = gen.matrix(m, n);
        const auto sum = mat_add(a, b, inf);
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < n; ++c) CHECK(sum(r, c).v == std::max(a(r, c).v, b(r, c).v));

        const TropicalScalar s = gen.entry(false);
        const auto scaled = scalar_mul(s, a);
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < n; ++c) CHECK(scaled(r, c).v == s.v + a(r, c).v);

        CHECK(transpose(transpose(a)) == a);
    }
    CHECK_THROWS_AS(mat_add(gen.matrix(2, 3), gen.matrix(3, 2), inf), std::invalid_argument);
}

TEST_CASE("transpose reverses limit products") {
    MatGen gen(205);
    const HbarParam inf = HbarParam::infinity();
    for (int i = 0; i < 50; ++i) {
        const std::size_t m = gen.dim(gen.rng), k = gen.dim(gen.rng), n = gen.dim(gen.rng);
        const auto a = gen.matrix(m, k);
        const auto b = gen.matrix(k, n);
        CHECK(transpose(mat_mul(a, b, inf)) == mat_mul(transpose(b), transpose(a), inf));
    }
}

TEST_CASE("limit products distribute over elementwise max") {
    // Exact for arbitrary entries: rounding is monotone, so adding a to
    // the larger of b and c rounds to the larger of the rounded sums.
    MatGen gen(209);
    const HbarParam inf = HbarParam::infinity();
    for (int i = 0; i < 100; ++i) {
        const std::size_t m = gen.dim(gen.rng), k = gen.dim(gen.rng), n = gen.dim(gen.rng);
        const auto a = gen.matrix(m, k);
        const auto b = gen.matrix(k, n);
        const auto c = gen.matrix(k, n);
        CHECK(mat_mul(a, mat_add(b, c, inf), inf) ==
              mat_add(mat_mul(a, b, inf), mat_mul(a, c, inf), inf));
    }
}

TEST_CASE("finite-base products converge onto the limit from above") {
    // Each entry folds n terms, so it sits in [limit, limit + log_h n].
    MatGen gen(210);
    for (int i = 0; i < 100; ++i) {
        const std::size_t m = gen.dim(gen.rng), k = gen.dim(gen.rng), n = gen.dim(gen.rng);
        const auto a = gen.matrix(m, k);
        const auto b = gen.matrix(k, n);
        const auto limit = mat_mul(a, b, HbarParam::infinity());
        for (double h : {10.0, 100.0, 1e4}) {
            const HbarParam hbar = HbarParam::finite(h);
            const auto smooth = mat_mul(a, b, hbar);
            const double gap_bound = std::log(static_cast<double>(k)) / hbar.log_value();
            for (std::size_t r = 0; r < m; ++r)
                for (std::size_t c = 0; c < n; ++c) {
                    if (limit(r, c).is_neg_inf()) {
                        CHECK(smooth(r, c).is_neg_inf());
                        continue;
                    }
                    CHECK(smooth(r, c).v >= limit(r, c).v);
                    CHECK(smooth(r, c).v <= limit(r, c).v + gap_bound + 1e-12);
                }
        }
    }
}

TEST_CASE("classical product against a hand-rolled triple loop") {
    std::mt19937_64 rng(206);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (int iter = 0; iter < 50; ++iter) {
        const std::size_t m = 1 + rng() % 5, k = 1 + rng() % 5, n = 1 + rng() % 5;
        RealMatrix a(m, k), b(k, n);
        for (auto& e : a.data()) e = dist(rng);
        for (auto& e : b.data()) e = dist(rng);
        const RealMatrix c = classical_mat_mul(a, b);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t t = 0; t < k; ++t) acc += a(i, t) * b(t, j);
                CHECK(c(i, j) == Catch::Approx(acc).margin(1e-12));
            }
    }
    CHECK_THROWS_AS(classical_mat_mul(RealMatrix(2, 3), RealMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("log image and its inverse round-trip positive matrices") {
    std::mt19937_64 rng(207);
    std::uniform_real_distribution<double> pos(0.01, 50.0);
    const HbarParam h10 = HbarParam::finite(10.0);
    for (int iter = 0; iter < 50; ++iter) {
        RealMatrix p(1 + rng() % 4, 1 + rng() % 4);
        for (auto& e : p.data()) e = pos(rng);
        const RealMatrix back = quantize_image(log_image(p, h10), h10);
        for (std::size_t i = 0; i < p.data().size(); ++i)
            CHECK(back.data()[i] == Catch::Approx(p.data()[i]).epsilon(1e-12));
    }

    RealMatrix bad(2, 2, 1.0);
    bad(1, 0) = 0.0;
    CHECK_THROWS_WITH(log_image(bad, h10), Catch::Matchers::ContainsSubstring("(1,0)"));
    CHECK(quantize_image(TropicalMatrix(2, 2), h10) == RealMatrix(2, 2, 0.0));
}

TEST_CASE("log image carries classical products to finite-base products") {
    std::mt19937_64 rng(208);
    std::uniform_real_distribution<double> pos(0.1, 10.0);
    for (double h : {10.0, 100.0}) {
        const HbarParam hbar = HbarParam::finite(h);
        for (int iter = 0; iter < 50; ++iter) {
            const std::size_t m = 1 + rng() % 6, k = 1 + rng() % 6, n = 1 + rng() % 6;
            RealMatrix p(m, k), q(k, n);
            for (auto& e : p.data()) e = pos(rng);
            for (auto& e : q.data()) e = pos(rng);
            const TropicalMatrix lifted = mat_mul(log_image(p, hbar), log_image(q, hbar), hbar);
            const TropicalMatrix direct = log_image(classical_mat_mul(p, q), hbar);
            for (std::size_t i = 0; i < lifted.data().size(); ++i)
                CHECK(lifted.data()[i].v == Catch::Approx(direct.data()[i].v).margin(1e-9));
        }
    }
}

TEST_CASE("matrix construction and shape errors") {
    CHECK_THROWS_AS(TropicalMatrix(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(TropicalMatrix::from_rows({}), std::invalid_argument);
    CHECK_THROWS_AS(TropicalMatrix::from_rows({{TropicalScalar(1.0)}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(mat_mul(TropicalMatrix(2, 3), TropicalMatrix(2, 3), HbarParam::infinity()),
                    std::invalid_argument);
    const TropicalMatrix m(2, 2);
    CHECK(m(0, 0).is_neg_inf());
}

TEST_CASE("the shared kernel counts classical and tropical work separately") {
    OpCounters counters;
    {
        Matrix<Counted> a(2, 2, Counted{1.0}), b(2, 2, Counted{1.0});
        CountingScope scope(counters);
        (void)mat_mul_generic(a, b, ClassicalOps<Counted>{});
    }
    CHECK(counters.mults == 8);
    CHECK(counters.adds == 4);
    CHECK(counters.comparisons == 0);

    counters.reset();
    {
        TropicalMatrix a(3, 3, TropicalScalar(1.0)), b(3, 3, TropicalScalar(1.0));
        CountingScope scope(counters);
        (void)mat_mul(a, b, HbarParam::infinity());
    }
    CHECK(counters.mults == 0);
    CHECK(counters.adds == 27);
    CHECK(counters.comparisons == 18);
}
