#include "tropical/network.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace tropical;

namespace {

const TropicalScalar NI = TropicalScalar::neg_infinity();

LayeredNetwork tiny_classical() {
    // 2 -> 2 -> 1, hand-picked weights.
    NetworkLayer l0{TropicalMatrix::from_rows({{TropicalScalar(1.0), TropicalScalar(-1.0)},
                                               {TropicalScalar(0.5), TropicalScalar(2.0)}}),
                    {TropicalScalar(0.0), TropicalScalar(-1.0)}};
    NetworkLayer l1{TropicalMatrix::from_rows({{TropicalScalar(2.0), TropicalScalar(-3.0)}}),
                    {TropicalScalar(0.5)}};
    return LayeredNetwork(NetMode::Classical, {l0, l1});
}

LayeredNetwork tiny_tropical(HbarParam hbar = HbarParam::infinity()) {
    NetworkLayer l0{TropicalMatrix::from_rows({{TropicalScalar(1.0), NI},
                                               {TropicalScalar(0.0), TropicalScalar(2.0)}}),
                    {TropicalScalar(0.0), TropicalScalar(-1.0)}};
    NetworkLayer l1{TropicalMatrix::from_rows({{TropicalScalar(0.5), TropicalScalar(0.0)}}),
                    {TropicalScalar(1.0)}};
    return LayeredNetwork(NetMode::Tropical, {l0, l1}, hbar);
}

} // namespace

TEST_CASE("classical unit is a ReLU of an affine form") {
    const ClassicalUnit u{-1.0, {2.0, 0.5}};
    CHECK(unit_forward_classical(u, {1.0, 2.0}) == 2.0);  // relu(-1 + 2 + 1)
    CHECK(unit_forward_classical(u, {0.0, 0.0}) == 0.0);  // relu(-1)
    CHECK(unit_forward_classical(u, {0.5, 0.0}) == 0.0);  // relu(0) at the kink
    CHECK_THROWS_AS(unit_forward_classical(u, {1.0}), std::invalid_argument);
}

TEST_CASE("tropical unit is a max over bias and shifted inputs") {
    const TropicalUnit u{TropicalScalar(0.0), {TropicalScalar(1.0), TropicalScalar(-2.0)}};
    const HbarParam inf = HbarParam::infinity();
    CHECK(unit_forward_tropical(u, {2.0, 1.0}, inf) == TropicalScalar(3.0)); // max(0, 3, -1)
    CHECK(unit_forward_tropical(u, {-5.0, -5.0}, inf) == TropicalScalar(0.0));

    // -inf weights disconnect inputs.
    const TropicalUnit gated{TropicalScalar(0.0), {NI, TropicalScalar(0.0)}};
    CHECK(unit_forward_tropical(gated, {100.0, 1.0}, inf) == TropicalScalar(1.0));

    CHECK_THROWS_AS(unit_forward_tropical(u, {1.0}, inf), std::invalid_argument);
    const TropicalUnit dead{NI, {NI, NI}};
    CHECK_THROWS_AS(unit_forward_tropical(dead, {1.0, 1.0}, inf), std::invalid_argument);
    CHECK_THROWS_AS(validate_unit(dead), std::invalid_argument);
}

TEST_CASE("finite-base unit output lies within log_h(k) above the limit") {
    const TropicalUnit u{TropicalScalar(0.5), {TropicalScalar(1.0), TropicalScalar(0.0)}};
    std::mt19937_64 rng(401);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (double h : {10.0, 1000.0}) {
        const HbarParam hbar = HbarParam::finite(h);
        const double envelope = std::log(3.0) / hbar.log_value(); // 3 competing terms
        for (int i = 0; i < 300; ++i) {
            const std::vector<double> x{dist(rng), dist(rng)};
            const double limit = unit_forward_tropical(u, x).v;
            const double smooth = unit_forward_tropical(u, x, hbar).v;
            CHECK(smooth >= limit - 1e-12);
            CHECK(smooth <= limit + envelope + 1e-12);
        }
    }
}

TEST_CASE("dequantized unit computes the log of the positive-coefficient sum") {
    const ClassicalUnit u{0.5, {2.0, 0.25}};
    std::mt19937_64 rng(402);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (double h : {10.0, 100.0}) {
        const HbarParam hbar = HbarParam::finite(h);
        const TropicalUnit lifted = dequantize_unit(u, hbar);
        for (int i = 0; i < 200; ++i) {
            const std::vector<double> x{dist(rng), dist(rng)};
            // b + sum_i a_i h^{x_i}, seen in log_h coordinates.
            const double direct = std::log(0.5 + 2.0 * std::pow(h, x[0]) + 0.25 * std::pow(h, x[1])) /
                                  hbar.log_value();
            CHECK(unit_forward_tropical(lifted, x, hbar).v == Catch::Approx(direct).margin(1e-10));
        }
    }
    CHECK_THROWS_AS(dequantize_unit(u, HbarParam::infinity()), std::domain_error);
    CHECK_THROWS_AS(dequantize_unit(ClassicalUnit{0.0, {1.0}}, HbarParam::finite(10.0)),
                    std::domain_error);
    CHECK_THROWS_WITH(dequantize_unit(ClassicalUnit{1.0, {1.0, -2.0}}, HbarParam::finite(10.0)),
                      Catch::Matchers::ContainsSubstring("weight 1"));
}

TEST_CASE("layered network construction validates its shape") {
    CHECK_THROWS_AS(LayeredNetwork(NetMode::Classical, {}), std::invalid_argument);

    NetworkLayer bad_bias{TropicalMatrix(2, 2, TropicalScalar(0.0)), {TropicalScalar(0.0)}};
    CHECK_THROWS_AS(LayeredNetwork(NetMode::Classical, {bad_bias}), std::invalid_argument);

    NetworkLayer l0{TropicalMatrix(2, 2, TropicalScalar(0.0)), {TropicalScalar(0.0), TropicalScalar(0.0)}};
    NetworkLayer mismatched{TropicalMatrix(1, 3, TropicalScalar(0.0)), {TropicalScalar(0.0)}};
    CHECK_THROWS_AS(LayeredNetwork(NetMode::Classical, {l0, mismatched}), std::invalid_argument);

    NetworkLayer with_inf{TropicalMatrix(1, 2), {TropicalScalar(0.0)}};
    CHECK_THROWS_AS(LayeredNetwork(NetMode::Classical, {with_inf}), std::invalid_argument);
    CHECK_NOTHROW(LayeredNetwork(NetMode::Tropical, {with_inf}));

    const auto net = tiny_classical();
    CHECK(net.input_dim() == 2);
    CHECK(net.output_dim() == 1);
}

TEST_CASE("classical forward pass against hand-computed values") {
    const auto net = tiny_classical();
    // x = (1, 1): layer 0 pre = (0 + 1 - 1, -1 + 0.5 + 2) = (0, 1.5),
    // post = (0, 1.5); layer 1 pre = 0.5 + 0*2 + 1.5*(-3) = -4, post = 0.
    const ForwardTrace trace = forward_trace(net, {1.0, 1.0});
    REQUIRE(trace.pre.size() == 2);
    CHECK(trace.pre[0][0].v == Catch::Approx(0.0).margin(1e-15));
    CHECK(trace.pre[0][1].v == Catch::Approx(1.5).margin(1e-15));
    CHECK(trace.post[0][0].v == 0.0);
    CHECK(trace.post[0][1].v == Catch::Approx(1.5).margin(1e-15));
    CHECK(trace.pre[1][0].v == Catch::Approx(-4.0).margin(1e-14));
    CHECK(trace.output()[0].v == 0.0);
    // Inputs are recorded per layer.
    CHECK(trace.inputs[0][0].v == 1.0);
    CHECK(trace.inputs[1][1].v == Catch::Approx(1.5).margin(1e-15));
    CHECK_THROWS_AS(forward_trace(net, {1.0}), std::invalid_argument);
}

TEST_CASE("tropical forward pass against hand-computed values") {
    const auto net = tiny_tropical();
    // x = (0, 0): layer 0 linear = (1 + 0, max(0, 2)) = (1, 2),
    // post = (max(1,0), max(2,-1)) = (1, 2);
    // layer 1 linear = max(0.5 + 1, 0 + 2) = 2, post = max(2, 1) = 2.
    const ForwardTrace trace = forward_trace(net, {0.0, 0.0});
    CHECK(trace.pre[0][0] == TropicalScalar(1.0));
    CHECK(trace.pre[0][1] == TropicalScalar(2.0));
    CHECK(trace.post[0][0] == TropicalScalar(1.0));
    CHECK(trace.post[0][1] == TropicalScalar(2.0));
    CHECK(trace.pre[1][0] == TropicalScalar(2.0));
    CHECK(trace.output()[0] == TropicalScalar(2.0));
    CHECK(network_forward(net, {0.0, 0.0})[0] == TropicalScalar(2.0));
}

TEST_CASE("finite-base network dominates the limit network") {
    std::mt19937_64 rng(403);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    const auto limit_net = tiny_tropical();
    const auto smooth_net = tiny_tropical(HbarParam::finite(10.0));
    for (int i = 0; i < 200; ++i) {
        const std::vector<double> x{dist(rng), dist(rng)};
        const double lo = network_forward(limit_net, x)[0].v;
        const double hi = network_forward(smooth_net, x)[0].v;
        CHECK(hi >= lo - 1e-12);
        // Crude envelope: each max over k terms costs at most log_h k,
        // and the smoothing compounds through 2 layers of width <= 2.
        CHECK(hi <= lo + 4.0 * std::log(3.0) / std::log(10.0) + 1e-12);
    }
}

TEST_CASE("approximator evaluation is a real mix of tropical units") {
    Approximator ap;
    ap.units.push_back(TropicalUnit{TropicalScalar(1.0), {NI}});               // constant 1
    ap.units.push_back(TropicalUnit{TropicalScalar(0.0), {TropicalScalar(0.0)}}); // max(0, x)
    ap.beta = {2.0, -0.5};
    CHECK(approx_eval(ap, {3.0}) == Catch::Approx(2.0 - 1.5));   // 2*1 - 0.5*3
    CHECK(approx_eval(ap, {-4.0}) == Catch::Approx(2.0));        // hinge inactive
    ap.beta.pop_back();
    CHECK_THROWS_AS(approx_eval(ap, {0.0}), std::invalid_argument);
}

TEST_CASE("fitting a hinge with one constant and one hinge unit is exact") {
    std::vector<std::pair<std::vector<double>, double>> samples;
    for (int i = 0; i <= 32; ++i) {
        const double x = -1.0 + 2.0 * i / 32.0;
        samples.push_back({{x}, std::max(0.0, x)});
    }
    const ApproxFit fit = approx_fit(samples, 2);
    CHECK(fit.max_abs_residual <= 1e-9);
    REQUIRE(fit.approximator.units.size() == 2);
    // First unit is the constant: finite bias, disconnected inputs.
    CHECK(fit.approximator.units[0].bias == TropicalScalar(1.0));
    CHECK(fit.approximator.units[0].weights[0].is_neg_inf());
    // The hinge knot lands mid-range, i.e. at the kink.
    CHECK(fit.approximator.units[1].weights[0].v == Catch::Approx(0.0).margin(1e-12));
    // The fitted surface reproduces the samples pointwise.
    for (const auto& s : samples)
        CHECK(approx_eval(fit.approximator, s.first) ==
              Catch::Approx(s.second).margin(fit.max_abs_residual + 1e-12));
}

TEST_CASE("fit quality improves with more units on a smooth target") {
    std::vector<std::pair<std::vector<double>, double>> samples;
    for (int i = 0; i <= 100; ++i) {
        const double x = -1.0 + 2.0 * i / 100.0;
        samples.push_back({{x}, std::sin(3.0 * x)});
    }
    const double coarse = approx_fit(samples, 4).max_abs_residual;
    const double fine = approx_fit(samples, 24).max_abs_residual;
    CHECK(fine < coarse);
    CHECK(fine < 0.05);
}

TEST_CASE("fitting rejects malformed sample sets") {
    std::vector<std::pair<std::vector<double>, double>> samples{{{0.0}, 0.0}, {{1.0}, 1.0}};
    CHECK_THROWS_AS(approx_fit(samples, 0), std::invalid_argument);
    CHECK_THROWS_AS(approx_fit(samples, 3), std::invalid_argument);
    samples.push_back({{1.0, 2.0}, 0.0});
    CHECK_THROWS_AS(approx_fit(samples, 2), std::invalid_argument);
}
