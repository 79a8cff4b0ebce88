// ReLU units, their max-plus counterparts, layered feedforward nets that
// run in either arithmetic, and the one-layer approximator with tropical
// units inside and real mixing coefficients outside.

#pragma once

#include "tropical/matrix.hpp"
#include "tropical/scalar.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tropical {

// --- single units -----------------------------------------------------------

struct ClassicalUnit {
    double bias;
    std::vector<double> weights;
};

// max{b, max_i{a_i + x_i}}; the -inf entries switch inputs off.
struct TropicalUnit {
    TropicalScalar bias;
    std::vector<TropicalScalar> weights;
};

inline void validate_unit(const TropicalUnit& u) {
    if (u.bias.is_finite()) return;
    for (const auto& w : u.weights)
        if (w.is_finite()) return;
    throw std::invalid_argument("TropicalUnit: bias and weights are all -inf");
}

inline double unit_forward_classical(const ClassicalUnit& u, const std::vector<double>& x) {
    if (x.size() != u.weights.size()) throw std::invalid_argument("unit_forward_classical: dimension mismatch");
    double z = u.bias;
    for (std::size_t i = 0; i < x.size(); ++i) z += u.weights[i] * x[i];
    return z > 0.0 ? z : 0.0;
}

inline TropicalScalar unit_forward_tropical(const TropicalUnit& u, const std::vector<double>& x,
                                            const HbarParam& hbar = HbarParam::infinity()) {
    if (x.size() != u.weights.size()) throw std::invalid_argument("unit_forward_tropical: dimension mismatch");
    validate_unit(u);
    TropicalScalar acc = u.bias;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc = t_add(acc, t_mul(u.weights[i], TropicalScalar(x[i])), hbar);
    return acc;
}

// Coefficient substitution b = h^beta, a_i = h^alpha_i, read backwards.
inline TropicalUnit dequantize_unit(const ClassicalUnit& u, const HbarParam& hbar) {
    if (hbar.is_infinite()) throw std::domain_error("dequantize_unit: requires a finite hbar");
    if (!(u.bias > 0.0)) throw std::domain_error("dequantize_unit: bias must be strictly positive");
    TropicalUnit out;
    out.bias = dequantize(u.bias, hbar);
    out.weights.reserve(u.weights.size());
    for (std::size_t i = 0; i < u.weights.size(); ++i) {
        if (!(u.weights[i] > 0.0))
            throw std::domain_error("dequantize_unit: weight " + std::to_string(i) +
                                    " is not strictly positive");
        out.weights.push_back(dequantize(u.weights[i], hbar));
    }
    return out;
}

// --- layered networks ---------------------------------------------------------

enum class NetMode { Classical, Tropical };

struct NetworkLayer {
    TropicalMatrix weights;            // out_dim x in_dim
    std::vector<TropicalScalar> bias;  // length out_dim
};

// Classical mode alternates affine maps with elementwise ReLU; Tropical
// mode computes (W (x) x) (+) b per layer, where the max against the bias
// is itself the nonlinearity.
class LayeredNetwork {
public:
    LayeredNetwork(NetMode mode, std::vector<NetworkLayer> layers,
                   HbarParam hbar = HbarParam::infinity())
        : mode_(mode), hbar_(hbar), layers_(std::move(layers)) {
        if (layers_.empty()) throw std::invalid_argument("LayeredNetwork: needs at least one layer");
        for (std::size_t k = 0; k < layers_.size(); ++k) {
            const auto& layer = layers_[k];
            if (layer.bias.size() != layer.weights.rows())
                throw std::invalid_argument("LayeredNetwork: bias length mismatch at layer " + std::to_string(k));
            if (k > 0 && layer.weights.cols() != layers_[k - 1].weights.rows())
                throw std::invalid_argument("LayeredNetwork: layer dimensions do not chain at layer " +
                                            std::to_string(k));
            if (mode_ == NetMode::Classical) {
                for (const auto& w : layer.weights.data())
                    if (w.is_neg_inf())
                        throw std::invalid_argument("LayeredNetwork: classical mode requires finite weights");
                for (const auto& b : layer.bias)
                    if (b.is_neg_inf())
                        throw std::invalid_argument("LayeredNetwork: classical mode requires finite biases");
            }
        }
    }

    NetMode mode() const { return mode_; }
    const HbarParam& hbar() const { return hbar_; }
    const std::vector<NetworkLayer>& layers() const { return layers_; }
    std::vector<NetworkLayer>& layers() { return layers_; }

    std::size_t input_dim() const { return layers_.front().weights.cols(); }
    std::size_t output_dim() const { return layers_.back().weights.rows(); }

private:
    NetMode mode_;
    HbarParam hbar_;
    std::vector<NetworkLayer> layers_;
};

namespace detail {

inline TropicalMatrix col_from(const std::vector<TropicalScalar>& v) {
    TropicalMatrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

inline std::vector<TropicalScalar> col_to_vector(const TropicalMatrix& m) {
    std::vector<TropicalScalar> v(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, 0);
    return v;
}

} // namespace detail

// Per-layer record of a forward pass. `pre` holds the value each unit's
// threshold decision looks at: the full affine value in Classical mode
// (compared against 0), the bias-free W (x) x part in Tropical mode
// (compared against the bias).
struct ForwardTrace {
    std::vector<std::vector<TropicalScalar>> inputs;
    std::vector<std::vector<TropicalScalar>> pre;
    std::vector<std::vector<TropicalScalar>> post;

    const std::vector<TropicalScalar>& output() const { return post.back(); }
};

inline ForwardTrace forward_trace(const LayeredNetwork& net, const std::vector<double>& x) {
    if (x.size() != net.input_dim()) throw std::invalid_argument("forward_trace: input dimension mismatch");

    std::vector<TropicalScalar> act(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) act[i] = TropicalScalar(x[i]);

    ForwardTrace trace;
    for (const auto& layer : net.layers()) {
        trace.inputs.push_back(act);
        std::vector<TropicalScalar> pre(layer.bias.size());
        std::vector<TropicalScalar> post(layer.bias.size());
        if (net.mode() == NetMode::Classical) {
            for (std::size_t i = 0; i < pre.size(); ++i) {
                double z = layer.bias[i].v;
                for (std::size_t j = 0; j < act.size(); ++j) z += layer.weights(i, j).v * act[j].v;
                pre[i] = TropicalScalar(z);
                post[i] = TropicalScalar(z > 0.0 ? z : 0.0);
            }
        } else {
            const TropicalMatrix lin = mat_mul(layer.weights, detail::col_from(act), net.hbar());
            const TropicalMatrix out = mat_add(lin, detail::col_from(layer.bias), net.hbar());
            pre = detail::col_to_vector(lin);
            post = detail::col_to_vector(out);
        }
        trace.pre.push_back(std::move(pre));
        trace.post.push_back(post);
        act = std::move(post);
    }
    return trace;
}

inline std::vector<TropicalScalar> network_forward(const LayeredNetwork& net, const std::vector<double>& x) {
    return forward_trace(net, x).output();
}

// --- one-layer approximator ---------------------------------------------------

// F(x) = sum_i beta_i * sigma_i(x): tropical units inside, real mixing
// coefficients outside. A pure max combination is convex, so the signed
// betas are what buy nonconvex targets.
struct Approximator {
    std::vector<TropicalUnit> units;
    std::vector<double> beta;
};

inline double approx_eval(const Approximator& ap, const std::vector<double>& x) {
    if (ap.units.size() != ap.beta.size()) throw std::invalid_argument("approx_eval: unit/beta length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < ap.units.size(); ++i)
        sum += ap.beta[i] * unit_forward_tropical(ap.units[i], x).v;
    return sum;
}

struct ApproxFit {
    Approximator approximator;
    double max_abs_residual;
};

// Fixed design: one constant unit plus hinges max{0, x_axis - knot} on a
// uniform inclusive knot grid over the sample bounding box (round-robin
// over axes in several dimensions), with beta solved by minimum-norm
// least squares. Deterministic; the seed is accepted for interface
// stability and not consumed by the knot placement.
inline ApproxFit approx_fit(const std::vector<std::pair<std::vector<double>, double>>& samples,
                            std::size_t num_units, std::uint64_t /*seed*/ = 0) {
    if (num_units == 0) throw std::invalid_argument("approx_fit: needs at least one unit");
    if (samples.size() < num_units)
        throw std::invalid_argument("approx_fit: needs at least as many samples as units");
    const std::size_t d = samples.front().first.size();
    if (d == 0) throw std::invalid_argument("approx_fit: samples must have at least one feature");
    for (const auto& s : samples)
        if (s.first.size() != d) throw std::invalid_argument("approx_fit: inconsistent sample dimensions");

    std::vector<double> lo(d, std::numeric_limits<double>::infinity());
    std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
    for (const auto& s : samples)
        for (std::size_t a = 0; a < d; ++a) {
            lo[a] = std::min(lo[a], s.first[a]);
            hi[a] = std::max(hi[a], s.first[a]);
        }

    Approximator ap;
    ap.units.reserve(num_units);
    TropicalUnit constant;
    constant.bias = TropicalScalar(1.0);
    constant.weights.assign(d, TropicalScalar::neg_infinity());
    ap.units.push_back(constant);

    const std::size_t hinges = num_units - 1;
    std::vector<std::size_t> per_axis(d, 0);
    for (std::size_t h = 0; h < hinges; ++h) per_axis[h % d] += 1;
    std::vector<std::size_t> seen(d, 0);
    for (std::size_t h = 0; h < hinges; ++h) {
        const std::size_t axis = h % d;
        const std::size_t p = seen[axis]++;
        const std::size_t m = per_axis[axis];
        const double knot = (m == 1) ? 0.5 * (lo[axis] + hi[axis])
                                     : lo[axis] + static_cast<double>(p) * (hi[axis] - lo[axis]) /
                                                      static_cast<double>(m - 1);
        TropicalUnit unit;
        unit.bias = TropicalScalar(0.0);
        unit.weights.assign(d, TropicalScalar::neg_infinity());
        unit.weights[axis] = TropicalScalar(-knot);
        ap.units.push_back(unit);
    }

    Eigen::MatrixXd design(samples.size(), num_units);
    Eigen::VectorXd target(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = 0; j < num_units; ++j)
            design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                unit_forward_tropical(ap.units[j], samples[i].first).v;
        target(static_cast<Eigen::Index>(i)) = samples[i].second;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd beta = svd.solve(target);
    ap.beta.assign(beta.data(), beta.data() + beta.size());

    const Eigen::VectorXd residual = design * beta - target;
    return {std::move(ap), residual.cwiseAbs().maxCoeff()};
}

} // namespace tropical
