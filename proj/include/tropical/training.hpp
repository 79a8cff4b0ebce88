// Backpropagation chains in ordinary and max-plus arithmetic, the
// monotone tropical weight update, the log-domain isomorphism check, and
// the training loop tying them together.
//
// Chain functions multiply the matrices they are handed, in the order
// given, right to left. Callers that want the standard backprop chain
// pass transposed forward matrices; the functions themselves add no
// transposes. Loss bookkeeping runs in plain double arithmetic outside
// the counted semiring operations.

#pragma once

#include "tropical/matrix.hpp"
#include "tropical/network.hpp"
#include "tropical/scalar.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace tropical {

// --- diagonal builders --------------------------------------------------------

inline RealMatrix real_diag(const std::vector<double>& entries) {
    if (entries.empty()) throw std::invalid_argument("real_diag: needs at least one entry");
    RealMatrix m(entries.size(), entries.size(), 0.0);
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
}

inline TropicalMatrix trop_diag(const std::vector<TropicalScalar>& entries) {
    if (entries.empty()) throw std::invalid_argument("trop_diag: needs at least one entry");
    TropicalMatrix m(entries.size(), entries.size(), TropicalScalar::neg_infinity());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
}

// ReLU subgradient: 1 where the pre-activation is strictly positive, 0
// otherwise (the tie at exactly 0 resolves to 0).
inline RealMatrix derivative_diagonal_classical(const std::vector<double>& pre) {
    std::vector<double> d(pre.size());
    for (std::size_t i = 0; i < pre.size(); ++i) d[i] = pre[i] > 0.0 ? 1.0 : 0.0;
    return real_diag(d);
}

// Max-plus image of the same decision: 0 (the multiplicative unit) where
// the unit's linear part strictly beats the bias, -inf (the annihilator)
// where the bias wins; ties resolve to the bias branch, mirroring the
// classical choice at 0.
inline TropicalMatrix derivative_diagonal_tropical(const std::vector<TropicalScalar>& linear_part,
                                                   const std::vector<TropicalScalar>& bias) {
    if (linear_part.size() != bias.size())
        throw std::invalid_argument("derivative_diagonal_tropical: length mismatch");
    std::vector<TropicalScalar> d(linear_part.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = (bias[i] < linear_part[i]) ? TropicalScalar(0.0) : TropicalScalar::neg_infinity();
    return trop_diag(d);
}

// --- backpropagated error chains -----------------------------------------------

namespace detail {

inline void validate_chain(std::size_t num_weights, std::size_t num_diags, std::size_t k) {
    if (num_weights != num_diags + 1)
        throw std::invalid_argument("delta chain: need exactly one more weight matrix than diagonals");
    if (k >= num_diags) throw std::invalid_argument("delta chain: layer index out of range");
}

} // namespace detail

// diags[k] * weights[k+1] * diags[k+1] * ... * diags[last] * weights[last+1] * e,
// associated right to left. weights[0] belongs to the stack but no chain
// reaches below its own layer, so it is never multiplied.
inline RealMatrix classical_delta(const std::vector<RealMatrix>& weights,
                                  const std::vector<RealMatrix>& diags, const std::vector<double>& e,
                                  std::size_t k) {
    detail::validate_chain(weights.size(), diags.size(), k);
    if (e.empty()) throw std::invalid_argument("classical_delta: empty error vector");
    RealMatrix v(e.size(), 1);
    for (std::size_t i = 0; i < e.size(); ++i) v(i, 0) = e[i];
    for (std::size_t j = diags.size(); j-- > k;) {
        v = classical_mat_mul(weights[j + 1], v);
        v = classical_mat_mul(diags[j], v);
    }
    return v;
}

inline TropicalMatrix tropical_delta(const std::vector<TropicalMatrix>& weights,
                                     const std::vector<TropicalMatrix>& diags,
                                     const std::vector<TropicalScalar>& e, std::size_t k,
                                     const HbarParam& hbar) {
    detail::validate_chain(weights.size(), diags.size(), k);
    if (e.empty()) throw std::invalid_argument("tropical_delta: empty error vector");
    TropicalMatrix v(e.size(), 1);
    for (std::size_t i = 0; i < e.size(); ++i) v(i, 0) = e[i];
    for (std::size_t j = diags.size(); j-- > k;) {
        v = mat_mul(weights[j + 1], v, hbar);
        v = mat_mul(diags[j], v, hbar);
    }
    return v;
}

// W_new = W (+)_inf (delta (x) (-epsilon)), elementwise: max(W_ij, delta_ij - epsilon).
// Monotone (never decreases an entry) and idempotent in delta.
inline TropicalMatrix tropical_update(const TropicalMatrix& w, const TropicalMatrix& delta,
                                      double epsilon) {
    if (!w.same_shape(delta)) throw std::invalid_argument("tropical_update: shape mismatch");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("tropical_update: epsilon must be finite and >= 0");
    const TropicalScalar step(-epsilon);
    const HbarParam inf = HbarParam::infinity();
    TropicalMatrix out(w.rows(), w.cols());
    for (std::size_t i = 0; i < out.data().size(); ++i)
        out.data()[i] = t_add(w.data()[i], t_mul(delta.data()[i], step), inf);
    return out;
}

// --- log-domain isomorphism check ------------------------------------------------

namespace detail {

// Entrywise log image that admits exact zeros (0 maps to -inf exactly
// under dequantization), so diagonal matrices pass through the check the
// way the chain uses them. Negative entries stay a domain error.
inline TropicalMatrix nonneg_log_image(const RealMatrix& p, const HbarParam& hbar) {
    TropicalMatrix out(p.rows(), p.cols());
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j) {
            if (!(p(i, j) >= 0.0))
                throw std::domain_error("dequantized_chain_check: entry (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") is negative");
            out(i, j) = dequantize(p(i, j), hbar);
        }
    return out;
}

} // namespace detail

// Applies the chain M[0] * M[1] * ... * e once in ordinary arithmetic and
// once as the hbar-semiring chain of the entrywise log images, then
// returns the largest per-entry gap between log(classical result) and the
// tropical result. Matrix entries must be nonnegative (zeros map to -inf
// exactly), the vector strictly positive; the two sides agree up to
// floating-point error.
inline double dequantized_chain_check(const std::vector<RealMatrix>& chain,
                                      const std::vector<double>& e, const HbarParam& hbar) {
    if (hbar.is_infinite()) throw std::domain_error("dequantized_chain_check: requires a finite hbar");
    if (chain.empty()) throw std::invalid_argument("dequantized_chain_check: empty chain");
    if (e.empty()) throw std::invalid_argument("dequantized_chain_check: empty vector");

    RealMatrix v(e.size(), 1);
    TropicalMatrix vt(e.size(), 1);
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!(e[i] > 0.0))
            throw std::domain_error("dequantized_chain_check: vector entry " + std::to_string(i) +
                                    " is not strictly positive");
        v(i, 0) = e[i];
        vt(i, 0) = dequantize(e[i], hbar);
    }
    for (std::size_t j = chain.size(); j-- > 0;) {
        vt = mat_mul(detail::nonneg_log_image(chain[j], hbar), vt, hbar);
        v = classical_mat_mul(chain[j], v);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < v.rows(); ++i) {
        const bool classical_zero = v(i, 0) == 0.0;
        const bool tropical_zero = vt(i, 0).is_neg_inf();
        double gap;
        if (classical_zero && tropical_zero)
            gap = 0.0;
        else if (classical_zero || tropical_zero)
            gap = std::numeric_limits<double>::infinity();
        else
            gap = std::abs(dequantize(v(i, 0), hbar).v - vt(i, 0).v);
        if (gap > worst) worst = gap;
    }
    return worst;
}

// --- datasets and configuration ---------------------------------------------------

struct Dataset {
    std::vector<std::vector<double>> features;
    std::vector<int> labels;

    std::size_t size() const { return features.size(); }
};

// Gaussian blobs, one per center, labeled by center index. Blocked by
// class, deterministic for a fixed seed.
inline Dataset make_blob_dataset(std::size_t per_class, const std::vector<std::vector<double>>& centers,
                                 double sigma, std::uint64_t seed) {
    if (per_class == 0 || centers.empty())
        throw std::invalid_argument("make_blob_dataset: needs points and centers");
    if (!(sigma > 0.0)) throw std::invalid_argument("make_blob_dataset: sigma must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    Dataset data;
    for (std::size_t c = 0; c < centers.size(); ++c) {
        for (std::size_t i = 0; i < per_class; ++i) {
            std::vector<double> x(centers[c].size());
            for (std::size_t a = 0; a < x.size(); ++a) x[a] = centers[c][a] + noise(rng);
            data.features.push_back(std::move(x));
            data.labels.push_back(static_cast<int>(c));
        }
    }
    return data;
}

enum class TrainMode { Classical, TropicalLimit, Dequantized };

struct TrainConfig {
    double epsilon = 0.01;
    std::size_t epochs = 100;
    TrainMode mode = TrainMode::Classical;
    HbarParam hbar = HbarParam::infinity(); // consumed by Dequantized mode only
    std::uint64_t seed = 0;
};

inline void validate_config(const TrainConfig& cfg) {
    // epsilon = 0 is admitted deliberately: with max-updates it freezes the
    // weights, a documented behavior worth keeping testable.
    if (!(cfg.epsilon >= 0.0) || !std::isfinite(cfg.epsilon))
        throw std::invalid_argument("TrainConfig: epsilon must be finite and >= 0");
    if (cfg.epochs == 0) throw std::invalid_argument("TrainConfig: epochs must be positive");
    if (cfg.mode == TrainMode::Dequantized && cfg.hbar.is_infinite())
        throw std::invalid_argument("TrainConfig: dequantized mode needs a finite hbar");
}

// Fresh net with seeded entries: Classical draws weights and biases
// uniformly from [-1, 1]; Tropical draws log10 of uniform (0, 1]. Draw
// order is layer by layer, weights row-major, then the bias.
inline LayeredNetwork init_network(const std::vector<std::size_t>& layer_dims, NetMode mode,
                                   std::uint64_t seed, HbarParam hbar = HbarParam::infinity()) {
    if (layer_dims.size() < 2) throw std::invalid_argument("init_network: need input and output dims");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const HbarParam ref = HbarParam::finite(10.0);
    auto draw = [&]() {
        if (mode == NetMode::Classical) return TropicalScalar(sym(rng));
        return dequantize(1.0 - unit(rng), ref); // 1 - [0,1) keeps the draw in (0,1]
    };
    std::vector<NetworkLayer> layers;
    for (std::size_t k = 0; k + 1 < layer_dims.size(); ++k) {
        NetworkLayer layer{TropicalMatrix(layer_dims[k + 1], layer_dims[k]), {}};
        for (std::size_t i = 0; i < layer.weights.rows(); ++i)
            for (std::size_t j = 0; j < layer.weights.cols(); ++j) layer.weights(i, j) = draw();
        layer.bias.resize(layer_dims[k + 1]);
        for (auto& b : layer.bias) b = draw();
        layers.push_back(std::move(layer));
    }
    return LayeredNetwork(mode, std::move(layers), hbar);
}

// --- the training loop ----------------------------------------------------------

struct TrainResult {
    LayeredNetwork net;
    std::vector<double> loss_history; // mean squared error per epoch, before that epoch's update
    // Dequantized mode only: worst per-epoch gap between the classical
    // backward chain and the hbar-tropical chain of its log images,
    // measured on the positive surrogate chain (|W| clamped away from 0,
    // diagonals replaced by identities).
    std::optional<double> dequantized_max_discrepancy;
};

namespace detail {

inline std::vector<TropicalMatrix> transposed_stack(const LayeredNetwork& net) {
    std::vector<TropicalMatrix> wt;
    wt.reserve(net.layers().size());
    for (const auto& layer : net.layers()) wt.push_back(transpose(layer.weights));
    return wt;
}

inline RealMatrix to_real(const TropicalMatrix& m) {
    RealMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).v;
    return out;
}

inline RealMatrix positive_surrogate(const RealMatrix& m, double floor) {
    RealMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const double a = std::abs(m(i, j));
            out(i, j) = a < floor ? floor : a;
        }
    return out;
}

} // namespace detail

inline TrainResult train_loop(const LayeredNetwork& start, const Dataset& data, const TrainConfig& cfg) {
    validate_config(cfg);
    if (data.size() == 0) throw std::invalid_argument("train_loop: empty dataset");
    if (data.labels.size() != data.features.size())
        throw std::invalid_argument("train_loop: feature/label count mismatch");
    for (const auto& x : data.features)
        if (x.size() != start.input_dim()) throw std::invalid_argument("train_loop: feature dimension mismatch");
    if (start.output_dim() != 1)
        throw std::invalid_argument("train_loop: supports single-output networks");
    const bool tropical = cfg.mode == TrainMode::TropicalLimit;
    if (tropical && start.mode() != NetMode::Tropical)
        throw std::invalid_argument("train_loop: tropical-limit mode needs a tropical network");
    if (tropical && start.hbar().is_finite())
        throw std::invalid_argument("train_loop: tropical-limit mode runs at hbar = infinity");
    if (!tropical && start.mode() != NetMode::Classical)
        throw std::invalid_argument("train_loop: classical and dequantized modes need a classical network");

    TrainResult result{start, {}, std::nullopt};
    LayeredNetwork& net = result.net;
    const std::size_t L = net.layers().size();
    const double inv_n = 1.0 / static_cast<double>(data.size());
    const HbarParam inf = HbarParam::infinity();
    double worst_discrepancy = 0.0;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto wt = detail::transposed_stack(net);
        std::vector<RealMatrix> wt_real;
        if (!tropical) {
            wt_real.reserve(L);
            for (const auto& m : wt) wt_real.push_back(detail::to_real(m));
        }

        // Per-layer update accumulators: classical sums of delta outer
        // products, tropical elementwise-max of the same.
        std::vector<RealMatrix> grad;
        std::vector<TropicalMatrix> trop_delta_acc;
        for (const auto& layer : net.layers()) {
            if (tropical)
                trop_delta_acc.emplace_back(layer.weights.rows(), layer.weights.cols(),
                                            TropicalScalar::neg_infinity());
            else
                grad.emplace_back(layer.weights.rows(), layer.weights.cols(), 0.0);
        }

        double loss = 0.0;
        double mean_abs_err = 0.0;
        for (std::size_t s = 0; s < data.size(); ++s) {
            const ForwardTrace trace = forward_trace(net, data.features[s]);
            const double y = static_cast<double>(data.labels[s]);
            const double yhat = trace.output()[0].v;
            if (!std::isfinite(yhat))
                throw std::domain_error("train_loop: network output is not finite");
            const double err = 2.0 * (yhat - y);
            loss += (yhat - y) * (yhat - y);
            mean_abs_err += std::abs(err);

            if (tropical) {
                std::vector<TropicalMatrix> diags;
                for (std::size_t j = 0; j + 1 < L; ++j)
                    diags.push_back(derivative_diagonal_tropical(trace.pre[j], net.layers()[j].bias));
                std::vector<TropicalScalar> e(1);
                if (err == 0.0) {
                    e[0] = TropicalScalar::neg_infinity();
                } else {
                    double le = std::log10(std::abs(err));
                    if (le < -1e9) le = -1e9;
                    e[0] = TropicalScalar(le);
                }
                for (std::size_t k = 0; k < L; ++k) {
                    TropicalMatrix delta = (k + 1 == L)
                                               ? detail::col_from(e)
                                               : tropical_delta(wt, diags, e, k, inf);
                    // Complete the column to a weight-shaped matrix by the
                    // tropical outer product with the layer's input.
                    const auto& a = trace.inputs[k];
                    TropicalMatrix full(delta.rows(), a.size());
                    for (std::size_t i = 0; i < delta.rows(); ++i)
                        for (std::size_t j = 0; j < a.size(); ++j) full(i, j) = t_mul(delta(i, 0), a[j]);
                    trop_delta_acc[k] = mat_add(trop_delta_acc[k], full, inf);
                }
            } else {
                std::vector<RealMatrix> diags;
                for (std::size_t j = 0; j + 1 < L; ++j) {
                    std::vector<double> pre(trace.pre[j].size());
                    for (std::size_t i = 0; i < pre.size(); ++i) pre[i] = trace.pre[j][i].v;
                    diags.push_back(derivative_diagonal_classical(pre));
                }
                const double out_gate = trace.pre[L - 1][0].v > 0.0 ? 1.0 : 0.0;
                const std::vector<double> e{err * out_gate};
                for (std::size_t k = 0; k < L; ++k) {
                    RealMatrix delta(1, 1, e[0]);
                    if (k + 1 < L) delta = classical_delta(wt_real, diags, e, k);
                    const auto& a = trace.inputs[k];
                    for (std::size_t i = 0; i < delta.rows(); ++i)
                        for (std::size_t j = 0; j < a.size(); ++j)
                            grad[k](i, j) += delta(i, 0) * a[j].v * inv_n;
                }
            }
        }
        result.loss_history.push_back(loss * inv_n);
        mean_abs_err *= inv_n;

        if (tropical) {
            for (std::size_t k = 0; k < L; ++k)
                net.layers()[k].weights = tropical_update(net.layers()[k].weights, trop_delta_acc[k], cfg.epsilon);
        } else {
            for (std::size_t k = 0; k < L; ++k) {
                auto& w = net.layers()[k].weights;
                for (std::size_t i = 0; i < w.rows(); ++i)
                    for (std::size_t j = 0; j < w.cols(); ++j)
                        w(i, j) = TropicalScalar(w(i, j).v - cfg.epsilon * grad[k](i, j));
            }
        }

        if (cfg.mode == TrainMode::Dequantized) {
            // Positive surrogate of the backward chain: identity stand-ins
            // for the diagonals, |W| clamped away from zero, the epoch's
            // mean |error derivative| as the vector. Left-to-right order
            // D(0), Wt(1), D(1), ..., Wt(L-1); the check applies it right
            // to left.
            constexpr double floor = 1e-6;
            std::vector<RealMatrix> chain;
            for (std::size_t j = 1; j < L; ++j) {
                chain.push_back(real_diag(std::vector<double>(net.layers()[j - 1].weights.rows(), 1.0)));
                chain.push_back(detail::positive_surrogate(detail::to_real(transpose(net.layers()[j].weights)), floor));
            }
            if (chain.empty())
                chain.push_back(real_diag(std::vector<double>(net.layers()[0].weights.rows(), 1.0)));
            const std::vector<double> e{mean_abs_err < floor ? floor : mean_abs_err};
            const double gap = dequantized_chain_check(chain, e, cfg.hbar);
            if (gap > worst_discrepancy) worst_discrepancy = gap;
        }
    }

    if (cfg.mode == TrainMode::Dequantized) result.dequantized_max_discrepancy = worst_discrepancy;
    return result;
}

} // namespace tropical
