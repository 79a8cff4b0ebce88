// Tropical polynomials: maxima of affine functions coeff + sum j_k x_k,
// their smoothed hbar evaluation, zero-set membership, and grid-based
// corner-locus extraction.

#pragma once

#include "tropical/grid.hpp"
#include "tropical/scalar.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tropical {

struct Monomial {
    TropicalScalar coeff;
    std::vector<int> exponents; // nonnegative, bounded so j*x stays exact in doubles
};

inline constexpr int kMaxExponent = 64;

class TropicalPolynomial {
public:
    // Duplicate exponent vectors are merged by tropical addition (max)
    // of their coefficients; first-occurrence order is preserved.
    TropicalPolynomial(std::size_t num_vars, std::vector<Monomial> monomials) : num_vars_(num_vars) {
        if (num_vars == 0) throw std::invalid_argument("TropicalPolynomial: needs at least one variable");
        if (monomials.empty()) throw std::invalid_argument("TropicalPolynomial: needs at least one monomial");
        for (auto& m : monomials) {
            if (m.exponents.size() != num_vars)
                throw std::invalid_argument("TropicalPolynomial: exponent vector length mismatch");
            for (int e : m.exponents)
                if (e < 0 || e > kMaxExponent)
                    throw std::invalid_argument("TropicalPolynomial: exponents must be in [0, 64]");
            bool merged = false;
            for (auto& kept : monomials_) {
                if (kept.exponents == m.exponents) {
                    if (kept.coeff < m.coeff) kept.coeff = m.coeff;
                    merged = true;
                    break;
                }
            }
            if (!merged) monomials_.push_back(std::move(m));
        }
    }

    std::size_t num_vars() const { return num_vars_; }
    const std::vector<Monomial>& monomials() const { return monomials_; }

private:
    std::size_t num_vars_;
    std::vector<Monomial> monomials_;
};

namespace detail {

// coeff ⊗ x_1^(j_1) ⊗ ... : the exponent weights are applied by repeated
// tropical multiplication (scalar addition), the same path counted mode sees.
inline TropicalScalar monomial_value(const Monomial& m, const std::vector<double>& x) {
    TropicalScalar acc = m.coeff;
    for (std::size_t k = 0; k < x.size(); ++k)
        for (int r = 0; r < m.exponents[k]; ++r) acc = t_mul(acc, TropicalScalar(x[k]));
    return acc;
}

} // namespace detail

inline TropicalScalar poly_eval(const TropicalPolynomial& p, const std::vector<double>& x,
                                const HbarParam& hbar) {
    if (x.size() != p.num_vars()) throw std::invalid_argument("poly_eval: dimension mismatch");
    TropicalScalar acc = detail::monomial_value(p.monomials()[0], x);
    for (std::size_t i = 1; i < p.monomials().size(); ++i)
        acc = t_add(acc, detail::monomial_value(p.monomials()[i], x), hbar);
    return acc;
}

// Indices of monomials within tau of the maximum; nonempty whenever the
// evaluation is finite (and degenerately all indices when it is -inf).
inline std::vector<std::size_t> active_monomials(const TropicalPolynomial& p, const std::vector<double>& x,
                                                 double tau) {
    if (x.size() != p.num_vars()) throw std::invalid_argument("active_monomials: dimension mismatch");
    if (tau < 0.0) throw std::invalid_argument("active_monomials: tolerance must be >= 0");
    std::vector<double> values(p.monomials().size());
    double best = kNegInf;
    for (std::size_t i = 0; i < p.monomials().size(); ++i) {
        values[i] = detail::monomial_value(p.monomials()[i], x).v;
        if (values[i] > best) best = values[i];
    }
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] >= best - tau) active.push_back(i);
    return active;
}

inline constexpr double kDefaultTieTolerance = 1e-9;

// Zero-set membership: the value is -inf, or at least two monomials tie
// for the maximum at tolerance tau.
inline bool in_zero_set(const TropicalPolynomial& p, const std::vector<double>& x,
                        double tau = kDefaultTieTolerance) {
    if (poly_eval(p, x, HbarParam::infinity()).is_neg_inf()) return true;
    return active_monomials(p, x, tau).size() >= 2;
}

// Lowest-index argmax of the monomial values at x, used for the
// argmax-switch corner-locus criterion.
inline NodeArgmax poly_argmax(const TropicalPolynomial& p, const std::vector<double>& x) {
    std::size_t winner = 0;
    double best = kNegInf;
    for (std::size_t i = 0; i < p.monomials().size(); ++i) {
        const double v = detail::monomial_value(p.monomials()[i], x).v;
        if (v > best) {
            best = v;
            winner = i;
        }
    }
    return {winner, best == kNegInf};
}

// Marks the cells the corner locus passes through: the argmax monomial
// switches between two corners of the cell. Dimensions 1 to 3.
inline CellMask corner_locus_grid(const TropicalPolynomial& p, const GridSpec& grid) {
    grid.validate();
    if (grid.dims() != p.num_vars()) throw std::invalid_argument("corner_locus_grid: grid dimension mismatch");
    if (p.num_vars() > 3) throw std::invalid_argument("corner_locus_grid: only 1 to 3 variables supported");
    return argmax_switch_mask([&p](const std::vector<double>& x) { return poly_argmax(p, x); }, grid);
}

} // namespace tropical
