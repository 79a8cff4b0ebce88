// Scalar arithmetic of the max-plus family: numbers from R ∪ {-inf},
// an hbar parameter selecting finite-base or limit arithmetic, the two
// semiring operations, and the log/pow maps between ordinary positive
// reals and their tropical images.

#pragma once

#include "tropical/opcount.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tropical {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// An extended real: a finite value or -inf, the additive zero.
// Finite values are never NaN.
struct TropicalScalar {
    double v;

    constexpr TropicalScalar() : v(kNegInf) {}
    constexpr TropicalScalar(double value) : v(value) { assert(value == value); }

    static constexpr TropicalScalar neg_infinity() { return TropicalScalar(); }

    constexpr bool is_neg_inf() const { return v == kNegInf; }
    constexpr bool is_finite() const { return !is_neg_inf(); }

    friend constexpr bool operator==(TropicalScalar a, TropicalScalar b) { return a.v == b.v; }
    friend constexpr bool operator!=(TropicalScalar a, TropicalScalar b) { return a.v != b.v; }
    friend constexpr bool operator<(TropicalScalar a, TropicalScalar b) { return a.v < b.v; }
};

// Dequantization parameter: either a finite base h > e, or the max-plus
// limit. Finite instances cache ln(h) for the smoothed addition.
class HbarParam {
public:
    static HbarParam infinity() { return HbarParam(std::numeric_limits<double>::infinity(), 0.0); }

    static HbarParam finite(double h) {
        if (!(h > std::numbers::e_v<double>) || std::isinf(h))
            throw std::domain_error("HbarParam: finite base must satisfy h > e");
        return HbarParam(h, std::log(h));
    }

    bool is_infinite() const { return std::isinf(h_); }
    bool is_finite() const { return !is_infinite(); }

    double value() const { return h_; }

    // ln(h); only meaningful for finite instances.
    double log_value() const { return log_h_; }

private:
    HbarParam(double h, double log_h) : h_(h), log_h_(log_h) {}
    double h_;
    double log_h_;
};

// a ⊕ b. Limit mode is an exact max; finite mode evaluates
// log_h(h^a + h^b) in the max-factored form max + log_h(1 + h^-|a-b|),
// which never overflows. -inf is the identity in both modes.
inline TropicalScalar t_add(TropicalScalar a, TropicalScalar b, const HbarParam& hbar) {
    if (hbar.is_infinite()) {
        detail::count_cmp();
        return (a.v < b.v) ? b : a;
    }
    if (a.is_neg_inf()) return b;
    if (b.is_neg_inf()) return a;
    detail::count_cmp();
    detail::count_add();
    const double m = (a.v < b.v) ? b.v : a.v;
    const double d = std::abs(a.v - b.v);
    return {m + std::log1p(std::exp(-d * hbar.log_value())) / hbar.log_value()};
}

// a ⊗ b = a + b, independent of hbar; -inf absorbs.
inline TropicalScalar t_mul(TropicalScalar a, TropicalScalar b) {
    detail::count_add();
    return {a.v + b.v};
}

// Log_h of a nonnegative real: the semiring isomorphism into the
// finite-h arithmetic. 0 maps to -inf by continuous extension; negative
// inputs are outside the domain.
inline TropicalScalar dequantize(double x, const HbarParam& hbar) {
    if (hbar.is_infinite()) throw std::domain_error("dequantize: requires a finite hbar");
    if (x < 0.0 || std::isnan(x)) throw std::domain_error("dequantize: input must be nonnegative");
    if (x == 0.0) return TropicalScalar::neg_infinity();
    return {std::log(x) / hbar.log_value()};
}

// h^a, the inverse map; -inf returns 0.
inline double quantize(TropicalScalar a, const HbarParam& hbar) {
    if (hbar.is_infinite()) throw std::domain_error("quantize: requires a finite hbar");
    if (a.is_neg_inf()) return 0.0;
    return std::exp(a.v * hbar.log_value());
}

// --- text format ---------------------------------------------------------
//
// Finite scalars print as decimals with 17 significant digits (enough to
// round-trip doubles bit-exactly); the additive zero prints as `-inf`.

inline std::string format_scalar(TropicalScalar a) {
    if (a.is_neg_inf()) return "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", a.v);
    return buf;
}

inline TropicalScalar parse_scalar(std::string_view text) {
    if (text == "-inf") return TropicalScalar::neg_infinity();
    std::string token(text);
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || token.empty() || std::isnan(value) || std::isinf(value))
        throw std::runtime_error("parse_scalar: bad token '" + token + "'");
    return {value};
}

} // namespace tropical
