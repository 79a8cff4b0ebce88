// Dense row-major matrices over an arbitrary element type, a generic
// semiring product kernel, and the tropical matrix operations built on it.
//
// The product kernel is shared by every arithmetic: classical (+, *),
// max-plus, finite-hbar smoothed, and their counted variants. An
// instrumented run therefore counts exactly the production algorithm.

#pragma once

#include "tropical/scalar.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tropical {

template <typename T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}

    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {
        if (rows == 0 || cols == 0) throw std::invalid_argument("Matrix: dimensions must be positive");
    }

    static Matrix from_rows(std::vector<std::vector<T>> rows) {
        if (rows.empty() || rows.front().empty())
            throw std::invalid_argument("Matrix: dimensions must be positive");
        Matrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_) throw std::invalid_argument("Matrix: ragged rows");
            for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = std::move(rows[i][j]);
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

    bool same_shape(const Matrix& other) const { return rows_ == other.rows_ && cols_ == other.cols_; }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_, cols_;
    std::vector<T> data_;
};

using TropicalMatrix = Matrix<TropicalScalar>;
using RealMatrix = Matrix<double>;

// --- arithmetic policies --------------------------------------------------

// Ordinary (+, *) arithmetic over any double-like element.
template <typename T>
struct ClassicalOps {
    T add(const T& a, const T& b) const { return a + b; }
    T mul(const T& a, const T& b) const { return a * b; }
};

// (max, +) over any double-like element; -inf is the additive zero.
template <typename T>
struct MaxPlusOps {
    T add(const T& a, const T& b) const { return (a < b) ? b : a; }
    T mul(const T& a, const T& b) const { return a + b; }
};

// The hbar-parameterized family over TropicalScalar; covers both the
// smoothed arithmetic and the exact limit.
struct TropicalOps {
    HbarParam hbar;
    TropicalScalar add(TropicalScalar a, TropicalScalar b) const { return t_add(a, b, hbar); }
    TropicalScalar mul(TropicalScalar a, TropicalScalar b) const { return t_mul(a, b); }
};

// --- generic product kernel ------------------------------------------------

// c_ij = add-reduction over k of mul(a_ik, b_kj). The reduction folds
// left-to-right over k, seeded with the k=0 term, so an n-term entry
// performs exactly n mul's and n-1 add's.
template <typename T, typename Ops>
Matrix<T> mat_mul_generic(const Matrix<T>& a, const Matrix<T>& b, const Ops& ops) {
    if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: inner dimensions disagree");
    Matrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            T acc = ops.mul(a(i, 0), b(0, j));
            for (std::size_t k = 1; k < a.cols(); ++k)
                acc = ops.add(acc, ops.mul(a(i, k), b(k, j)));
            c(i, j) = acc;
        }
    }
    return c;
}

// --- tropical matrix operations ---------------------------------------------

// Elementwise a ⊕ b.
inline TropicalMatrix mat_add(const TropicalMatrix& a, const TropicalMatrix& b, const HbarParam& hbar) {
    if (!a.same_shape(b)) throw std::invalid_argument("mat_add: shape mismatch");
    TropicalMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] = t_add(a.data()[i], b.data()[i], hbar);
    return c;
}

inline TropicalMatrix mat_mul(const TropicalMatrix& a, const TropicalMatrix& b, const HbarParam& hbar) {
    return mat_mul_generic(a, b, TropicalOps{hbar});
}

// Classical product of real matrices (the comparison baseline).
inline RealMatrix classical_mat_mul(const RealMatrix& a, const RealMatrix& b) {
    return mat_mul_generic(a, b, ClassicalOps<double>{});
}

// c ⊗ A: adds c to every entry; -inf entries stay -inf.
inline TropicalMatrix scalar_mul(TropicalScalar c, const TropicalMatrix& a) {
    TropicalMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] = t_mul(c, a.data()[i]);
    return out;
}

template <typename T>
Matrix<T> transpose(const Matrix<T>& a) {
    Matrix<T> out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

// Unit for ⊗: 0 on the diagonal, -inf elsewhere.
inline TropicalMatrix trop_identity(std::size_t n) {
    if (n == 0) throw std::invalid_argument("trop_identity: n must be positive");
    TropicalMatrix m(n, n, TropicalScalar::neg_infinity());
    for (std::size_t i = 0; i < n; ++i) m(i, i) = TropicalScalar(0.0);
    return m;
}

// Entrywise Log_h image of a strictly positive real matrix.
inline TropicalMatrix log_image(const RealMatrix& p, const HbarParam& hbar) {
    TropicalMatrix out(p.rows(), p.cols());
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j) {
            if (!(p(i, j) > 0.0))
                throw std::domain_error("log_image: entry (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") is not strictly positive");
            out(i, j) = dequantize(p(i, j), hbar);
        }
    return out;
}

// Entrywise h^a, the inverse of log_image; -inf maps to 0.
inline RealMatrix quantize_image(const TropicalMatrix& a, const HbarParam& hbar) {
    RealMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = quantize(a(i, j), hbar);
    return out;
}

} // namespace tropical
