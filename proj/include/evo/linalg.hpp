#pragma once

// Dense matrices over an exact field, reduced row-echelon form, and subspaces in canonical form.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "evo/errors.hpp"
#include "evo/field.hpp"

namespace evo {

template <class E>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const E& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<E> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) throw InvalidArgument("matrix data size does not match shape");
    }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] bool empty() const { return data_.empty(); }

    E& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const E& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<const E> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    [[nodiscard]] std::span<E> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    [[nodiscard]] std::vector<E> row_vector(std::size_t r) const { return {row(r).begin(), row(r).end()}; }
    [[nodiscard]] std::vector<E> column(std::size_t c) const {
        std::vector<E> out;
        out.reserve(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out.push_back((*this)(r, c));
        return out;
    }
    [[nodiscard]] const std::vector<E>& data() const { return data_; }

    [[nodiscard]] Matrix transpose() const {
        Matrix t(cols_, rows_, std::vector<E>(data_.size()));
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    void append_row(std::span<const E> v) {
        if (rows_ == 0 && cols_ == 0) cols_ = v.size();
        if (v.size() != cols_) throw InvalidArgument("row length mismatch");
        data_.insert(data_.end(), v.begin(), v.end());
        ++rows_;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;
    friend bool operator<(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
        if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
        return std::lexicographical_compare(a.data_.begin(), a.data_.end(), b.data_.begin(), b.data_.end());
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<E> data_;
};

template <Field F>
using MatrixOf = Matrix<typename F::Element>;
template <Field F>
using VectorOf = std::vector<typename F::Element>;

template <Field F>
MatrixOf<F> zero_matrix(const F& f, std::size_t rows, std::size_t cols) {
    return MatrixOf<F>(rows, cols, f.zero());
}

template <Field F>
MatrixOf<F> identity_matrix(const F& f, std::size_t n) {
    auto m = zero_matrix(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = f.one();
    return m;
}

template <Field F>
MatrixOf<F> matrix_from_ints(const F& f, std::size_t rows, std::size_t cols, std::initializer_list<long long> v) {
    if (v.size() != rows * cols) throw InvalidArgument("matrix_from_ints: wrong entry count");
    VectorOf<F> data;
    data.reserve(v.size());
    for (long long x : v) data.push_back(f.from_int(x));
    return MatrixOf<F>(rows, cols, std::move(data));
}

template <Field F>
VectorOf<F> vector_from_ints(const F& f, std::initializer_list<long long> v) {
    VectorOf<F> out;
    for (long long x : v) out.push_back(f.from_int(x));
    return out;
}

template <Field F>
VectorOf<F> unit_vector(const F& f, std::size_t n, std::size_t k) {
    VectorOf<F> v(n, f.zero());
    v[k] = f.one();
    return v;
}

template <Field F>
bool is_zero_vector(const F& f, std::span<const typename F::Element> v) {
    return std::all_of(v.begin(), v.end(), [&](const auto& x) { return f.is_zero(x); });
}

template <Field F>
MatrixOf<F> multiply(const F& f, const MatrixOf<F>& a, const MatrixOf<F>& b) {
    if (a.cols() != b.rows()) throw InvalidArgument("matrix product shape mismatch");
    auto out = zero_matrix(f, a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (f.is_zero(a(i, k))) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = f.add(out(i, j), f.mul(a(i, k), b(k, j)));
        }
    return out;
}

template <Field F>
VectorOf<F> apply(const F& f, const MatrixOf<F>& a, std::span<const typename F::Element> x) {
    if (a.cols() != x.size()) throw InvalidArgument("matrix-vector shape mismatch");
    VectorOf<F> out(a.rows(), f.zero());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) out[i] = f.add(out[i], f.mul(a(i, k), x[k]));
    return out;
}

/// Reduces in place to reduced row-echelon form with unit pivots; zero rows are dropped.
/// Returns the pivot column of each surviving row.
template <Field F>
std::vector<std::size_t> rref_in_place(const F& f, MatrixOf<F>& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = r;
        while (sel < rows && f.is_zero(m(sel, c))) ++sel;
        if (sel == rows) continue;
        if (sel != r)
            for (std::size_t k = 0; k < cols; ++k) std::swap(m(r, k), m(sel, k));
        const auto scale = f.inv(m(r, c));
        for (std::size_t k = c; k < cols; ++k) m(r, k) = f.mul(m(r, k), scale);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || f.is_zero(m(i, c))) continue;
            const auto factor = m(i, c);
            for (std::size_t k = c; k < cols; ++k) m(i, k) = f.sub(m(i, k), f.mul(factor, m(r, k)));
        }
        pivots.push_back(c);
        ++r;
    }
    std::vector<typename F::Element> kept(m.data().begin(), m.data().begin() + static_cast<std::ptrdiff_t>(r * cols));
    m = MatrixOf<F>(r, cols, std::move(kept));
    return pivots;
}

template <Field F>
std::size_t rank(const F& f, MatrixOf<F> m) {
    return rref_in_place(f, m).size();
}

template <Field F>
std::optional<MatrixOf<F>> inverse(const F& f, const MatrixOf<F>& m) {
    if (m.rows() != m.cols()) throw InvalidArgument("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    auto aug = zero_matrix(f, n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = f.one();
    }
    auto pivots = rref_in_place(f, aug);
    if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1)) return std::nullopt;
    auto out = zero_matrix(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
    return out;
}

template <Field F>
bool is_invertible(const F& f, const MatrixOf<F>& m) {
    return m.rows() == m.cols() && rank(f, m) == m.rows();
}

/// A subspace of F^n, stored as its unique reduced row-echelon basis.
template <Field F>
class Subspace {
public:
    using Element = typename F::Element;

    Subspace() = default;

    static Subspace zero(const F& f, std::size_t ambient) { return Subspace(f, ambient, {}); }
    static Subspace whole(const F& f, std::size_t ambient) {
        std::vector<VectorOf<F>> gens;
        for (std::size_t k = 0; k < ambient; ++k) gens.push_back(unit_vector(f, ambient, k));
        return Subspace(f, ambient, gens);
    }

    Subspace(const F& f, std::size_t ambient, const std::vector<VectorOf<F>>& generators)
        : ambient_(ambient), basis_(0, ambient, std::vector<Element>{}) {
        for (const auto& g : generators) {
            if (g.size() != ambient) throw InvalidArgument("generator length does not match ambient dimension");
            basis_.append_row(g);
        }
        if (basis_.rows() == 0) basis_ = MatrixOf<F>(0, ambient, std::vector<Element>{});
        pivots_ = rref_in_place(f, basis_);
    }

    [[nodiscard]] std::size_t ambient() const { return ambient_; }
    [[nodiscard]] std::size_t dim() const { return pivots_.size(); }
    [[nodiscard]] const MatrixOf<F>& basis() const { return basis_; }
    [[nodiscard]] const std::vector<std::size_t>& pivots() const { return pivots_; }
    [[nodiscard]] std::vector<VectorOf<F>> basis_vectors() const {
        std::vector<VectorOf<F>> out;
        for (std::size_t r = 0; r < basis_.rows(); ++r) out.push_back(basis_.row_vector(r));
        return out;
    }

    /// Canonical representative of v modulo this subspace (zero at every pivot column).
    [[nodiscard]] VectorOf<F> reduce(const F& f, VectorOf<F> v) const {
        for (std::size_t r = 0; r < pivots_.size(); ++r) {
            const auto c = v[pivots_[r]];
            if (f.is_zero(c)) continue;
            for (std::size_t k = 0; k < ambient_; ++k) v[k] = f.sub(v[k], f.mul(c, basis_(r, k)));
        }
        return v;
    }

    [[nodiscard]] bool contains(const F& f, const VectorOf<F>& v) const {
        return is_zero_vector(f, std::span<const Element>(reduce(f, v)));
    }
    [[nodiscard]] bool contains(const F& f, const Subspace& other) const {
        for (const auto& v : other.basis_vectors())
            if (!contains(f, v)) return false;
        return true;
    }

    [[nodiscard]] Subspace sum(const F& f, const Subspace& other) const {
        auto gens = basis_vectors();
        for (auto& v : other.basis_vectors()) gens.push_back(std::move(v));
        return Subspace(f, ambient_, gens);
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }

private:
    std::size_t ambient_ = 0;
    MatrixOf<F> basis_;
    std::vector<std::size_t> pivots_;
};

/// Span of the coordinate vectors e_k for k in `indices` (0-based).
template <Field F>
Subspace<F> coordinate_subspace(const F& f, std::size_t ambient, const std::vector<std::size_t>& indices) {
    std::vector<VectorOf<F>> gens;
    for (auto k : indices) gens.push_back(unit_vector(f, ambient, k));
    return Subspace<F>(f, ambient, gens);
}

}  // namespace evo
