#pragma once

// Diagonal bilinear forms on an evolution algebra and the annihilator extensions they define.
//
// Z = diagonal forms theta(e_i, e_i) = v_i, stored as m-vectors.
// B = coboundaries theta_f(e_i, e_i) = f(e_i^2), i.e. the column space of the structure matrix A.
// H = Z / B, represented by canonical residues modulo the echelon basis of B.

#include <algorithm>
#include <string>
#include <vector>

#include "evo/algebra.hpp"
#include "evo/certificate.hpp"
#include "evo/errors.hpp"
#include "evo/linalg.hpp"

namespace evo {

template <Field F>
struct DiagonalForm {
    VectorOf<F> values;  // values[i] = theta(e_i, e_i)

    [[nodiscard]] std::size_t base_dim() const { return values.size(); }
    friend bool operator==(const DiagonalForm&, const DiagonalForm&) = default;
};

/// m x s matrix whose column j is the diagonal form theta_j (the V-component along e_{m+j}).
template <Field F>
class CocycleMatrix {
public:
    CocycleMatrix() = default;
    explicit CocycleMatrix(MatrixOf<F> m) : m_(std::move(m)) {}

    static CocycleMatrix zero(const F& f, std::size_t base_dim, std::size_t s) {
        return CocycleMatrix(zero_matrix(f, base_dim, s));
    }
    static CocycleMatrix from_columns(const F& f, std::size_t base_dim, const std::vector<VectorOf<F>>& cols) {
        auto m = zero_matrix(f, base_dim, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != base_dim) throw InvalidArgument("cocycle column length does not match base dim");
            for (std::size_t i = 0; i < base_dim; ++i) m(i, j) = cols[j][i];
        }
        return CocycleMatrix(std::move(m));
    }

    [[nodiscard]] std::size_t base_dim() const { return m_.rows(); }
    [[nodiscard]] std::size_t target_dim() const { return m_.cols(); }
    [[nodiscard]] const MatrixOf<F>& matrix() const { return m_; }
    [[nodiscard]] VectorOf<F> column(std::size_t j) const { return m_.column(j); }
    [[nodiscard]] DiagonalForm<F> form(std::size_t j) const { return {m_.column(j)}; }
    [[nodiscard]] std::vector<VectorOf<F>> columns() const {
        std::vector<VectorOf<F>> out;
        for (std::size_t j = 0; j < target_dim(); ++j) out.push_back(column(j));
        return out;
    }

    friend bool operator==(const CocycleMatrix&, const CocycleMatrix&) = default;

private:
    MatrixOf<F> m_;
};

template <Field F>
class CocycleSpaces {
public:
    CocycleSpaces(const F& f, Subspace<F> coboundaries) : field_(f), b_(std::move(coboundaries)) {
        const auto& piv = b_.pivots();
        for (std::size_t k = 0; k < b_.ambient(); ++k)
            if (!std::binary_search(piv.begin(), piv.end(), k)) h_positions_.push_back(k);
    }

    [[nodiscard]] const F& field() const { return field_; }
    [[nodiscard]] std::size_t dim_z() const { return b_.ambient(); }
    [[nodiscard]] std::size_t dim_b() const { return b_.dim(); }
    [[nodiscard]] std::size_t dim_h() const { return h_positions_.size(); }
    [[nodiscard]] const Subspace<F>& coboundaries() const { return b_; }
    [[nodiscard]] std::vector<DiagonalForm<F>> b_basis() const {
        std::vector<DiagonalForm<F>> out;
        for (auto& v : b_.basis_vectors()) out.push_back({std::move(v)});
        return out;
    }
    /// Coordinates k whose unit forms delta_{e_k,e_k} represent a basis of H.
    [[nodiscard]] const std::vector<std::size_t>& h_positions() const { return h_positions_; }

    /// Canonical coset representative: zero at every pivot of the coboundary basis.
    [[nodiscard]] VectorOf<F> reduce(const VectorOf<F>& v) const {
        if (v.size() != dim_z()) throw InvalidArgument("reduce: form length does not match base dim");
        return b_.reduce(field_, v);
    }
    [[nodiscard]] DiagonalForm<F> reduce(const DiagonalForm<F>& d) const { return {reduce(d.values)}; }

    /// Coordinates of the class of v in the H basis.
    [[nodiscard]] VectorOf<F> h_coords(const VectorOf<F>& v) const {
        const auto r = reduce(v);
        VectorOf<F> out;
        out.reserve(h_positions_.size());
        for (auto k : h_positions_) out.push_back(r[k]);
        return out;
    }
    /// The canonical diagonal form with the given H coordinates.
    [[nodiscard]] VectorOf<F> lift(const VectorOf<F>& coords) const {
        if (coords.size() != dim_h()) throw InvalidArgument("lift: wrong number of H coordinates");
        VectorOf<F> v(dim_z(), field_.zero());
        for (std::size_t k = 0; k < coords.size(); ++k) v[h_positions_[k]] = coords[k];
        return v;
    }

    /// Rank of the classes of the columns in H.
    [[nodiscard]] std::size_t rank_in_h(const CocycleMatrix<F>& theta) const {
        std::vector<VectorOf<F>> reduced;
        for (const auto& c : theta.columns()) reduced.push_back(reduce(c));
        return Subspace<F>(field_, dim_z(), reduced).dim();
    }

private:
    F field_;
    Subspace<F> b_;
    std::vector<std::size_t> h_positions_;
};

/// theta_f has diagonal A f, so B is the column space of the structure matrix.
template <Field F>
CocycleSpaces<F> compute_spaces(const EvolutionAlgebra<F>& e) {
    const auto at = e.structure().transpose();
    std::vector<VectorOf<F>> cols;
    for (std::size_t r = 0; r < at.rows(); ++r) cols.push_back(at.row_vector(r));
    return CocycleSpaces<F>(e.field(), Subspace<F>(e.field(), e.dim(), cols));
}

/// Diagonal of the coboundary theta_f for f: E -> F given by its values on the natural basis.
template <Field F>
VectorOf<F> coboundary(const EvolutionAlgebra<F>& e, const VectorOf<F>& f_values) {
    return apply(e.field(), e.structure(), std::span<const typename F::Element>(f_values));
}

/// Indices i whose row of theta vanishes in every column.
template <Field F>
std::vector<std::size_t> radical(const F& f, const CocycleMatrix<F>& theta) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < theta.base_dim(); ++i)
        if (is_zero_vector(f, theta.matrix().row(i))) out.push_back(i);
    return out;
}

inline std::vector<std::size_t> intersect_sorted(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::vector<std::size_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

struct Admissibility {
    enum class Reason { none, dependent_in_h, radical_meets_annihilator };
    bool admissible = false;
    Reason reason = Reason::none;

    explicit operator bool() const { return admissible; }
};

inline std::string to_string(Admissibility::Reason r) {
    switch (r) {
        case Admissibility::Reason::none: return "admissible";
        case Admissibility::Reason::dependent_in_h: return "columns dependent in H";
        case Admissibility::Reason::radical_meets_annihilator: return "radical meets annihilator";
    }
    return "?";
}

template <Field F>
void check_base_dim(const EvolutionAlgebra<F>& e, const CocycleMatrix<F>& theta) {
    if (theta.base_dim() != e.dim()) throw InvalidArgument("cocycle base dim does not match algebra dimension");
}

/// Columns independent in H, and no annihilator basis vector in the radical.
template <Field F>
Admissibility is_admissible(const EvolutionAlgebra<F>& e, const CocycleSpaces<F>& spaces, const CocycleMatrix<F>& theta) {
    check_base_dim(e, theta);
    if (spaces.rank_in_h(theta) != theta.target_dim()) return {false, Admissibility::Reason::dependent_in_h};
    if (!intersect_sorted(radical(e.field(), theta), annihilator_indices(e)).empty())
        return {false, Admissibility::Reason::radical_meets_annihilator};
    return {true, Admissibility::Reason::none};
}

/// E_theta = E + V with structure [[A, theta], [0, 0]]; V = span(e_{m+1}, ..., e_{m+s}).
template <Field F>
EvolutionAlgebra<F> extend(const EvolutionAlgebra<F>& e, const CocycleMatrix<F>& theta) {
    check_base_dim(e, theta);
    const std::size_t m = e.dim(), s = theta.target_dim();
    auto a = zero_matrix(e.field(), m + s, m + s);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) a(i, j) = e.structure()(i, j);
        for (std::size_t j = 0; j < s; ++j) a(i, m + j) = theta.matrix()(i, j);
    }
    return {e.field(), std::move(a)};
}

/// (theta^perp ∩ ann E) + V, computed without building E_theta.
template <Field F>
Subspace<F> annihilator_of_extension(const EvolutionAlgebra<F>& e, const CocycleMatrix<F>& theta) {
    check_base_dim(e, theta);
    auto idx = intersect_sorted(radical(e.field(), theta), annihilator_indices(e));
    for (std::size_t j = 0; j < theta.target_dim(); ++j) idx.push_back(e.dim() + j);
    return coordinate_subspace(e.field(), e.dim() + theta.target_dim(), idx);
}

/// Requires theta^perp ∩ ann E = 0. True iff the columns are dependent in H.
template <Field F>
bool has_annihilator_component(const EvolutionAlgebra<F>& e, const CocycleSpaces<F>& spaces,
                               const CocycleMatrix<F>& theta) {
    check_base_dim(e, theta);
    if (!intersect_sorted(radical(e.field(), theta), annihilator_indices(e)).empty())
        throw InvalidArgument("has_annihilator_component: radical meets the annihilator");
    return spaces.rank_in_h(theta) < theta.target_dim();
}

/// Structural test: E = I + Fz with z a zero ideal exists iff ann(E) is not contained in E^<2>.
template <Field F>
bool splits_off_zero_ideal(const EvolutionAlgebra<F>& e) {
    const auto chain = power_chain(e);
    const auto& square_space = chain.size() > 1 ? chain[1] : chain[0];
    return !square_space.contains(e.field(), annihilator(e).space);
}

template <Field F>
struct Decomposition {
    EvolutionAlgebra<F> quotient;
    CocycleMatrix<F> theta;
    /// Maps extend(quotient, theta) onto the input algebra.
    IsoCertificate<F> certificate;
    std::vector<std::size_t> permutation;
};

/// Splits E (ann E != 0) as an annihilator extension of E / ann E.
template <Field F>
Decomposition<F> decompose(const EvolutionAlgebra<F>& e) {
    auto q = quotient_by_annihilator(e);
    const auto& f = e.field();
    auto theta = zero_matrix(f, q.kept.size(), q.annihilator.size());
    for (std::size_t r = 0; r < q.kept.size(); ++r)
        for (std::size_t c = 0; c < q.annihilator.size(); ++c) theta(r, c) = e.structure()(q.kept[r], q.annihilator[c]);
    CocycleMatrix<F> cm(std::move(theta));
    IsoCertificate<F> cert{permutation_matrix(f, q.permutation)};
    if (!verify_certificate(extend(q.algebra, cm), e, cert))
        throw InternalError("decompose: reassembled algebra does not map onto the input");
    return {std::move(q.algebra), std::move(cm), std::move(cert), std::move(q.permutation)};
}

/// The map x + v -> x + f(x) + v from E_theta onto E_{theta + theta_f}.
/// f_values is m x s: row i holds f(e_i) in V coordinates.
template <Field F>
std::pair<CocycleMatrix<F>, IsoCertificate<F>> add_coboundary(const EvolutionAlgebra<F>& e,
                                                             const CocycleMatrix<F>& theta,
                                                             const MatrixOf<F>& f_values) {
    check_base_dim(e, theta);
    const auto& f = e.field();
    const std::size_t m = e.dim(), s = theta.target_dim();
    if (f_values.rows() != m || f_values.cols() != s) throw InvalidArgument("add_coboundary: f has the wrong shape");
    auto shifted = theta.matrix();
    const auto delta = multiply(f, e.structure(), f_values);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < s; ++j) shifted(i, j) = f.add(shifted(i, j), delta(i, j));
    auto sigma = identity_matrix(f, m + s);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < s; ++j) sigma(m + j, i) = f_values(i, j);
    return {CocycleMatrix<F>(std::move(shifted)), IsoCertificate<F>{std::move(sigma)}};
}

}  // namespace evo
