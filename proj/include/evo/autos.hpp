#pragma once

// Automorphism groups over finite fields and their action on diagonal forms modulo coboundaries.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "evo/algebra.hpp"
#include "evo/cocycle.hpp"
#include "evo/iso.hpp"

namespace evo {

/// Aut(E) as an explicit list of matrices; column i of each member is the image of e_i.
template <Field F>
class AutGroup {
public:
    using Element = typename F::Element;

    AutGroup(F field, std::size_t dim) : field_(std::move(field)), dim_(dim) {}

    [[nodiscard]] std::size_t size() const { return dim_ == 0 ? 1 : flat_.size() / (dim_ * dim_); }
    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] const F& field() const { return field_; }

    [[nodiscard]] MatrixOf<F> at(std::size_t k) const {
        if (dim_ == 0) return MatrixOf<F>(0, 0, std::vector<Element>{});
        const auto first = flat_.begin() + static_cast<std::ptrdiff_t>(k * dim_ * dim_);
        return MatrixOf<F>(dim_, dim_, std::vector<Element>(first, first + static_cast<std::ptrdiff_t>(dim_ * dim_)));
    }
    [[nodiscard]] std::vector<MatrixOf<F>> members() const {
        std::vector<MatrixOf<F>> out;
        for (std::size_t k = 0; k < size(); ++k) out.push_back(at(k));
        return out;
    }

    void push(const MatrixOf<F>& m) { flat_.insert(flat_.end(), m.data().begin(), m.data().end()); }

    [[nodiscard]] bool contains(const MatrixOf<F>& m) const {
        if (!index_) {
            index_.emplace();
            for (std::size_t k = 0; k < size(); ++k) index_->insert(at(k).data());
        }
        return index_->count(m.data()) > 0;
    }

private:
    F field_;
    std::size_t dim_;
    std::vector<Element> flat_;
    mutable std::optional<std::set<std::vector<Element>>> index_;
};

/// Every automorphism, in search order. Finite fields only.
template <Field F>
AutGroup<F> enumerate_aut(const EvolutionAlgebra<F>& e, SearchBudget budget = {}) {
    require_finite(e.field(), "enumerate_aut");
    AutGroup<F> group(e.field(), e.dim());
    if (e.dim() == 0) return group;
    IsoSearch<F> search(e, e, budget);
    search.run([&](const MatrixOf<F>& p) {
        group.push(p);
        return true;
    });
    return group;
}

/// phi.theta = phi^T diag(theta) phi when that is diagonal; empty otherwise.
template <Field F>
std::optional<DiagonalForm<F>> act(const F& f, const MatrixOf<F>& phi, const DiagonalForm<F>& theta) {
    const std::size_t m = phi.rows();
    if (phi.cols() != m || theta.base_dim() != m) throw InvalidArgument("act: dimension mismatch");
    DiagonalForm<F> out{VectorOf<F>(m, f.zero())};
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            auto acc = f.zero();
            for (std::size_t k = 0; k < m; ++k) {
                if (f.is_zero(theta.values[k])) continue;
                acc = f.add(acc, f.mul(theta.values[k], f.mul(phi(k, i), phi(k, j))));
            }
            if (i == j)
                out.values[i] = acc;
            else if (!f.is_zero(acc))
                return std::nullopt;
        }
    return out;
}

/// S_theta: members of Aut(E) under which every column of theta stays diagonal.
template <Field F>
std::vector<MatrixOf<F>> stabilizer_subset(const AutGroup<F>& group, const CocycleMatrix<F>& theta) {
    std::vector<MatrixOf<F>> out;
    for (std::size_t k = 0; k < group.size(); ++k) {
        auto phi = group.at(k);
        bool ok = true;
        for (std::size_t j = 0; j < theta.target_dim() && ok; ++j) ok = act(group.field(), phi, theta.form(j)).has_value();
        if (ok) out.push_back(std::move(phi));
    }
    return out;
}

/// An s-dimensional subspace of H in echelon form over the H coordinates, with its lift to Z.
template <Field F>
struct SubspaceClass {
    MatrixOf<F> basis;         // s x dim H, reduced row-echelon
    CocycleMatrix<F> cocycle;  // m x s, column j = lift of basis row j
    std::size_t orbit_id = 0;
    std::size_t orbit_size = 0;
};

/// Every s-dimensional subspace of F^h as its reduced row-echelon matrix, in lexicographic order.
template <Field F>
std::vector<MatrixOf<F>> enumerate_subspaces(const F& f, std::size_t h, std::size_t s) {
    require_finite(f, "subspace enumeration");
    std::vector<MatrixOf<F>> out;
    if (s > h) return out;
    const auto elems = f.elements();
    std::vector<bool> choose(h, false);
    std::fill(choose.begin(), choose.begin() + static_cast<std::ptrdiff_t>(s), true);
    do {
        std::vector<std::size_t> pivots;
        for (std::size_t k = 0; k < h; ++k)
            if (choose[k]) pivots.push_back(k);
        // Free slots: row r, column c > pivots[r] with c not a pivot.
        std::vector<std::pair<std::size_t, std::size_t>> free;
        for (std::size_t r = 0; r < s; ++r)
            for (std::size_t c = pivots[r] + 1; c < h; ++c)
                if (!std::binary_search(pivots.begin(), pivots.end(), c)) free.emplace_back(r, c);
        std::vector<std::size_t> digit(free.size(), 0);
        while (true) {
            auto m = zero_matrix(f, s, h);
            for (std::size_t r = 0; r < s; ++r) m(r, pivots[r]) = f.one();
            for (std::size_t t = 0; t < free.size(); ++t) m(free[t].first, free[t].second) = elems[digit[t]];
            out.push_back(std::move(m));
            std::size_t t = free.size();
            while (t > 0 && ++digit[t - 1] == elems.size()) digit[--t] = 0;
            if (t == 0) break;
        }
    } while (std::prev_permutation(choose.begin(), choose.end()));
    std::sort(out.begin(), out.end());
    return out;
}

template <Field F>
CocycleMatrix<F> lift_subspace(const CocycleSpaces<F>& spaces, const MatrixOf<F>& basis) {
    std::vector<VectorOf<F>> cols;
    for (std::size_t r = 0; r < basis.rows(); ++r) cols.push_back(spaces.lift(basis.row_vector(r)));
    return CocycleMatrix<F>::from_columns(spaces.field(), spaces.dim_z(), cols);
}

/// Image of the subspace spanned by theta's columns under phi, as an echelon matrix over H
/// coordinates; empty when phi does not keep every column diagonal.
template <Field F>
std::optional<MatrixOf<F>> act_on_subspace(const CocycleSpaces<F>& spaces, const MatrixOf<F>& phi,
                                           const CocycleMatrix<F>& theta) {
    const auto& f = spaces.field();
    std::vector<VectorOf<F>> rows;
    for (std::size_t j = 0; j < theta.target_dim(); ++j) {
        auto img = act(f, phi, theta.form(j));
        if (!img) return std::nullopt;
        rows.push_back(spaces.h_coords(img->values));
    }
    Subspace<F> w(f, spaces.dim_h(), rows);
    return w.basis();
}

/// Orbits of Aut(E) on the admissible s-dimensional subspaces of H. Two subspaces are in one orbit
/// iff some automorphism keeps a basis of one diagonal and carries its span (mod B) onto the other.
/// Each orbit is represented by its lexicographically least echelon matrix; output in that order.
template <Field F>
std::vector<SubspaceClass<F>> orbit_partition(const EvolutionAlgebra<F>& e, const CocycleSpaces<F>& spaces,
                                              const AutGroup<F>& group, std::size_t s) {
    require_finite(e.field(), "orbit_partition");
    if (s == 0) throw InvalidArgument("orbit_partition: s must be at least 1");
    std::vector<SubspaceClass<F>> reps;
    if (s > spaces.dim_h()) return reps;

    std::vector<MatrixOf<F>> admissible;
    std::vector<CocycleMatrix<F>> lifts;
    for (auto& w : enumerate_subspaces(e.field(), spaces.dim_h(), s)) {
        auto theta = lift_subspace(spaces, w);
        if (!is_admissible(e, spaces, theta)) continue;
        admissible.push_back(std::move(w));
        lifts.push_back(std::move(theta));
    }
    std::map<MatrixOf<F>, std::size_t> position;
    for (std::size_t k = 0; k < admissible.size(); ++k) position.emplace(admissible[k], k);

    std::vector<bool> seen(admissible.size(), false);
    for (std::size_t k = 0; k < admissible.size(); ++k) {
        if (seen[k]) continue;
        std::size_t size = 0;
        for (std::size_t g = 0; g < group.size(); ++g) {
            auto image = act_on_subspace(spaces, group.at(g), lifts[k]);
            if (!image) continue;
            if (image->rows() != s) throw InternalError("automorphism collapsed a subspace of H");
            auto it = position.find(*image);
            if (it == position.end()) throw InternalError("automorphism image of an admissible subspace is not admissible");
            if (!seen[it->second]) {
                seen[it->second] = true;
                ++size;
            }
        }
        if (!seen[k]) throw InternalError("identity missing from the automorphism group");
        reps.push_back({admissible[k], lifts[k], reps.size(), size});
    }
    return reps;
}

}  // namespace evo
