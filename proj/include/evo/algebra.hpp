#pragma once

// Evolution algebras in a fixed natural basis: e_i e_j = 0 for i != j, e_i^2 = sum_j A(i, j) e_j.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "evo/errors.hpp"
#include "evo/field.hpp"
#include "evo/linalg.hpp"

namespace evo {

template <Field F>
class EvolutionAlgebra {
public:
    using Element = typename F::Element;

    EvolutionAlgebra(F field, MatrixOf<F> structure) : field_(std::move(field)), a_(std::move(structure)) {
        if (a_.rows() != a_.cols()) throw InvalidArgument("structure matrix must be square");
    }

    /// The algebra with all products zero.
    static EvolutionAlgebra zero(const F& f, std::size_t dim) { return {f, zero_matrix(f, dim, dim)}; }

    [[nodiscard]] const F& field() const { return field_; }
    [[nodiscard]] std::size_t dim() const { return a_.rows(); }
    [[nodiscard]] const MatrixOf<F>& structure() const { return a_; }
    /// Coordinates of e_i^2.
    [[nodiscard]] std::span<const Element> square(std::size_t i) const { return a_.row(i); }
    [[nodiscard]] bool square_is_zero(std::size_t i) const { return is_zero_vector(field_, square(i)); }

    friend bool operator==(const EvolutionAlgebra& x, const EvolutionAlgebra& y) {
        return x.field_.descriptor() == y.field_.descriptor() && x.a_ == y.a_;
    }

private:
    F field_;
    MatrixOf<F> a_;
};

/// xy = sum_i x_i y_i e_i^2.
template <Field F>
VectorOf<F> multiply(const EvolutionAlgebra<F>& e, std::span<const typename F::Element> x,
                     std::span<const typename F::Element> y) {
    const std::size_t m = e.dim();
    if (x.size() != m || y.size() != m) throw InvalidArgument("multiply: vector length does not match dimension");
    const auto& f = e.field();
    VectorOf<F> out(m, f.zero());
    for (std::size_t i = 0; i < m; ++i) {
        if (f.is_zero(x[i]) || f.is_zero(y[i])) continue;
        const auto c = f.mul(x[i], y[i]);
        const auto row = e.square(i);
        for (std::size_t j = 0; j < m; ++j)
            if (!f.is_zero(row[j])) out[j] = f.add(out[j], f.mul(c, row[j]));
    }
    return out;
}

template <Field F>
VectorOf<F> multiply(const EvolutionAlgebra<F>& e, const VectorOf<F>& x, const VectorOf<F>& y) {
    return multiply(e, std::span<const typename F::Element>(x), std::span<const typename F::Element>(y));
}

template <Field F>
struct Annihilator {
    Subspace<F> space;
    std::vector<std::size_t> indices;  // natural basis vectors with zero square, increasing
};

template <Field F>
std::vector<std::size_t> annihilator_indices(const EvolutionAlgebra<F>& e) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < e.dim(); ++i)
        if (e.square_is_zero(i)) out.push_back(i);
    return out;
}

/// ann(E) is spanned by the natural basis vectors whose square vanishes.
template <Field F>
Annihilator<F> annihilator(const EvolutionAlgebra<F>& e) {
    auto idx = annihilator_indices(e);
    return {coordinate_subspace(e.field(), e.dim(), idx), std::move(idx)};
}

/// E^<1> = E, E^<k+1> = E^<k> E, until the chain reaches 0 or stops shrinking.
/// The last element is 0 for nilpotent algebras and the stable nonzero subspace otherwise.
template <Field F>
std::vector<Subspace<F>> power_chain(const EvolutionAlgebra<F>& e) {
    const auto& f = e.field();
    const std::size_t m = e.dim();
    std::vector<Subspace<F>> chain{Subspace<F>::whole(f, m)};
    while (chain.back().dim() > 0) {
        std::vector<VectorOf<F>> products;
        for (const auto& b : chain.back().basis_vectors())
            for (std::size_t j = 0; j < m; ++j) products.push_back(multiply(e, b, unit_vector(f, m, j)));
        Subspace<F> next(f, m, products);
        if (next == chain.back()) break;
        chain.push_back(std::move(next));
        if (chain.size() > m + 2) throw InternalError("power chain failed to terminate");
    }
    return chain;
}

/// Smallest k with E^<k> = 0, or empty when the chain stabilises above 0.
template <Field F>
std::optional<std::size_t> nilpotency_index(const std::vector<Subspace<F>>& chain) {
    if (chain.back().dim() != 0) return std::nullopt;
    return chain.size();
}

/// Kahn's algorithm on the digraph i -> j whenever A(i, j) != 0.
template <Field F>
bool structure_graph_is_acyclic(const EvolutionAlgebra<F>& e) {
    const std::size_t m = e.dim();
    const auto& f = e.field();
    std::vector<std::size_t> indegree(m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (!f.is_zero(e.structure()(i, j))) ++indegree[j];
    std::queue<std::size_t> ready;
    for (std::size_t j = 0; j < m; ++j)
        if (indegree[j] == 0) ready.push(j);
    std::size_t seen = 0;
    while (!ready.empty()) {
        auto i = ready.front();
        ready.pop();
        ++seen;
        for (std::size_t j = 0; j < m; ++j)
            if (!f.is_zero(e.structure()(i, j)) && --indegree[j] == 0) ready.push(j);
    }
    return seen == m;
}

struct NilpotencyCheck {
    bool by_chain = false;
    bool by_graph = false;
    std::optional<std::size_t> index;

    [[nodiscard]] bool nilpotent() const { return by_chain; }
};

/// Both criteria are evaluated; a disagreement throws InternalError.
template <Field F>
NilpotencyCheck is_nilpotent(const EvolutionAlgebra<F>& e) {
    const auto chain = power_chain(e);
    NilpotencyCheck out{chain.back().dim() == 0, structure_graph_is_acyclic(e), nilpotency_index(chain)};
    if (out.by_chain != out.by_graph)
        throw InternalError("nilpotency criteria disagree (chain " + std::to_string(out.by_chain) + ", graph " +
                            std::to_string(out.by_graph) + ")");
    return out;
}

template <Field F>
bool nilpotent(const EvolutionAlgebra<F>& e) {
    return is_nilpotent(e).nilpotent();
}

template <Field F>
struct Quotient {
    EvolutionAlgebra<F> algebra;
    /// New basis order: surviving indices in original order, then annihilator indices.
    std::vector<std::size_t> permutation;
    std::vector<std::size_t> kept;
    std::vector<std::size_t> annihilator;
};

/// E / ann(E) on the natural basis vectors with nonzero square, columns into ann(E) dropped.
template <Field F>
Quotient<F> quotient_by_annihilator(const EvolutionAlgebra<F>& e) {
    auto ann = annihilator_indices(e);
    if (ann.empty()) throw InvalidArgument("quotient_by_annihilator: annihilator is zero");
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < e.dim(); ++i)
        if (!std::binary_search(ann.begin(), ann.end(), i)) kept.push_back(i);
    auto q = zero_matrix(e.field(), kept.size(), kept.size());
    for (std::size_t r = 0; r < kept.size(); ++r)
        for (std::size_t c = 0; c < kept.size(); ++c) q(r, c) = e.structure()(kept[r], kept[c]);
    std::vector<std::size_t> perm = kept;
    perm.insert(perm.end(), ann.begin(), ann.end());
    return {EvolutionAlgebra<F>(e.field(), std::move(q)), std::move(perm), std::move(kept), std::move(ann)};
}

template <Field F>
EvolutionAlgebra<F> direct_sum(const EvolutionAlgebra<F>& x, const EvolutionAlgebra<F>& y) {
    if (!(x.field().descriptor() == y.field().descriptor())) throw InvalidArgument("direct_sum: field mismatch");
    const std::size_t m = x.dim(), n = y.dim();
    auto a = zero_matrix(x.field(), m + n, m + n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) a(i, j) = x.structure()(i, j);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(m + i, m + j) = y.structure()(i, j);
    return {x.field(), std::move(a)};
}

/// Relabels basis vectors: new e_k is old e_{order[k]}.
template <Field F>
EvolutionAlgebra<F> permute_basis(const EvolutionAlgebra<F>& e, const std::vector<std::size_t>& order) {
    const std::size_t m = e.dim();
    if (order.size() != m) throw InvalidArgument("permute_basis: wrong permutation length");
    std::vector<std::size_t> where(m);
    for (std::size_t k = 0; k < m; ++k) where[order[k]] = k;
    auto a = zero_matrix(e.field(), m, m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j < m; ++j) a(k, where[j]) = e.structure()(order[k], j);
    return {e.field(), std::move(a)};
}

/// ann_1 = ann(E), ann_{k+1} = {x : xE in ann_k}; dimensions until the series stops growing.
template <Field F>
std::vector<std::size_t> upper_annihilator_dims(const EvolutionAlgebra<F>& e) {
    const auto& f = e.field();
    const std::size_t m = e.dim();
    std::vector<std::size_t> dims;
    auto current = Subspace<F>::zero(f, m);
    while (true) {
        // x e_j = x_j e_j^2, so x is in the next term iff x_j = 0 whenever e_j^2 is outside `current`.
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < m; ++j) {
            VectorOf<F> sq(e.square(j).begin(), e.square(j).end());
            if (current.contains(f, sq)) idx.push_back(j);
        }
        auto next = coordinate_subspace(f, m, idx);
        if (next.dim() == current.dim()) break;
        dims.push_back(next.dim());
        current = std::move(next);
    }
    return dims;
}

/// Isomorphism invariants. Equal fingerprints are necessary, never sufficient, for isomorphism.
struct Fingerprint {
    std::size_t dim = 0;
    std::size_t annihilator_dim = 0;
    std::vector<std::size_t> chain_dims;
    std::optional<std::size_t> nilpotency_index;  // empty = not nilpotent
    std::vector<std::size_t> upper_annihilator_dims;
    std::size_t square_annihilator_meet_dim = 0;  // dim(E^<2> ∩ ann E)
    std::optional<std::uint64_t> square_zero_count;  // #{x : x^2 = 0}, finite fields of modest size only

    friend auto operator<=>(const Fingerprint&, const Fingerprint&) = default;
};

inline constexpr std::uint64_t kSquareZeroCountLimit = 1u << 20;

template <Field F>
Fingerprint fingerprint(const EvolutionAlgebra<F>& e) {
    const auto& f = e.field();
    const std::size_t m = e.dim();
    Fingerprint fp;
    fp.dim = m;
    const auto ann = annihilator(e);
    fp.annihilator_dim = ann.space.dim();
    const auto chain = power_chain(e);
    for (const auto& s : chain) fp.chain_dims.push_back(s.dim());
    fp.nilpotency_index = nilpotency_index(chain);
    fp.upper_annihilator_dims = upper_annihilator_dims(e);

    // A chain of length 1 means E^<2> = E.
    const auto& square_space = chain.size() > 1 ? chain[1] : chain[0];
    fp.square_annihilator_meet_dim =
        square_space.dim() + ann.space.dim() - square_space.sum(f, ann.space).dim();

    if (f.is_finite()) {
        std::uint64_t total = 1;
        bool small = true;
        for (std::size_t k = 0; k < m && small; ++k) {
            total *= f.order();
            small = total <= kSquareZeroCountLimit;
        }
        if (small) {
            const auto elems = f.elements();
            const std::uint64_t p = elems.size();
            std::vector<typename F::Element> squares;
            for (const auto& x : elems) squares.push_back(f.mul(x, x));
            std::uint64_t count = 0;
            VectorOf<F> acc(m);
            for (std::uint64_t n = 0; n < total; ++n) {
                std::uint64_t r = n;
                std::fill(acc.begin(), acc.end(), f.zero());
                for (std::size_t i = 0; i < m; ++i) {
                    const auto& c = squares[r % p];
                    r /= p;
                    if (f.is_zero(c)) continue;
                    for (std::size_t j = 0; j < m; ++j) acc[j] = f.add(acc[j], f.mul(c, e.structure()(i, j)));
                }
                if (is_zero_vector(f, std::span<const typename F::Element>(acc))) ++count;
            }
            fp.square_zero_count = count;
        }
    }
    return fp;
}

}  // namespace evo
