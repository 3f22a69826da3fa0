#pragma once

// Backtracking search for algebra isomorphisms between two evolution algebras over a finite field.
//
// An isomorphism is fixed by the images P e_i. The search assigns them one basis vector at a time and
// rejects a partial assignment as soon as a product equation whose vectors are all assigned fails:
//   (P e_i)(P e_j) = 0 for i != j,   (P e_i)^2 = sum_k A(i, k) P e_k,   images linearly independent.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "evo/algebra.hpp"
#include "evo/certificate.hpp"
#include "evo/errors.hpp"

namespace evo {

struct SearchBudget {
    std::uint64_t max_nodes = 500'000'000;
};

/// All vectors of F^m in base-p counting order (vector k has digit i = coordinate i).
template <Field F>
std::vector<VectorOf<F>> all_vectors(const F& f, std::size_t m) {
    require_finite(f, "vector enumeration");
    const auto elems = f.elements();
    const std::uint64_t p = elems.size();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < m; ++i) total *= p;
    std::vector<VectorOf<F>> out;
    out.reserve(total);
    for (std::uint64_t n = 0; n < total; ++n) {
        VectorOf<F> v(m);
        std::uint64_t r = n;
        for (std::size_t i = 0; i < m; ++i) {
            v[i] = elems[r % p];
            r /= p;
        }
        out.push_back(std::move(v));
    }
    return out;
}

/// Basis order in which every e_i comes after all e_j occurring in e_i^2 (sinks first),
/// or the natural order when the structure graph has a cycle.
template <Field F>
std::vector<std::size_t> constraint_order(const EvolutionAlgebra<F>& e) {
    const std::size_t m = e.dim();
    const auto& f = e.field();
    std::vector<std::size_t> order;
    std::vector<int> state(m, 0);  // 0 new, 1 on stack, 2 done
    bool cyclic = false;
    std::function<void(std::size_t)> visit = [&](std::size_t i) {
        state[i] = 1;
        for (std::size_t j = 0; j < m; ++j) {
            if (f.is_zero(e.structure()(i, j))) continue;
            if (state[j] == 1) cyclic = true;
            if (state[j] == 0) visit(j);
        }
        state[i] = 2;
        order.push_back(i);
    };
    // Annihilator vectors first: they have the smallest candidate sets.
    for (auto i : annihilator_indices(e))
        if (state[i] == 0) visit(i);
    for (std::size_t i = 0; i < m; ++i)
        if (state[i] == 0) visit(i);
    if (cyclic) {
        order.resize(m);
        for (std::size_t i = 0; i < m; ++i) order[i] = i;
    }
    return order;
}

template <Field F>
class IsoSearch {
public:
    using Element = typename F::Element;

    IsoSearch(const EvolutionAlgebra<F>& from, const EvolutionAlgebra<F>& to, SearchBudget budget = {})
        : from_(from), to_(to), f_(from.field()), budget_(budget), m_(from.dim()) {
        require_finite(f_, "isomorphism search");
        if (!(from.field().descriptor() == to.field().descriptor()))
            throw InvalidArgument("isomorphism search: algebras over different fields");
        if (to.dim() != m_) throw InvalidArgument("isomorphism search: dimension mismatch");

        vectors_ = all_vectors(f_, m_);
        const auto to_ann = annihilator_indices(to_);
        for (std::size_t k = 1; k < vectors_.size(); ++k) {
            const auto& v = vectors_[k];
            squares_.push_back(multiply(to_, v, v));
            all_nonzero_.push_back(k - 1);
            bool in_ann = true;
            for (std::size_t c = 0; c < m_ && in_ann; ++c)
                if (!f_.is_zero(v[c]) && !std::binary_search(to_ann.begin(), to_ann.end(), c)) in_ann = false;
            if (in_ann) ann_candidates_.push_back(k - 1);
        }
        vectors_.erase(vectors_.begin());

        order_ = constraint_order(from_);
        std::vector<std::size_t> level_of(m_);
        for (std::size_t l = 0; l < m_; ++l) level_of[order_[l]] = l;
        square_checks_.assign(m_, {});
        for (std::size_t k = 0; k < m_; ++k) {
            std::size_t last = level_of[k];
            for (std::size_t j = 0; j < m_; ++j)
                if (!f_.is_zero(from_.structure()(k, j))) last = std::max(last, level_of[j]);
            square_checks_[last].push_back(k);
            // e_k^2 only involves earlier images: its image is fixed before e_k is placed.
            known_square_.push_back(last == level_of[k] && !from_.square_is_zero(k) &&
                                    f_.is_zero(from_.structure()(k, k)));
        }
        for (std::size_t k = 0; k < squares_.size(); ++k) by_square_[squares_[k]].push_back(k);
    }

    /// Calls visit(P) for each isomorphism in search order until visit returns false.
    template <class Visit>
    void run(Visit&& visit) {
        image_.assign(m_, static_cast<std::size_t>(-1));
        echelon_.assign(m_, VectorOf<F>(m_, f_.zero()));
        echelon_pivot_.assign(m_, 0);
        nodes_ = 0;
        stopped_ = false;
        descend(0, visit);
    }

    [[nodiscard]] std::uint64_t nodes() const { return nodes_; }

private:
    template <class Visit>
    void descend(std::size_t level, Visit& visit) {
        if (stopped_) return;
        if (level == m_) {
            auto p = zero_matrix(f_, m_, m_);
            for (std::size_t i = 0; i < m_; ++i)
                for (std::size_t r = 0; r < m_; ++r) p(r, i) = vectors_[image_[i]][r];
            if (!visit(p)) stopped_ = true;
            return;
        }
        const std::size_t i = order_[level];
        static const std::vector<std::size_t> none;
        const std::vector<std::size_t>* cands = from_.square_is_zero(i) ? &ann_candidates_ : &all_nonzero_;
        if (known_square_[i]) {
            auto it = by_square_.find(image_of_square(i));
            cands = it == by_square_.end() ? &none : &it->second;
        }
        for (auto k : *cands) {
            if (++nodes_ > budget_.max_nodes) throw BudgetExceeded("isomorphism search exceeded node budget");
            if (!independent(level, vectors_[k])) continue;
            if (!orthogonal_to_assigned(level, k)) continue;
            image_[i] = k;
            if (squares_consistent(level)) {
                push_echelon(level, vectors_[k]);
                descend(level + 1, visit);
            }
            image_[i] = static_cast<std::size_t>(-1);
            if (stopped_) return;
        }
    }

    /// Image of e_i^2 under the images assigned so far.
    VectorOf<F> image_of_square(std::size_t i) const {
        VectorOf<F> rhs(m_, f_.zero());
        for (std::size_t j = 0; j < m_; ++j) {
            const auto& a = from_.structure()(i, j);
            if (f_.is_zero(a)) continue;
            const auto& img = vectors_[image_[j]];
            for (std::size_t r = 0; r < m_; ++r) rhs[r] = f_.add(rhs[r], f_.mul(a, img[r]));
        }
        return rhs;
    }

    bool orthogonal_to_assigned(std::size_t level, std::size_t k) const {
        const auto& v = vectors_[k];
        for (std::size_t l = 0; l < level; ++l) {
            const auto& w = vectors_[image_[order_[l]]];
            bool overlap = false;
            for (std::size_t c = 0; c < m_ && !overlap; ++c) overlap = !f_.is_zero(v[c]) && !f_.is_zero(w[c]);
            if (overlap && !is_zero_vector(f_, std::span<const Element>(multiply(to_, v, w)))) return false;
        }
        return true;
    }

    bool squares_consistent(std::size_t level) const {
        for (auto k : square_checks_[level]) {
            if (squares_[image_[k]] != image_of_square(k)) return false;
        }
        return true;
    }

    VectorOf<F> reduce_against(std::size_t level, VectorOf<F> v) const {
        for (std::size_t l = 0; l < level; ++l) {
            const auto c = v[echelon_pivot_[l]];
            if (f_.is_zero(c)) continue;
            for (std::size_t r = 0; r < m_; ++r) v[r] = f_.sub(v[r], f_.mul(c, echelon_[l][r]));
        }
        return v;
    }

    bool independent(std::size_t level, const VectorOf<F>& v) const {
        return !is_zero_vector(f_, std::span<const Element>(reduce_against(level, v)));
    }

    void push_echelon(std::size_t level, const VectorOf<F>& v) {
        auto r = reduce_against(level, v);
        std::size_t piv = 0;
        while (f_.is_zero(r[piv])) ++piv;
        const auto s = f_.inv(r[piv]);
        for (auto& x : r) x = f_.mul(x, s);
        echelon_[level] = std::move(r);
        echelon_pivot_[level] = piv;
    }

    const EvolutionAlgebra<F>& from_;
    const EvolutionAlgebra<F>& to_;
    F f_;
    SearchBudget budget_;
    std::size_t m_;

    std::vector<VectorOf<F>> vectors_;  // nonzero vectors of F^m
    std::vector<VectorOf<F>> squares_;  // squares_[k] = vectors_[k]^2 in the target
    std::vector<std::size_t> all_nonzero_;
    std::vector<std::size_t> ann_candidates_;
    std::vector<std::size_t> order_;
    std::vector<std::vector<std::size_t>> square_checks_;  // basis squares checkable once a level is set
    std::vector<bool> known_square_;                       // by basis index
    std::map<VectorOf<F>, std::vector<std::size_t>> by_square_;

    std::vector<std::size_t> image_;
    std::vector<VectorOf<F>> echelon_;
    std::vector<std::size_t> echelon_pivot_;
    std::uint64_t nodes_ = 0;
    bool stopped_ = false;
};

struct IsoOptions {
    SearchBudget budget;
    bool use_fingerprint = true;
};

/// A verified isomorphism from `a` to `b`, or empty when none exists.
template <Field F>
std::optional<IsoCertificate<F>> iso_check(const EvolutionAlgebra<F>& a, const EvolutionAlgebra<F>& b,
                                           const IsoOptions& opts = {}) {
    require_finite(a.field(), "iso_check");
    if (!(a.field().descriptor() == b.field().descriptor())) throw InvalidArgument("iso_check: field mismatch");
    if (a.dim() != b.dim()) return std::nullopt;
    if (opts.use_fingerprint && !(fingerprint(a) == fingerprint(b))) return std::nullopt;
    std::optional<IsoCertificate<F>> found;
    IsoSearch<F> search(a, b, opts.budget);
    search.run([&](const MatrixOf<F>& p) {
        found = IsoCertificate<F>{p};
        return false;
    });
    if (found && !verify_certificate(a, b, *found)) throw InternalError("iso_check produced an invalid certificate");
    return found;
}

}  // namespace evo
