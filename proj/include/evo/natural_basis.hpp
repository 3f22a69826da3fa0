#pragma once

// Natural bases of an evolution algebra other than the given one.
//
// A degenerate evolution algebra can have natural bases that are not images of the given basis under
// an automorphism, so the structure matrices ("presentations") it admits are not all permutations
// and rescalings of one another. Extensions that are diagonal in such a basis are invisible to the
// orbit method applied to a single presentation.

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

#include "evo/algebra.hpp"
#include "evo/iso.hpp"

namespace evo {

template <Field F>
struct Presentation {
    MatrixOf<F> basis;  // column i = natural basis vector b_i in the original coordinates
    EvolutionAlgebra<F> algebra;  // structure matrix relative to b
};

/// Every structure matrix E takes in some natural basis, each with one basis realizing it.
/// The given presentation comes first, the rest in lexicographic order of their matrices.
template <Field F>
std::vector<Presentation<F>> natural_presentations(const EvolutionAlgebra<F>& e, SearchBudget budget = {}) {
    const auto& f = e.field();
    require_finite(f, "natural_presentations");
    const std::size_t m = e.dim();
    std::vector<Presentation<F>> out;
    out.push_back({identity_matrix(f, m), e});
    // Every basis of the zero algebra is natural and presents it the same way.
    if (m == 0 || is_zero_vector(f, std::span<const typename F::Element>(e.structure().data()))) return out;

    auto vectors = all_vectors(f, m);
    vectors.erase(vectors.begin());
    std::set<MatrixOf<F>> seen{e.structure()};
    std::vector<std::size_t> chosen;
    std::uint64_t nodes = 0;

    auto record = [&] {
        auto n = zero_matrix(f, m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t r = 0; r < m; ++r) n(r, i) = vectors[chosen[i]][r];
        auto inv = inverse(f, n);
        auto a = zero_matrix(f, m, m);
        for (std::size_t i = 0; i < m; ++i) {
            const auto& x = vectors[chosen[i]];
            const auto coords = apply(f, *inv, std::span<const typename F::Element>(multiply(e, x, x)));
            for (std::size_t j = 0; j < m; ++j) a(i, j) = coords[j];
        }
        if (seen.insert(a).second) out.push_back({std::move(n), EvolutionAlgebra<F>(f, std::move(a))});
    };

    // Columns are chosen in increasing vector index with pairwise zero products; permuting a
    // natural basis gives another one, so every ordering is visited.
    std::function<void()> descend = [&] {
        if (chosen.size() == m) {
            record();
            return;
        }
        for (std::size_t k = 0; k < vectors.size(); ++k) {
            if (++nodes > budget.max_nodes) throw BudgetExceeded("natural basis enumeration exceeded node budget");
            if (std::find(chosen.begin(), chosen.end(), k) != chosen.end()) continue;
            bool ok = true;
            for (auto c : chosen)
                if (!is_zero_vector(f, std::span<const typename F::Element>(multiply(e, vectors[k], vectors[c])))) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            std::vector<VectorOf<F>> gens;
            for (auto c : chosen) gens.push_back(vectors[c]);
            gens.push_back(vectors[k]);
            if (Subspace<F>(f, m, gens).dim() != gens.size()) continue;
            chosen.push_back(k);
            descend();
            chosen.pop_back();
        }
    };
    descend();
    std::sort(out.begin() + 1, out.end(),
              [](const Presentation<F>& a, const Presentation<F>& b) { return a.algebra.structure() < b.algebra.structure(); });
    return out;
}

}  // namespace evo
