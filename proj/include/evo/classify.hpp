#pragma once

// Dimension-by-dimension classification of nilpotent evolution algebras over a finite field.
//
// Dimension n is assembled from two layers:
//   * algebras with an annihilator component, E' + F z for every class E' of dimension n - 1;
//   * annihilator extensions E_theta with ann(E_theta) = V, one per Aut(E)-orbit of admissible
//     s-dimensional subspaces of H, for every class E of dimension m < n and s = n - m;
//   * the same construction applied to every other natural-basis presentation of each base E,
//     keeping only results not isomorphic to an extension already found for that base.

#include <algorithm>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "evo/algebra.hpp"
#include "evo/autos.hpp"
#include "evo/cocycle.hpp"
#include "evo/iso.hpp"
#include "evo/natural_basis.hpp"
#include "evo/parallel.hpp"

namespace evo {

enum class ProvenanceKind { base, direct_sum, extension };

inline std::string to_string(ProvenanceKind k) {
    switch (k) {
        case ProvenanceKind::base: return "base";
        case ProvenanceKind::direct_sum: return "direct_sum";
        case ProvenanceKind::extension: return "extension";
    }
    return "?";
}

template <Field F>
struct Provenance {
    using Kind = ProvenanceKind;

    Kind kind = Kind::base;
    std::size_t base_dim = 0;
    std::size_t base_index = 0;  // position in the base dimension's list
    std::string base_label;
    std::size_t s = 0;  // dim V for extensions
    std::optional<CocycleMatrix<F>> theta;
    std::optional<MatrixOf<F>> h_basis;  // orbit representative over H coordinates
    std::size_t orbit_size = 0;
    // Natural basis of the base algebra theta is diagonal in (columns in the base's coordinates);
    // empty when it is the base's own basis.
    std::optional<MatrixOf<F>> base_basis;
};

template <Field F>
struct ClassEntry {
    std::string label;
    EvolutionAlgebra<F> algebra;
    Provenance<F> provenance;
    Fingerprint fingerprint;
};

inline std::string class_label(std::size_t dim, std::size_t index) {
    return "E_{" + std::to_string(dim) + "," + std::to_string(index + 1) + "}";
}

/// Results of the self-checks run while a dimension is assembled.
struct VerificationFlags {
    bool all_nilpotent = true;
    bool extensions_have_annihilator_v = true;
    bool extensions_have_no_component = true;
    bool direct_sums_have_component = true;
    bool pairwise_non_isomorphic = true;
    bool pairwise_checked = false;

    [[nodiscard]] bool ok() const {
        return all_nilpotent && extensions_have_annihilator_v && extensions_have_no_component &&
               direct_sums_have_component && pairwise_non_isomorphic;
    }
};

struct ClassifyOptions {
    unsigned threads = 1;
    SearchBudget budget;
    bool verify_pairwise = true;
    bool all_natural_bases = true;  // also extend alternative presentations of each base
};

template <Field F>
class ClassCatalog {
public:
    explicit ClassCatalog(F field) : field_(std::move(field)) {}

    [[nodiscard]] const F& field() const { return field_; }
    [[nodiscard]] std::size_t max_dim() const { return dims_.size(); }
    /// Entries of dimension n (1-based).
    [[nodiscard]] const std::vector<ClassEntry<F>>& dimension(std::size_t n) const {
        if (n == 0 || n > dims_.size()) throw InvalidArgument("catalog has no dimension " + std::to_string(n));
        return dims_[n - 1];
    }
    [[nodiscard]] const VerificationFlags& flags(std::size_t n) const { return flags_.at(n - 1); }
    [[nodiscard]] std::vector<std::size_t> sizes() const {
        std::vector<std::size_t> out;
        for (const auto& d : dims_) out.push_back(d.size());
        return out;
    }
    [[nodiscard]] bool ok() const {
        return std::all_of(flags_.begin(), flags_.end(), [](const VerificationFlags& v) { return v.ok(); });
    }

    void push(std::vector<ClassEntry<F>> entries, VerificationFlags flags) {
        dims_.push_back(std::move(entries));
        flags_.push_back(flags);
    }

private:
    F field_;
    std::vector<std::vector<ClassEntry<F>>> dims_;
    std::vector<VerificationFlags> flags_;
};

namespace detail {

template <Field F>
bool annihilator_is_v(const EvolutionAlgebra<F>& e, std::size_t base_dim) {
    const auto idx = annihilator_indices(e);
    if (idx.size() != e.dim() - base_dim) return false;
    for (std::size_t k = 0; k < idx.size(); ++k)
        if (idx[k] != base_dim + k) return false;
    return true;
}

}  // namespace detail

/// Classes of dimension n, given a catalog complete through dimension n - 1.
template <Field F>
std::pair<std::vector<ClassEntry<F>>, VerificationFlags> classify_dimension(const ClassCatalog<F>& lower, std::size_t n,
                                                                            const ClassifyOptions& opts = {}) {
    const auto& f = lower.field();
    require_finite(f, "classify_dimension");
    if (n < 2) throw InvalidArgument("classify_dimension needs n >= 2; dimension 1 is the base case");
    if (lower.max_dim() < n - 1) throw InvalidArgument("catalog is missing dimension " + std::to_string(lower.max_dim() + 1));

    std::vector<ClassEntry<F>> out;
    VerificationFlags flags;
    IsoOptions iso{opts.budget, true};
    const auto e11 = EvolutionAlgebra<F>::zero(f, 1);

    // Layer 1: E' + Fz. Deduplicated explicitly rather than assuming cancellation.
    const auto& prev = lower.dimension(n - 1);
    for (std::size_t k = 0; k < prev.size(); ++k) {
        auto sum = direct_sum(prev[k].algebra, e11);
        bool duplicate = false;
        for (const auto& seen : out)
            if (iso_check(sum, seen.algebra, iso)) {
                duplicate = true;
                break;
            }
        if (duplicate) continue;
        Provenance<F> prov;
        prov.kind = Provenance<F>::Kind::direct_sum;
        prov.base_dim = n - 1;
        prov.base_index = k;
        prov.base_label = prev[k].label;
        out.push_back({"", std::move(sum), std::move(prov), {}});
    }

    // Layers 2 and 3: extensions, larger bases first so the list reads like the hand classification.
    struct Job {
        std::size_t slot, base_dim, base_index, presentation;
    };
    std::vector<std::pair<std::size_t, std::size_t>> bases;
    for (std::size_t m = n - 1; m >= 1; --m)
        for (std::size_t k = 0; k < lower.dimension(m).size(); ++k) bases.emplace_back(m, k);
    std::vector<std::vector<Presentation<F>>> presentations(bases.size());
    parallel_for(bases.size(), opts.threads, [&](std::size_t b) {
        const auto& base = lower.dimension(bases[b].first)[bases[b].second].algebra;
        if (opts.all_natural_bases && compute_spaces(base).dim_h() >= n - bases[b].first)
            presentations[b] = natural_presentations(base, opts.budget);
        else
            presentations[b] = {{identity_matrix(f, base.dim()), base}};
    });
    std::vector<Job> jobs;
    for (std::size_t b = 0; b < bases.size(); ++b)
        for (std::size_t q = 0; q < presentations[b].size(); ++q)
            jobs.push_back({b, bases[b].first, bases[b].second, q});
    std::vector<std::vector<SubspaceClass<F>>> orbits(jobs.size());
    parallel_for(jobs.size(), opts.threads, [&](std::size_t t) {
        const auto& pres = presentations[jobs[t].slot][jobs[t].presentation].algebra;
        const auto spaces = compute_spaces(pres);
        const std::size_t s = n - jobs[t].base_dim;
        if (spaces.dim_h() < s) return;
        orbits[t] = orbit_partition(pres, spaces, enumerate_aut(pres, opts.budget), s);
    });

    auto make_entry = [&](const Job& job, const SubspaceClass<F>& orbit) {
        const auto& pres = presentations[job.slot][job.presentation];
        const auto& base = lower.dimension(job.base_dim)[job.base_index];
        Provenance<F> prov;
        prov.kind = Provenance<F>::Kind::extension;
        prov.base_dim = job.base_dim;
        prov.base_index = job.base_index;
        prov.base_label = base.label;
        prov.s = n - job.base_dim;
        prov.theta = orbit.cocycle;
        prov.h_basis = orbit.basis;
        prov.orbit_size = orbit.orbit_size;
        if (job.presentation != 0) prov.base_basis = pres.basis;
        auto algebra = extend(pres.algebra, orbit.cocycle);
        auto fp = fingerprint(algebra);
        return ClassEntry<F>{"", std::move(algebra), std::move(prov), std::move(fp)};
    };
    for (std::size_t t = 0; t < jobs.size(); ++t)
        if (jobs[t].presentation == 0)
            for (const auto& orbit : orbits[t]) out.push_back(make_entry(jobs[t], orbit));

    // Alternative presentations: different bases never produce isomorphic extensions (the quotient
    // by the annihilator recovers the base), so each candidate is compared within its base only.
    const IsoOptions unfiltered{opts.budget, false};
    for (std::size_t t = 0; t < jobs.size(); ++t) {
        if (jobs[t].presentation == 0) continue;
        for (const auto& orbit : orbits[t]) {
            auto candidate = make_entry(jobs[t], orbit);
            bool duplicate = false;
            for (std::size_t k = 0; k < out.size() && !duplicate; ++k) {
                const auto& pv = out[k].provenance;
                if (pv.kind != Provenance<F>::Kind::extension) continue;
                if (pv.base_dim != jobs[t].base_dim || pv.base_index != jobs[t].base_index) continue;
                if (!(candidate.fingerprint == out[k].fingerprint)) continue;
                duplicate = iso_check(candidate.algebra, out[k].algebra, unfiltered).has_value();
            }
            if (!duplicate) out.push_back(std::move(candidate));
        }
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        auto& entry = out[k];
        entry.label = class_label(n, k);
        if (entry.provenance.kind == Provenance<F>::Kind::direct_sum) entry.fingerprint = fingerprint(entry.algebra);
        if (!entry.fingerprint.nilpotency_index) flags.all_nilpotent = false;
        const bool splits = splits_off_zero_ideal(entry.algebra);
        if (entry.provenance.kind == Provenance<F>::Kind::direct_sum) {
            if (!splits) flags.direct_sums_have_component = false;
        } else {
            if (!detail::annihilator_is_v(entry.algebra, entry.provenance.base_dim))
                flags.extensions_have_annihilator_v = false;
            if (splits) flags.extensions_have_no_component = false;
        }
    }

    if (opts.verify_pairwise) {
        flags.pairwise_checked = true;
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t a = 0; a < out.size(); ++a)
            for (std::size_t b = a + 1; b < out.size(); ++b)
                if (out[a].fingerprint == out[b].fingerprint) pairs.emplace_back(a, b);
        std::vector<char> iso_found(pairs.size(), 0);
        parallel_for(pairs.size(), opts.threads, [&](std::size_t t) {
            iso_found[t] = iso_check(out[pairs[t].first].algebra, out[pairs[t].second].algebra, iso).has_value();
        });
        flags.pairwise_non_isomorphic = std::none_of(iso_found.begin(), iso_found.end(), [](char c) { return c != 0; });
    }
    return {std::move(out), flags};
}

/// Catalog of dimensions 1..max_dim; dimension 1 is the zero algebra E_{1,1}.
template <Field F>
ClassCatalog<F> full_catalog(const F& f, std::size_t max_dim, const ClassifyOptions& opts = {}) {
    require_finite(f, "full_catalog");
    if (max_dim == 0) throw InvalidArgument("max_dim must be at least 1");
    ClassCatalog<F> catalog(f);
    auto e11 = EvolutionAlgebra<F>::zero(f, 1);
    auto fp = fingerprint(e11);
    catalog.push({{class_label(1, 0), std::move(e11), Provenance<F>{}, std::move(fp)}}, VerificationFlags{});
    for (std::size_t n = 2; n <= max_dim; ++n) {
        auto [entries, flags] = classify_dimension(catalog, n, opts);
        catalog.push(std::move(entries), flags);
    }
    return catalog;
}

}  // namespace evo
