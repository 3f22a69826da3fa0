#pragma once

// The published classification lists as data: loading, instantiation over a concrete field, and
// matching against a computed classification.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "evo/algebra.hpp"
#include "evo/cocycle.hpp"
#include "evo/iso.hpp"

#ifndef EVO_CATALOG_DIR
#define EVO_CATALOG_DIR "data/catalog"
#endif

namespace evo {

inline constexpr int kCatalogSchemaVersion = 1;

inline const std::vector<std::string>& catalog_sources() {
    static const std::vector<std::string> sources{"table-1", "table-2", "table-3", "theorem-dim4-closed",
                                                  "theorem-dim4-real"};
    return sources;
}

inline std::string catalog_file_name(const std::string& source) {
    static const std::map<std::string, std::string> files{{"table-1", "table1.json"},
                                                          {"table-2", "table2.json"},
                                                          {"table-3", "table3.json"},
                                                          {"theorem-dim4-closed", "dim4-closed.json"},
                                                          {"theorem-dim4-real", "dim4-real.json"}};
    auto it = files.find(source);
    if (it == files.end()) throw InvalidArgument("unknown catalog source '" + source + "'");
    return it->second;
}

inline std::filesystem::path default_catalog_dir() { return EVO_CATALOG_DIR; }

/// A structure constant: an integer, or the square-class parameter alpha.
struct Coefficient {
    std::variant<long long, std::monostate> value;

    [[nodiscard]] bool is_alpha() const { return std::holds_alternative<std::monostate>(value); }
    [[nodiscard]] long long constant() const { return std::get<long long>(value); }

    template <Field F>
    typename F::Element at(const F& f, const std::optional<typename F::Element>& alpha) const {
        if (!is_alpha()) return f.from_int(constant());
        if (!alpha) throw InvalidArgument("alpha-parametrized entry instantiated without alpha");
        return *alpha;
    }
};

struct CatalogEntry {
    std::string label;
    std::string source;
    std::size_t dim = 0;
    std::vector<std::vector<Coefficient>> rows;  // rows[i] = coordinates of e_{i+1}^2

    // Documentation columns of the tables; empty when the source has none.
    std::optional<std::vector<std::size_t>> ann;  // 0-based
    std::optional<std::vector<std::vector<Coefficient>>> coboundaries;
    std::optional<std::size_t> dim_h;
    std::optional<std::vector<std::vector<Coefficient>>> h_reps;
    std::string aut_doc;
    std::string aut_form;

    [[nodiscard]] bool has_alpha() const {
        for (const auto& r : rows)
            for (const auto& c : r)
                if (c.is_alpha()) return true;
        return false;
    }
};

namespace detail {

inline Coefficient parse_coefficient(const nlohmann::json& j, const std::string& where) {
    if (j.is_number_integer()) return {j.get<long long>()};
    if (j.is_string() && j.get<std::string>() == "ALPHA") return {std::monostate{}};
    throw InvalidArgument(where + ": coefficient must be an integer or \"ALPHA\"");
}

inline std::vector<Coefficient> parse_vector(const nlohmann::json& j, std::size_t dim, const std::string& where) {
    if (!j.is_array() || j.size() != dim) throw InvalidArgument(where + ": expected " + std::to_string(dim) + " coordinates");
    std::vector<Coefficient> out;
    for (const auto& c : j) out.push_back(parse_coefficient(c, where));
    return out;
}

// Acyclicity of the support graph, reading every nonzero constant (and alpha) as an arc. Over a
// concrete field arcs can only disappear, so this certifies nilpotency of every instantiation.
inline bool symbolically_nilpotent(const CatalogEntry& e) {
    const std::size_t m = e.dim;
    std::vector<std::size_t> indegree(m, 0);
    auto arc = [&](std::size_t i, std::size_t j) { return e.rows[i][j].is_alpha() || e.rows[i][j].constant() != 0; };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (arc(i, j)) ++indegree[j];
    std::vector<std::size_t> ready;
    for (std::size_t j = 0; j < m; ++j)
        if (indegree[j] == 0) ready.push_back(j);
    std::size_t seen = 0;
    while (!ready.empty()) {
        auto i = ready.back();
        ready.pop_back();
        ++seen;
        for (std::size_t j = 0; j < m; ++j)
            if (arc(i, j) && --indegree[j] == 0) ready.push_back(j);
    }
    return seen == m;
}

}  // namespace detail

/// Parses and validates one catalog document.
inline std::vector<CatalogEntry> parse_catalog(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("schema_version") || !doc.contains("source") || !doc.contains("entries"))
        throw InvalidArgument("catalog document needs schema_version, source and entries");
    if (doc.at("schema_version").get<int>() != kCatalogSchemaVersion)
        throw InvalidArgument("catalog schema version " + doc.at("schema_version").dump() + " is not supported");
    const auto source = doc.at("source").get<std::string>();
    catalog_file_name(source);

    std::vector<CatalogEntry> out;
    std::set<std::string> labels;
    for (const auto& j : doc.at("entries")) {
        CatalogEntry e;
        e.label = j.at("label").get<std::string>();
        e.source = j.contains("source") ? j.at("source").get<std::string>() : source;
        if (e.source != source) throw InvalidArgument(e.label + ": entry source differs from the document source");
        if (!labels.insert(e.label).second) throw InvalidArgument("duplicate label " + e.label + " in " + source);
        e.dim = j.at("dim").get<std::size_t>();
        if (e.dim == 0) throw InvalidArgument(e.label + ": dimension must be positive");
        const std::string where = source + " " + e.label;
        e.rows.assign(e.dim, std::vector<Coefficient>(e.dim, Coefficient{0LL}));
        std::set<std::size_t> seen_rows;
        for (const auto& p : j.at("products")) {
            const auto i = p.at("i").get<std::size_t>();
            const auto jj = p.at("j").get<std::size_t>();
            if (i == 0 || i > e.dim) throw InvalidArgument(where + ": product index out of range");
            if (jj != i) throw InvalidArgument(where + ": only squares e_i e_i may be listed");
            if (!seen_rows.insert(i).second) throw InvalidArgument(where + ": e_" + std::to_string(i) + "^2 listed twice");
            e.rows[i - 1] = detail::parse_vector(p.at("coords"), e.dim, where);
        }
        if (j.contains("ann")) {
            std::vector<std::size_t> ann;
            for (const auto& k : j.at("ann")) {
                const auto v = k.get<std::size_t>();
                if (v == 0 || v > e.dim) throw InvalidArgument(where + ": annihilator index out of range");
                ann.push_back(v - 1);
            }
            e.ann = std::move(ann);
        }
        auto vector_list = [&](const char* key) {
            std::vector<std::vector<Coefficient>> out;
            for (const auto& v : j.at(key)) out.push_back(detail::parse_vector(v, e.dim, where));
            return out;
        };
        if (j.contains("coboundaries")) e.coboundaries = vector_list("coboundaries");
        if (j.contains("h_reps")) e.h_reps = vector_list("h_reps");
        if (j.contains("dim_h")) e.dim_h = j.at("dim_h").get<std::size_t>();
        if (j.contains("aut")) e.aut_doc = j.at("aut").get<std::string>();
        if (j.contains("aut_form")) e.aut_form = j.at("aut_form").get<std::string>();
        if (!detail::symbolically_nilpotent(e)) throw InvalidArgument(where + ": multiplication table is not nilpotent");
        out.push_back(std::move(e));
    }
    return out;
}

inline std::vector<CatalogEntry> load_catalog(const std::string& source,
                                              const std::filesystem::path& dir = default_catalog_dir()) {
    const auto path = dir / catalog_file_name(source);
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open catalog file " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidArgument(path.string() + ": " + ex.what());
    }
    auto entries = parse_catalog(doc);
    if (!entries.empty() && entries.front().source != source)
        throw InvalidArgument(path.string() + " holds source " + entries.front().source + ", expected " + source);
    return entries;
}

template <Field F>
struct InstantiatedEntry {
    std::string label;  // alpha-expanded entries get a "^<alpha>" suffix
    const CatalogEntry* entry = nullptr;
    std::optional<typename F::Element> alpha;
    EvolutionAlgebra<F> algebra;
};

template <Field F>
EvolutionAlgebra<F> instantiate_entry(const F& f, const CatalogEntry& e, const std::optional<typename F::Element>& alpha) {
    auto a = zero_matrix(f, e.dim, e.dim);
    for (std::size_t i = 0; i < e.dim; ++i)
        for (std::size_t j = 0; j < e.dim; ++j) a(i, j) = e.rows[i][j].at(f, alpha);
    return {f, std::move(a)};
}

/// Concrete algebras in catalog order; alpha entries expand over the square classes of the field.
template <Field F>
std::vector<InstantiatedEntry<F>> instantiate(const std::vector<CatalogEntry>& entries, const F& f) {
    std::vector<InstantiatedEntry<F>> out;
    for (const auto& e : entries) {
        if (!e.has_alpha()) {
            out.push_back({e.label, &e, std::nullopt, instantiate_entry(f, e, std::nullopt)});
            continue;
        }
        if (!f.is_finite())
            throw UnsupportedField(e.label + " ranges over F*/F*^2, which is infinite for " + f.descriptor().to_string());
        for (const auto& alpha : square_classes(f))
            out.push_back({e.label + "^" + f.to_string(alpha), &e, alpha, instantiate_entry(f, e, std::optional(alpha))});
    }
    return out;
}

template <Field F>
std::vector<typename F::Element> coefficient_vector(const F& f, const std::vector<Coefficient>& v,
                                                    const std::optional<typename F::Element>& alpha) {
    std::vector<typename F::Element> out;
    for (const auto& c : v) out.push_back(c.at(f, alpha));
    return out;
}

/// Disagreements between an instantiated entry and the table columns recorded for it.
template <Field F>
std::vector<std::string> check_metadata(const InstantiatedEntry<F>& inst) {
    std::vector<std::string> problems;
    const auto& e = *inst.entry;
    const auto& f = inst.algebra.field();
    if (!nilpotent(inst.algebra)) problems.push_back(inst.label + ": not nilpotent");
    if (e.ann && annihilator_indices(inst.algebra) != *e.ann) problems.push_back(inst.label + ": annihilator differs");
    const auto spaces = compute_spaces(inst.algebra);
    if (e.coboundaries) {
        std::vector<VectorOf<F>> gens;
        for (const auto& v : *e.coboundaries) gens.push_back(coefficient_vector(f, v, inst.alpha));
        if (!(Subspace<F>(f, e.dim, gens) == spaces.coboundaries())) problems.push_back(inst.label + ": B differs");
    }
    if (e.dim_h && spaces.dim_h() != *e.dim_h) problems.push_back(inst.label + ": dim H differs");
    if (e.h_reps) {
        std::vector<VectorOf<F>> reduced;
        for (const auto& v : *e.h_reps) reduced.push_back(spaces.reduce(coefficient_vector(f, v, inst.alpha)));
        if (e.h_reps->size() != spaces.dim_h() || Subspace<F>(f, e.dim, reduced).dim() != spaces.dim_h())
            problems.push_back(inst.label + ": listed H representatives do not form a basis of H");
    }
    return problems;
}

/// Membership in the parametric automorphism form printed for an entry (dims <= 3).
template <Field F>
bool aut_form_holds(const CatalogEntry& e, const F& f, const std::optional<typename F::Element>& alpha,
                    const MatrixOf<F>& phi) {
    if (phi.rows() != e.dim || phi.cols() != e.dim || !is_invertible(f, phi)) return false;
    auto z = [&](std::size_t r, std::size_t c) { return f.is_zero(phi(r, c)); };
    auto sq = [&](const typename F::Element& x) { return f.mul(x, x); };
    if (e.aut_form == "general_linear") return true;
    if (e.aut_form == "E_{2,2}") return z(0, 1) && phi(1, 1) == sq(phi(0, 0));
    if (e.aut_form == "E_{3,2}") return z(0, 1) && z(0, 2) && z(2, 1) && phi(1, 1) == sq(phi(0, 0));
    if (e.aut_form == "E_{3,3}") {
        if (!alpha) throw InvalidArgument("E_{3,3} form needs alpha");
        const auto& a = *alpha;
        return z(0, 2) && z(1, 2) && f.add(sq(phi(0, 0)), f.mul(a, sq(phi(1, 0)))) == phi(2, 2) &&
               f.add(sq(phi(0, 1)), f.mul(a, sq(phi(1, 1)))) == f.mul(a, phi(2, 2)) &&
               f.is_zero(f.add(f.mul(phi(0, 0), phi(0, 1)), f.mul(a, f.mul(phi(1, 0), phi(1, 1)))));
    }
    if (e.aut_form == "E_{3,4}")
        return z(0, 1) && z(0, 2) && z(1, 0) && z(1, 2) && z(2, 1) && phi(1, 1) == sq(phi(0, 0)) &&
               phi(2, 2) == sq(sq(phi(0, 0)));
    throw InvalidArgument(e.label + ": no executable automorphism form '" + e.aut_form + "'");
}

struct MatchReport {
    std::vector<std::string> instantiated_labels;
    std::vector<std::string> computed_labels;
    std::vector<std::vector<std::size_t>> hits;  // hits[k]: computed classes isomorphic to instantiated k
    bool bijection = false;
    std::vector<std::size_t> misses;                        // instantiated with no computed class
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> collisions;  // computed class -> instantiated
    std::vector<std::size_t> uncovered;                     // computed classes nobody maps to
};

/// Finds, for every instantiated algebra, the computed classes it is isomorphic to.
template <Field F>
MatchReport match(const std::vector<std::pair<std::string, EvolutionAlgebra<F>>>& computed,
                  const std::vector<InstantiatedEntry<F>>& instantiated, const IsoOptions& iso = {}) {
    MatchReport r;
    for (const auto& [label, alg] : computed) r.computed_labels.push_back(label);
    std::vector<std::vector<std::size_t>> preimages(computed.size());
    for (std::size_t k = 0; k < instantiated.size(); ++k) {
        const auto& inst = instantiated[k];
        r.instantiated_labels.push_back(inst.label);
        std::vector<std::size_t> hits;
        for (std::size_t c = 0; c < computed.size(); ++c) {
            if (!(computed[c].second.field().descriptor() == inst.algebra.field().descriptor()) ||
                computed[c].second.dim() != inst.algebra.dim())
                throw InvalidArgument("match: field or dimension mismatch");
            if (iso_check(inst.algebra, computed[c].second, iso)) {
                hits.push_back(c);
                preimages[c].push_back(k);
            }
        }
        if (hits.empty()) r.misses.push_back(k);
        r.hits.push_back(std::move(hits));
    }
    for (std::size_t c = 0; c < computed.size(); ++c) {
        if (preimages[c].empty()) r.uncovered.push_back(c);
        if (preimages[c].size() > 1) r.collisions.emplace_back(c, preimages[c]);
    }
    r.bijection = r.misses.empty() && r.collisions.empty() && r.uncovered.empty() &&
                  std::all_of(r.hits.begin(), r.hits.end(), [](const auto& h) { return h.size() == 1; });
    return r;
}

}  // namespace evo
