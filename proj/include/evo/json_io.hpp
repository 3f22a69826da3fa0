#pragma once

// JSON forms of algebras, cocycles, fingerprints, certificates and classification results.
//
//   algebra:  {"field":"gf:3","dim":3,"matrix":[["0","1","0"],...]}   row i = e_{i+1}^2
//   cocycle:  {"base_dim":m,"cols":[[...],...]}                        column-major
// Field elements are canonical strings; integers are accepted on input.

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

#include "evo/algebra.hpp"
#include "evo/certificate.hpp"
#include "evo/classify.hpp"
#include "evo/cocycle.hpp"

namespace evo {

inline constexpr int kReportSchemaVersion = 1;

using nlohmann::json;

template <Field F>
json element_json(const F& f, const typename F::Element& x) {
    return f.to_string(x);
}

template <Field F>
typename F::Element element_from_json(const F& f, const json& j) {
    if (j.is_string()) return f.parse(j.get<std::string>());
    if (j.is_number_integer()) return f.from_int(j.get<long long>());
    throw InvalidArgument("field element must be a string or an integer, got " + j.dump());
}

template <Field F>
json matrix_json(const F& f, const MatrixOf<F>& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(element_json(f, m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <Field F>
MatrixOf<F> matrix_from_json(const F& f, const json& j, std::size_t rows, std::size_t cols, const std::string& what) {
    if (!j.is_array() || j.size() != rows) throw InvalidArgument(what + ": expected " + std::to_string(rows) + " rows");
    auto m = zero_matrix(f, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw InvalidArgument(what + ": row " + std::to_string(r + 1) + " needs " + std::to_string(cols) + " entries");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = element_from_json(f, j[r][c]);
    }
    return m;
}

template <Field F>
json vector_json(const F& f, const VectorOf<F>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(element_json(f, x));
    return out;
}

template <Field F>
json algebra_json(const EvolutionAlgebra<F>& e) {
    return {{"field", e.field().descriptor().to_string()}, {"dim", e.dim()}, {"matrix", matrix_json(e.field(), e.structure())}};
}

/// Reads the field descriptor of an algebra document without building the algebra.
inline FieldDescriptor algebra_field(const json& j) {
    if (!j.is_object() || !j.contains("field")) throw InvalidArgument("algebra document needs a \"field\"");
    return FieldDescriptor::parse(j.at("field").get<std::string>());
}

template <Field F>
EvolutionAlgebra<F> algebra_from_json(const F& f, const json& j) {
    if (!(algebra_field(j) == f.descriptor())) throw InvalidArgument("algebra is over " + j.at("field").get<std::string>());
    if (!j.contains("dim") || !j.at("dim").is_number_unsigned()) throw InvalidArgument("algebra document needs \"dim\"");
    const auto dim = j.at("dim").get<std::size_t>();
    if (dim == 0) throw InvalidArgument("algebra dimension must be positive");
    if (!j.contains("matrix")) throw InvalidArgument("algebra document needs \"matrix\"");
    return {f, matrix_from_json(f, j.at("matrix"), dim, dim, "matrix")};
}

template <Field F>
json cocycle_json(const F& f, const CocycleMatrix<F>& theta) {
    json cols = json::array();
    for (const auto& c : theta.columns()) cols.push_back(vector_json(f, c));
    return {{"base_dim", theta.base_dim()}, {"cols", cols}};
}

template <Field F>
CocycleMatrix<F> cocycle_from_json(const F& f, const json& j) {
    if (!j.is_object() || !j.contains("base_dim") || !j.contains("cols"))
        throw InvalidArgument("cocycle document needs \"base_dim\" and \"cols\"");
    const auto m = j.at("base_dim").get<std::size_t>();
    std::vector<VectorOf<F>> cols;
    for (const auto& c : j.at("cols")) {
        if (!c.is_array() || c.size() != m) throw InvalidArgument("cocycle column length must equal base_dim");
        VectorOf<F> v;
        for (const auto& x : c) v.push_back(element_from_json(f, x));
        cols.push_back(std::move(v));
    }
    return CocycleMatrix<F>::from_columns(f, m, cols);
}

inline json fingerprint_json(const Fingerprint& fp) {
    json j{{"dim", fp.dim},
           {"annihilator_dim", fp.annihilator_dim},
           {"chain_dims", fp.chain_dims},
           {"upper_annihilator_dims", fp.upper_annihilator_dims},
           {"square_annihilator_meet_dim", fp.square_annihilator_meet_dim}};
    j["nilpotency_index"] = fp.nilpotency_index ? json(*fp.nilpotency_index) : json("inf");
    j["square_zero_count"] = fp.square_zero_count ? json(*fp.square_zero_count) : json(nullptr);
    return j;
}

template <Field F>
json certificate_json(const F& f, const IsoCertificate<F>& c) {
    return {{"map", matrix_json(f, c.map)}, {"convention", "column i is the image of e_i"}};
}

inline json flags_json(const VerificationFlags& v) {
    return {{"all_nilpotent", v.all_nilpotent},
            {"extensions_have_annihilator_v", v.extensions_have_annihilator_v},
            {"extensions_have_no_component", v.extensions_have_no_component},
            {"direct_sums_have_component", v.direct_sums_have_component},
            {"pairwise_non_isomorphic", v.pairwise_non_isomorphic},
            {"pairwise_checked", v.pairwise_checked},
            {"ok", v.ok()}};
}

template <Field F>
json provenance_json(const F& f, const Provenance<F>& p) {
    json j{{"kind", to_string(p.kind)}};
    if (p.kind == ProvenanceKind::base) return j;
    j["base"] = p.base_label;
    if (p.kind == ProvenanceKind::direct_sum) return j;
    j["s"] = p.s;
    if (p.theta) j["theta"] = cocycle_json(f, *p.theta);
    if (p.h_basis) j["h_basis"] = matrix_json(f, *p.h_basis);
    j["orbit_size"] = p.orbit_size;
    if (p.base_basis) j["base_basis"] = matrix_json(f, *p.base_basis);
    return j;
}

template <Field F>
json catalog_json(const ClassCatalog<F>& c) {
    const auto& f = c.field();
    json dims = json::array();
    for (std::size_t n = 1; n <= c.max_dim(); ++n) {
        json classes = json::array();
        for (const auto& e : c.dimension(n))
            classes.push_back({{"label", e.label},
                               {"algebra", algebra_json(e.algebra)},
                               {"provenance", provenance_json(f, e.provenance)},
                               {"fingerprint", fingerprint_json(e.fingerprint)}});
        dims.push_back({{"dim", n}, {"count", c.dimension(n).size()}, {"flags", flags_json(c.flags(n))}, {"classes", classes}});
    }
    return {{"field", f.descriptor().to_string()}, {"sizes", c.sizes()}, {"ok", c.ok()}, {"dimensions", dims}};
}

/// Reads the labelled class representatives of one dimension back from a classify report.
template <Field F>
std::vector<std::pair<std::string, EvolutionAlgebra<F>>> classes_from_report(const F& f, const json& report, std::size_t n) {
    if (!report.contains("schema_version") || report.at("schema_version") != kReportSchemaVersion)
        throw InvalidArgument("report schema version " +
                              (report.contains("schema_version") ? report.at("schema_version").dump() : std::string("(none)")) +
                              " does not match " + std::to_string(kReportSchemaVersion));
    if (report.value("kind", "") != "classify") throw InvalidArgument("not a classify report");
    const auto& res = report.at("result");
    if (res.at("field").get<std::string>() != f.descriptor().to_string())
        throw InvalidArgument("report is over " + res.at("field").get<std::string>());
    for (const auto& d : res.at("dimensions"))
        if (d.at("dim").get<std::size_t>() == n) {
            std::vector<std::pair<std::string, EvolutionAlgebra<F>>> out;
            for (const auto& c : d.at("classes"))
                out.emplace_back(c.at("label").get<std::string>(), algebra_from_json(f, c.at("algebra")));
            return out;
        }
    throw InvalidArgument("report has no dimension " + std::to_string(n));
}

/// Copy of a report without fields that legitimately differ between identical runs.
inline json comparable(json report) {
    report.erase("timestamp");
    if (report.contains("config")) report["config"].erase("threads");
    return report;
}

inline json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& ex) {
        throw InvalidArgument(path.string() + ": " + ex.what());
    }
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace evo
