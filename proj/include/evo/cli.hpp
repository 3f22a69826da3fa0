#pragma once

// Command-line driver. `run` is the whole program minus main(), so tests can drive it directly.
//
// Exit codes: 0 success, 1 non-isomorphic (iso), 2 verification failure, 3 budget exceeded,
// 64 usage error or unsupported field, 70 internal error.

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "evo/catalog.hpp"
#include "evo/classify.hpp"
#include "evo/json_io.hpp"
#include "evo/oracle.hpp"

namespace evo::cli {

enum ExitCode : int {
    kOk = 0,
    kNonIsomorphic = 1,
    kVerificationFailed = 2,
    kBudgetExceeded = 3,
    kUsage = 64,
    kInternal = 70,
};

/// Thrown by parse_args for --help; carries the formatted text for the selected command.
struct HelpRequested {
    std::string text;
};

struct RunConfig {
    std::string command;
    std::string field = "gf:2";
    std::size_t dim = 3;      // oracle
    std::size_t max_dim = 3;  // classify
    std::string out;
    unsigned threads = 1;
    bool big = false;
    bool resume = false;
    std::string checkpoint;
    std::uint64_t max_nodes = SearchBudget{}.max_nodes;
    std::uint64_t max_candidates = OracleOptions{}.default_cap;
    double time_limit = 0;  // seconds, 0 = none
    std::optional<std::uint64_t> seed;
    bool all_natural_bases = true;
    std::string suite;
    std::string against;
    std::string data_dir;
    std::vector<std::string> inputs;

    [[nodiscard]] nlohmann::json to_json() const {
        nlohmann::json j{{"command", command},     {"field", field},
                         {"dim", dim},             {"max_dim", max_dim},
                         {"out", out},             {"threads", threads},
                         {"big", big},             {"resume", resume},
                         {"checkpoint", checkpoint}, {"max_nodes", max_nodes},
                         {"max_candidates", max_candidates}, {"time_limit", time_limit},
                         {"all_natural_bases", all_natural_bases}, {"suite", suite},
                         {"against", against},     {"data_dir", data_dir},
                         {"inputs", inputs}};
        j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
        return j;
    }

    static RunConfig from_json(const nlohmann::json& j) {
        RunConfig c;
        c.command = j.at("command").get<std::string>();
        c.field = j.at("field").get<std::string>();
        FieldDescriptor::parse(c.field);
        c.dim = j.at("dim").get<std::size_t>();
        c.max_dim = j.at("max_dim").get<std::size_t>();
        c.out = j.at("out").get<std::string>();
        c.threads = j.at("threads").get<unsigned>();
        c.big = j.at("big").get<bool>();
        c.resume = j.at("resume").get<bool>();
        c.checkpoint = j.at("checkpoint").get<std::string>();
        c.max_nodes = j.at("max_nodes").get<std::uint64_t>();
        c.max_candidates = j.at("max_candidates").get<std::uint64_t>();
        c.time_limit = j.at("time_limit").get<double>();
        if (!j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
        c.all_natural_bases = j.at("all_natural_bases").get<bool>();
        c.suite = j.at("suite").get<std::string>();
        c.against = j.at("against").get<std::string>();
        c.data_dir = j.at("data_dir").get<std::string>();
        c.inputs = j.at("inputs").get<std::vector<std::string>>();
        return c;
    }

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

class UsageError : public Error {
public:
    using Error::Error;
};

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

inline nlohmann::json report(const RunConfig& cfg, nlohmann::json result) {
    return {{"schema_version", kReportSchemaVersion},
            {"kind", cfg.command},
            {"config", cfg.to_json()},
            {"timestamp", utc_timestamp()},
            {"result", std::move(result)}};
}

inline void emit_report(const RunConfig& cfg, const nlohmann::json& rep, std::ostream& out) {
    if (cfg.out.empty()) return;
    write_json_file(cfg.out, rep);
    out << "report written to " << cfg.out << '\n';
}

/// "e1^2 = e2 + 2e3, e2^2 = e3" style multiplication table.
template <Field F>
std::string table_string(const EvolutionAlgebra<F>& e) {
    const auto& f = e.field();
    std::string s;
    for (std::size_t i = 0; i < e.dim(); ++i) {
        if (e.square_is_zero(i)) continue;
        std::string terms;
        for (std::size_t j = 0; j < e.dim(); ++j) {
            const auto& c = e.structure()(i, j);
            if (f.is_zero(c)) continue;
            if (!terms.empty()) terms += " + ";
            if (!(c == f.one())) terms += f.to_string(c);
            terms += "e" + std::to_string(j + 1);
        }
        if (!s.empty()) s += ", ";
        s += "e" + std::to_string(i + 1) + "^2 = " + terms;
    }
    return s.empty() ? "(all products zero)" : s;
}

inline std::string index_list(const std::vector<std::size_t>& idx) {
    std::string s = "<";
    for (std::size_t k = 0; k < idx.size(); ++k) s += (k ? ", e" : "e") + std::to_string(idx[k] + 1);
    return s + ">";
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string s = "[";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + std::to_string(v[k]);
    return s + "]";
}

inline SearchBudget budget(const RunConfig& cfg) { return {cfg.max_nodes}; }

inline ClassifyOptions classify_options(const RunConfig& cfg) {
    ClassifyOptions o;
    o.threads = cfg.threads;
    o.budget = budget(cfg);
    o.all_natural_bases = cfg.all_natural_bases;
    return o;
}

struct Deadline {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double limit = 0;
    void check(const char* what) const {
        if (limit <= 0) return;
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > limit)
            throw BudgetExceeded(std::string(what) + " exceeded the time limit of " + std::to_string(limit) + " s");
    }
};

template <Field F>
ClassCatalog<F> build_catalog(const F& f, std::size_t max_dim, const RunConfig& cfg) {
    require_finite(f, "classification");
    Deadline deadline{std::chrono::steady_clock::now(), cfg.time_limit};
    ClassCatalog<F> catalog(f);
    auto e11 = EvolutionAlgebra<F>::zero(f, 1);
    auto fp = fingerprint(e11);
    catalog.push({{class_label(1, 0), std::move(e11), Provenance<F>{}, std::move(fp)}}, VerificationFlags{});
    for (std::size_t n = 2; n <= max_dim; ++n) {
        auto [entries, flags] = classify_dimension(catalog, n, classify_options(cfg));
        catalog.push(std::move(entries), flags);
        deadline.check("classification");
    }
    return catalog;
}

// ---- classify -------------------------------------------------------------------------------

template <Field F>
int do_classify(const F& f, const RunConfig& cfg, std::ostream& out) {
    if (cfg.max_dim == 0) throw UsageError("--max-dim must be at least 1");
    const auto catalog = build_catalog(f, cfg.max_dim, cfg);
    for (std::size_t n = 1; n <= catalog.max_dim(); ++n) {
        const auto& flags = catalog.flags(n);
        out << "dimension " << n << ": " << catalog.dimension(n).size() << " classes"
            << (flags.ok() ? "" : "  [VERIFICATION FAILED]") << '\n';
        for (const auto& e : catalog.dimension(n)) {
            out << "  " << std::left << std::setw(9) << e.label << ' ' << table_string(e.algebra);
            const auto& p = e.provenance;
            if (p.kind == ProvenanceKind::direct_sum) out << "    (" << p.base_label << " + E_{1,1})";
            if (p.kind == ProvenanceKind::extension)
                out << "    (" << p.s << "-dim extension of " << p.base_label
                    << (p.base_basis ? ", alternative natural basis" : "") << ")";
            out << '\n';
        }
    }
    emit_report(cfg, report(cfg, catalog_json(catalog)), out);
    return catalog.ok() ? kOk : kVerificationFailed;
}

// ---- oracle ---------------------------------------------------------------------------------

template <Field F>
int do_oracle(const F& f, const RunConfig& cfg, std::ostream& out) {
    require_finite(f, "oracle");
    if (cfg.dim == 0) throw UsageError("--dim must be at least 1");
    OracleOptions o;
    o.big = cfg.big;
    o.threads = cfg.threads;
    o.budget = budget(cfg);
    o.default_cap = cfg.max_candidates;
    o.shuffle_seed = cfg.seed;
    o.resume = cfg.resume;
    if (!cfg.checkpoint.empty())
        o.checkpoint = cfg.checkpoint;
    else if (!cfg.out.empty() && (cfg.big || cfg.resume))
        o.checkpoint = cfg.out + ".checkpoint";
    if (cfg.resume && o.checkpoint.empty()) throw UsageError("--resume needs --checkpoint or --out");
    Deadline deadline{std::chrono::steady_clock::now(), cfg.time_limit};
    o.progress = [&](std::uint64_t done, std::uint64_t total) {
        if (cfg.big) out << "  scanned " << done << " / " << total << '\n' << std::flush;
        deadline.check("oracle enumeration");
    };
    const auto r = oracle_classify(f, cfg.dim, o);
    deadline.check("oracle");
    out << "oracle " << f.descriptor().to_string() << " dim " << cfg.dim << ": " << r.candidates << " structure matrices, "
        << r.nilpotent << " nilpotent, " << r.class_count() << " classes\n";
    nlohmann::json classes = nlohmann::json::array();
    for (std::size_t k = 0; k < r.class_count(); ++k) {
        out << "  class " << std::setw(3) << k + 1 << "  (" << std::setw(6) << r.class_sizes[k] << " presentations)  "
            << table_string(r.representatives[k]) << '\n';
        classes.push_back({{"algebra", algebra_json(r.representatives[k])},
                           {"presentations", r.class_sizes[k]},
                           {"fingerprint", fingerprint_json(fingerprint(r.representatives[k]))}});
    }
    nlohmann::json result{{"field", f.descriptor().to_string()}, {"dim", cfg.dim},
                          {"candidates", r.candidates},        {"nilpotent", r.nilpotent},
                          {"class_count", r.class_count()},    {"classes", classes}};
    emit_report(cfg, report(cfg, result), out);
    if (!o.checkpoint.empty()) std::filesystem::remove(o.checkpoint);
    return kOk;
}

// ---- iso / info / extend / decompose --------------------------------------------------------

template <Field F>
int do_iso(const F& f, const RunConfig& cfg, const nlohmann::json& ja, const nlohmann::json& jb, std::ostream& out) {
    const auto a = algebra_from_json(f, ja);
    const auto b = algebra_from_json(f, jb);
    const auto cert = iso_check(a, b, IsoOptions{budget(cfg), true});
    nlohmann::json result{{"isomorphic", cert.has_value()}};
    if (cert) {
        out << "isomorphic; certificate (column i = image of e_i):\n";
        for (std::size_t r = 0; r < cert->map.rows(); ++r) {
            out << "  [";
            for (std::size_t c = 0; c < cert->map.cols(); ++c) out << (c ? " " : "") << f.to_string(cert->map(r, c));
            out << "]\n";
        }
        result["certificate"] = certificate_json(f, *cert);
    } else {
        out << "non-isomorphic\n";
    }
    emit_report(cfg, report(cfg, result), out);
    return cert ? kOk : kNonIsomorphic;
}

template <Field F>
int do_info(const F& f, const RunConfig& cfg, const nlohmann::json& j, std::ostream& out) {
    const auto e = algebra_from_json(f, j);
    const auto ann = annihilator(e);
    const auto chain = power_chain(e);
    const auto nil = is_nilpotent(e);
    const auto spaces = compute_spaces(e);
    const auto fp = fingerprint(e);
    std::vector<std::size_t> chain_dims;
    for (const auto& s : chain) chain_dims.push_back(s.dim());
    out << "field            " << f.descriptor().to_string() << '\n'
        << "dim              " << e.dim() << '\n'
        << "table            " << table_string(e) << '\n'
        << "ann              " << index_list(ann.indices) << "  (dim " << ann.space.dim() << ")\n"
        << "power chain dims " << join(chain_dims) << '\n'
        << "nilpotent        " << (nil.by_chain ? "yes" : "no");
    if (nil.index) out << ", index " << *nil.index;
    out << '\n' << "dim B, dim H     " << spaces.dim_b() << ", " << spaces.dim_h() << '\n';
    std::vector<std::size_t> h_positions = spaces.h_positions();
    out << "H represented by " << index_list(h_positions) << " (unit diagonal forms)\n"
        << "fingerprint      " << fingerprint_json(fp).dump() << '\n';
    nlohmann::json result{{"algebra", algebra_json(e)},
                          {"annihilator", ann.indices},
                          {"chain_dims", chain_dims},
                          {"nilpotent", nil.by_chain},
                          {"dim_b", spaces.dim_b()},
                          {"dim_h", spaces.dim_h()},
                          {"fingerprint", fingerprint_json(fp)}};
    result["nilpotency_index"] = nil.index ? nlohmann::json(*nil.index) : nlohmann::json("inf");
    emit_report(cfg, report(cfg, result), out);
    return kOk;
}

template <Field F>
int do_extend(const F& f, const RunConfig& cfg, const nlohmann::json& ja, const nlohmann::json& jt, std::ostream& out) {
    const auto e = algebra_from_json(f, ja);
    const auto theta = cocycle_from_json(f, jt);
    const auto spaces = compute_spaces(e);
    const auto adm = is_admissible(e, spaces, theta);
    const auto ext = extend(e, theta);
    out << "extension        " << table_string(ext) << '\n'
        << "admissible       " << (adm.admissible ? "yes" : "no (" + to_string(adm.reason) + ")") << '\n'
        << "ann              " << index_list(annihilator_indices(ext)) << '\n'
        << algebra_json(ext).dump() << '\n';
    nlohmann::json result{{"algebra", algebra_json(ext)}, {"admissible", adm.admissible}, {"reason", to_string(adm.reason)}};
    emit_report(cfg, report(cfg, result), out);
    return kOk;
}

template <Field F>
int do_decompose(const F& f, const RunConfig& cfg, const nlohmann::json& j, std::ostream& out) {
    const auto e = algebra_from_json(f, j);
    const auto d = decompose(e);
    std::vector<std::size_t> perm = d.permutation;
    out << "quotient         " << (d.quotient.dim() ? table_string(d.quotient) : std::string("(zero-dimensional)")) << '\n'
        << "basis order      " << index_list(perm) << " (annihilator last)\n"
        << "theta            " << cocycle_json(f, d.theta).dump() << '\n'
        << "certificate      " << matrix_json(f, d.certificate.map).dump() << "  (extend(quotient, theta) -> input)\n";
    nlohmann::json result{{"quotient", d.quotient.dim() ? algebra_json(d.quotient) : nlohmann::json(nullptr)},
                          {"theta", cocycle_json(f, d.theta)},
                          {"permutation", perm},
                          {"certificate", certificate_json(f, d.certificate)}};
    emit_report(cfg, report(cfg, result), out);
    return kOk;
}

// ---- verify ---------------------------------------------------------------------------------

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

template <Field F>
std::vector<std::pair<std::string, EvolutionAlgebra<F>>> computed_classes(const F& f, std::size_t n, const RunConfig& cfg,
                                                                           std::optional<ClassCatalog<F>>& cache) {
    if (!cfg.against.empty()) return classes_from_report(f, read_json_file(cfg.against), n);
    if (!cache || cache->max_dim() < n) cache = build_catalog(f, n, cfg);
    std::vector<std::pair<std::string, EvolutionAlgebra<F>>> out;
    for (const auto& e : cache->dimension(n)) out.emplace_back(e.label, e.algebra);
    return out;
}

template <Field F>
std::vector<Check> verify_catalog_suite(const F& f, const std::string& source, std::size_t n, bool expect_bijection,
                                        const RunConfig& cfg, std::optional<ClassCatalog<F>>& cache, nlohmann::json& detail,
                                        std::ostream& out) {
    std::vector<Check> checks;
    const auto dir = cfg.data_dir.empty() ? default_catalog_dir() : std::filesystem::path(cfg.data_dir);
    const auto entries = load_catalog(source, dir);
    const auto inst = instantiate(entries, f);
    bool metadata_ok = true;
    for (const auto& i : inst)
        for (const auto& problem : check_metadata(i)) {
            metadata_ok = false;
            out << "  metadata: " << problem << '\n';
        }
    checks.push_back({source + " metadata (nilpotent, ann, B, H)", metadata_ok, ""});

    const auto computed = computed_classes(f, n, cfg, cache);
    const auto m = match(computed, inst, IsoOptions{budget(cfg), true});
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < inst.size(); ++k) {
        std::vector<std::string> hit_labels;
        for (auto c : m.hits[k]) hit_labels.push_back(m.computed_labels[c]);
        out << "  " << std::left << std::setw(14) << inst[k].label << " -> ";
        if (hit_labels.empty()) out << "(no computed class)";
        for (std::size_t h = 0; h < hit_labels.size(); ++h) out << (h ? ", " : "") << hit_labels[h];
        out << '\n';
        rows.push_back({{"instantiated", inst[k].label}, {"computed", hit_labels}});
    }
    for (const auto& [c, pre] : m.collisions) {
        out << "  collision: " << m.computed_labels[c] << " <-";
        for (auto k : pre) out << ' ' << inst[k].label;
        out << '\n';
    }
    for (auto c : m.uncovered) out << "  not in the list: " << m.computed_labels[c] << "  " << table_string(computed[c].second) << '\n';
    detail[source] = {{"matches", rows}, {"bijection", m.bijection}, {"collisions", m.collisions.size()},
                      {"misses", m.misses.size()}, {"uncovered", m.uncovered.size()}};
    std::ostringstream counts;
    counts << inst.size() << " listed, " << computed.size() << " computed";
    if (expect_bijection)
        checks.push_back({source + " bijection with computed dim " + std::to_string(n), m.bijection, counts.str()});
    else
        checks.push_back({source + " entries each match a computed class", m.misses.empty() &&
                                                                                std::all_of(m.hits.begin(), m.hits.end(),
                                                                                            [](const auto& h) { return h.size() <= 1; }),
                          counts.str()});
    return checks;
}

template <Field F>
int do_verify(const F& f, const RunConfig& cfg, std::ostream& out) {
    require_finite(f, "verification");
    std::optional<ClassCatalog<F>> cache;
    std::vector<Check> checks;
    nlohmann::json detail = nlohmann::json::object();
    const auto& s = cfg.suite;
    if (s == "table4") {
        const std::size_t expected3 = f.descriptor().p % 2 == 1 ? 5 : 4;
        const std::vector<std::size_t> expected{1, 2, expected3};
        for (std::size_t n = 1; n <= 3; ++n) {
            const auto computed = computed_classes(f, n, cfg, cache).size();
            out << "dim " << n << ": expected " << expected[n - 1] << ", computed " << computed << '\n';
            checks.push_back({"dim " + std::to_string(n) + " count", computed == expected[n - 1],
                              "expected " + std::to_string(expected[n - 1]) + ", computed " + std::to_string(computed)});
        }
    } else if (s == "table1") {
        checks = verify_catalog_suite(f, "table-1", 1, true, cfg, cache, detail, out);
    } else if (s == "table2") {
        checks = verify_catalog_suite(f, "table-2", 2, true, cfg, cache, detail, out);
    } else if (s == "table3") {
        checks = verify_catalog_suite(f, "table-3", 3, true, cfg, cache, detail, out);
    } else if (s == "dim4-closed") {
        checks = verify_catalog_suite(f, "theorem-dim4-closed", 4, false, cfg, cache, detail, out);
    } else if (s == "dim4-real") {
        checks = verify_catalog_suite(f, "theorem-dim4-real", 4, false, cfg, cache, detail, out);
    } else {
        throw UsageError("unknown suite '" + s + "' (table1, table2, table3, table4, dim4-closed, dim4-real)");
    }
    if (cache && !cache->ok()) checks.push_back({"classification self-checks", false, ""});
    bool ok = true;
    nlohmann::json jchecks = nlohmann::json::array();
    for (const auto& c : checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
        ok = ok && c.pass;
        jchecks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    emit_report(cfg, report(cfg, {{"suite", s}, {"field", f.descriptor().to_string()}, {"checks", jchecks}, {"detail", detail}, {"ok", ok}}), out);
    return ok ? kOk : kVerificationFailed;
}

template <class Fn>
int with_field(const std::string& text, Fn&& fn) {
    const auto d = FieldDescriptor::parse(text);
    if (d.kind == FieldDescriptor::Kind::prime) return fn(PrimeField(d));
    return fn(RationalField{});
}

}  // namespace detail

/// Parses args (without the program name) into a config. Throws CLI::ParseError on bad usage.
inline RunConfig parse_args(const std::vector<std::string>& args) {
    RunConfig cfg;
    CLI::App app{"Nilpotent evolution algebras: construction, classification and verification", "evoalg"};
    app.require_subcommand(1);
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--threads", cfg.threads, "worker threads (1 = serial)")->check(CLI::Range(1u, 1024u));
        sub->add_option("--out", cfg.out, "write a JSON report here");
        sub->add_option("--max-nodes", cfg.max_nodes, "search node budget per isomorphism/automorphism search");
        sub->add_option("--time-limit", cfg.time_limit, "give up after this many seconds (0 = no limit)");
    };
    auto* classify = app.add_subcommand("classify", "classify nilpotent evolution algebras up to a dimension");
    classify->add_option("--field", cfg.field, "gf:<p> or q")->required();
    classify->add_option("--max-dim", cfg.max_dim, "largest dimension")->check(CLI::Range(1, 6));
    classify->add_flag("!--standard-bases-only", cfg.all_natural_bases,
                       "extend only the listed natural basis of each base algebra");
    add_common(classify);

    auto* oracle = app.add_subcommand("oracle", "brute-force classification by exhaustive enumeration");
    oracle->add_option("--field", cfg.field, "gf:<p>")->required();
    oracle->add_option("--dim", cfg.dim, "dimension")->required()->check(CLI::Range(1, 4));
    oracle->add_flag("--big", cfg.big, "allow enumerations beyond the default cap");
    oracle->add_flag("--resume", cfg.resume, "continue from the checkpoint file");
    oracle->add_option("--checkpoint", cfg.checkpoint, "checkpoint file (default: <out>.checkpoint)");
    oracle->add_option("--max-candidates", cfg.max_candidates, "default enumeration cap");
    oracle->add_option("--seed", cfg.seed, "process matrices in a shuffled order");
    add_common(oracle);

    auto* iso = app.add_subcommand("iso", "decide isomorphism of two algebras");
    iso->add_option("files", cfg.inputs, "a.json b.json")->required()->expected(2);
    add_common(iso);

    auto* info = app.add_subcommand("info", "invariants of an algebra");
    info->add_option("file", cfg.inputs, "algebra.json")->required()->expected(1);
    add_common(info);

    auto* ext = app.add_subcommand("extend", "annihilator extension of an algebra by a cocycle");
    ext->add_option("files", cfg.inputs, "algebra.json cocycle.json")->required()->expected(2);
    add_common(ext);

    auto* dec = app.add_subcommand("decompose", "split an algebra as an extension of its annihilator quotient");
    dec->add_option("file", cfg.inputs, "algebra.json")->required()->expected(1);
    add_common(dec);

    auto* verify = app.add_subcommand("verify", "check a published table against the computation");
    verify->add_option("--suite", cfg.suite, "table1|table2|table3|table4|dim4-closed|dim4-real")->required();
    verify->add_option("--field", cfg.field, "gf:<p>")->required();
    verify->add_option("--against", cfg.against, "use the classes of this classify report instead of recomputing");
    verify->add_option("--data-dir", cfg.data_dir, "catalog data directory");
    verify->add_option("--report", cfg.out, "write a JSON report here");
    verify->add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1u, 1024u));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    }
    cfg.command = app.get_subcommands().front()->get_name();
    FieldDescriptor::parse(cfg.field);
    return cfg;
}

inline int execute(const RunConfig& cfg, std::ostream& out) {
    using namespace detail;
    const auto& c = cfg.command;
    if (c == "classify") return with_field(cfg.field, [&](const auto& f) { return do_classify(f, cfg, out); });
    if (c == "oracle") return with_field(cfg.field, [&](const auto& f) { return do_oracle(f, cfg, out); });
    if (c == "verify") return with_field(cfg.field, [&](const auto& f) { return do_verify(f, cfg, out); });

    std::vector<nlohmann::json> docs;
    for (const auto& p : cfg.inputs) docs.push_back(read_json_file(p));
    const auto field = algebra_field(docs.front());
    auto dispatch = [&](auto&& fn) {
        if (field.kind == FieldDescriptor::Kind::prime) return fn(PrimeField(field));
        return fn(RationalField{});
    };
    if (c == "iso") return dispatch([&](const auto& f) { return do_iso(f, cfg, docs[0], docs[1], out); });
    if (c == "info") return dispatch([&](const auto& f) { return do_info(f, cfg, docs[0], out); });
    if (c == "extend") return dispatch([&](const auto& f) { return do_extend(f, cfg, docs[0], docs[1], out); });
    if (c == "decompose") return dispatch([&](const auto& f) { return do_decompose(f, cfg, docs[0], out); });
    throw UsageError("unknown command " + c);
}

/// The whole program: parse, run, map errors to exit codes.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_args(args);
    } catch (const HelpRequested& h) {
        out << h.text;
        return kOk;
    } catch (const CLI::ParseError& ex) {
        err << "usage error: " << ex.what() << '\n';
        return kUsage;
    } catch (const Error& ex) {
        err << "usage error: " << ex.what() << '\n';
        return kUsage;
    }
    try {
        return execute(cfg, out);
    } catch (const UnsupportedField& ex) {
        err << "unsupported field: " << ex.what() << '\n';
        return kUsage;
    } catch (const BudgetExceeded& ex) {
        err << "budget exceeded: " << ex.what() << '\n';
        return kBudgetExceeded;
    } catch (const InternalError& ex) {
        err << "internal error: " << ex.what() << '\n';
        return kInternal;
    } catch (const Error& ex) {
        err << "error: " << ex.what() << '\n';
        return kUsage;
    } catch (const nlohmann::json::exception& ex) {
        err << "malformed input: " << ex.what() << '\n';
        return kUsage;
    }
}

}  // namespace evo::cli
