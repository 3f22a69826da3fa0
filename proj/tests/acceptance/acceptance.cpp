// Acceptance checks, one line per criterion. Exit status is nonzero when a criterion fails,
// except for failures listed in kKnownDeviations (pass --strict to count those as well).

#include <chrono>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "evo/autos.hpp"
#include "evo/catalog.hpp"
#include "evo/classify.hpp"
#include "evo/cocycle.hpp"
#include "evo/oracle.hpp"

using namespace evo;

namespace {

using Alg = EvolutionAlgebra<PrimeField>;

// The expectation "real-list E_{4,6} and E_{4,7} are not isomorphic over GF(3) and GF(7)" is false:
// x^2 + y^2 + z^2 and x^2 + y^2 - z^2 become equivalent after rescaling e4 by -1 over any finite
// field of odd characteristic. The check still runs and reports what it finds.
const std::set<std::string> kKnownDeviations{"5c"};

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;
    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        notes.push_back((ok ? "ok: " : "FAILED: ") + what);
    }
};

struct Row {
    std::string id;
    std::string title;
    Outcome outcome;
    double seconds = 0;
    double limit = 0;
};

std::vector<std::pair<std::string, Alg>> labelled(const ClassCatalog<PrimeField>& c, std::size_t n) {
    std::vector<std::pair<std::string, Alg>> out;
    for (const auto& e : c.dimension(n)) out.emplace_back(e.label, e.algebra);
    return out;
}

Alg from_ints(const PrimeField& f, std::size_t m, std::initializer_list<long long> v) {
    return {f, matrix_from_ints(f, m, m, v)};
}

Residue draw(const PrimeField& f, std::mt19937_64& rng) {
    return f.element_at(std::uniform_int_distribution<std::uint64_t>(0, f.order() - 1)(rng));
}

MatrixOf<PrimeField> random_matrix(const PrimeField& f, std::size_t r, std::size_t c, std::mt19937_64& rng) {
    auto m = zero_matrix(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = draw(f, rng);
    return m;
}

Alg random_nilpotent(const PrimeField& f, std::size_t m, std::mt19937_64& rng) {
    auto a = zero_matrix(f, m, m);
    std::bernoulli_distribution keep(0.6);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (keep(rng)) a(i, j) = draw(f, rng);
    std::vector<std::size_t> order(m);
    for (std::size_t k = 0; k < m; ++k) order[k] = k;
    std::shuffle(order.begin(), order.end(), rng);
    return permute_basis(Alg(f, std::move(a)), order);
}

Subspace<PrimeField> direct_annihilator(const Alg& e) {
    const auto& f = e.field();
    std::vector<VectorOf<PrimeField>> gens;
    for (const auto& v : all_vectors(f, e.dim())) {
        bool zero = true;
        for (std::size_t j = 0; j < e.dim() && zero; ++j)
            zero = is_zero_vector(f, std::span<const Residue>(multiply(e, v, unit_vector(f, e.dim(), j))));
        if (zero) gens.push_back(v);
    }
    return Subspace<PrimeField>(f, e.dim(), gens);
}

// ---------------------------------------------------------------------------------------------

Outcome counts_up_to_three() {
    Outcome o;
    o.require(full_catalog(PrimeField(2), 3).sizes() == std::vector<std::size_t>{1, 2, 4}, "GF(2): [1, 2, 4]");
    for (std::uint32_t p : {3u, 5u, 7u}) {
        const auto sizes = full_catalog(PrimeField(p), 3).sizes();
        o.require(sizes == std::vector<std::size_t>{1, 2, 5}, "GF(" + std::to_string(p) + "): [1, 2, 5]");
    }
    return o;
}

bool bijection(const std::vector<Alg>& oracle, const std::vector<std::pair<std::string, Alg>>& classes) {
    if (oracle.size() != classes.size()) return false;
    std::vector<int> used(classes.size(), 0);
    for (const auto& rep : oracle) {
        int hits = 0;
        for (std::size_t k = 0; k < classes.size(); ++k)
            if (iso_check(rep, classes[k].second)) {
                ++hits;
                ++used[k];
            }
        if (hits != 1) return false;
    }
    return std::all_of(used.begin(), used.end(), [](int u) { return u == 1; });
}

Outcome oracle_agreement(std::size_t lo, std::size_t hi, const std::vector<std::uint32_t>& primes) {
    Outcome o;
    for (auto p : primes) {
        PrimeField f(p);
        const auto cat = full_catalog(f, hi);
        for (std::size_t n = lo; n <= hi; ++n) {
            const auto r = oracle_classify(f, n);
            const auto classes = labelled(cat, n);
            std::ostringstream s;
            s << "GF(" << p << ") dim " << n << ": oracle " << r.class_count() << " classes from " << r.nilpotent
              << " nilpotent matrices, classify " << classes.size();
            o.require(bijection(r.representatives, classes), s.str() + ", bijection verified");
        }
    }
    return o;
}

Outcome catalog_bijections() {
    Outcome o;
    PrimeField f5(5);
    o.require(match(labelled(full_catalog(f5, 3), 3), instantiate(load_catalog("table-3"), f5)).bijection,
              "table-3 over GF(5)");
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
        PrimeField f(p);
        o.require(match(labelled(full_catalog(f, 2), 2), instantiate(load_catalog("table-2"), f)).bijection,
                  "table-2 over GF(" + std::to_string(p) + ")");
    }
    return o;
}

Alg real_list_entry(const PrimeField& f, const std::string& label) {
    for (const auto& inst : instantiate(load_catalog("theorem-dim4-real"), f))
        if (inst.label == label) return inst.algebra;
    throw InvalidArgument("no entry " + label);
}

Outcome square_classes_e33() {
    Outcome o;
    for (std::uint32_t p : {3u, 7u}) {
        PrimeField f(p);
        const auto inst = instantiate(load_catalog("table-3"), f);
        const auto nonsquare = square_classes(f).at(1);
        o.require(!iso_check(inst[2].algebra, inst[3].algebra, IsoOptions{{}, false}),
                  "E_{3,3}^1 vs E_{3,3}^" + f.to_string(nonsquare) + " non-isomorphic over GF(" + std::to_string(p) + ")");
    }
    return o;
}

Outcome real_pair_gf5() {
    Outcome o;
    PrimeField f(5);
    const auto cert = iso_check(real_list_entry(f, "E_{4,6}"), real_list_entry(f, "E_{4,7}"), IsoOptions{{}, false});
    o.require(cert.has_value(), "E_{4,6} ~ E_{4,7} over GF(5), certificate verified");
    return o;
}

Outcome real_pair_nonsquare() {
    Outcome o;
    for (std::uint32_t p : {3u, 7u}) {
        PrimeField f(p);
        const auto cert = iso_check(real_list_entry(f, "E_{4,6}"), real_list_entry(f, "E_{4,7}"), IsoOptions{{}, false});
        o.require(!cert, "E_{4,6} not isomorphic to E_{4,7} over GF(" + std::to_string(p) + ")" +
                             (cert ? " (a verified isomorphism exists)" : ""));
    }
    return o;
}

Outcome lemma_suites() {
    Outcome o;
    for (std::uint32_t p : {2u, 3u, 5u}) {
        PrimeField f(p);
        std::mt19937_64 rng(4242 + p);
        const std::string tag = " over GF(" + std::to_string(p) + ")";
        std::size_t eq = 0, cob = 0, rad = 0, round = 0, nil = 0, cases = 0;
        for (int t = 0; t < 150; ++t) {
            const std::size_t m = 1 + t % 3, s = 1 + t % 2;
            const auto e = random_nilpotent(f, m, rng);
            const CocycleMatrix<PrimeField> theta(random_matrix(f, m, s, rng));
            const auto [shifted, sigma] = add_coboundary(e, theta, random_matrix(f, m, s, rng));
            eq += verify_certificate(extend(e, theta), extend(e, shifted), sigma) &&
                  iso_check(extend(e, theta), extend(e, shifted), IsoOptions{{}, false}).has_value();

            const auto spaces = compute_spaces(e);
            const auto chain = power_chain(e);
            const std::size_t sq = chain.size() > 1 ? chain[1].dim() : 0;
            cob += spaces.dim_h() == m - sq && spaces.dim_b() == rank(f, e.structure());

            rad += direct_annihilator(extend(e, theta)) == annihilator_of_extension(e, theta);

            const auto big = random_nilpotent(f, 2 + t % 3, rng);
            const auto d = decompose(big);
            round += verify_certificate(extend(d.quotient, d.theta), big, d.certificate);

            auto any = zero_matrix(f, 1 + t % 5, 1 + t % 5);
            std::bernoulli_distribution keep(0.3);
            for (std::size_t i = 0; i < any.rows(); ++i)
                for (std::size_t j = 0; j < any.cols(); ++j)
                    if (keep(rng)) any(i, j) = draw(f, rng);
            const auto check = is_nilpotent(Alg(f, any));
            nil += check.by_chain == check.by_graph;
            ++cases;
        }
        o.require(eq == cases, "equivalent cocycles " + std::to_string(eq) + "/" + std::to_string(cases) + tag);
        o.require(cob == cases, "cobound " + std::to_string(cob) + "/" + std::to_string(cases) + tag);
        o.require(rad == cases, "rad " + std::to_string(rad) + "/" + std::to_string(cases) + tag);
        o.require(round == cases, "construct round trip " + std::to_string(round) + "/" + std::to_string(cases) + tag);
        o.require(nil == cases, "graph vs chain nilpotency " + std::to_string(nil) + "/" + std::to_string(cases) + tag);
    }
    // Annihilator-component lemma, every base of dimension <= 3 and every one-column cocycle.
    for (std::uint32_t p : {2u, 3u}) {
        PrimeField f(p);
        std::size_t cases = 0, agree = 0;
        for (std::size_t m = 1; m <= 3; ++m)
            for (auto n : enumerate_nilpotent_indices(f, m, {})) {
                const auto e = structure_from_index(f, m, n);
                const auto spaces = compute_spaces(e);
                const auto ann = annihilator_indices(e);
                for (const auto& col : all_vectors(f, m)) {
                    const auto theta = CocycleMatrix<PrimeField>::from_columns(f, m, {col});
                    if (!intersect_sorted(radical(f, theta), ann).empty()) continue;
                    ++cases;
                    agree += has_annihilator_component(e, spaces, theta) == splits_off_zero_ideal(extend(e, theta));
                }
            }
        o.require(agree == cases, "annihilator components " + std::to_string(agree) + "/" + std::to_string(cases) +
                                      " over GF(" + std::to_string(p) + ")");
    }
    return o;
}

Outcome aut_forms() {
    Outcome o;
    PrimeField f(3);
    const auto t2 = load_catalog("table-2");
    const auto t3 = load_catalog("table-3");
    const auto e22 = enumerate_aut(from_ints(f, 2, {0, 1, 0, 0}));
    bool form = true;
    for (const auto& g : e22.members()) form = form && aut_form_holds(t2[1], f, std::nullopt, g);
    o.require(e22.size() == 6 && form, "Aut(E_{2,2}) over GF(3): " + std::to_string(e22.size()) + " matrices, all of the form");

    // Set equality with the form for E_{3,4}: scan GL(3, 3) for matrices in the printed form.
    std::set<MatrixOf<PrimeField>> in_form;
    const auto elems = f.elements();
    for (std::uint64_t n = 0; n < 19683; ++n) {
        auto g = zero_matrix(f, 3, 3);
        std::uint64_t r = n;
        for (std::size_t k = 0; k < 9; ++k, r /= 3) g(k / 3, k % 3) = elems[r % 3];
        if (aut_form_holds(t3[3], f, std::nullopt, g)) in_form.insert(g);
    }
    const auto members = enumerate_aut(from_ints(f, 3, {0, 1, 0, 0, 0, 1, 0, 0, 0})).members();
    o.require(std::set<MatrixOf<PrimeField>>(members.begin(), members.end()) == in_form,
              "Aut(E_{3,4}) over GF(3) equals the printed form (" + std::to_string(in_form.size()) + " matrices)");
    return o;
}

// Every automorphism of an extension E + V with ann = V is [[phi0, 0], [f, psi]] with psi invertible,
// phi0 in Aut(E), theta(phi0 e_i, phi0 e_j) = 0 for i != j and theta(phi0 e_i, phi0 e_i) = f(e_i^2) + psi(theta(e_i, e_i)).
Outcome aut_block_form() {
    Outcome o;
    PrimeField f(2);
    const auto cat = full_catalog(f, 4);
    std::size_t entries = 0, autos = 0, good = 0;
    for (const auto& entry : cat.dimension(4)) {
        if (entry.provenance.kind != ProvenanceKind::extension) continue;
        ++entries;
        const std::size_t m = entry.provenance.base_dim, s = 4 - m;
        const auto& a = entry.algebra.structure();
        auto base_m = zero_matrix(f, m, m);
        auto theta = zero_matrix(f, m, s);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) base_m(i, j) = a(i, j);
            for (std::size_t j = 0; j < s; ++j) theta(i, j) = a(i, m + j);
        }
        const Alg base(f, base_m);
        auto form = [&](const VectorOf<PrimeField>& x, const VectorOf<PrimeField>& y) {
            VectorOf<PrimeField> out(s, f.zero());
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t j = 0; j < s; ++j) out[j] = f.add(out[j], f.mul(f.mul(x[k], y[k]), theta(k, j)));
            return out;
        };
        const auto base_aut = enumerate_aut(base);
        for (const auto& phi : enumerate_aut(entry.algebra).members()) {
            ++autos;
            bool ok = true;
            auto phi0 = zero_matrix(f, m, m), fm = zero_matrix(f, s, m), psi = zero_matrix(f, s, s);
            for (std::size_t r = 0; r < 4; ++r)
                for (std::size_t c = 0; c < 4; ++c) {
                    if (r < m && c < m) phi0(r, c) = phi(r, c);
                    if (r >= m && c < m) fm(r - m, c) = phi(r, c);
                    if (r >= m && c >= m) psi(r - m, c - m) = phi(r, c);
                    if (r < m && c >= m) ok = ok && f.is_zero(phi(r, c));
                }
            ok = ok && is_invertible(f, psi) && base_aut.contains(phi0);
            for (std::size_t i = 0; i < m && ok; ++i) {
                const auto xi = phi0.column(i);
                for (std::size_t j = i + 1; j < m && ok; ++j)
                    ok = is_zero_vector(f, std::span<const Residue>(form(xi, phi0.column(j))));
                const VectorOf<PrimeField> sq(base.square(i).begin(), base.square(i).end());
                const auto lhs = form(xi, xi);
                const auto f_sq = apply(f, fm, std::span<const Residue>(sq));
                const auto psi_theta = apply(f, psi, std::span<const Residue>(theta.row_vector(i)));
                VectorOf<PrimeField> rhs(s);
                for (std::size_t j = 0; j < s; ++j) rhs[j] = f.add(f_sq[j], psi_theta[j]);
                ok = ok && lhs == rhs;
            }
            good += ok;
        }
    }
    o.require(good == autos, std::to_string(good) + "/" + std::to_string(autos) + " automorphisms of " +
                                 std::to_string(entries) + " extension classes have the block form and satisfy the condition");
    return o;
}

Outcome not_reproducible() {
    Outcome o;
    o.notes.push_back("symbolic real and closed-field classifications and the infinite count over Q are out of scope;");
    o.notes.push_back("they are covered by catalog instantiation (criterion 4), square-class checks (criterion 5) and verify");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
    struct Spec {
        std::string id, title;
        double limit;
        std::function<Outcome()> run;
    };
    const std::vector<Spec> specs{
        {"1", "class counts for dims 1-3", 30, counts_up_to_three},
        {"2", "oracle agreement for dims 1-3 over GF(2), GF(3), GF(5)", 300,
         [] { return oracle_agreement(1, 3, {2, 3, 5}); }},
        {"3", "oracle agreement for dim 4 over GF(2)", 600, [] { return oracle_agreement(4, 4, {2}); }},
        {"4", "catalog bijections", 0, catalog_bijections},
        {"5a", "square classes split E_{3,3}", 10, square_classes_e33},
        {"5b", "real-list E_{4,6} ~ E_{4,7} over GF(5)", 10, real_pair_gf5},
        {"5c", "real-list E_{4,6}, E_{4,7} separated over GF(3), GF(7)", 10, real_pair_nonsquare},
        {"6", "lemma property suites", 0, lemma_suites},
        {"7", "automorphism groups match the printed forms", 0, aut_forms},
        {"8", "block form of Aut(E_theta) for dim-4 extensions over GF(2)", 300, aut_block_form},
        {"9", "symbolic real/closed/rational results (not reproducible; documented)", 0, not_reproducible},
    };

    int blocking = 0, failed = 0;
    for (const auto& spec : specs) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = spec.run();
        } catch (const std::exception& ex) {
            out.require(false, std::string("exception: ") + ex.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (spec.limit > 0 && secs > spec.limit)
            out.require(false, "runtime " + std::to_string(secs) + " s exceeds " + std::to_string(spec.limit) + " s");
        const bool known = kKnownDeviations.count(spec.id) > 0;
        std::string status = out.pass ? "PASS" : "FAIL";
        if (spec.id == "9") status = "N/A ";
        std::cout << status << "  criterion " << std::left << std::setw(3) << spec.id << ' ' << spec.title << "  ["
                  << std::fixed << std::setprecision(2) << secs << " s]" << (!out.pass && known ? "  (known deviation)" : "")
                  << '\n';
        for (const auto& n : out.notes) std::cout << "        " << n << '\n';
        if (!out.pass) {
            ++failed;
            if (strict || !known) ++blocking;
        }
    }
    std::cout << failed << " criteria failed, " << blocking << " blocking\n";
    return blocking == 0 ? 0 : 1;
}
