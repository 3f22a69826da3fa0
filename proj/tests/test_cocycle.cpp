#include <gtest/gtest.h>

#include <random>

#include "evo/cocycle.hpp"
#include "evo/iso.hpp"
#include "evo/oracle.hpp"
#include "support.hpp"

namespace evo {
namespace {

using test::algebra;

template <Field F>
CocycleMatrix<F> random_cocycle(const F& f, std::size_t m, std::size_t s, std::mt19937_64& rng) {
    return CocycleMatrix<F>(test::random_matrix(f, m, s, rng));
}

// Annihilator of the whole algebra as a subspace, from x * e_j = 0 for every j.
template <Field F>
Subspace<F> direct_annihilator(const EvolutionAlgebra<F>& e) {
    const auto& f = e.field();
    std::vector<VectorOf<F>> gens;
    for (const auto& v : all_vectors(f, e.dim())) {
        bool zero = true;
        for (std::size_t j = 0; j < e.dim() && zero; ++j)
            zero = is_zero_vector(f, std::span<const typename F::Element>(multiply(e, v, unit_vector(f, e.dim(), j))));
        if (zero) gens.push_back(v);
    }
    return Subspace<F>(f, e.dim(), gens);
}

// E = I + Fz with z a zero ideal: some z in ann and a functional killing E^2 but not z.
template <Field F>
bool brute_has_zero_summand(const EvolutionAlgebra<F>& e) {
    const auto& f = e.field();
    const auto ann = direct_annihilator(e);
    const auto all = all_vectors(f, e.dim());
    std::vector<VectorOf<F>> squares;
    for (std::size_t i = 0; i < e.dim(); ++i) squares.emplace_back(e.square(i).begin(), e.square(i).end());
    auto dot = [&](const VectorOf<F>& a, const VectorOf<F>& b) {
        auto acc = f.zero();
        for (std::size_t k = 0; k < a.size(); ++k) acc = f.add(acc, f.mul(a[k], b[k]));
        return acc;
    };
    for (const auto& lambda : all) {
        bool kills = true;
        for (const auto& sq : squares) kills = kills && f.is_zero(dot(lambda, sq));
        if (!kills) continue;
        for (const auto& z : ann.basis_vectors())
            if (!f.is_zero(dot(lambda, z))) return true;
    }
    return false;
}

TEST(Cocycle, SpacesOfSmallAlgebras) {
    PrimeField f(3);
    const auto e22 = algebra(f, 2, {0, 1, 0, 0});
    const auto s = compute_spaces(e22);
    EXPECT_EQ(s.dim_b(), 1u);
    EXPECT_EQ(s.dim_h(), 1u);
    EXPECT_EQ(s.h_positions(), (std::vector<std::size_t>{1}));
    EXPECT_EQ(s.reduce(vector_from_ints(f, {2, 1})), vector_from_ints(f, {0, 1}));

    const auto e31 = EvolutionAlgebra<PrimeField>::zero(f, 3);
    EXPECT_EQ(compute_spaces(e31).dim_h(), 3u);
}

TEST(Cocycle, AdmissibilityReasons) {
    PrimeField f(2);
    const auto e22 = algebra(f, 2, {0, 1, 0, 0});
    const auto s = compute_spaces(e22);
    using R = Admissibility::Reason;
    EXPECT_TRUE(is_admissible(e22, s, CocycleMatrix<PrimeField>::from_columns(f, 2, {vector_from_ints(f, {0, 1})})));
    EXPECT_EQ(is_admissible(e22, s, CocycleMatrix<PrimeField>::from_columns(f, 2, {vector_from_ints(f, {1, 0})})).reason,
              R::dependent_in_h);
    const auto e21 = EvolutionAlgebra<PrimeField>::zero(f, 2);
    EXPECT_EQ(is_admissible(e21, compute_spaces(e21), CocycleMatrix<PrimeField>::from_columns(f, 2, {vector_from_ints(f, {1, 0})}))
                  .reason,
              R::radical_meets_annihilator);
    EXPECT_THROW(extend(e22, CocycleMatrix<PrimeField>::zero(f, 3, 1)), InvalidArgument);
}

TEST(Cocycle, ExtendBuildsBlockMatrix) {
    PrimeField f(3);
    const auto e22 = algebra(f, 2, {0, 1, 0, 0});
    const auto theta = CocycleMatrix<PrimeField>::from_columns(f, 2, {vector_from_ints(f, {0, 1})});
    EXPECT_EQ(extend(e22, theta), algebra(f, 3, {0, 1, 0, 0, 0, 1, 0, 0, 0}));
}

class PerField : public ::testing::TestWithParam<std::uint32_t> {};

TEST_P(PerField, DecomposeRoundTrip) {
    PrimeField f(GetParam());
    std::mt19937_64 rng(500 + GetParam());
    for (int t = 0; t < 500; ++t) {
        const auto e = test::random_nilpotent(f, 2 + t % 3, rng);
        if (annihilator_indices(e).size() == e.dim()) continue;
        const auto d = decompose(e);
        const auto back = extend(d.quotient, d.theta);
        ASSERT_TRUE(verify_certificate(back, e, d.certificate));
        EXPECT_TRUE(nilpotent(d.quotient));
    }
}

TEST_P(PerField, CoboundaryShiftGivesIsomorphicExtension) {
    PrimeField f(GetParam());
    std::mt19937_64 rng(600 + GetParam());
    int admissible = 0;
    for (int t = 0; t < 400; ++t) {
        const std::size_t m = 1 + t % 3, s = 1 + t % 2;
        const auto e = test::random_nilpotent(f, m, rng);
        const auto theta = random_cocycle(f, m, s, rng);
        const auto spaces = compute_spaces(e);
        const bool adm = is_admissible(e, spaces, theta).admissible;
        const auto fv = test::random_matrix(f, m, s, rng);
        const auto [shifted, sigma] = add_coboundary(e, theta, fv);
        ASSERT_TRUE(verify_certificate(extend(e, theta), extend(e, shifted), sigma));
        // Admissibility only depends on the class mod B, and coboundaries vanish on the annihilator.
        EXPECT_EQ(adm, is_admissible(e, spaces, shifted).admissible);
        for (auto i : annihilator_indices(e))
            for (std::size_t j = 0; j < s; ++j) EXPECT_TRUE(f.is_zero(multiply(f, e.structure(), fv)(i, j)));
        admissible += adm;
    }
    EXPECT_GT(admissible, 50);
}

TEST_P(PerField, RadicalLemma) {
    PrimeField f(GetParam());
    std::mt19937_64 rng(700 + GetParam());
    for (int t = 0; t < 300; ++t) {
        const std::size_t m = 1 + t % 3, s = 1 + t % 2;
        const auto e = test::random_nilpotent(f, m, rng, 0.5);
        std::bernoulli_distribution zero_row(0.3);
        auto mat = test::random_matrix(f, m, s, rng);
        for (std::size_t i = 0; i < m; ++i)
            if (zero_row(rng))
                for (std::size_t j = 0; j < s; ++j) mat(i, j) = f.zero();
        const CocycleMatrix<PrimeField> theta(mat);
        EXPECT_EQ(direct_annihilator(extend(e, theta)), annihilator_of_extension(e, theta));
    }
}

TEST_P(PerField, CoboundaryDimensions) {
    PrimeField f(GetParam());
    std::mt19937_64 rng(800 + GetParam());
    for (int t = 0; t < 300; ++t) {
        const auto e = test::random_nilpotent(f, 1 + t % 4, rng);
        const auto spaces = compute_spaces(e);
        const auto chain = power_chain(e);
        const std::size_t square_dim = chain.size() > 1 ? chain[1].dim() : 0;
        EXPECT_EQ(spaces.dim_b(), rank(f, e.structure()));
        EXPECT_EQ(spaces.dim_b(), square_dim);
        EXPECT_EQ(spaces.dim_h(), e.dim() - square_dim);
        // Every theta_f lies in B.
        const auto fv = test::random_matrix(f, e.dim(), 1, rng).column(0);
        EXPECT_TRUE(spaces.coboundaries().contains(f, coboundary(e, fv)));
    }
}

INSTANTIATE_TEST_SUITE_P(SmallPrimes, PerField, ::testing::Values(2u, 3u, 5u));

// Dependence in H <=> the extension splits off a 1-dimensional zero ideal, over every base of
// dimension <= 3 and every cocycle whose radical misses the annihilator.
void component_lemma_exhaustive(std::uint32_t p, std::size_t max_base, std::size_t max_s_big) {
    PrimeField f(p);
    std::size_t cases = 0, dependent = 0;
    for (std::size_t m = 1; m <= max_base; ++m) {
        OracleOptions opts;
        for (auto n : enumerate_nilpotent_indices(f, m, opts)) {
            const auto e = structure_from_index(f, m, n);
            const auto spaces = compute_spaces(e);
            const auto ann = annihilator_indices(e);
            const std::size_t max_s = m == max_base ? max_s_big : 2;
            for (std::size_t s = 1; s <= max_s; ++s) {
                std::uint64_t total = 1;
                for (std::size_t k = 0; k < m * s; ++k) total *= p;
                for (std::uint64_t c = 0; c < total; ++c) {
                    auto mat = zero_matrix(f, m, s);
                    std::uint64_t r = c;
                    for (std::size_t k = 0; k < m * s; ++k, r /= p) mat(k % m, k / m) = f.from_int(static_cast<long long>(r % p));
                    const CocycleMatrix<PrimeField> theta(mat);
                    if (!intersect_sorted(radical(f, theta), ann).empty()) continue;
                    const auto ext = extend(e, theta);
                    const bool dep = has_annihilator_component(e, spaces, theta);
                    ASSERT_EQ(dep, brute_has_zero_summand(ext));
                    ASSERT_EQ(dep, splits_off_zero_ideal(ext));
                    ++cases;
                    dependent += dep;
                }
            }
        }
    }
    EXPECT_GT(cases, 100u);
    EXPECT_GT(dependent, 0u);
    EXPECT_LT(dependent, cases);
}

TEST(ComponentLemma, ExhaustiveGF2) { component_lemma_exhaustive(2, 3, 2); }
TEST(ComponentLemma, ExhaustiveGF3) { component_lemma_exhaustive(3, 3, 1); }

}  // namespace
}  // namespace evo
