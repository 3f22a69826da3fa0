#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "evo/algebra.hpp"
#include "evo/certificate.hpp"
#include "evo/iso.hpp"
#include "evo/linalg.hpp"

namespace evo::test {

inline const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> p{2, 3, 5};
    return p;
}

template <Field F>
typename F::Element random_element(const F& f, std::mt19937_64& rng) {
    return f.element_at(std::uniform_int_distribution<std::uint64_t>(0, f.order() - 1)(rng));
}

template <Field F>
MatrixOf<F> random_matrix(const F& f, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    auto m = zero_matrix(f, rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = random_element(f, rng);
    return m;
}

/// Random matrix with roughly `density` of the entries nonzero.
template <Field F>
EvolutionAlgebra<F> random_algebra(const F& f, std::size_t m, std::mt19937_64& rng, double density = 0.3) {
    std::bernoulli_distribution keep(density);
    auto a = zero_matrix(f, m, m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c)
            if (keep(rng)) a(r, c) = random_element(f, rng);
    return {f, std::move(a)};
}

/// Strictly upper triangular in a shuffled basis, so always nilpotent.
template <Field F>
EvolutionAlgebra<F> random_nilpotent(const F& f, std::size_t m, std::mt19937_64& rng, double density = 0.6) {
    std::bernoulli_distribution keep(density);
    auto a = zero_matrix(f, m, m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = r + 1; c < m; ++c)
            if (keep(rng)) a(r, c) = random_element(f, rng);
    std::vector<std::size_t> order(m);
    for (std::size_t k = 0; k < m; ++k) order[k] = k;
    std::shuffle(order.begin(), order.end(), rng);
    return permute_basis(EvolutionAlgebra<F>(f, std::move(a)), order);
}

template <Field F>
EvolutionAlgebra<F> algebra(const F& f, std::size_t m, std::initializer_list<long long> entries) {
    return {f, matrix_from_ints(f, m, m, entries)};
}

/// Every invertible m x m matrix, by brute force.
template <Field F>
std::vector<MatrixOf<F>> general_linear(const F& f, std::size_t m) {
    std::vector<MatrixOf<F>> out;
    const std::uint64_t p = f.order();
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < m * m; ++k) total *= p;
    for (std::uint64_t n = 0; n < total; ++n) {
        auto g = zero_matrix(f, m, m);
        std::uint64_t r = n;
        for (std::size_t k = 0; k < m * m; ++k) {
            g(k / m, k % m) = f.element_at(r % p);
            r /= p;
        }
        if (is_invertible(f, g)) out.push_back(std::move(g));
    }
    return out;
}

/// Isomorphism by scanning all of GL; independent of the backtracking search.
template <Field F>
bool brute_isomorphic(const EvolutionAlgebra<F>& a, const EvolutionAlgebra<F>& b,
                      const std::vector<MatrixOf<F>>& gl) {
    for (const auto& g : gl)
        if (verify_certificate(a, b, g)) return true;
    return false;
}

}  // namespace evo::test
