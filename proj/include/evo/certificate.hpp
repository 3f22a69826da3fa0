#pragma once

#include "evo/algebra.hpp"
#include "evo/linalg.hpp"

namespace evo {

/// Invertible P with P(x *_1 y) = (Px) *_2 (Py). Column i of P is the image of e_i.
template <Field F>
struct IsoCertificate {
    MatrixOf<F> map;
};

/// Checks invertibility and the product rule on every pair of basis vectors.
template <Field F>
bool verify_certificate(const EvolutionAlgebra<F>& from, const EvolutionAlgebra<F>& to, const MatrixOf<F>& p) {
    const auto& f = from.field();
    const std::size_t m = from.dim();
    if (to.dim() != m || p.rows() != m || p.cols() != m) return false;
    if (!is_invertible(f, p)) return false;
    std::vector<VectorOf<F>> images;
    for (std::size_t i = 0; i < m; ++i) images.push_back(p.column(i));
    for (std::size_t i = 0; i < m; ++i) {
        const VectorOf<F> sq(from.square(i).begin(), from.square(i).end());
        if (multiply(to, images[i], images[i]) != apply(f, p, std::span<const typename F::Element>(sq))) return false;
        for (std::size_t j = i + 1; j < m; ++j)
            if (!is_zero_vector(f, std::span<const typename F::Element>(multiply(to, images[i], images[j]))))
                return false;
    }
    return true;
}

template <Field F>
bool verify_certificate(const EvolutionAlgebra<F>& from, const EvolutionAlgebra<F>& to, const IsoCertificate<F>& c) {
    return verify_certificate(from, to, c.map);
}

/// Permutation matrix sending e_k to e_{order[k]}.
template <Field F>
MatrixOf<F> permutation_matrix(const F& f, const std::vector<std::size_t>& order) {
    auto p = zero_matrix(f, order.size(), order.size());
    for (std::size_t k = 0; k < order.size(); ++k) p(order[k], k) = f.one();
    return p;
}

}  // namespace evo
