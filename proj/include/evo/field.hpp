#pragma once

// Exact scalar fields: prime fields GF(p) with residues 0..p-1, and the rationals backed by GMP.

#include <gmpxx.h>

#include <charconv>
#include <compare>
#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evo/errors.hpp"

namespace evo {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Which field an object lives over. String form: `gf:<p>` or `q`.
struct FieldDescriptor {
    enum class Kind { prime, rationals };

    Kind kind = Kind::rationals;
    std::uint32_t p = 0;       // characteristic for prime kinds, 0 for q
    std::uint32_t degree = 1;  // reserved for GF(p^k); only 1 is implemented

    static FieldDescriptor prime_field(std::uint32_t p) {
        if (!is_prime(p)) throw InvalidArgument("gf:" + std::to_string(p) + ": modulus is not prime");
        return {Kind::prime, p, 1};
    }
    static FieldDescriptor rationals() { return {Kind::rationals, 0, 1}; }

    static FieldDescriptor parse(std::string_view text) {
        if (text == "q" || text == "Q") return rationals();
        if (text.substr(0, 3) != "gf:") throw InvalidArgument("unrecognised field '" + std::string(text) + "'");
        auto digits = text.substr(3);
        std::uint64_t p = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty())
            throw InvalidArgument("unrecognised field '" + std::string(text) + "'");
        if (p > 0xFFFFFFFFull) throw InvalidArgument("field modulus too large");
        return prime_field(static_cast<std::uint32_t>(p));
    }

    [[nodiscard]] bool is_finite() const { return kind == Kind::prime; }
    /// Element count; 0 means infinite.
    [[nodiscard]] std::uint64_t order() const { return kind == Kind::prime ? p : 0; }
    [[nodiscard]] std::string to_string() const {
        return kind == Kind::prime ? "gf:" + std::to_string(p) : std::string("q");
    }

    friend bool operator==(const FieldDescriptor&, const FieldDescriptor&) = default;
};

/// Residue class modulo p, always in canonical range [0, p).
struct Residue {
    std::uint32_t value = 0;
    friend auto operator<=>(const Residue&, const Residue&) = default;
};

class PrimeField {
public:
    using Element = Residue;

    explicit PrimeField(std::uint32_t p) : desc_(FieldDescriptor::prime_field(p)) {}
    explicit PrimeField(const FieldDescriptor& d) : desc_(d) {
        if (d.kind != FieldDescriptor::Kind::prime) throw UnsupportedField("not a prime field: " + d.to_string());
    }

    [[nodiscard]] const FieldDescriptor& descriptor() const { return desc_; }
    [[nodiscard]] std::uint32_t characteristic() const { return desc_.p; }
    [[nodiscard]] bool is_finite() const { return true; }
    [[nodiscard]] std::uint64_t order() const { return desc_.p; }

    [[nodiscard]] Element zero() const { return {0}; }
    [[nodiscard]] Element one() const { return {desc_.p == 1 ? 0u : 1u}; }
    [[nodiscard]] Element from_int(long long v) const {
        long long r = v % static_cast<long long>(desc_.p);
        if (r < 0) r += desc_.p;
        return {static_cast<std::uint32_t>(r)};
    }

    [[nodiscard]] bool is_zero(Element a) const { return a.value == 0; }
    [[nodiscard]] Element add(Element a, Element b) const {
        std::uint64_t s = std::uint64_t{a.value} + b.value;
        return {static_cast<std::uint32_t>(s >= desc_.p ? s - desc_.p : s)};
    }
    [[nodiscard]] Element neg(Element a) const { return {a.value == 0 ? 0 : desc_.p - a.value}; }
    [[nodiscard]] Element sub(Element a, Element b) const { return add(a, neg(b)); }
    [[nodiscard]] Element mul(Element a, Element b) const {
        return {static_cast<std::uint32_t>(std::uint64_t{a.value} * b.value % desc_.p)};
    }
    [[nodiscard]] Element pow(Element a, std::uint64_t e) const {
        Element r = one();
        while (e) {
            if (e & 1u) r = mul(r, a);
            a = mul(a, a);
            e >>= 1u;
        }
        return r;
    }
    [[nodiscard]] Element inv(Element a) const {
        if (a.value == 0) throw InvalidArgument("division by zero in " + desc_.to_string());
        return pow(a, desc_.p - 2);
    }

    // Finite-field enumeration: element k of the canonical order 0, 1, ..., p-1.
    [[nodiscard]] std::vector<Element> elements() const {
        std::vector<Element> out(desc_.p);
        for (std::uint32_t k = 0; k < desc_.p; ++k) out[k] = {k};
        return out;
    }
    [[nodiscard]] std::uint64_t index_of(Element a) const { return a.value; }
    [[nodiscard]] Element element_at(std::uint64_t k) const { return {static_cast<std::uint32_t>(k)}; }

    [[nodiscard]] std::string to_string(Element a) const { return std::to_string(a.value); }
    [[nodiscard]] Element parse(std::string_view text) const {
        auto slash = text.find('/');
        if (slash != std::string_view::npos)
            return mul(parse(text.substr(0, slash)), inv(parse(text.substr(slash + 1))));
        long long v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
            throw InvalidArgument("bad element '" + std::string(text) + "' for " + desc_.to_string());
        return from_int(v);
    }

    friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.desc_ == b.desc_; }

private:
    FieldDescriptor desc_;
};

/// The rational numbers. Elements are kept canonical (reduced, positive denominator).
class RationalField {
public:
    using Element = mpq_class;

    [[nodiscard]] FieldDescriptor descriptor() const { return FieldDescriptor::rationals(); }
    [[nodiscard]] std::uint32_t characteristic() const { return 0; }
    [[nodiscard]] bool is_finite() const { return false; }
    [[nodiscard]] std::uint64_t order() const { return 0; }

    [[nodiscard]] Element zero() const { return Element(0); }
    [[nodiscard]] Element one() const { return Element(1); }
    [[nodiscard]] Element from_int(long long v) const { return Element(static_cast<long>(v)); }

    [[nodiscard]] bool is_zero(const Element& a) const { return sgn(a) == 0; }
    [[nodiscard]] Element add(const Element& a, const Element& b) const { return Element(a + b); }
    [[nodiscard]] Element sub(const Element& a, const Element& b) const { return Element(a - b); }
    [[nodiscard]] Element neg(const Element& a) const { return Element(-a); }
    [[nodiscard]] Element mul(const Element& a, const Element& b) const { return Element(a * b); }
    [[nodiscard]] Element inv(const Element& a) const {
        if (sgn(a) == 0) throw InvalidArgument("division by zero in q");
        return Element(1 / a);
    }

    [[nodiscard]] std::vector<Element> elements() const { throw UnsupportedField("q is infinite; cannot enumerate"); }
    [[nodiscard]] std::uint64_t index_of(const Element&) const { throw UnsupportedField("q is infinite"); }
    [[nodiscard]] Element element_at(std::uint64_t) const { throw UnsupportedField("q is infinite"); }

    [[nodiscard]] std::string to_string(const Element& a) const { return a.get_str(); }
    [[nodiscard]] Element parse(std::string_view text) const {
        std::string s(text);
        if (s.empty()) throw InvalidArgument("empty rational");
        Element r;
        if (r.set_str(s, 10) != 0) throw InvalidArgument("bad rational '" + s + "'");
        if (sgn(r.get_den()) == 0) throw InvalidArgument("zero denominator in '" + s + "'");
        r.canonicalize();
        return r;
    }

    friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

template <class F>
concept Field = requires(const F& f, const typename F::Element& a, std::string_view s, long long n) {
    typename F::Element;
    { f.descriptor() } -> std::convertible_to<FieldDescriptor>;
    { f.zero() } -> std::same_as<typename F::Element>;
    { f.one() } -> std::same_as<typename F::Element>;
    { f.from_int(n) } -> std::same_as<typename F::Element>;
    { f.is_zero(a) } -> std::same_as<bool>;
    { f.add(a, a) } -> std::same_as<typename F::Element>;
    { f.sub(a, a) } -> std::same_as<typename F::Element>;
    { f.neg(a) } -> std::same_as<typename F::Element>;
    { f.mul(a, a) } -> std::same_as<typename F::Element>;
    { f.inv(a) } -> std::same_as<typename F::Element>;
    { f.is_finite() } -> std::same_as<bool>;
    { f.elements() } -> std::same_as<std::vector<typename F::Element>>;
    { f.to_string(a) } -> std::same_as<std::string>;
    { f.parse(s) } -> std::same_as<typename F::Element>;
};

template <Field F>
void require_finite(const F& f, std::string_view what) {
    if (!f.is_finite())
        throw UnsupportedField(std::string(what) + " needs a finite field, got " + f.descriptor().to_string());
}

/// Every element exactly once, 0 first and 1 second.
template <Field F>
std::vector<typename F::Element> elements(const F& f) {
    require_finite(f, "element enumeration");
    return f.elements();
}

/// One representative per coset of F*/F*^2, smallest first; the trivial class is represented by 1.
template <Field F>
std::vector<typename F::Element> square_classes(const F& f) {
    require_finite(f, "square classes");
    const auto all = f.elements();
    std::vector<typename F::Element> squares;
    for (const auto& x : all)
        if (!f.is_zero(x)) squares.push_back(f.mul(x, x));

    std::vector<typename F::Element> reps;
    std::vector<bool> covered(all.size(), false);
    for (std::size_t k = 0; k < all.size(); ++k) {
        if (f.is_zero(all[k]) || covered[k]) continue;
        reps.push_back(all[k]);
        for (const auto& sq : squares) covered[f.index_of(f.mul(all[k], sq))] = true;
    }
    return reps;
}

/// Smallest canonical r with r*r == x, if any.
inline std::optional<Residue> sqrt_if_square(const PrimeField& f, Residue x) {
    if (f.is_zero(x)) throw InvalidArgument("sqrt_if_square expects a nonzero element");
    for (const auto& r : f.elements())
        if (f.mul(r, r) == x) return r;
    return std::nullopt;
}

/// Nonnegative rational square root when numerator and denominator are perfect squares.
inline std::optional<mpq_class> sqrt_if_square(const RationalField&, const mpq_class& x) {
    if (sgn(x) == 0) throw InvalidArgument("sqrt_if_square expects a nonzero element");
    if (sgn(x) < 0) return std::nullopt;
    const mpz_class& num = x.get_num();
    const mpz_class& den = x.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return std::nullopt;
    mpq_class r(sqrt(num), sqrt(den));
    r.canonicalize();
    return r;
}

}  // namespace evo
