#pragma once

// Brute-force ground truth: enumerate every structure matrix over a small prime field, keep the
// nilpotent ones, and split them into isomorphism classes with the backtracking search.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "evo/algebra.hpp"
#include "evo/iso.hpp"
#include "evo/parallel.hpp"

namespace evo {

struct OracleOptions {
    bool big = false;  // lift the default enumeration cap
    unsigned threads = 1;
    SearchBudget budget;
    std::uint64_t default_cap = 2'000'000;  // covers (dim <= 3, p <= 5) and (4, 2)
    std::uint64_t big_cap = 50'000'000;     // covers (4, 3) and (3, 7)
    std::filesystem::path checkpoint;        // empty: no sidecar file
    bool resume = false;
    std::uint64_t checkpoint_every = 1u << 22;
    std::optional<std::uint64_t> shuffle_seed;  // process nilpotent matrices in a shuffled order
    std::function<void(std::uint64_t done, std::uint64_t total)> progress;
};

template <Field F>
struct OracleResult {
    std::vector<EvolutionAlgebra<F>> representatives;  // min-index member of each class
    std::vector<std::size_t> class_sizes;               // presentations per class
    std::uint64_t candidates = 0;                       // p^(dim^2)
    std::uint64_t nilpotent = 0;

    [[nodiscard]] std::size_t class_count() const { return representatives.size(); }
};

inline std::uint64_t checked_power(std::uint64_t base, std::size_t exp) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (r > UINT64_MAX / base) throw BudgetExceeded("enumeration size overflows 64 bits");
        r *= base;
    }
    return r;
}

/// acyclic[mask] for every support pattern of an m x m matrix (bit i*m+j = arc i -> j).
inline std::vector<bool> acyclic_support_table(std::size_t m) {
    const std::size_t bits = m * m;
    std::vector<bool> table(std::size_t{1} << bits);
    for (std::size_t mask = 0; mask < table.size(); ++mask) {
        std::vector<std::size_t> indegree(m, 0);
        for (std::size_t b = 0; b < bits; ++b)
            if (mask >> b & 1u) ++indegree[b % m];
        std::vector<std::size_t> ready;
        for (std::size_t j = 0; j < m; ++j)
            if (indegree[j] == 0) ready.push_back(j);
        std::size_t seen = 0;
        while (!ready.empty()) {
            auto i = ready.back();
            ready.pop_back();
            ++seen;
            for (std::size_t j = 0; j < m; ++j)
                if (mask >> (i * m + j) & 1u && --indegree[j] == 0) ready.push_back(j);
        }
        table[mask] = seen == m;
    }
    return table;
}

/// Structure matrix number n: entry (i, j) is base-p digit i*m + j of n.
template <Field F>
EvolutionAlgebra<F> structure_from_index(const F& f, std::size_t m, std::uint64_t n) {
    const std::uint64_t p = f.order();
    auto a = zero_matrix(f, m, m);
    for (std::size_t k = 0; k < m * m; ++k) {
        a(k / m, k % m) = f.element_at(n % p);
        n /= p;
    }
    return {f, std::move(a)};
}

namespace detail {

inline void write_checkpoint(const std::filesystem::path& path, const std::string& field, std::size_t dim,
                             std::uint64_t next, const std::vector<std::uint64_t>& found) {
    nlohmann::json j{{"kind", "oracle-checkpoint"}, {"field", field}, {"dim", dim}, {"next", next}, {"nilpotent", found}};
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        out << j.dump();
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace detail

/// Indices n < p^(dim^2) whose structure matrix has an acyclic support graph, in increasing order.
template <Field F>
std::vector<std::uint64_t> enumerate_nilpotent_indices(const F& f, std::size_t dim, const OracleOptions& opts) {
    require_finite(f, "oracle enumeration");
    if (dim > 4) throw BudgetExceeded("oracle enumeration supports dim <= 4");
    const std::uint64_t p = f.order();
    const std::uint64_t total = checked_power(p, dim * dim);
    const std::uint64_t cap = opts.big ? opts.big_cap : opts.default_cap;
    if (total > cap)
        throw BudgetExceeded("oracle over " + f.descriptor().to_string() + " dim " + std::to_string(dim) + " needs " +
                             std::to_string(total) + " candidates (cap " + std::to_string(cap) +
                             (opts.big ? ")" : "; pass --big)"));

    const auto table = acyclic_support_table(dim);
    std::uint64_t next = 0;
    std::vector<std::uint64_t> found;
    if (opts.resume && !opts.checkpoint.empty() && std::filesystem::exists(opts.checkpoint)) {
        std::ifstream in(opts.checkpoint);
        auto j = nlohmann::json::parse(in);
        if (j.at("field").get<std::string>() != f.descriptor().to_string() || j.at("dim").get<std::size_t>() != dim)
            throw InvalidArgument("checkpoint " + opts.checkpoint.string() + " belongs to a different run");
        next = j.at("next").get<std::uint64_t>();
        found = j.at("nilpotent").get<std::vector<std::uint64_t>>();
    }

    const std::size_t bits = dim * dim;
    auto scan = [&](std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t>& out) {
        // Odometer over base-p digits; the support mask is maintained incrementally.
        std::vector<std::uint64_t> digit(bits, 0);
        std::uint64_t r = lo, mask = 0;
        for (std::size_t k = 0; k < bits; ++k) {
            digit[k] = r % p;
            r /= p;
            if (digit[k]) mask |= std::uint64_t{1} << k;
        }
        for (std::uint64_t n = lo; n < hi; ++n) {
            if (table[mask]) out.push_back(n);
            for (std::size_t k = 0; k < bits; ++k) {
                if (++digit[k] < p) {
                    mask |= std::uint64_t{1} << k;
                    break;
                }
                digit[k] = 0;
                mask &= ~(std::uint64_t{1} << k);
            }
        }
    };

    const unsigned threads = std::max(1u, opts.threads);
    while (next < total) {
        const std::uint64_t block_end = std::min(total, next + opts.checkpoint_every);
        const std::uint64_t span = block_end - next;
        std::vector<std::vector<std::uint64_t>> parts(threads);
        parallel_for(threads, threads, [&](std::size_t t) {
            const std::uint64_t lo = next + span * t / threads, hi = next + span * (t + 1) / threads;
            scan(lo, hi, parts[t]);
        });
        for (auto& part : parts) found.insert(found.end(), part.begin(), part.end());
        next = block_end;
        if (!opts.checkpoint.empty()) detail::write_checkpoint(opts.checkpoint, f.descriptor().to_string(), dim, next, found);
        if (opts.progress) opts.progress(next, total);
    }
    return found;
}

/// Isomorphism classes of nilpotent evolution algebras of the given dimension, by exhaustion.
template <Field F>
OracleResult<F> oracle_classify(const F& f, std::size_t dim, const OracleOptions& opts = {}) {
    require_finite(f, "oracle_classify");
    OracleResult<F> result;
    result.candidates = checked_power(f.order(), dim * dim);
    const auto indices = enumerate_nilpotent_indices(f, dim, opts);
    result.nilpotent = indices.size();

    std::vector<EvolutionAlgebra<F>> algebras;
    algebras.reserve(indices.size());
    for (auto n : indices) algebras.push_back(structure_from_index(f, dim, n));

    std::vector<std::size_t> visit_order(algebras.size());
    std::iota(visit_order.begin(), visit_order.end(), std::size_t{0});
    if (opts.shuffle_seed) {
        std::mt19937_64 rng(*opts.shuffle_seed);
        std::shuffle(visit_order.begin(), visit_order.end(), rng);
    }

    // Fingerprint buckets only narrow the comparisons; each bucket is split by explicit search.
    std::vector<Fingerprint> prints(algebras.size());
    parallel_for(algebras.size(), opts.threads, [&](std::size_t k) { prints[k] = fingerprint(algebras[k]); });
    std::map<Fingerprint, std::vector<std::size_t>> buckets;
    for (auto k : visit_order) buckets[prints[k]].push_back(k);
    std::vector<std::vector<std::size_t>*> bucket_list;
    for (auto& [fp, members] : buckets) bucket_list.push_back(&members);

    struct Cls {
        std::size_t rep;    // first member seen, used for comparisons
        std::size_t first;  // smallest enumeration index, reported
        std::size_t size;
    };
    std::vector<std::vector<Cls>> per_bucket(bucket_list.size());
    IsoOptions iso{opts.budget, false};
    parallel_for(bucket_list.size(), opts.threads, [&](std::size_t b) {
        auto& classes = per_bucket[b];
        for (auto k : *bucket_list[b]) {
            bool placed = false;
            for (auto& c : classes) {
                if (iso_check(algebras[k], algebras[c.rep], iso)) {
                    c.first = std::min(c.first, k);
                    ++c.size;
                    placed = true;
                    break;
                }
            }
            if (!placed) classes.push_back({k, k, 1});
        }
    });

    std::vector<Cls> all;
    for (auto& cs : per_bucket) all.insert(all.end(), cs.begin(), cs.end());
    std::sort(all.begin(), all.end(), [](const Cls& a, const Cls& b) { return a.first < b.first; });
    for (const auto& c : all) {
        result.representatives.push_back(algebras[c.first]);
        result.class_sizes.push_back(c.size);
    }
    return result;
}

}  // namespace evo
