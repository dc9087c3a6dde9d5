#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dissoc/dissociation.hpp"
#include "dissoc/errors.hpp"
#include "dissoc/exactmath.hpp"
#include "dissoc/group.hpp"
#include "dissoc/limits.hpp"
#include "dissoc/rng.hpp"

namespace dissoc {

// Type of a vector in {-1,0,1}^m: its count of +1 and -1 entries.
struct TypeCount {
    unsigned m_plus = 0;
    unsigned m_minus = 0;
    unsigned m = 0;  // ambient dimension

    unsigned weight() const { return m_plus + m_minus; }
    void validate() const {
        if (weight() < 1) throw InputError("type must have at least one nonzero entry");
        if (weight() > m) throw InputError("type weight exceeds ambient dimension");
    }
};

// Number of vectors in {-1,0,1}^m of the given type.
inline std::uint64_t type_population(const TypeCount& tc) {
    tc.validate();
    return binomial_u64(tc.m, tc.weight()) * binomial_u64(tc.weight(), tc.m_plus);
}

// Probability that a uniform d in {0,1}^m is orthogonal to a vector of
// the given type, as the exact dyadic rational C(t, m+) / 2^t with
// t = m+ + m-. Only the type matters, not m.
struct OrthProbability {
    std::uint64_t numerator = 0;
    unsigned log2_denominator = 0;
    double value = 0;
};

inline OrthProbability orth_probability(const TypeCount& tc) {
    tc.validate();
    const unsigned t = tc.weight();
    // C(64,32) ~ 1.8e18 still fits u64; heavier types do not.
    if (t > 64) throw LimitError("type weight above 64 leaves u64 range");
    OrthProbability p;
    p.numerator = binomial_u64(t, tc.m_plus);
    p.log2_denominator = t;
    p.value = std::ldexp(static_cast<double>(p.numerator), -static_cast<int>(t));

    // Vandermonde cross-check: orthogonal d are counted by choosing j
    // ones among the +1 slots and j among the -1 slots.
    std::uint64_t vander = 0;
    for (unsigned j = 0; j <= std::min(tc.m_plus, tc.m_minus); ++j)
        vander += binomial_u64(tc.m_plus, j) * binomial_u64(tc.m_minus, j);
    if (vander != p.numerator) throw Error("internal: Vandermonde identity check failed");
    return p;
}

// Closed-form bound 1 / sqrt(1.5 t) dominating the probability above.
inline double orth_probability_bound(const TypeCount& tc) {
    tc.validate();
    return 1.0 / std::sqrt(1.5 * tc.weight());
}

// The failure-probability sum  sum_{t=1}^m C(m,t) 2^t (1.5t)^{-n/2},
// reported with its two-part split at T = m/(log2 m)^2. Terms accumulate
// in the log2 domain. When the verdict falls within 1e-6 of the
// pass/fail boundary and m <= 20, the exact rational evaluation decides.
struct UnionBoundReport {
    unsigned m = 0;
    unsigned n = 0;
    double T = 0;        // split point; 0 for m = 1 (log2 1 = 0, see below)
    double sigma1 = 0;   // terms with t < T
    double sigma2 = 0;   // terms with t >= T
    double total = 0;
    bool passes = false;  // total < 1
    bool exact_decided = false;
};

inline UnionBoundReport union_bound(unsigned m, unsigned n) {
    if (m < 1 || n < 1) throw InputError("union bound requires m >= 1 and n >= 1");
    UnionBoundReport r;
    r.m = m;
    r.n = n;
    // m = 1 makes log2 m vanish; by convention T = 0 and the entire sum
    // is reported as sigma2.
    r.T = (m == 1) ? 0.0 : static_cast<double>(m) / (std::log2(m) * std::log2(m));

    std::vector<double> low, high;
    for (unsigned t = 1; t <= m; ++t) {
        double l = log2_binomial(m, t) + t - 0.5 * n * std::log2(1.5 * t);
        (static_cast<double>(t) < r.T ? low : high).push_back(l);
    }
    r.sigma1 = low.empty() ? 0.0 : std::exp2(log_sum_exp2(low));
    r.sigma2 = high.empty() ? 0.0 : std::exp2(log_sum_exp2(high));
    r.total = r.sigma1 + r.sigma2;
    r.passes = r.total < 1.0;

    if (std::abs(r.total - 1.0) < 1e-6) {
        ExactSumCheck exact = exact_sum_below_one(m, n);
        if (exact.decided) {
            r.passes = exact.below_one;
            r.exact_decided = true;
        }
    }
    return r;
}

// Least n making the union bound pass; the sum is strictly decreasing
// in n, so an increasing scan terminates at the answer.
inline unsigned minimal_n(unsigned m) {
    for (unsigned n = 1; n <= 100000; ++n)
        if (union_bound(m, n).passes) return n;
    throw Error("internal: no passing n found in scan range");
}

// n rows drawn uniformly from {0,1}^m. Rows may repeat, so this is a
// sample, not an ElementSet; row r is the low m bits of the r-th
// SplitMix64 draw.
struct RowSample {
    unsigned m = 0;
    std::vector<std::uint32_t> rows;
};

inline RowSample sample_candidate(unsigned m, unsigned n, std::uint64_t seed) {
    if (m < 1 || m > 31) throw InputError("row dimension must be in [1, 31]");
    RowSample s;
    s.m = m;
    s.rows.reserve(n);
    SplitMix64 rng(seed);
    for (unsigned r = 0; r < n; ++r)
        s.rows.push_back(static_cast<std::uint32_t>(rng.next() & ((1u << m) - 1)));
    return s;
}

// Column j of the sample as an element of {0,1}^n.
inline std::vector<Element> sample_columns(const RowSample& d) {
    std::vector<Element> cols;
    cols.reserve(d.m);
    for (unsigned j = 0; j < d.m; ++j) {
        std::vector<Coord> c(d.rows.size());
        for (std::size_t r = 0; r < d.rows.size(); ++r) c[r] = (d.rows[r] >> j) & 1;
        cols.emplace_back(std::move(c));
    }
    return cols;
}

struct CoveringResult {
    bool covered = false;
    std::optional<CoefficientVector> s;  // nonzero vector orthogonal to all rows
};

// Checks that every nonzero s in {-1,0,1}^m has some row of D not
// orthogonal to it. Meet in the middle over the balanced-ternary counter
// index v = v_low + 3^h v_high: per-row dot products of the low digit
// block are precomputed into maps keyed by the dot vector, then high
// blocks are enumerated with v_high ascending. Consecutive v_high blocks
// cover disjoint ascending ranges of v, so the first hit is the witness
// with minimal counter value, matching the nullcomb tester's order.
inline CoveringResult verify_covering(const RowSample& d,
                                      const Limits& limits = Limits::defaults()) {
    const unsigned m = d.m;
    const std::size_t n = d.rows.size();
    if (m < 1) throw InputError("covering check requires m >= 1");
    if (m > limits.covering_m)
        throw LimitError("dimension " + std::to_string(m) + " exceeds covering limit " +
                         std::to_string(limits.covering_m));

    const unsigned h = (m + 1) / 2;  // low digit block
    std::int64_t pow3_h = 1;
    for (unsigned i = 0; i < h; ++i) pow3_h *= 3;
    const std::int64_t vlow_max = (pow3_h - 1) / 2;

    const char offset = 64;  // dot values stay within [-m, m]
    auto key_of = [&](const std::vector<int>& dots, int sign) {
        std::string key(n, offset);
        for (std::size_t r = 0; r < n; ++r)
            key[r] = static_cast<char>(offset + sign * dots[r]);
        return key;
    };

    // Enumerate the 3^h low blocks; keep, per dot-vector key, the least
    // v_low overall and the least positive v_low.
    std::unordered_map<std::string, std::int64_t> least_any, least_positive;
    {
        std::vector<std::int8_t> digit(h, -1);
        std::vector<int> dots(n, 0);
        std::int64_t v_low = -vlow_max;
        for (std::size_t r = 0; r < n; ++r)
            dots[r] = -static_cast<int>(std::popcount(d.rows[r] & ((1u << h) - 1)));
        for (;;) {
            std::string key = key_of(dots, +1);
            auto [it, fresh] = least_any.try_emplace(key, v_low);
            if (!fresh && v_low < it->second) it->second = v_low;
            if (v_low >= 1) {
                auto [pit, pfresh] = least_positive.try_emplace(key, v_low);
                if (!pfresh && v_low < pit->second) pit->second = v_low;
            }
            std::size_t p = 0;
            std::int64_t w = 1;
            while (p < h && digit[p] == 1) {
                digit[p] = -1;
                v_low -= 2 * w;
                for (std::size_t r = 0; r < n; ++r)
                    if ((d.rows[r] >> p) & 1) dots[r] -= 2;
                ++p;
                w *= 3;
            }
            if (p == h) break;
            ++digit[p];
            v_low += w;
            for (std::size_t r = 0; r < n; ++r)
                if ((d.rows[r] >> p) & 1) dots[r] += 1;
        }
    }

    std::int64_t found_v = -1;
    {
        // v_high = 0 first: v = v_low must be positive.
        std::vector<int> dots(n, 0);
        auto probe = [&](std::int64_t v_high) -> bool {
            // A match needs dot_low = -dot_high per row.
            const auto& map = (v_high == 0) ? least_positive : least_any;
            auto it = map.find(key_of(dots, -1));
            if (it == map.end()) return false;
            found_v = it->second + pow3_h * v_high;
            return true;
        };
        const unsigned hh = m - h;
        std::int64_t vhigh_max = 1;
        for (unsigned i = 0; i < hh; ++i) vhigh_max *= 3;
        vhigh_max = (vhigh_max - 1) / 2;

        std::vector<std::int8_t> digit(hh, 0);
        bool hit = probe(0);
        for (std::int64_t v_high = 1; !hit && v_high <= vhigh_max; ++v_high) {
            std::size_t p = 0;
            while (digit[p] == 1) {
                digit[p] = -1;
                for (std::size_t r = 0; r < n; ++r)
                    if ((d.rows[r] >> (h + p)) & 1) dots[r] -= 2;
                ++p;
            }
            ++digit[p];
            for (std::size_t r = 0; r < n; ++r)
                if ((d.rows[r] >> (h + p)) & 1) dots[r] += 1;
            hit = probe(v_high);
        }
        if (!hit) return {true, std::nullopt};
    }

    // Balanced-ternary digits of the found counter value, sign-normalized
    // so the first nonzero entry is +1.
    std::vector<std::int8_t> c(m, 0);
    std::int64_t v = found_v;
    for (unsigned i = 0; i < m; ++i) {
        std::int64_t r = v % 3;
        v /= 3;
        if (r == 2) {
            c[i] = -1;
            ++v;  // digit 2 becomes -1 with a carry
        } else {
            c[i] = static_cast<std::int8_t>(r);
        }
    }
    std::size_t first = 0;
    while (first < c.size() && c[first] == 0) ++first;
    if (first == c.size()) throw Error("internal: covering witness is the zero vector");
    if (c[first] < 0)
        for (auto& x : c) x = static_cast<std::int8_t>(-x);
    CoefficientVector cv(std::move(c));
    for (std::uint32_t row : d.rows) {
        long long dot = 0;
        for (unsigned j = 0; j < m; ++j)
            if ((row >> j) & 1) dot += cv[j];
        if (dot != 0) throw Error("internal: covering witness failed revalidation");
    }
    return {false, cv};
}

struct ConstructResult {
    ElementSet columns;   // the m-element dissociated subset of {0,1}^n
    RowSample rows;       // the successful sample
    unsigned n = 0;
    unsigned trials_used = 0;
};

// Randomized constructor: sample n rows from {0,1}^m until the covering
// check passes, then transpose. Trial t uses derive_seed(seed, t), so
// results are reproducible and trials are independent.
inline ConstructResult construct(unsigned m, std::optional<unsigned> n_opt, unsigned trials,
                                 std::uint64_t seed, const Limits& limits = Limits::defaults()) {
    if (m < 1) throw InputError("m must be >= 1");
    if (m > limits.covering_m)
        throw LimitError("m exceeds covering limit " + std::to_string(limits.covering_m));
    if (trials < 1) throw InputError("trials must be >= 1");
    const unsigned n = n_opt.value_or(minimal_n(m));
    if (n < 1) throw InputError("n must be >= 1");

    for (unsigned t = 0; t < trials; ++t) {
        RowSample d = sample_candidate(m, n, derive_seed(seed, t));
        if (!verify_covering(d, limits).covered) continue;
        // Covering implies the columns are pairwise distinct (equal
        // columns j,k would make e_j - e_k orthogonal to every row).
        ElementSet cols(GroupSpec::free_group(n), sample_columns(d));
        if (!is_dissociated_sums(cols, limits).dissociated)
            throw Error("internal: constructed set failed dissociation post-check");
        return ConstructResult{std::move(cols), std::move(d), n, t + 1};
    }
    throw ExhaustedTrials("no candidate passed the covering check in " +
                              std::to_string(trials) + " trials",
                          static_cast<int>(trials));
}

struct SuccessRate {
    unsigned trials = 0;
    unsigned successes = 0;
    double rate = 0;
};

// Fraction of independent candidates passing the covering check.
inline SuccessRate success_rate(unsigned m, unsigned n, unsigned trials, std::uint64_t seed,
                                const Limits& limits = Limits::defaults()) {
    if (trials < 1) throw InputError("trials must be >= 1");
    SuccessRate r;
    r.trials = trials;
    for (unsigned t = 0; t < trials; ++t) {
        RowSample d = sample_candidate(m, n, derive_seed(seed, t));
        if (verify_covering(d, limits).covered) ++r.successes;
    }
    r.rate = static_cast<double>(r.successes) / trials;
    return r;
}

}  // namespace dissoc
