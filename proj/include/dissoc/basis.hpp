#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
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

enum class ScanOrder { input, lex, reverse, random };

inline ScanOrder parse_scan_order(const std::string& s) {
    if (s == "input") return ScanOrder::input;
    if (s == "lex") return ScanOrder::lex;
    if (s == "reverse") return ScanOrder::reverse;
    if (s == "random") return ScanOrder::random;
    throw InputError("unknown scan order: " + s);
}

// Index permutation of A under the named order; `seed` only matters for
// the random order (Fisher-Yates over SplitMix64).
inline std::vector<std::size_t> make_scan_order(const ElementSet& A, ScanOrder order,
                                                std::uint64_t seed = kDefaultSeed) {
    std::vector<std::size_t> idx(A.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    switch (order) {
        case ScanOrder::input:
            break;
        case ScanOrder::lex:
            std::stable_sort(idx.begin(), idx.end(),
                             [&](std::size_t a, std::size_t b) { return A[a] < A[b]; });
            break;
        case ScanOrder::reverse:
            std::reverse(idx.begin(), idx.end());
            break;
        case ScanOrder::random: {
            SplitMix64 rng(seed);
            for (std::size_t i = idx.size(); i > 1; --i)
                std::swap(idx[i - 1], idx[rng.next_below(i)]);
            break;
        }
    }
    return idx;
}

// Scans A in the given index order, keeping every element whose addition
// leaves the set dissociated. Non-addability never un-happens as the
// base grows, so the greedy result is maximal in A; this is still
// re-verified before returning.
inline ElementSet greedy_maximal(const ElementSet& A, const std::vector<std::size_t>& order,
                                 const Limits& limits = Limits::defaults()) {
    if (order.size() != A.size())
        throw InputError("order must be a permutation of the set's indices");
    std::vector<bool> seen(A.size(), false);
    for (std::size_t i : order) {
        if (i >= A.size() || seen[i])
            throw InputError("order must be a permutation of the set's indices");
        seen[i] = true;
    }

    SumLedger ledger(A.group(), limits);
    for (std::size_t i : order) ledger.try_add(A[i]);
    for (std::size_t i = 0; i < A.size(); ++i)
        if (ledger.can_add(A[i])) throw Error("internal: greedy result not maximal");
    return ledger.base_set();
}

inline ElementSet greedy_maximal(const ElementSet& A, ScanOrder order = ScanOrder::input,
                                 std::uint64_t seed = kDefaultSeed,
                                 const Limits& limits = Limits::defaults()) {
    return greedy_maximal(A, make_scan_order(A, order, seed), limits);
}

// True iff lambda is dissociated and no element of A \ lambda can be
// added. Throws when lambda is not a subset of A.
inline bool is_maximal_in(const ElementSet& lambda, const ElementSet& A,
                          const Limits& limits = Limits::defaults()) {
    for (const Element& e : lambda)
        if (!A.contains(e)) throw InputError("lambda is not a subset of A");

    SumLedger ledger(A.group(), limits);
    for (const Element& e : lambda)
        if (!ledger.try_add(e)) return false;
    for (const Element& e : A)
        if (!lambda.contains(e) && ledger.can_add(e)) return false;
    return true;
}

namespace detail {

// Odometer over {-1,0,1}^w in lexicographic order (last position moves
// fastest), maintaining the running combination sum. Returns false once
// the space is exhausted.
class TernaryOdometer {
  public:
    TernaryOdometer(const ElementSet& set, std::size_t lo, std::size_t hi)
        : set_(set), lo_(lo), c_(hi - lo, -1), sum_(set.group().dimension(), 0) {
        for (std::size_t i = lo; i < hi; ++i) accumulate(set.group(), sum_, set[i], -1);
    }

    const std::vector<std::int8_t>& coeffs() const { return c_; }
    const std::vector<Coord>& sum() const { return sum_; }

    bool advance() {
        std::size_t p = c_.size();
        while (p > 0 && c_[p - 1] == 1) {
            --p;
            c_[p] = -1;
            accumulate(set_.group(), sum_, set_[lo_ + p], -2);
        }
        if (p == 0) return false;
        ++c_[p - 1];
        accumulate(set_.group(), sum_, set_[lo_ + p - 1], +1);
        return true;
    }

  private:
    const ElementSet& set_;
    std::size_t lo_;
    std::vector<std::int8_t> c_;
    std::vector<Coord> sum_;
};

}  // namespace detail

// Finds c in {-1,0,1}^|lambda| with combine(lambda, c) = a, by meet in
// the middle: a map of second-half sums (3^ceil(k/2) entries, keeping
// the lexicographically least coefficients per sum), probed while the
// first half is walked in lexicographic order. The first probe hit
// therefore carries the lexicographically least c overall.
inline CoefficientVector decompose(const Element& a, const ElementSet& lambda,
                                   const Limits& limits = Limits::defaults()) {
    const std::size_t k = lambda.size();
    if (a.dimension() != lambda.group().dimension())
        throw InputError("target dimension does not match the set's group");
    if (a.max_abs() >= kCoordBudget / 2) throw InputError("target coordinate too large");
    if (k > limits.decompose_k)
        throw LimitError("set size " + std::to_string(k) + " exceeds decompose limit " +
                         std::to_string(limits.decompose_k));

    const GroupSpec& g = lambda.group();
    Element target = reduce(g, a.coords());
    if (k == 0) {
        if (target.is_zero()) return CoefficientVector::zeros(0);
        throw NoRepresentation("target is not representable over the empty set");
    }

    const std::size_t h1 = k / 2;  // first-half width; second half is the ceil

    std::unordered_map<Element, std::vector<std::int8_t>, ElementHash> second;
    detail::TernaryOdometer odo2(lambda, h1, k);
    do {
        second.try_emplace(Element(odo2.sum()), odo2.coeffs());
    } while (odo2.advance());

    detail::TernaryOdometer odo1(lambda, 0, h1);
    do {
        std::vector<Coord> rest = target.coords();
        const std::vector<Coord>& s1 = odo1.sum();
        for (std::size_t d = 0; d < rest.size(); ++d) rest[d] -= s1[d];
        auto it = second.find(reduce(g, std::move(rest)));
        if (it != second.end()) {
            std::vector<std::int8_t> c(odo1.coeffs());
            c.insert(c.end(), it->second.begin(), it->second.end());
            CoefficientVector cv(std::move(c));
            if (!(combine(lambda, cv) == target))
                throw Error("internal: decomposition failed revalidation");
            return cv;
        }
    } while (odo1.advance());

    throw NoRepresentation("target has no {-1,0,1} representation over the set");
}

// Theorem-style size comparison of two maximal dissociated subsets
// Lambda and M of a common set. The logarithmic bounds are evaluated in
// doubles for display; every ok flag that admits an integer-power
// restatement is decided exactly:
//   counting_ok  <=>  2^|M| <= (2|M|+1)^|Lambda|   <=>  lower <= |Lambda|
//   star_ok      <=>  2^|Lambda| <= (2|Lambda|+1)^|M|
//   pair_cap_ok  <=>  2|Lambda|+1 <= 3^|M|
struct BoundReport2 {
    std::size_t size_lambda = 0;
    std::size_t size_m = 0;
    double lower = 0;        // |M| / log2(2|M|+1)
    double upper = 0;        // |M| (log2(2|M|) + log2 log2(2|M|) + 2)
    double upper_proof = 0;  // same with the tighter + log2(5/2) term
    bool counting_ok = false;
    bool upper_ok = false;
    bool upper_proof_ok = false;
    bool star_ok = false;
    bool pair_cap_ok = false;
    bool holds = false;  // counting_ok && upper_ok
};

inline BoundReport2 compute_bound_report2(std::size_t size_lambda, std::size_t size_m) {
    if (size_lambda == 0 || size_m == 0)
        throw InputError("bound report requires nonempty subsets");
    BoundReport2 r;
    r.size_lambda = size_lambda;
    r.size_m = size_m;
    const double m = static_cast<double>(size_m);
    const double l2m = std::log2(2 * m);
    r.lower = m / std::log2(2 * m + 1);
    r.upper = m * (l2m + std::log2(l2m) + 2);
    r.upper_proof = m * (l2m + std::log2(l2m) + std::log2(2.5));
    r.counting_ok = pow2_le_pow(size_m, 2 * size_m + 1, size_lambda);
    r.upper_ok = static_cast<double>(size_lambda) < r.upper;
    r.upper_proof_ok = static_cast<double>(size_lambda) < r.upper_proof;
    r.star_ok = pow2_le_pow(size_lambda, 2 * size_lambda + 1, size_m);
    r.pair_cap_ok = ternary_capacity_holds(size_lambda, size_m);
    r.holds = r.counting_ok && r.upper_ok;
    return r;
}

// Validates that lambda and mset are both maximal dissociated subsets of
// A, then compares their sizes.
inline BoundReport2 check_theorem2(const ElementSet& lambda, const ElementSet& mset,
                                   const ElementSet& A,
                                   const Limits& limits = Limits::defaults()) {
    if (A.subset_of_zero())
        throw InputError("A must contain a nonzero element");
    if (!is_maximal_in(lambda, A, limits))
        throw InputError("lambda is not a maximal dissociated subset of A");
    if (!is_maximal_in(mset, A, limits))
        throw InputError("M is not a maximal dissociated subset of A");
    return compute_bound_report2(lambda.size(), mset.size());
}

}  // namespace dissoc
