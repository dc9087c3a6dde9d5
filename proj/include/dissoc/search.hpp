#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dissoc/basis.hpp"
#include "dissoc/dissociation.hpp"
#include "dissoc/errors.hpp"
#include "dissoc/exactmath.hpp"
#include "dissoc/group.hpp"
#include "dissoc/limits.hpp"
#include "dissoc/rng.hpp"

namespace dissoc {

struct SearchResult {
    ElementSet best;
    std::size_t size = 0;
    std::uint64_t nodes_visited = 0;
    // True when the result is exact: the tree was explored in full, or
    // cut off early only by the proven subset-sum counting cap.
    bool exhausted = false;
};

namespace detail {

// Largest size L <= limit a dissociated subset can reach given how many
// distinct subset sums the ambient group admits: 2^L <= prod over free
// coordinates (L (max+ + max-) + 1) * prod of moduli.
inline std::size_t counting_cap(const GroupSpec& g, const std::vector<Element>& elems,
                                std::size_t limit) {
    std::vector<Coord> pos(g.dimension(), 0), neg(g.dimension(), 0);
    for (const Element& e : elems)
        for (std::size_t d = 0; d < g.free_rank(); ++d) {
            pos[d] = std::max(pos[d], e[d]);
            neg[d] = std::max(neg[d], -e[d]);
        }
    std::size_t cap = 0;
    for (std::size_t L = 1; L <= limit; ++L) {
        BigInt space = 1;
        for (std::size_t d = 0; d < g.free_rank(); ++d)
            space *= BigInt(L) * (pos[d] + neg[d]) + 1;
        for (Coord m : g.moduli()) space *= m;
        if ((BigInt(1) << L) <= space) cap = L;
    }
    return cap;
}

struct DfsState {
    const std::vector<Element>& elems;
    SumLedger ledger;
    std::vector<Element> best;
    std::size_t cap;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    bool budget_hit = false;
    bool cap_reached = false;
};

inline void dfs_extend(DfsState& st, std::size_t start) {
    if (st.ledger.size() > st.best.size()) {
        st.best = st.ledger.base();
        if (st.best.size() >= st.cap) {
            st.cap_reached = true;
            return;
        }
    }
    for (std::size_t i = start; i < st.elems.size(); ++i) {
        if (st.ledger.size() + (st.elems.size() - i) <= st.best.size()) return;
        if (st.nodes >= st.budget) {
            st.budget_hit = true;
            return;
        }
        ++st.nodes;
        if (st.ledger.try_add(st.elems[i])) {
            dfs_extend(st, i + 1);
            st.ledger.pop();
            if (st.budget_hit || st.cap_reached) return;
        }
    }
}

}  // namespace detail

// Exhaustive search for a largest dissociated subset of A. Elements are
// scanned in (coordinate magnitude sum, lexicographic) order with a
// greedy warm start; branches are cut when the untried suffix cannot
// beat the incumbent, and the whole search stops once the incumbent
// meets the subset-sum counting cap.
inline SearchResult max_dissociated(const ElementSet& A, std::uint64_t budget = 100000000,
                                    const Limits& limits = Limits::defaults()) {
    std::vector<Element> elems(A.elements());
    auto magnitude = [](const Element& e) {
        Coord s = 0;
        for (std::size_t d = 0; d < e.dimension(); ++d) s += e[d] < 0 ? -e[d] : e[d];
        return s;
    };
    std::stable_sort(elems.begin(), elems.end(), [&](const Element& a, const Element& b) {
        Coord ma = magnitude(a), mb = magnitude(b);
        return ma != mb ? ma < mb : a < b;
    });

    detail::DfsState st{elems, SumLedger(A.group(), limits), {},
                        std::min(detail::counting_cap(A.group(), elems, elems.size()),
                                 elems.size()),
                        budget};
    for (const Element& e : elems) st.ledger.try_add(e);
    st.best = st.ledger.base();
    while (st.ledger.size() > 0) st.ledger.pop();
    if (st.best.size() < st.cap) dfs_extend(st, 0);

    return SearchResult{ElementSet(A.group(), st.best), st.best.size(), st.nodes,
                        !st.budget_hit};
}

// L(n): the largest dissociated subset of the 2^n - 1 nonzero vectors
// of {0,1}^n. The root of the search is restricted to one representative
// per popcount orbit (ones in the trailing coordinates, the
// lexicographically least of its class): L is invariant under
// coordinate permutation, and permuting any optimal subset maps its
// scan-order-first element onto such a representative.
inline SearchResult largest_binary_dissociated(unsigned n, std::uint64_t budget = 100000000,
                                               const Limits& limits = Limits::defaults()) {
    if (n < 1 || n > 20) throw InputError("n must be in [1, 20]");
    GroupSpec g = GroupSpec::free_group(n);

    std::vector<Element> elems;
    std::vector<std::size_t> roots;
    for (unsigned pc = 1; pc <= n; ++pc)
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            if (static_cast<unsigned>(std::popcount(mask)) != pc) continue;
            std::vector<Coord> c(n);
            for (unsigned i = 0; i < n; ++i) c[i] = (mask >> i) & 1;
            elems.emplace_back(std::move(c));
        }
    std::stable_sort(elems.begin(), elems.end(), [](const Element& a, const Element& b) {
        Coord sa = 0, sb = 0;
        for (std::size_t d = 0; d < a.dimension(); ++d) sa += a[d];
        for (std::size_t d = 0; d < b.dimension(); ++d) sb += b[d];
        return sa != sb ? sa < sb : a < b;
    });
    for (unsigned pc = 1; pc <= n; ++pc) {
        std::vector<Coord> rep(n, 0);
        for (unsigned i = n - pc; i < n; ++i) rep[i] = 1;
        Element r(std::move(rep));
        roots.push_back(static_cast<std::size_t>(
            std::find(elems.begin(), elems.end(), r) - elems.begin()));
    }

    detail::DfsState st{elems, SumLedger(g, limits), {},
                        detail::counting_cap(g, elems, elems.size()), budget};
    {
        SumLedger greedy(g, limits);
        for (const Element& e : elems) greedy.try_add(e);
        st.best = greedy.base();
    }

    if (st.best.size() < st.cap) {
        for (std::size_t root : roots) {
            if (1 + (elems.size() - root) <= st.best.size()) break;
            if (++st.nodes > st.budget) {
                st.budget_hit = true;
                break;
            }
            if (!st.ledger.try_add(elems[root]))
                throw Error("internal: nonzero singleton rejected");
            detail::dfs_extend(st, root + 1);
            st.ledger.pop();
            if (st.budget_hit || st.cap_reached) break;
        }
    }

    return SearchResult{ElementSet(g, st.best), st.best.size(), st.nodes, !st.budget_hit};
}

// All maximal dissociated subsets of A, in depth-first (include branch
// first, input order) traversal order. The pending list tracks elements
// skipped by choice while still addable; it is re-filtered after every
// inclusion, since blocked elements stay blocked, and a leaf is maximal
// exactly when nothing is pending.
inline std::vector<ElementSet> enumerate_maximal(const ElementSet& A,
                                                 const Limits& limits = Limits::defaults()) {
    if (A.size() > limits.enumerate_k)
        throw LimitError("set size " + std::to_string(A.size()) +
                         " exceeds enumeration limit " + std::to_string(limits.enumerate_k));

    std::vector<ElementSet> out;
    SumLedger ledger(A.group(), limits);
    std::vector<std::size_t> pending;

    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == A.size()) {
            if (pending.empty()) out.push_back(ledger.base_set());
            return;
        }
        if (!ledger.can_add(A[i])) {
            self(self, i + 1);
            return;
        }
        ledger.try_add(A[i]);
        std::vector<std::size_t> saved = pending;
        std::erase_if(pending, [&](std::size_t p) { return !ledger.can_add(A[p]); });
        self(self, i + 1);
        ledger.pop();
        pending = std::move(saved);

        pending.push_back(i);
        self(self, i + 1);
        pending.pop_back();
    };
    rec(rec, 0);

    for (const ElementSet& s : out)
        if (!is_maximal_in(s, A, limits))
            throw Error("internal: enumerated subset failed the maximality check");
    return out;
}

// Randomized Theorem 2 stress corpus: `instances` sets drawn from the
// given group, every ordered pair of maximal dissociated subsets put
// through the bound checks. The theorems admit no exceptions, so any
// violation is an implementation bug.
struct StressSpec {
    GroupSpec group;
    std::size_t instances = 100;
    std::size_t set_size = 8;
    Coord value_range = 100;  // free coordinates drawn from [1, value_range]
    std::uint64_t seed = kDefaultSeed;
};

struct StressReport {
    std::size_t instances = 0;
    std::size_t pairs_checked = 0;
    std::size_t violations = 0;
    double min_ratio = 0;  // |Lambda| / |M| over all ordered pairs
    double max_ratio = 0;
};

inline ElementSet random_set(const GroupSpec& g, std::size_t size, Coord value_range,
                             std::uint64_t seed) {
    if (value_range < 1) throw InputError("value range must be >= 1");
    SplitMix64 rng(seed);
    std::vector<Element> elems;
    std::size_t attempts = 0;
    while (elems.size() < size) {
        if (++attempts > 1000 * size + 1000)
            throw InputError("value range too small to draw the requested set");
        std::vector<Coord> c(g.dimension());
        for (std::size_t d = 0; d < g.free_rank(); ++d)
            c[d] = 1 + static_cast<Coord>(rng.next_below(static_cast<std::uint64_t>(value_range)));
        for (std::size_t j = 0; j < g.moduli().size(); ++j)
            c[g.free_rank() + j] =
                static_cast<Coord>(rng.next_below(static_cast<std::uint64_t>(g.moduli()[j])));
        Element e(std::move(c));
        if (e.is_zero() || std::find(elems.begin(), elems.end(), e) != elems.end()) continue;
        elems.push_back(std::move(e));
    }
    return ElementSet(g, std::move(elems));
}

inline StressReport theorem2_stress(const StressSpec& spec,
                                    const Limits& limits = Limits::defaults()) {
    if (spec.instances < 1 || spec.set_size < 1)
        throw InputError("stress needs at least one instance and a nonempty set size");
    StressReport rep;
    rep.instances = spec.instances;
    bool first = true;
    for (std::size_t inst = 0; inst < spec.instances; ++inst) {
        ElementSet A = random_set(spec.group, spec.set_size, spec.value_range,
                                  derive_seed(spec.seed, inst));
        std::vector<ElementSet> maximal = enumerate_maximal(A, limits);
        for (const ElementSet& lambda : maximal)
            for (const ElementSet& mset : maximal) {
                BoundReport2 b = compute_bound_report2(lambda.size(), mset.size());
                ++rep.pairs_checked;
                if (!(b.counting_ok && b.upper_proof_ok && b.star_ok && b.pair_cap_ok))
                    ++rep.violations;
                double ratio = static_cast<double>(lambda.size()) / mset.size();
                if (first || ratio < rep.min_ratio) rep.min_ratio = ratio;
                if (first || ratio > rep.max_ratio) rep.max_ratio = ratio;
                first = false;
            }
    }
    return rep;
}

}  // namespace dissoc
