#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dissoc/errors.hpp"
#include "dissoc/group.hpp"
#include "dissoc/hashstore.hpp"
#include "dissoc/limits.hpp"

namespace dissoc {

// A refutation of dissociation, in one of two equivalent shapes: a
// nonzero {-1,0,1} combination of the set that hits the identity, or a
// pair of distinct subsets with equal sums.
struct Witness {
    enum class Kind { null_combination, equal_subset_sums };

    Kind kind = Kind::null_combination;
    std::size_t set_size = 0;
    CoefficientVector c;  // null_combination form
    Mask b1 = 0, b2 = 0;  // equal_subset_sums form

    CoefficientVector as_null_combination() const {
        if (kind == Kind::null_combination) return c;
        return CoefficientVector::from_mask_pair(b1, b2, set_size);
    }
};

struct DissociationResult {
    bool dissociated = true;
    std::optional<Witness> witness;
};

inline bool validate_witness(const ElementSet& set, const Witness& w) {
    if (w.set_size != set.size()) return false;
    if (w.kind == Witness::Kind::null_combination) {
        if (w.c.size() != set.size() || w.c.is_zero()) return false;
        return combine(set, w.c).is_zero();
    }
    if (w.b1 == w.b2) return false;
    return subset_sum(set, w.b1) == subset_sum(set, w.b2);
}

namespace detail {

// Fixed-width lane packing of nonnegative free-group coordinate tuples
// into one u64, sized so that sums of up to `count` set elements never
// overflow a lane. Lane-wise add/sub then coincide with plain u64 ops.
struct PackCodec {
    std::size_t dim = 0;
    unsigned bits = 0;

    static std::optional<PackCodec> make(const GroupSpec& g, const std::vector<Element>& elems,
                                         std::size_t count) {
        if (!g.pure_free() || count == 0) return std::nullopt;
        Coord maxc = 0;
        for (const Element& e : elems) {
            for (Coord v : e.coords()) {
                if (v < 0) return std::nullopt;
                maxc = std::max(maxc, v);
            }
        }
        unsigned long long cap = static_cast<unsigned long long>(maxc) * count;
        unsigned bits = 1;
        while ((1ull << bits) - 1 < cap) {
            ++bits;
            if (bits > 62) return std::nullopt;
        }
        if (g.dimension() * bits > 63) return std::nullopt;
        return PackCodec{g.dimension(), bits};
    }

    std::uint64_t pack(const Element& e) const {
        std::uint64_t p = 0;
        for (std::size_t d = 0; d < dim; ++d)
            p |= static_cast<std::uint64_t>(e[d]) << (bits * d);
        return p;
    }
};

}  // namespace detail

// Enumerates nonzero sign-normalized {-1,0,1} coefficient vectors in
// balanced-ternary counter order and tests each combination against the
// identity. The counter value v runs 1..(3^k-1)/2 with digit i carrying
// weight 3^i; the emitted candidate is the digit vector of v, negated
// when its first nonzero digit is -1. Witnesses are therefore minimal
// in that counter order.
inline DissociationResult is_dissociated_nullcomb(const ElementSet& set,
                                                  const Limits& limits = Limits::defaults()) {
    const std::size_t k = set.size();
    if (k == 0) return {true, std::nullopt};
    if (k > limits.nullcomb_k)
        throw LimitError("set size " + std::to_string(k) + " exceeds nullcomb limit " +
                         std::to_string(limits.nullcomb_k));
    if (k > 39) throw LimitError("3^k enumeration is infeasible for k > 39");

    const GroupSpec& g = set.group();
    const std::size_t dim = g.dimension();
    const std::size_t free_rank = g.free_rank();

    std::vector<std::int8_t> digit(k, 0);
    std::vector<Coord> acc(dim, 0);
    std::size_t nonzero_coords = 0;

    auto apply = [&](std::size_t i, Coord delta) {
        const Element& x = set[i];
        for (std::size_t d = 0; d < dim; ++d) {
            Coord nv = acc[d] + delta * x[d];
            if (d >= free_rank) nv = detail::mod_reduce(nv, g.moduli()[d - free_rank]);
            if (acc[d] == 0 && nv != 0) ++nonzero_coords;
            if (acc[d] != 0 && nv == 0) --nonzero_coords;
            acc[d] = nv;
        }
    };

    std::uint64_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= 3;
    total = (total - 1) / 2;

    for (std::uint64_t v = 1; v <= total; ++v) {
        std::size_t i = 0;
        while (digit[i] == 1) {
            digit[i] = -1;
            apply(i, -2);
            ++i;
        }
        digit[i] += 1;
        apply(i, 1);

        if (nonzero_coords == 0) {
            std::vector<std::int8_t> cv(digit.begin(), digit.end());
            std::size_t first = 0;
            while (cv[first] == 0) ++first;
            if (cv[first] < 0)
                for (auto& d : cv) d = static_cast<std::int8_t>(-d);
            Witness w{Witness::Kind::null_combination, k, CoefficientVector(std::move(cv)), 0, 0};
            if (!validate_witness(set, w)) throw Error("internal: witness failed revalidation");
            return {false, w};
        }
    }
    return {true, std::nullopt};
}

// Walks all 2^k subset sums in Gray-code order (the subset at step i is
// the mask i^(i>>1), so consecutive masks differ in exactly one bit),
// keeping a sum->mask map. The first repeated sum yields the witness
// pair, with b1 the earlier subset.
inline DissociationResult is_dissociated_sums(const ElementSet& set,
                                              const Limits& limits = Limits::defaults()) {
    const std::size_t k = set.size();
    if (k == 0) return {true, std::nullopt};
    if (k > limits.sums_k)
        throw LimitError("set size " + std::to_string(k) + " exceeds sums limit " +
                         std::to_string(limits.sums_k));
    if (k > 62) throw LimitError("2^k enumeration is infeasible for k > 62");

    const GroupSpec& g = set.group();
    const std::uint64_t steps = 1ull << k;

    auto finish = [&](std::uint64_t earlier, std::uint64_t current) -> DissociationResult {
        Witness w{Witness::Kind::equal_subset_sums, k, CoefficientVector{}, earlier, current};
        if (!validate_witness(set, w)) throw Error("internal: witness failed revalidation");
        return {false, w};
    };

    std::optional<detail::PackCodec> codec = detail::PackCodec::make(g, set.elements(), k);
    if (codec) {
        std::vector<std::uint64_t> packed(k);
        for (std::size_t i = 0; i < k; ++i) packed[i] = codec->pack(set[i]);
        detail::U64Map seen(std::min<std::uint64_t>(steps, 1ull << 20));
        seen.insert_or_get(0, 0);
        std::uint64_t cur = 0, mask = 0;
        for (std::uint64_t i = 1; i < steps; ++i) {
            std::uint64_t next = i ^ (i >> 1);
            unsigned bit = static_cast<unsigned>(std::countr_zero(mask ^ next));
            if (next & (1ull << bit))
                cur += packed[bit];
            else
                cur -= packed[bit];
            mask = next;
            if (const std::uint64_t* prev = seen.insert_or_get(cur, mask)) return finish(*prev, mask);
        }
        return {true, std::nullopt};
    }

    const std::size_t dim = g.dimension();
    const std::size_t free_rank = g.free_rank();
    detail::FlatStore seen(dim, true, std::min<std::uint64_t>(steps, 1ull << 20));
    std::vector<Coord> cur(dim, 0);
    seen.insert(cur.data(), 0);
    std::uint64_t mask = 0;
    for (std::uint64_t i = 1; i < steps; ++i) {
        std::uint64_t next = i ^ (i >> 1);
        unsigned bit = static_cast<unsigned>(std::countr_zero(mask ^ next));
        Coord sign = (next & (1ull << bit)) ? 1 : -1;
        const Element& x = set[bit];
        for (std::size_t d = 0; d < dim; ++d) {
            cur[d] += sign * x[d];
            if (d >= free_rank) cur[d] = detail::mod_reduce(cur[d], g.moduli()[d - free_rank]);
        }
        mask = next;
        std::int64_t at = seen.find(cur.data());
        if (at >= 0) return finish(seen.value(static_cast<std::size_t>(at)), mask);
        seen.insert(cur.data(), mask);
    }
    return {true, std::nullopt};
}

// Incremental dissociation state: holds a base and its full subset-sum
// table, so extending by one element costs O(2^|base|) membership
// probes instead of a fresh 2^(k+1) enumeration. The base stays
// dissociated at all times; try_add(x) commits exactly when sums and
// sums+x are disjoint, which is equivalent to base+x being dissociated.
class SumLedger {
  public:
    explicit SumLedger(GroupSpec group, const Limits& limits = Limits::defaults())
        : group_(std::move(group)),
          limits_(limits),
          generic_(group_.dimension(), false, 16) {
        std::vector<Coord> zero(group_.dimension(), 0);
        generic_.insert(zero.data());
        packed_mode_ = group_.pure_free();
        if (packed_mode_) {
            // Spend the whole 63-bit budget: wider lanes admit larger
            // coordinates, and narrow groups (dim 1) get near-full range.
            unsigned bits = static_cast<unsigned>(63 / group_.dimension());
            std::size_t cap = limits_.ledger_k == 0 ? 1 : limits_.ledger_k;
            if (bits == 0 || (bits < 63 && ((1ull << bits) - 1) < cap))
                packed_mode_ = false;
            else
                codec_ = detail::PackCodec{group_.dimension(), bits};
        }
        if (packed_mode_) {
            packed_sums_.push_back(0);
            packed_set_.insert(0);
        }
    }

    const GroupSpec& group() const { return group_; }
    std::size_t size() const { return base_.size(); }
    std::uint64_t sum_count() const { return 1ull << base_.size(); }
    const std::vector<Element>& base() const { return base_; }

    ElementSet base_set() const { return ElementSet(group_, base_); }

    // True iff base+x would still be dissociated. Does not commit.
    bool can_add(const Element& x) const {
        check_element(x);
        if (packed_mode_ && packable(x)) {
            std::uint64_t px = codec_.pack(x);
            for (std::uint64_t s : packed_sums_)
                if (packed_set_.contains(s + px)) return false;
            return true;
        }
        if (packed_mode_) {
            // x leaves the packed range; a shifted sum s+x can only
            // collide with a stored sum when it still packs, so probe
            // just those.
            std::vector<Coord> tmp(group_.dimension());
            for (std::uint64_t s : packed_sums_) {
                if (!shift_packs(s, x, tmp)) continue;
                if (packed_set_.contains(pack_coords(tmp))) return false;
            }
            return true;
        }
        std::vector<Coord> tmp(group_.dimension());
        for (std::size_t e = 0; e < generic_.size(); ++e) {
            add_coords(generic_.entry(e), x, tmp);
            if (generic_.contains(tmp.data())) return false;
        }
        return true;
    }

    // Commits x when the extension stays dissociated; returns whether it
    // did. Throws LimitError once the base is at capacity.
    bool try_add(const Element& x) {
        if (base_.size() >= limits_.ledger_k)
            throw LimitError("ledger base size limit " + std::to_string(limits_.ledger_k) +
                             " reached");
        check_element(x);
        Coord budget = magnitude_budget_ + x.max_abs();
        if (budget >= kCoordBudget / 2)
            throw LimitError("coordinate magnitude budget exhausted");
        if (!can_add(x)) return false;
        if (packed_mode_ && !packable(x)) demote();
        if (packed_mode_) {
            std::uint64_t px = codec_.pack(x);
            std::size_t n = packed_sums_.size();
            packed_sums_.reserve(2 * n);
            for (std::size_t i = 0; i < n; ++i) {
                std::uint64_t s = packed_sums_[i] + px;
                packed_sums_.push_back(s);
                packed_set_.insert(s);
            }
        } else {
            std::vector<Coord> tmp(group_.dimension());
            std::size_t n = generic_.size();
            for (std::size_t e = 0; e < n; ++e) {
                add_coords(generic_.entry(e), x, tmp);
                generic_.insert(tmp.data());
            }
        }
        base_.push_back(x);
        magnitude_budget_ = budget;
        return true;
    }

    // Removes the most recently added element, shrinking the sum table
    // back to its previous half.
    void pop() {
        if (base_.empty()) throw Error("pop on empty ledger");
        if (packed_mode_) {
            packed_sums_.resize(packed_sums_.size() / 2);
            packed_set_.rebuild(packed_sums_.begin(), packed_sums_.end());
        } else {
            generic_.truncate(generic_.size() / 2);
        }
        magnitude_budget_ -= base_.back().max_abs();
        base_.pop_back();
    }

  private:
    void check_element(const Element& x) const {
        if (x.dimension() != group_.dimension())
            throw InputError("element dimension does not match ledger group");
    }
    // Coordinates small enough that ledger_k of them plus one probe
    // candidate sum within a lane, so lane arithmetic never carries.
    bool packable(const Element& x) const {
        Coord lane_max = lane_limit();
        Coord per_elem = lane_max / (static_cast<Coord>(limits_.ledger_k) + 1);
        for (std::size_t d = 0; d < group_.dimension(); ++d)
            if (x[d] < 0 || x[d] > per_elem) return false;
        return true;
    }
    Coord lane_limit() const {
        return static_cast<Coord>((codec_.bits >= 63 ? ~0ull >> 1 : (1ull << codec_.bits) - 1));
    }
    bool shift_packs(std::uint64_t s, const Element& x, std::vector<Coord>& out) const {
        Coord lane_max = lane_limit();
        std::uint64_t mask = codec_.bits >= 64 ? ~0ull : (1ull << codec_.bits) - 1;
        for (std::size_t d = 0; d < group_.dimension(); ++d) {
            Coord sd = static_cast<Coord>((s >> (codec_.bits * d)) & mask);
            // Guard before adding: sd + x[d] may exceed int64 range.
            if (x[d] > 0 && sd > lane_max - x[d]) return false;
            Coord v = sd + x[d];
            if (v < 0 || v > lane_max) return false;
            out[d] = v;
        }
        return true;
    }
    std::uint64_t pack_coords(const std::vector<Coord>& c) const {
        std::uint64_t p = 0;
        for (std::size_t d = 0; d < c.size(); ++d)
            p |= static_cast<std::uint64_t>(c[d]) << (codec_.bits * d);
        return p;
    }
    void add_coords(const Coord* s, const Element& x, std::vector<Coord>& out) const {
        for (std::size_t d = 0; d < group_.dimension(); ++d) {
            out[d] = s[d] + x[d];
            if (d >= group_.free_rank())
                out[d] = detail::mod_reduce(out[d], group_.moduli()[d - group_.free_rank()]);
        }
    }
    void demote() {
        std::vector<Coord> tmp(group_.dimension());
        generic_ = detail::FlatStore(group_.dimension(), false, packed_sums_.size() * 2);
        for (std::uint64_t s : packed_sums_) {
            for (std::size_t d = 0; d < group_.dimension(); ++d)
                tmp[d] = static_cast<Coord>((s >> (codec_.bits * d)) & ((1ull << codec_.bits) - 1));
            generic_.insert(tmp.data());
        }
        packed_sums_.clear();
        packed_mode_ = false;
    }

    GroupSpec group_;
    Limits limits_;
    std::vector<Element> base_;
    Coord magnitude_budget_ = 0;

    bool packed_mode_ = false;
    detail::PackCodec codec_{};
    std::vector<std::uint64_t> packed_sums_;
    detail::U64Set packed_set_;
    detail::FlatStore generic_;
};

}  // namespace dissoc
