#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "dissoc/errors.hpp"

namespace dissoc {

using Coord = std::int64_t;
using Mask = std::uint64_t;

// Safe magnitude bound for free coordinates: every coordinate c of a
// k-element set must satisfy |c| * (k+1) < 2^62, so all subset sums and
// {-1,0,1} combinations stay well inside the int64 range.
inline constexpr Coord kCoordBudget = Coord{1} << 62;

// Ambient abelian group: Z^free_rank x Z_{m_1} x ... x Z_{m_j}.
// Free coordinates come first, torsion coordinates after, in the order
// the moduli were given.
class GroupSpec {
  public:
    GroupSpec(std::size_t free_rank, std::vector<Coord> moduli)
        : free_rank_(free_rank), moduli_(std::move(moduli)) {
        if (free_rank_ + moduli_.size() == 0)
            throw InputError("group must have dimension >= 1");
        for (Coord m : moduli_) {
            if (m < 2) throw InputError("modulus must be >= 2");
            if (m >= kCoordBudget / 2) throw InputError("modulus too large");
        }
    }

    static GroupSpec free_group(std::size_t n) { return GroupSpec(n, {}); }
    static GroupSpec torsion(Coord e, std::size_t k) {
        return GroupSpec(0, std::vector<Coord>(k, e));
    }

    std::size_t free_rank() const { return free_rank_; }
    const std::vector<Coord>& moduli() const { return moduli_; }
    std::size_t dimension() const { return free_rank_ + moduli_.size(); }

    bool pure_free() const { return moduli_.empty(); }
    bool pure_torsion() const { return free_rank_ == 0; }
    bool homocyclic() const {
        if (!pure_torsion()) return false;
        for (Coord m : moduli_)
            if (m != moduli_.front()) return false;
        return true;
    }

    // exp(G) = lcm of the moduli; defined only for pure torsion groups.
    Coord exponent() const {
        if (!pure_torsion())
            throw InputError("exponent is infinite: group has free rank > 0");
        Coord e = 1;
        for (Coord m : moduli_) {
            Coord g = std::gcd(e, m);
            if (e / g > kCoordBudget / m)
                throw InputError("exponent overflows the safe integer range");
            e = e / g * m;
        }
        return e;
    }

    bool operator==(const GroupSpec& o) const = default;

  private:
    std::size_t free_rank_;
    std::vector<Coord> moduli_;
};

// A group element in canonical form: torsion coordinates reduced into
// [0, modulus). Elements are plain coordinate vectors; all arithmetic
// goes through GroupSpec so reduction cannot be skipped.
class Element {
  public:
    Element() = default;
    explicit Element(std::vector<Coord> coords) : coords_(std::move(coords)) {}

    const std::vector<Coord>& coords() const { return coords_; }
    Coord operator[](std::size_t i) const { return coords_[i]; }
    std::size_t dimension() const { return coords_.size(); }

    bool is_zero() const {
        return std::all_of(coords_.begin(), coords_.end(),
                           [](Coord c) { return c == 0; });
    }

    Coord max_abs() const {
        Coord m = 0;
        for (Coord c : coords_) m = std::max(m, c < 0 ? -c : c);
        return m;
    }

    auto operator<=>(const Element& o) const {
        return std::lexicographical_compare_three_way(
            coords_.begin(), coords_.end(), o.coords_.begin(), o.coords_.end());
    }
    bool operator==(const Element& o) const { return coords_ == o.coords_; }

  private:
    std::vector<Coord> coords_;
};

struct ElementHash {
    std::size_t operator()(const Element& e) const {
        std::uint64_t h = 0x9E3779B97F4A7C15ull;
        for (Coord c : e.coords()) {
            h ^= static_cast<std::uint64_t>(c) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
            h *= 0xFF51AFD7ED558CCDull;
        }
        return static_cast<std::size_t>(h ^ (h >> 32));
    }
};

namespace detail {

inline Coord mod_reduce(Coord v, Coord m) {
    Coord r = v % m;
    return r < 0 ? r + m : r;
}

}  // namespace detail

// --- GroupSpec element arithmetic -----------------------------------------

inline Element group_zero(const GroupSpec& g) {
    return Element(std::vector<Coord>(g.dimension(), 0));
}

inline Element reduce(const GroupSpec& g, std::vector<Coord> raw) {
    if (raw.size() != g.dimension())
        throw InputError("coordinate vector does not match group dimension");
    for (std::size_t i = 0; i < g.moduli().size(); ++i) {
        Coord& c = raw[g.free_rank() + i];
        c = detail::mod_reduce(c, g.moduli()[i]);
    }
    return Element(std::move(raw));
}

// acc += sign * x, reduced in place. Callers are responsible for keeping
// free coordinates inside the validated magnitude budget.
inline void accumulate(const GroupSpec& g, std::vector<Coord>& acc,
                       const Element& x, int sign) {
    const auto& xc = x.coords();
    for (std::size_t i = 0; i < g.free_rank(); ++i) acc[i] += sign * xc[i];
    for (std::size_t i = 0; i < g.moduli().size(); ++i) {
        std::size_t j = g.free_rank() + i;
        acc[j] = detail::mod_reduce(acc[j] + sign * xc[j], g.moduli()[i]);
    }
}

inline Element add(const GroupSpec& g, const Element& a, const Element& b) {
    std::vector<Coord> r = a.coords();
    accumulate(g, r, b, +1);
    return Element(std::move(r));
}

inline Element sub(const GroupSpec& g, const Element& a, const Element& b) {
    std::vector<Coord> r = a.coords();
    accumulate(g, r, b, -1);
    return Element(std::move(r));
}

inline Element neg(const GroupSpec& g, const Element& a) {
    return sub(g, group_zero(g), a);
}

// Vector over {-1,0,+1} indexed by the elements of a set. Houses both
// decomposition coefficients and covering-check vectors.
class CoefficientVector {
  public:
    CoefficientVector() = default;
    explicit CoefficientVector(std::vector<std::int8_t> c) : c_(std::move(c)) {
        for (std::int8_t v : c_)
            if (v < -1 || v > 1)
                throw InputError("coefficient outside {-1,0,1}");
    }
    static CoefficientVector zeros(std::size_t n) {
        return CoefficientVector(std::vector<std::int8_t>(n, 0));
    }
    // c = 1_{B1 \ B2} - 1_{B2 \ B1} over a set of k elements.
    static CoefficientVector from_mask_pair(Mask b1, Mask b2, std::size_t k) {
        std::vector<std::int8_t> c(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            bool in1 = (b1 >> i) & 1, in2 = (b2 >> i) & 1;
            if (in1 && !in2) c[i] = 1;
            if (in2 && !in1) c[i] = -1;
        }
        return CoefficientVector(std::move(c));
    }

    std::size_t size() const { return c_.size(); }
    std::int8_t operator[](std::size_t i) const { return c_[i]; }
    const std::vector<std::int8_t>& coeffs() const { return c_; }

    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](std::int8_t v) { return v == 0; });
    }

    CoefficientVector negated() const {
        std::vector<std::int8_t> r(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] = static_cast<std::int8_t>(-c_[i]);
        return CoefficientVector(std::move(r));
    }

    auto operator<=>(const CoefficientVector& o) const = default;

  private:
    std::vector<std::int8_t> c_;
};

// Ordered list of distinct elements of one group. Construction validates
// distinctness, dimensions, and the free-coordinate magnitude budget
// |c| * (|set|+1) < 2^62, so every later subset sum is overflow-free.
class ElementSet {
  public:
    ElementSet(GroupSpec group, std::vector<Element> elems)
        : group_(std::move(group)), elems_(std::move(elems)) {
        const std::size_t k = elems_.size();
        for (const Element& e : elems_) {
            if (e.dimension() != group_.dimension())
                throw InputError("element dimension does not match group");
            for (std::size_t i = 0; i < group_.free_rank(); ++i) {
                Coord c = e[i];
                Coord a = c < 0 ? -c : c;
                if (a >= kCoordBudget / static_cast<Coord>(k + 1))
                    throw InputError("coordinate magnitude outside safe bound");
            }
            for (std::size_t i = 0; i < group_.moduli().size(); ++i) {
                Coord c = e[group_.free_rank() + i];
                if (c < 0 || c >= group_.moduli()[i])
                    throw InputError("torsion coordinate not in canonical form");
            }
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (elems_[i] == elems_[j])
                    throw InputError("duplicate element in set");
    }

    static ElementSet from_raw(const GroupSpec& g,
                               const std::vector<std::vector<Coord>>& rows) {
        std::vector<Element> es;
        es.reserve(rows.size());
        for (const auto& r : rows) es.push_back(reduce(g, r));
        return ElementSet(g, std::move(es));
    }

    const GroupSpec& group() const { return group_; }
    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    const Element& operator[](std::size_t i) const { return elems_[i]; }
    const std::vector<Element>& elements() const { return elems_; }
    auto begin() const { return elems_.begin(); }
    auto end() const { return elems_.end(); }

    bool contains(const Element& e) const {
        return std::find(elems_.begin(), elems_.end(), e) != elems_.end();
    }

    // True iff every element is 0 (includes the empty set).
    bool subset_of_zero() const {
        return std::all_of(elems_.begin(), elems_.end(),
                           [](const Element& e) { return e.is_zero(); });
    }

  private:
    GroupSpec group_;
    std::vector<Element> elems_;
};

// Sum_i c_i * set_i in canonical form.
inline Element combine(const ElementSet& set, const CoefficientVector& c) {
    if (c.size() != set.size())
        throw InputError("coefficient vector length does not match set size");
    std::vector<Coord> acc(set.group().dimension(), 0);
    for (std::size_t i = 0; i < set.size(); ++i)
        if (c[i] != 0) accumulate(set.group(), acc, set[i], c[i]);
    return Element(std::move(acc));
}

// Sum over the elements selected by mask bit i; the empty mask yields the
// identity. Masks address sets of at most 64 elements.
inline Element subset_sum(const ElementSet& set, Mask mask) {
    if (set.size() > 64)
        throw InputError("mask-addressed subset sums require |set| <= 64");
    if (set.size() < 64 && (mask >> set.size()) != 0)
        throw InputError("mask selects outside the set");
    std::vector<Coord> acc(set.group().dimension(), 0);
    for (std::size_t i = 0; i < set.size(); ++i)
        if ((mask >> i) & 1) accumulate(set.group(), acc, set[i], +1);
    return Element(std::move(acc));
}

inline Element subset_sum(const ElementSet& set, const std::vector<bool>& mask) {
    if (mask.size() != set.size())
        throw InputError("mask length does not match set size");
    std::vector<Coord> acc(set.group().dimension(), 0);
    for (std::size_t i = 0; i < set.size(); ++i)
        if (mask[i]) accumulate(set.group(), acc, set[i], +1);
    return Element(std::move(acc));
}

}  // namespace dissoc
