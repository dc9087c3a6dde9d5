#pragma once

#include <cstdint>
#include <cstring>
#include <vector>

#include "dissoc/group.hpp"

namespace dissoc::detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Open-addressing set of packed-sum keys. Keys must stay below 2^63, so
// the all-ones sentinel can mark empty slots.
class U64Set {
  public:
    static constexpr std::uint64_t kEmpty = ~0ull;

    explicit U64Set(std::size_t expected = 16) { rehash(slot_count_for(expected)); }

    std::size_t size() const { return count_; }

    bool contains(std::uint64_t key) const {
        std::size_t i = mix64(key) & mask_;
        while (slots_[i] != kEmpty) {
            if (slots_[i] == key) return true;
            i = (i + 1) & mask_;
        }
        return false;
    }

    // Returns false if the key was already present.
    bool insert(std::uint64_t key) {
        if ((count_ + 1) * 10 > slots_.size() * 7) rehash(slots_.size() * 2);
        std::size_t i = mix64(key) & mask_;
        while (slots_[i] != kEmpty) {
            if (slots_[i] == key) return false;
            i = (i + 1) & mask_;
        }
        slots_[i] = key;
        ++count_;
        return true;
    }

    template <class It>
    void rebuild(It first, It last) {
        std::fill(slots_.begin(), slots_.end(), kEmpty);
        count_ = 0;
        for (It it = first; it != last; ++it) insert(*it);
    }

  private:
    static std::size_t slot_count_for(std::size_t expected) {
        std::size_t s = 16;
        while (s * 7 < expected * 10) s *= 2;
        return s;
    }
    void rehash(std::size_t new_slots) {
        std::vector<std::uint64_t> old = std::move(slots_);
        slots_.assign(new_slots, kEmpty);
        mask_ = new_slots - 1;
        count_ = 0;
        for (std::uint64_t k : old)
            if (k != kEmpty) insert(k);
    }

    std::vector<std::uint64_t> slots_;
    std::size_t mask_ = 0;
    std::size_t count_ = 0;
};

// Open-addressing map from packed-sum key to a 64-bit payload (the
// subset mask that first produced the sum).
class U64Map {
  public:
    static constexpr std::uint64_t kEmpty = ~0ull;

    explicit U64Map(std::size_t expected = 16) {
        std::size_t s = 16;
        while (s * 7 < expected * 10) s *= 2;
        keys_.assign(s, kEmpty);
        vals_.assign(s, 0);
        mask_ = s - 1;
    }

    // Inserts key->value; if the key exists, leaves the stored value and
    // returns a pointer to it, otherwise returns nullptr.
    const std::uint64_t* insert_or_get(std::uint64_t key, std::uint64_t value) {
        if ((count_ + 1) * 10 > keys_.size() * 7) rehash();
        std::size_t i = mix64(key) & mask_;
        while (keys_[i] != kEmpty) {
            if (keys_[i] == key) return &vals_[i];
            i = (i + 1) & mask_;
        }
        keys_[i] = key;
        vals_[i] = value;
        ++count_;
        return nullptr;
    }

  private:
    void rehash() {
        std::vector<std::uint64_t> ok = std::move(keys_), ov = std::move(vals_);
        keys_.assign(ok.size() * 2, kEmpty);
        vals_.assign(ok.size() * 2, 0);
        mask_ = keys_.size() - 1;
        count_ = 0;
        for (std::size_t j = 0; j < ok.size(); ++j)
            if (ok[j] != kEmpty) insert_or_get(ok[j], ov[j]);
    }

    std::vector<std::uint64_t> keys_, vals_;
    std::size_t mask_ = 0;
    std::size_t count_ = 0;
};

// Open-addressing store of dim-strided coordinate tuples with an
// optional 64-bit payload per entry. Entries live in one flat array in
// insertion order, so a ledger can drop the newest half and rebuild.
class FlatStore {
  public:
    FlatStore(std::size_t dim, bool with_values, std::size_t expected = 16)
        : dim_(dim), with_values_(with_values) {
        std::size_t s = 16;
        while (s * 7 < expected * 10) s *= 2;
        table_.assign(s, -1);
        mask_ = s - 1;
    }

    std::size_t size() const { return count_; }
    const Coord* entry(std::size_t i) const { return data_.data() + i * dim_; }
    std::uint64_t value(std::size_t i) const { return values_[i]; }

    bool contains(const Coord* p) const { return find(p) >= 0; }

    // Entry index if present, else -1.
    std::int64_t find(const Coord* p) const {
        std::size_t i = hash_tuple(p) & mask_;
        while (table_[i] >= 0) {
            if (equal_tuple(p, entry(table_[i]))) return table_[i];
            i = (i + 1) & mask_;
        }
        return -1;
    }

    // Returns false if an equal tuple was already stored.
    bool insert(const Coord* p, std::uint64_t value = 0) {
        if ((count_ + 1) * 10 > table_.size() * 7) rehash();
        std::size_t i = hash_tuple(p) & mask_;
        while (table_[i] >= 0) {
            if (equal_tuple(p, entry(table_[i]))) return false;
            i = (i + 1) & mask_;
        }
        table_[i] = static_cast<std::int32_t>(count_);
        data_.insert(data_.end(), p, p + dim_);
        if (with_values_) values_.push_back(value);
        ++count_;
        return true;
    }

    // Keeps the first n entries, drops the rest.
    void truncate(std::size_t n) {
        data_.resize(n * dim_);
        if (with_values_) values_.resize(n);
        count_ = n;
        std::fill(table_.begin(), table_.end(), -1);
        std::size_t saved = count_;
        count_ = 0;
        for (std::size_t e = 0; e < saved; ++e) {
            const Coord* p = data_.data() + e * dim_;
            std::size_t i = hash_tuple(p) & mask_;
            while (table_[i] >= 0) i = (i + 1) & mask_;
            table_[i] = static_cast<std::int32_t>(e);
            ++count_;
        }
    }

  private:
    std::uint64_t hash_tuple(const Coord* p) const {
        std::uint64_t h = 0x9E3779B97F4A7C15ull;
        for (std::size_t d = 0; d < dim_; ++d)
            h = mix64(h ^ static_cast<std::uint64_t>(p[d]));
        return h;
    }
    bool equal_tuple(const Coord* a, const Coord* b) const {
        return std::memcmp(a, b, dim_ * sizeof(Coord)) == 0;
    }
    void rehash() {
        table_.assign(table_.size() * 2, -1);
        mask_ = table_.size() - 1;
        for (std::size_t e = 0; e < count_; ++e) {
            const Coord* p = entry(e);
            std::size_t i = hash_tuple(p) & mask_;
            while (table_[i] >= 0) i = (i + 1) & mask_;
            table_[i] = static_cast<std::int32_t>(e);
        }
    }

    std::size_t dim_;
    bool with_values_;
    std::vector<Coord> data_;
    std::vector<std::uint64_t> values_;
    std::vector<std::int32_t> table_;
    std::size_t mask_ = 0;
    std::size_t count_ = 0;
};

}  // namespace dissoc::detail
