#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>

namespace dissoc {

// Size limits guarding the exponential-cost operations. Defaults are
// sized so worst-case runs finish in seconds on a desktop. The
// DISSOC_MAX_K environment variable, when set, replaces every limit
// below; individual limits can also be set programmatically or per-run
// via CLI flags.
struct Limits {
    std::size_t nullcomb_k = 16;   // 3^k coefficient enumeration
    std::size_t sums_k = 24;       // 2^k subset-sum enumeration
    std::size_t ledger_k = 24;     // ledger capacity (2^k sums held)
    std::size_t decompose_k = 24;  // meet-in-the-middle, 3^(k/2) space
    std::size_t enumerate_k = 16;  // maximal-subset enumeration ground size
    std::size_t covering_m = 20;   // verify_covering dimension (3^m work split)

    static Limits defaults() {
        Limits l;
        if (const char* env = std::getenv("DISSOC_MAX_K")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v > 0) l = with_max_k(static_cast<std::size_t>(v));
        }
        return l;
    }

    static Limits with_max_k(std::size_t k) {
        Limits l;
        l.nullcomb_k = l.sums_k = l.ledger_k = l.decompose_k = k;
        l.enumerate_k = l.covering_m = k;
        return l;
    }
};

}  // namespace dissoc
