#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dissoc/errors.hpp"

namespace dissoc {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Exact C(n, k); n small enough that the result fits u64 (n <= 63 in
// every caller).
inline std::uint64_t binomial_u64(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > ~0ull) throw LimitError("binomial overflows 64 bits");
    }
    return static_cast<std::uint64_t>(r);
}

inline BigInt binomial_big(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline double log2_binomial(double n, double t) {
    return (std::lgamma(n + 1) - std::lgamma(t + 1) - std::lgamma(n - t + 1)) /
           std::log(2.0);
}

// log2(sum 2^l) over the given log2-domain terms, stable against the
// spread between the largest and smallest term.
inline double log_sum_exp2(const std::vector<double>& logs) {
    if (logs.empty()) return -std::numeric_limits<double>::infinity();
    double m = *std::max_element(logs.begin(), logs.end());
    if (!std::isfinite(m)) return m;
    double s = 0;
    for (double l : logs) s += std::exp2(l - m);
    return m + std::log2(s);
}

// 2^a <= base^e, computed on exact integers.
inline bool pow2_le_pow(std::uint64_t a, std::uint64_t base, std::uint64_t e) {
    // Cheap logarithmic screens keep the big-int path for near ties.
    double rhs_log2 = static_cast<double>(e) * std::log2(static_cast<double>(base));
    if (static_cast<double>(a) < rhs_log2 - 1.0) return true;
    if (static_cast<double>(a) > rhs_log2 + 1.0) return false;
    BigInt lhs = BigInt(1) << static_cast<unsigned>(a);
    BigInt rhs = boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(e));
    return lhs <= rhs;
}

// 2k+1 <= 3^m: whether k distinct nonzero +/- pairs fit in the ternary
// coefficient space over m generators.
inline bool ternary_capacity_holds(std::uint64_t k, std::uint64_t m) {
    if (m >= 41) return true;  // 3^41 > 2^64 > 2k+1
    BigInt cap = boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(m));
    return BigInt(2) * k + 1 <= cap;
}

struct ExactSumCheck {
    bool decided = false;  // exact route reached a verdict
    bool below_one = false;
};

// Decides sum_{t=1}^m C(m,t) 2^t (1.5 t)^{-n/2} < 1 with exact
// arithmetic. Even n stays rational throughout; odd n brackets each
// sqrt(6t) between consecutive integers at s fractional bits and widens
// precision until the interval sum clears 1 on one side.
inline ExactSumCheck exact_sum_below_one(unsigned m, unsigned n) {
    if (m > 20) return {};
    if (n % 2 == 0) {
        const unsigned h = n / 2;
        BigRat total = 0;
        for (unsigned t = 1; t <= m; ++t) {
            BigRat term(binomial_big(m, t) * (BigInt(1) << (t + h)),
                        boost::multiprecision::pow(BigInt(3) * t, h));
            total += term;
        }
        return {true, total < 1};
    }
    const unsigned h = (n - 1) / 2;
    for (unsigned s = 32; s <= 4096; s *= 2) {
        BigRat lo = 0, hi = 0;
        for (unsigned t = 1; t <= m; ++t) {
            // term = C(m,t) 2^t 2^h 2 / ((3t)^h sqrt(6t)); bracket
            // sqrt(6t) by r/2^s <= sqrt(6t) < (r+1)/2^s.
            BigInt num = binomial_big(m, t) * (BigInt(1) << (t + h + 1 + s));
            BigInt den_rad = boost::multiprecision::pow(BigInt(3) * t, h);
            BigInt r = boost::multiprecision::sqrt(BigInt(6) * t << (2 * s));
            lo += BigRat(num, den_rad * (r + 1));
            hi += BigRat(num, den_rad * r);
        }
        if (hi < 1) return {true, true};
        if (lo >= 1) return {true, false};
    }
    return {};
}

}  // namespace dissoc
