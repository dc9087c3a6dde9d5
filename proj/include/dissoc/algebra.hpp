#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "dissoc/basis.hpp"
#include "dissoc/errors.hpp"
#include "dissoc/exactmath.hpp"
#include "dissoc/group.hpp"
#include "dissoc/limits.hpp"

namespace dissoc {

// Dense row-major integer matrix, sized for Smith reduction (<= 64x64).
struct IntMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<std::int64_t> a;

    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

    std::int64_t& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    std::int64_t at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

struct SNFResult {
    std::vector<std::int64_t> diagonal;  // d1 | d2 | ... , nonzero prefix
    std::size_t rank_over_z = 0;
};

namespace detail {

inline std::int64_t checked_i64(__int128 v) {
    // INT64_MIN is also rejected so |entry| never overflows later.
    if (v > INT64_MAX || v <= INT64_MIN)
        throw LimitError("intermediate overflow in Smith reduction");
    return static_cast<std::int64_t>(v);
}

}  // namespace detail

// Diagonal of the Smith normal form, by repeated gcd elimination with a
// minimum-magnitude pivot. Row and column operations are unimodular;
// intermediates are overflow-checked rather than trusted.
inline SNFResult smith_normal_form(IntMatrix M) {
    if (M.rows == 0 || M.cols == 0) throw InputError("matrix must be nonempty");
    if (M.rows > 64 || M.cols > 64) throw InputError("Smith reduction capped at 64x64");
    for (std::int64_t v : M.a)
        if (v == INT64_MIN) throw LimitError("matrix entry magnitude out of range");

    const std::size_t dim = std::min(M.rows, M.cols);
    auto row_sub = [&](std::size_t dst, std::size_t src, std::int64_t q) {
        for (std::size_t c = 0; c < M.cols; ++c)
            M.at(dst, c) = detail::checked_i64(
                static_cast<__int128>(M.at(dst, c)) - static_cast<__int128>(q) * M.at(src, c));
    };
    auto col_sub = [&](std::size_t dst, std::size_t src, std::int64_t q) {
        for (std::size_t r = 0; r < M.rows; ++r)
            M.at(r, dst) = detail::checked_i64(
                static_cast<__int128>(M.at(r, dst)) - static_cast<__int128>(q) * M.at(r, src));
    };

    SNFResult res;
    res.diagonal.assign(dim, 0);

    for (std::size_t p = 0; p < dim; ++p) {
        for (;;) {
            // Smallest-magnitude nonzero entry of the trailing block
            // becomes the pivot.
            std::size_t br = p, bc = p;
            std::int64_t best = 0;
            for (std::size_t r = p; r < M.rows; ++r)
                for (std::size_t c = p; c < M.cols; ++c) {
                    std::int64_t v = std::abs(M.at(r, c));
                    if (v != 0 && (best == 0 || v < best)) {
                        best = v;
                        br = r;
                        bc = c;
                    }
                }
            if (best == 0) {
                // Trailing block is zero; remaining diagonal entries stay 0.
                for (std::size_t i = p; i < dim; ++i) res.diagonal[i] = 0;
                res.rank_over_z = p;
                return res;
            }
            for (std::size_t c = 0; c < M.cols; ++c) std::swap(M.at(p, c), M.at(br, c));
            for (std::size_t r = 0; r < M.rows; ++r) std::swap(M.at(r, p), M.at(r, bc));

            std::int64_t pivot = M.at(p, p);
            bool clean = true;
            for (std::size_t r = p + 1; r < M.rows; ++r) {
                if (M.at(r, p) == 0) continue;
                row_sub(r, p, M.at(r, p) / pivot);
                if (M.at(r, p) != 0) clean = false;  // remainder, smaller than |pivot|
            }
            for (std::size_t c = p + 1; c < M.cols; ++c) {
                if (M.at(p, c) == 0) continue;
                col_sub(c, p, M.at(p, c) / pivot);
                if (M.at(p, c) != 0) clean = false;
            }
            if (!clean) continue;

            // Divisibility chain: fold any non-divisible trailing entry
            // into the pivot row and re-reduce.
            std::size_t bad_r = 0;
            bool chain_ok = true;
            for (std::size_t r = p + 1; chain_ok && r < M.rows; ++r)
                for (std::size_t c = p + 1; c < M.cols; ++c)
                    if (M.at(r, c) % pivot != 0) {
                        chain_ok = false;
                        bad_r = r;
                        break;
                    }
            if (!chain_ok) {
                row_sub(p, bad_r, -1);
                continue;
            }
            break;
        }
        res.diagonal[p] = std::abs(M.at(p, p));
    }
    res.rank_over_z = dim;
    for (std::size_t i = 0; i < dim; ++i)
        if (res.diagonal[i] == 0) res.rank_over_z = std::min(res.rank_over_z, i);
    return res;
}

// Rank (minimal generator count) of the subgroup generated by A inside
// a homocyclic ambient Z_e^k, via the Smith form of the generator rows
// stacked over e*I: the quotient Z^k / lattice has invariant factors
// d_i | e, and <A> is isomorphic to the direct sum of Z_{e/d_i}, so the
// rank is the number of d_i strictly below e.
inline std::size_t subgroup_rank(const ElementSet& A) {
    const GroupSpec& g = A.group();
    if (!g.pure_torsion()) throw InputError("subgroup rank requires a purely torsion group");
    if (!g.homocyclic()) throw InputError("subgroup rank requires a homocyclic group Z_e^k");
    const Coord e = g.moduli().front();
    const std::size_t k = g.dimension();

    IntMatrix M(A.size() + k, k);
    for (std::size_t r = 0; r < A.size(); ++r)
        for (std::size_t c = 0; c < k; ++c) M.at(r, c) = A[r][c];
    for (std::size_t i = 0; i < k; ++i) M.at(A.size() + i, i) = e;

    SNFResult snf = smith_normal_form(M);
    std::size_t rank = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::int64_t d = snf.diagonal[i];
        if (d <= 0 || e % d != 0)
            throw Error("internal: invariant factor outside the divisors of e");
        if (d < e) ++rank;
    }
    return rank;
}

// Theorem-3 comparison r <= |Lambda| <= r log2 e for a maximal
// dissociated subset Lambda of A. The upper bound is decided exactly as
// 2^|Lambda| <= e^r; the double field is for display only.
struct BoundReport3 {
    std::size_t size_lambda = 0;
    std::size_t rank = 0;
    Coord exponent = 0;
    double upper = 0;  // r log2 e
    bool lower_ok = false;
    bool upper_ok = false;
    bool holds = false;
};

inline BoundReport3 check_theorem3(const ElementSet& A, const ElementSet& lambda,
                                   const Limits& limits = Limits::defaults()) {
    if (!is_maximal_in(lambda, A, limits))
        throw InputError("lambda is not a maximal dissociated subset of A");
    BoundReport3 r;
    r.rank = subgroup_rank(A);
    r.size_lambda = lambda.size();
    r.exponent = A.group().exponent();
    r.upper = static_cast<double>(r.rank) * std::log2(static_cast<double>(r.exponent));
    r.lower_ok = r.rank <= r.size_lambda;
    r.upper_ok = pow2_le_pow(r.size_lambda, static_cast<std::uint64_t>(r.exponent), r.rank);
    r.holds = r.lower_ok && r.upper_ok;
    return r;
}

}  // namespace dissoc
