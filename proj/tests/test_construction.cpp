#include <catch2/catch_amalgamated.hpp>

#include "dissoc/construction.hpp"
#include "dissoc/dissociation.hpp"
#include "oracles.hpp"

using namespace dissoc;

TEST_CASE("orthogonality probability on pinned types") {
    OrthProbability p11 = orth_probability({1, 1, 2});
    CHECK(p11.numerator == 2);
    CHECK(p11.log2_denominator == 2);
    CHECK(p11.value == 0.5);

    CHECK(orth_probability({3, 0, 3}).value == 0.125);
    CHECK(orth_probability({2, 1, 3}).value == 0.375);
    CHECK(orth_probability({2, 1, 3}).numerator == 3);
}

TEST_CASE("orthogonality probability matches exhaustive enumeration") {
    for (unsigned mp = 0; mp <= 5; ++mp)
        for (unsigned mm = 0; mm <= 5; ++mm) {
            if (mp + mm == 0) continue;
            for (unsigned m : {mp + mm, mp + mm + 3}) {
                if (m > 12) continue;
                OrthProbability p = orth_probability({mp, mm, m});
                std::uint64_t count = oracle::naive_orth_count(mp, mm, m);
                // count / 2^m == numerator / 2^t
                CHECK(count == p.numerator << (m - (mp + mm)));
            }
        }
}

TEST_CASE("probability bound dominates the exact value") {
    CHECK(orth_probability_bound({1, 1, 2}) == Catch::Approx(0.57735026919));
    CHECK(orth_probability_bound({1, 0, 1}) == Catch::Approx(0.81649658092));

    OrthProbability p = orth_probability({10, 10, 20});
    CHECK(p.value == Catch::Approx(0.17619705200195312));
    CHECK(p.value < orth_probability_bound({10, 10, 20}));
    CHECK(orth_probability_bound({10, 10, 20}) == Catch::Approx(1.0 / std::sqrt(30.0)));
}

TEST_CASE("type population counts vectors of each type") {
    CHECK(type_population({2, 1, 3}) == 3);
    CHECK(type_population({1, 1, 4}) == 12);  // C(4,2)*C(2,1)
    // Sum over all nonzero types must cover {-1,0,1}^m \ {0}.
    for (unsigned m = 1; m <= 8; ++m) {
        std::uint64_t total = 0;
        for (unsigned mp = 0; mp <= m; ++mp)
            for (unsigned mm = 0; mp + mm <= m; ++mm)
                if (mp + mm > 0) total += type_population({mp, mm, m});
        std::uint64_t expect = 1;
        for (unsigned i = 0; i < m; ++i) expect *= 3;
        CHECK(total == expect - 1);
    }
    CHECK_THROWS_AS(type_population({0, 0, 3}), InputError);
    CHECK_THROWS_AS(type_population({3, 1, 3}), InputError);
}

TEST_CASE("union bound on pinned evaluations") {
    UnionBoundReport r14 = union_bound(1, 4);
    CHECK(r14.total == Catch::Approx(8.0 / 9.0).epsilon(1e-12));
    CHECK(r14.passes);

    UnionBoundReport r13 = union_bound(1, 3);
    CHECK(r13.total == Catch::Approx(2.0 * std::pow(1.5, -1.5)).epsilon(1e-12));
    CHECK_FALSE(r13.passes);

    UnionBoundReport r8 = union_bound(8, minimal_n(8));
    CHECK(r8.passes);
    CHECK_FALSE(union_bound(8, minimal_n(8) - 1).passes);

    CHECK(r8.total == Catch::Approx(r8.sigma1 + r8.sigma2).epsilon(1e-9));
    CHECK(r8.T == Catch::Approx(8.0 / 9.0));
    CHECK_THROWS_AS(union_bound(0, 4), InputError);
}

TEST_CASE("union bound agrees with direct summation") {
    for (unsigned m : {2u, 5u, 10u, 20u, 31u})
        for (unsigned n : {10u, 20u, 33u}) {
            UnionBoundReport r = union_bound(m, n);
            CHECK(r.total == Catch::Approx(oracle::naive_union_bound_total(m, n))
                                 .epsilon(1e-9));
        }
}

TEST_CASE("near-one totals are decided exactly") {
    // m=1: total = 2 * (1.5)^{-n/2}; n where this is ~1 is n=3..4, far
    // from 1 in doubles; craft closeness via the m=1,n known family is
    // not possible, so check the flag stays unset on clear cases and the
    // exact path at least never contradicts the float comparison.
    for (unsigned m = 1; m <= 12; ++m) {
        unsigned n = minimal_n(m);
        UnionBoundReport pass = union_bound(m, n);
        UnionBoundReport fail = union_bound(m, n - 1);
        CHECK(pass.passes);
        CHECK_FALSE(fail.passes);
        if (pass.exact_decided) CHECK(std::abs(pass.total - 1.0) < 1e-6);
        if (fail.exact_decided) CHECK(std::abs(fail.total - 1.0) < 1e-6);
    }
}

TEST_CASE("minimal n regression table") {
    CHECK(minimal_n(1) == 4);
    CHECK(minimal_n(2) == 8);
    CHECK(minimal_n(3) == 10);
    CHECK(minimal_n(4) == 11);
    CHECK(minimal_n(5) == 12);
    CHECK(minimal_n(6) == 13);
    CHECK(minimal_n(7) == 14);
    CHECK(minimal_n(8) == 15);
    CHECK(minimal_n(16) == 18);
    CHECK(minimal_n(32) == 22);
    CHECK(minimal_n(64) == 35);
}

TEST_CASE("minimal n for m=2 matches the closed-form scan") {
    unsigned expect = 0;
    for (unsigned n = 1; n < 100; ++n) {
        double total = 4 * std::pow(1.5, -0.5 * n) + 4 * std::pow(3.0, -0.5 * n);
        if (total < 1) {
            expect = n;
            break;
        }
    }
    CHECK(minimal_n(2) == expect);
}

TEST_CASE("asymptotic sanity envelope for minimal n") {
    for (unsigned m : {8u, 16u, 32u, 64u}) {
        double ratio = minimal_n(m) * std::log2(static_cast<double>(m)) /
                       (m * 2 * std::log2(3.0));
        CHECK(ratio > 0.5);
        CHECK(ratio < 3.0);
    }
}

TEST_CASE("candidate sampling is deterministic and unbiased") {
    RowSample a = sample_candidate(8, 20, 99);
    RowSample b = sample_candidate(8, 20, 99);
    CHECK(a.rows == b.rows);
    CHECK(a.rows.size() == 20);
    CHECK(sample_candidate(8, 20, 100).rows != a.rows);

    std::uint64_t ones = 0, bits = 0;
    for (unsigned chunk = 0; chunk < 100; ++chunk) {
        RowSample s = sample_candidate(8, 100, 1000 + chunk);
        for (std::uint32_t r : s.rows) {
            ones += std::popcount(r);
            bits += 8;
        }
    }
    double freq = static_cast<double>(ones) / static_cast<double>(bits);
    double sigma = 0.5 / std::sqrt(static_cast<double>(bits));
    CHECK(std::abs(freq - 0.5) < 3 * sigma);

    CHECK_THROWS_AS(sample_candidate(0, 4, 1), InputError);
    CHECK_THROWS_AS(sample_candidate(32, 4, 1), InputError);
}

TEST_CASE("covering check on pinned matrices") {
    // Rows of the 2x2 identity: only s=0 is orthogonal to both.
    CoveringResult id2 = verify_covering({2, {0b01, 0b10}});
    CHECK(id2.covered);
    CHECK_FALSE(id2.s.has_value());

    // An all-zero row set: s = (1, 0) kills every row.
    CoveringResult z = verify_covering({2, {0b00, 0b00}});
    CHECK_FALSE(z.covered);
    REQUIRE(z.s.has_value());
    CHECK(z.s->coeffs() == std::vector<std::int8_t>({1, 0}));

    // No rows at all: any nonzero s works, minimal is (1, 0, ...).
    CoveringResult empty = verify_covering({3, {}});
    CHECK_FALSE(empty.covered);
    CHECK(empty.s->coeffs() == std::vector<std::int8_t>({1, 0, 0}));
}

TEST_CASE("covering equals column dissociation with distinct columns") {
    SplitMix64 rng(4242);
    for (int trial = 0; trial < 150; ++trial) {
        unsigned m = 2 + static_cast<unsigned>(rng.next_below(5));  // 2..6
        unsigned n = 4 + static_cast<unsigned>(rng.next_below(6));  // 4..9
        RowSample d = sample_candidate(m, n, rng.next());
        CoveringResult cov = verify_covering(d);
        std::vector<Element> cols = sample_columns(d);
        std::set<Element> distinct(cols.begin(), cols.end());
        bool expect = distinct.size() == cols.size();
        if (expect) {
            std::vector<Element> unique(distinct.begin(), distinct.end());
            expect = oracle::naive_dissociated(
                ElementSet(GroupSpec::free_group(n), unique));
        }
        // Dissociation of the multiset = distinct && dissociated.
        REQUIRE(cov.covered == expect);
        if (!cov.covered) {
            // The witness s must annihilate every row.
            for (std::uint32_t row : d.rows) {
                long long dot = 0;
                for (unsigned j = 0; j < m; ++j)
                    if (row >> j & 1) dot += (*cov.s)[j];
                REQUIRE(dot == 0);
            }
        }
    }
}

TEST_CASE("construct returns verified dissociated subsets") {
    ConstructResult r = construct(2, std::nullopt, 100, 7);
    CHECK(r.n == minimal_n(2));
    CHECK(r.columns.size() == 2);
    CHECK(is_dissociated_sums(r.columns).dissociated);
    for (std::size_t i = 0; i < r.columns.size(); ++i)
        for (std::size_t d = 0; d < r.n; ++d)
            CHECK((r.columns[i][d] == 0 || r.columns[i][d] == 1));

    // Impossible target: three distinct columns cannot exist in {0,1}^1.
    CHECK_THROWS_AS(construct(3, 1, 4, 1), ExhaustedTrials);
    try {
        construct(3, 1, 4, 1);
    } catch (const ExhaustedTrials& e) {
        CHECK(e.failed_trials == 4);
    }
}

TEST_CASE("empirical success rates track the union bound") {
    // m=1, n=4: failure iff all four rows are zero, so rate ~ 1 - 2^-4.
    SuccessRate r = success_rate(1, 4, 1000, 3);
    double expect = 1.0 - std::pow(2.0, -4);
    double sigma = std::sqrt(expect * (1 - expect) / 1000.0);
    CHECK(std::abs(r.rate - expect) < 3 * sigma);

    // m=1, n=1: a single coin decides.
    SuccessRate half = success_rate(1, 1, 1000, 5);
    CHECK(std::abs(half.rate - 0.5) < 3 * 0.0158113883);

    // Larger n can only help, up to noise.
    SuccessRate lo = success_rate(2, 8, 400, 11);
    SuccessRate hi = success_rate(2, 12, 400, 11);
    CHECK(hi.rate >= lo.rate - 3 * 0.025);
}
