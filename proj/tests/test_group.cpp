#include <catch2/catch_amalgamated.hpp>

#include "dissoc/group.hpp"
#include "oracles.hpp"

using namespace dissoc;

TEST_CASE("group descriptors and invariants") {
    GroupSpec z2 = GroupSpec::free_group(2);
    CHECK(z2.free_rank() == 2);
    CHECK(z2.pure_free());
    CHECK(z2.dimension() == 2);

    GroupSpec t = GroupSpec::torsion(4, 3);
    CHECK(t.pure_torsion());
    CHECK(t.homocyclic());
    CHECK(t.moduli() == std::vector<Coord>({4, 4, 4}));

    CHECK_THROWS_AS(GroupSpec(0, {}), InputError);
    CHECK_THROWS_AS(GroupSpec(0, {1}), InputError);
    CHECK_THROWS_AS(GroupSpec::free_group(1).exponent(), InputError);
}

TEST_CASE("exponent is the lcm of the moduli") {
    CHECK(GroupSpec::torsion(2, 3).exponent() == 2);
    CHECK(GroupSpec::torsion(4, 1).exponent() == 4);
    CHECK(GroupSpec(0, {2, 4}).exponent() == 4);
    CHECK(GroupSpec(0, {6, 10}).exponent() == 30);
}

TEST_CASE("combine evaluates coefficient vectors") {
    GroupSpec g = GroupSpec::free_group(2);
    ElementSet basis = oracle::make(g, {{1, 0}, {0, 1}});
    Element r = combine(basis, CoefficientVector({1, 1}));
    CHECK(r == Element({1, 1}));

    CHECK(combine(basis, CoefficientVector::zeros(2)).is_zero());

    ElementSet s = oracle::ints({1, 2, 3});
    CHECK(combine(s, CoefficientVector({1, 1, -1})).is_zero());
}

TEST_CASE("subset sums by mask") {
    ElementSet s = oracle::ints({1, 2, 4});
    CHECK(subset_sum(s, Mask{7}) == Element({7}));
    CHECK(subset_sum(s, Mask{0}).is_zero());

    GroupSpec z4 = GroupSpec::torsion(4, 1);
    ElementSet t = oracle::make(z4, {{2}});
    CHECK(subset_sum(t, Mask{1}) == Element({2}));

    GroupSpec z22 = GroupSpec::torsion(2, 2);
    ElementSet u = oracle::make(z22, {{1, 1}});
    CHECK(subset_sum(u, Mask{1}) == Element({1, 1}));
}

TEST_CASE("reduction into canonical torsion range") {
    GroupSpec g(1, {5});
    CHECK(reduce(g, {-3, -3}) == Element({-3, 2}));
    CHECK(reduce(g, {7, 12}) == Element({7, 2}));
    CHECK(add(g, Element({1, 4}), Element({1, 4})) == Element({2, 3}));
    CHECK(sub(g, Element({0, 0}), Element({1, 4})) == Element({-1, 1}));
    CHECK(neg(g, Element({2, 2})) == Element({-2, 3}));
}

TEST_CASE("coefficient vectors validate entries") {
    CHECK_THROWS_AS(CoefficientVector({2}), InputError);
    CHECK_THROWS_AS(CoefficientVector({-2}), InputError);
    CoefficientVector c({1, 0, -1});
    CHECK_FALSE(c.is_zero());
    CHECK(c.negated().coeffs() == std::vector<std::int8_t>({-1, 0, 1}));

    // Mask pair (B1, B2) -> +1 on B1-only, -1 on B2-only positions.
    CoefficientVector d = CoefficientVector::from_mask_pair(0b011, 0b110, 3);
    CHECK(d.coeffs() == std::vector<std::int8_t>({1, 0, -1}));
}

TEST_CASE("element sets enforce canonical distinct members") {
    GroupSpec g = GroupSpec::free_group(1);
    CHECK_THROWS_AS(oracle::ints({1, 1}), InputError);
    CHECK_THROWS_AS(oracle::make(g, {{1, 2}}), InputError);

    GroupSpec z4 = GroupSpec::torsion(4, 1);
    CHECK_THROWS_AS(oracle::make(z4, {{5}}), InputError);   // not reduced
    CHECK_THROWS_AS(oracle::make(z4, {{-1}}), InputError);  // not reduced

    ElementSet s = oracle::ints({3, 1, 2});
    CHECK(s.contains(Element({2})));
    CHECK_FALSE(s.contains(Element({4})));
    CHECK(s.size() == 3);

    ElementSet zero = oracle::ints({0});
    CHECK(zero.subset_of_zero());
    CHECK_FALSE(s.subset_of_zero());
}

TEST_CASE("from_raw reduces and rejects duplicates after reduction") {
    GroupSpec z4 = GroupSpec::torsion(4, 1);
    ElementSet s = ElementSet::from_raw(z4, {{5}, {-2}});
    CHECK(s.contains(Element({1})));
    CHECK(s.contains(Element({2})));
    CHECK_THROWS_AS(ElementSet::from_raw(z4, {{5}, {1}}), InputError);
}
