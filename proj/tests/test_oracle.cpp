#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chorefair/oracle.hpp"
#include "chorefair/theory.hpp"
#include "support/brute_force.hpp"

using namespace chorefair;

TEST_CASE("existence examples") {
    CHECK_FALSE(exists_envy_free(DisutilityMatrix({{0.3}, {0.6}})).exists);
    const auto ef = exists_envy_free(DisutilityMatrix({{0.1, 0.9}, {0.9, 0.1}}));
    REQUIRE(ef.exists);
    CHECK(*ef.witness == Allocation(2, {{0}, {1}}));

    const auto prop = exists_proportional(DisutilityMatrix({{0.4, 0.4}, {0.4, 0.4}}));
    REQUIRE(prop.exists);
    CHECK(*prop.witness == Allocation(2, {{0}, {1}}));
    CHECK_FALSE(exists_proportional(DisutilityMatrix({{0.9, 0.1}, {0.9, 0.1}})).exists);
}

TEST_CASE("enumeration guard") {
    CHECK_THROWS_AS(exists_envy_free(sample_instance(10, 9, DistributionSpec::uniform(), 1)), std::domain_error);
    CHECK_THROWS_AS(exists_proportional(sample_instance(2, 40, DistributionSpec::uniform(), 1)), std::domain_error);
}

TEST_CASE("oracle decisions and witnesses match exhaustive search") {
    const auto skew = DistributionSpec::piecewise({0.2}, {3.0, 0.5});
    for (std::uint64_t s = 0; s < 300; ++s) {
        const std::size_t n = 2 + s % 3;
        const std::size_t m = 1 + s % 6;
        const auto d = detail::sample_costs(n, m, s % 2 ? skew : DistributionSpec::uniform(), s);
        const auto ef_ref = brute::first_satisfying(d, [&](const brute::Owners& o) { return brute::envy_free(d, o); });
        const auto prop_ref =
            brute::first_satisfying(d, [&](const brute::Owners& o) { return brute::proportional(d, o); });
        const auto ef = exists_envy_free(d);
        const auto prop = exists_proportional(d);
        CHECK(ef.exists == ef_ref.has_value());
        CHECK(prop.exists == prop_ref.has_value());
        if (ef_ref) {
            CHECK(ef.witness->owners() == *ef_ref);
        }
        if (prop_ref) {
            CHECK(prop.witness->owners() == *prop_ref);
        }
    }
}

TEST_CASE("oracle respects certificates and EF implies PROP") {
    for (std::uint64_t s = 0; s < 500; ++s) {
        const auto d = sample_instance(3, 5, DistributionSpec::uniform(), s);
        const bool ef = exists_envy_free(d).exists;
        const bool prop = exists_proportional(d).exists;
        if (ef_nonexistence_certificate(d).fires()) {
            CHECK_FALSE(ef);
        }
        if (prop_nonexistence_certificate(d).fires()) {
            CHECK_FALSE(prop);
        }
        if (ef) {
            CHECK(prop);
        }
    }
}
