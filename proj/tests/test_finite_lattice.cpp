#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "treemeasure/finite_lattice.hpp"

using namespace treemeasure;

TEST_CASE("random tables are monotone and deterministic")
{
	const DeltaTable t = random_monotone_delta(1, 2, 7);
	CHECK(t.size() == 4);
	CHECK(random_monotone_delta(1, 2, 7) == t);
	CHECK_NOTHROW(DeltaTable(t.g(), t.d(), t.values()));
	CHECK_THROWS_AS(random_monotone_delta(3, 4, 1), DomainError);
	CHECK_THROWS_AS(random_monotone_delta(1, 3, 1), DomainError);
}

TEST_CASE("non-monotone tables are rejected")
{
	CHECK_THROWS_AS(DeltaTable(1, 2, {1, 0, 0, 0}), DomainError);
	CHECK_THROWS_AS(DeltaTable(1, 2, {0, 0, 0, 2}), DomainError);
	CHECK_THROWS_AS(DeltaTable(1, 2, {0, 0, 0}), DomainError);
}

TEST_CASE("nested fixpoint and phi on simple tables")
{
	const auto first = DeltaTable::from_function(2, 2, [](auto x) { return x[0]; });
	const auto second = DeltaTable::from_function(2, 2, [](auto x) { return x[1]; });
	const auto top = DeltaTable::from_function(2, 2, [](auto) { return LatticeElement{3}; });
	CHECK(nested_fixpoint(first) == 0);
	CHECK(nested_fixpoint(second) == 3);
	CHECK(nested_fixpoint(top) == 3);
	CHECK(phi_on_lattice(first) == 0);
	CHECK(phi_on_lattice(second) == 3);
	CHECK(phi_on_lattice(top) == 3);
}

TEST_CASE("replay format round trip")
{
	const DeltaTable t = random_monotone_delta(2, 2, 11);
	CHECK(DeltaTable::parse(t.to_text()) == t);
	CHECK_THROWS(DeltaTable::parse("g 1\nd 2\n0 0 -> 0\n"));
}

TEST_CASE("checked runs report no violations")
{
	for (std::uint64_t seed = 1; seed <= 20; ++seed) {
		const DeltaTable t = random_monotone_delta(2, 4, seed);
		const LatticeRun run = phi_on_lattice_checked(t);
		CHECK(run.value == nested_fixpoint(t));
		CHECK(run.violations.empty());
	}
}

TEST_CASE("equivalence harness")
{
	CHECK(check_equivalence(2, 2, 1, 100).ok());
	CHECK(check_equivalence(1, 4, 1, 100).ok());
	CHECK(check_equivalence(2, 4, 1, 50).ok());
	CHECK(check_equivalence(1, 2, 1, 50).mismatches.empty());
}

TEST_CASE("trial seeds differ")
{
	CHECK(trial_seed(1, 0) != trial_seed(1, 1));
	CHECK(trial_seed(1, 5) == trial_seed(1, 5));
}
