#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "treemeasure/oracles.hpp"
#include "treemeasure/powerdomain.hpp"

using namespace treemeasure;

TEST_CASE("pattern measure")
{
	CHECK(pattern_measure({}, 2) == Rational(1));
	CHECK(pattern_measure({{"", "a"}}, 2) == Rational(1, 2));
	CHECK(pattern_measure({{"", "a"}, {"L", "b"}, {"R", "b"}}, 2) == Rational(1, 8));
	CHECK(pattern_measure({{"LL", "c"}}, 3) == Rational(1, 3));
	CHECK_THROWS_AS(pattern_measure({}, 0), DomainError);
}

TEST_CASE("pattern automaton shapes")
{
	const std::vector<std::string> ab{"a", "b"};
	const Automaton root = pattern_automaton(ab, {{"", "a"}});
	CHECK(root.num_states() == 2);
	CHECK(root == parse_automaton("alphabet a b\nstate n 2\nstate sink 2\ninitial n\ntrans n a sink sink\n"
	                              "trans sink a sink sink\ntrans sink b sink sink\n"));

	const Automaton empty = pattern_automaton(ab, {});
	CHECK(empty.num_states() == 1);
	CHECK(empty.transitions.size() == 2);
	CHECK(empty.states[empty.initial] == "sink");

	const Automaton depth1 = pattern_automaton(ab, {{"", "a"}, {"L", "b"}});
	CHECK(depth1.num_states() == 3);

	CHECK_THROWS_AS(pattern_automaton(ab, {{"", "c"}}), DomainError);
	CHECK_THROWS_AS(pattern_automaton(ab, {{"X", "a"}}), DomainError);
}

TEST_CASE("pattern automata measure their pattern")
{
	for (std::uint64_t seed = 1; seed <= 8; ++seed) {
		const int sigma = seed % 2 ? 2 : 3;
		const PatternAssignment p = random_pattern(seed, sigma, 3);
		const Automaton aut = pattern_automaton(letters(sigma), p);
		const MeasureReport r = measure_of_language(aut);
		REQUIRE(r.measure);
		CHECK(std::abs(*r.measure - to_double(pattern_measure(p, sigma))) <= 1e-6);
	}
}

TEST_CASE("relabeling letters keeps the measure")
{
	const PatternAssignment p{{"", "a"}, {"R", "c"}};
	PatternAssignment swapped;
	for (const auto& [v, l] : p) swapped[v] = l == "a" ? "c" : l == "c" ? "a" : l;
	const auto m1 = measure_of_language(pattern_automaton(letters(3), p)).measure;
	const auto m2 = measure_of_language(pattern_automaton(letters(3), swapped)).measure;
	REQUIRE(m1);
	REQUIRE(m2);
	CHECK(*m1 == doctest::Approx(*m2).epsilon(1e-12));
}

TEST_CASE("safety prefix oracle")
{
	const Automaton a1 = parse_automaton("alphabet a b\nstate q 2\ninitial q\ntrans q a q q\ntrans q b q q\n");
	const Automaton a4 = parse_automaton("alphabet a b\nstate q 2\ninitial q\ntrans q a q q\n");
	for (int k = 0; k < 6; ++k) CHECK(safety_prefix_measure(a1, k) == 1.0);
	CHECK(safety_prefix_measure(a4, 0) == 1.0);
	CHECK(safety_prefix_measure(a4, 1) == 0.5);
	CHECK(safety_prefix_measure(a4, 2) == 0.125);
	CHECK(safety_prefix_measure(a4, 12) <= 1e-4);
	CHECK_THROWS_AS(safety_prefix_measure(a4, -1), DomainError);

	const Automaton odd = parse_automaton("alphabet a\nstate q 1\ninitial q\n");
	CHECK_THROWS_AS(safety_prefix_measure(odd, 1), DomainError);
}

TEST_CASE("safety oracle is non-increasing")
{
	for (std::uint64_t seed = 1; seed <= 10; ++seed) {
		const Automaton aut = random_even_automaton(seed, 4);
		double prev = 1.0;
		for (int k = 0; k <= 6; ++k) {
			const double s = safety_prefix_measure(aut, k);
			CHECK(s <= prev + 1e-12);
			prev = s;
		}
	}
}

TEST_CASE("random generators are deterministic")
{
	CHECK(random_pattern(3, 2, 3) == random_pattern(3, 2, 3));
	CHECK(random_even_automaton(3, 4) == random_even_automaton(3, 4));
	for (const auto& [v, l] : random_pattern(9, 3, 3)) CHECK(v.size() < 3);
}
