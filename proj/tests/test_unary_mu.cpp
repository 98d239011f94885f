#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "treemeasure/unary_mu.hpp"

using namespace treemeasure;

namespace {

/// {0,1} with Delta = identity, Bid_n = constant 1, Cut_n = constant 0.
struct TwoPoint {
	using value_type = int;
	int apply(const Symbol& s, int x) const
	{
		switch (s.kind) {
		case BasicKind::delta: return x;
		case BasicKind::bid: return 1;
		case BasicKind::cut: return 0;
		}
		return x;
	}
	bool stabilized(int a, int b) const { return a == b; }
	std::size_t iteration_cap() const { return 100; }
};

/// Words: records the order in which basic symbols are applied.
struct Recorder {
	using value_type = std::vector<std::string>;
	value_type apply(const Symbol& s, value_type x) const
	{
		x.push_back(s.name());
		return x;
	}
	bool stabilized(const value_type&, const value_type&) const { return true; }
	std::size_t iteration_cap() const { return 10; }
};

/// Integers with Delta = successor: never stabilizes.
struct Counter {
	using value_type = long;
	long apply(const Symbol&, long x) const { return x + 1; }
	bool stabilized(long a, long b) const { return a == b; }
	std::size_t iteration_cap() const { return 50; }
};

std::vector<std::string> leaves(const Term& t)
{
	if (t.kind() == Term::Kind::basic) return {t.symbol().name()};
	if (t.kind() == Term::Kind::seq) {
		auto a = leaves(t.first());
		auto b = leaves(t.second());
		a.insert(a.end(), b.begin(), b.end());
		return a;
	}
	return leaves(t.body());
}

} // namespace

TEST_CASE("lim over the two-point lattice")
{
	TwoPoint dom;
	CHECK(evaluate(Term::lim_up(Term::basic(Symbol::delta())), dom, 0) == 0);
	CHECK(evaluate(Term::lim_up(Term::basic(Symbol::bid(1))), dom, 0) == 1);
	CHECK(evaluate(Term::lim_down(Term::basic(Symbol::cut(1))), dom, 1) == 0);
}

TEST_CASE("seq applies left to right")
{
	Recorder dom;
	auto out = evaluate(Term::seq(Term::basic(Symbol::bid(1)), Term::basic(Symbol::cut(2))), dom, {});
	CHECK(out == std::vector<std::string>{"Bid1", "Cut2"});
}

TEST_CASE("productive iteration counts")
{
	TwoPoint dom;
	auto [v1, t1] = evaluate_traced(Term::lim_up(Term::basic(Symbol::bid(1))), dom, 0);
	CHECK(v1 == 1);
	CHECK(t1.lims.at("/").iterations == 1);
	CHECK(t1.lims.at("/").applications == 2);
	CHECK(t1.lims.at("/").converged);

	auto [v0, t0] = evaluate_traced(Term::lim_up(Term::basic(Symbol::delta())), dom, 0);
	CHECK(v0 == 0);
	CHECK(t0.lims.at("/").iterations == 0);
}

TEST_CASE("iteration cap")
{
	Counter dom;
	Evaluator<Counter> ev(dom);
	const Term t = Term::seq(Term::basic(Symbol::bid(1)), Term::lim_up(Term::basic(Symbol::delta())));
	try {
		ev.run(t, 0);
		FAIL("expected IterationLimit");
	} catch (const IterationLimit& e) {
		CHECK(e.path() == "/1");
		CHECK(e.cap() == 50);
	}
	CHECK_FALSE(ev.trace().lims.at("/1").converged);
}

TEST_CASE("phi construction")
{
	CHECK(to_string(build_phi(2)) == "Bid1 ; up( up(Delta) ; Bid2 ; down(Delta) ; Cut1 )");
	auto l4 = leaves(build_phi(4));
	CHECK(l4 == std::vector<std::string>{"Bid1", "Delta", "Bid2", "Delta", "Bid3", "Delta", "Bid4", "Delta", "Cut3", "Cut2", "Cut1"});
	CHECK(to_string(build_phi_n(4, 4)) == "Bid4 ; down(Delta)");
	CHECK_THROWS_AS(build_phi(3), DomainError);
	CHECK_THROWS_AS(build_phi(0), DomainError);
	CHECK_THROWS_AS(build_phi_n(5, 4), DomainError);
}

TEST_CASE("term size is linear")
{
	CHECK(term_size(build_phi(2)) == 5);
	CHECK(term_size(build_phi(4)) == 11);
	CHECK(term_size(Term::basic(Symbol::delta())) == 1);
	for (int d = 2; d <= 20; d += 2) CHECK(term_size(build_phi(d)) == static_cast<std::size_t>(3 * d - 1));
}

TEST_CASE("index checks and labels")
{
	CHECK_NOTHROW(check_indices(build_phi(6), 6));
	CHECK_THROWS_AS(check_indices(build_phi(6), 4), DomainError);
	CHECK_THROWS_AS(check_indices(Term::basic(Symbol::cut(2)), 2), DomainError);
	const Term phi = build_phi(2);
	CHECK(lim_label(phi.second()) == "up(Psi1)");
	CHECK(lim_label(Term::lim_down(Term::basic(Symbol::delta()))) == "down(Delta)");
}
