#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "treemeasure/fo_export.hpp"
#include "treemeasure/powerdomain.hpp"

using namespace treemeasure;

namespace {

Automaton a1() { return parse_automaton("alphabet a b\nstate q 2\ninitial q\ntrans q a q q\ntrans q b q q\n"); }
Automaton a2() { return parse_automaton("alphabet a b\nstate q 2\ninitial q\n"); }
Automaton a3() { return parse_automaton("alphabet a b\nstate n 2\nstate sink 2\ninitial n\ntrans n a sink sink\ntrans sink a sink sink\ntrans sink b sink sink\n"); }

struct Shape {
	std::size_t nodes = 0;
	std::size_t seqs = 0;
	std::size_t lims = 0;
};

void shape(const Term& t, Shape& s)
{
	++s.nodes;
	if (t.kind() == Term::Kind::seq) {
		++s.seqs;
		shape(t.first(), s);
		shape(t.second(), s);
	} else if (t.is_lim()) {
		++s.lims;
		shape(t.body(), s);
	}
}

std::string solver() { return TREEMEASURE_SOLVER; }

SolverVerdict solve(const std::string& script)
{
	const auto path = std::filesystem::temp_directory_path() / "treemeasure_test_fo.smt2";
	std::ofstream(path) << script;
	const SolverVerdict v = run_solver(solver(), path.string(), 60).verdict;
	std::filesystem::remove(path);
	return v;
}

} // namespace

TEST_CASE("scripts are well-formed and deterministic")
{
	for (const Automaton& a : {a1(), a2(), a3()}) {
		const std::string s = export_measure(a);
		CHECK(validate_smtlib(s).empty());
		CHECK(s == export_measure(a));
		CHECK(s.find("(set-logic NRA)") != std::string::npos);
		CHECK(s.find("(declare-const measure Real)") != std::string::npos);
		CHECK(s.find("0.5") == std::string::npos);
	}
}

TEST_CASE("variable count follows the term shape")
{
	Shape sh;
	shape(build_phi(2), sh);
	// x and y per node, z per seq, w per lim, simplex/leq helpers (3), output o.
	const std::size_t vectors = 2 * sh.nodes + sh.seqs + sh.lims + 3 + 1;
	const FormulaStats s1 = formula_stats(export_measure(a1()));
	CHECK(s1.variables == vectors * 4);
	CHECK(s1.alternation_depth >= 2);
	CHECK(formula_stats(export_measure(a1())).variables == s1.variables);
	const FormulaStats s3 = formula_stats(export_measure(a3()));
	CHECK(s3.variables == vectors * 16);
	CHECK(s3.variables > s1.variables);
}

TEST_CASE("compare scripts")
{
	const std::string s = export_compare(a1(), Rational(1, 2));
	CHECK(validate_smtlib(s).empty());
	CHECK(s.find("(assert (> measure (/ 1 2)))") != std::string::npos);
	CHECK(export_compare(a2(), Rational(0), Relation::equal).find("(assert (= measure 0))") != std::string::npos);
	CHECK_THROWS_AS(export_compare(a1(), Rational(3, 2)), DomainError);
	CHECK_THROWS_AS(export_compare(a1(), Rational(-1, 2)), DomainError);
	CHECK(parse_relation(">=") == Relation::greater_eq);
	CHECK_THROWS_AS(parse_relation("!="), DomainError);
}

TEST_CASE("width bound")
{
	const Automaton wide = parse_automaton("alphabet a\nstate p 2\nstate q 2\nstate r 2\ninitial p\ntrans p a q r\n");
	CHECK_THROWS_AS(export_measure(wide), DomainError);
}

TEST_CASE("syntax validator catches problems")
{
	CHECK_FALSE(validate_smtlib("(assert (> x 0))").empty());
	CHECK_FALSE(validate_smtlib("(declare-const x Real)(declare-const x Real)").empty());
	CHECK_FALSE(validate_smtlib("(declare-const x Real)(assert (> x 0)").empty());
	CHECK_FALSE(validate_smtlib("(define-fun f ((a Real)) Bool (> a 0))(assert (f 1 2))").empty());
	CHECK_FALSE(validate_smtlib("(frobnicate)").empty());
	CHECK(validate_smtlib("; c\n(declare-const x Real)(assert (exists ((y Real)) (> x y)))(check-sat)").empty());
	CHECK_FALSE(validate_smtlib("(declare-const x Real)(assert (and (exists ((y Real)) (> x y)) (> y 0)))").empty());
}

TEST_CASE("alternation depth respects polarity")
{
	CHECK(formula_stats("(declare-const x Real)(assert (exists ((y Real)) (> x y)))").alternation_depth == 1);
	CHECK(formula_stats("(assert (exists ((y Real)) (forall ((z Real)) (> z y))))").alternation_depth == 2);
	CHECK(formula_stats("(assert (exists ((y Real)) (not (exists ((z Real)) (> z y)))))").alternation_depth == 2);
	CHECK(formula_stats("(assert (exists ((y Real)) (exists ((z Real)) (> z y))))").alternation_depth == 1);
	CHECK(formula_stats("(define-fun p ((a Real)) Bool (forall ((z Real)) (> z a)))"
	                    "(assert (exists ((y Real)) (=> (p y) (> y 0))))")
	          .alternation_depth == 1);
	const FormulaStats s = formula_stats("(declare-const measure Real)(declare-const o Real)(assert (forall ((w Real)) (> w o)))");
	CHECK(s.variables == 2);
}

TEST_CASE("solver agrees with the numeric pipeline")
{
	if (solver().empty()) {
		MESSAGE("no solver configured; skipped");
		return;
	}
	CHECK(solve(export_compare(a1(), Rational(1, 2))) == SolverVerdict::sat);
	CHECK(solve(export_compare(a2(), Rational(1, 2))) == SolverVerdict::unsat);
	CHECK(solve(export_compare(a1(), Rational(1, 2), Relation::less)) == SolverVerdict::unsat);
	for (const Automaton& a : {a1(), a2()}) {
		const auto m = measure_of_language(a).measure;
		REQUIRE(m);
		CHECK(solve(consistency_script(a, *m)) == SolverVerdict::unsat);
	}
}
