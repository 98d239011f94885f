// Acceptance run: one PASS/FAIL/SKIP line per criterion.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "treemeasure/finite_lattice.hpp"
#include "treemeasure/fo_export.hpp"
#include "treemeasure/oracles.hpp"
#include "treemeasure/powerdomain.hpp"

using namespace treemeasure;

namespace {

enum class Outcome { pass, fail, skip };

struct Verdict {
	Outcome outcome;
	std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string num(double x)
{
	std::ostringstream s;
	s.precision(6);
	s << x;
	return s.str();
}

Automaton load(const std::string& name)
{
	std::ifstream in(std::string(TREEMEASURE_DATA_DIR) + "/" + name);
	if (!in) throw std::runtime_error("missing fixture " + name);
	std::ostringstream s;
	s << in.rdbuf();
	return parse_automaton(s.str());
}

Verdict realisation_equivalence()
{
	const auto t0 = Clock::now();
	std::size_t trials = 0, mismatches = 0, violations = 0;
	for (auto [g, d] : {std::pair{1, 2}, {2, 2}, {1, 4}, {2, 4}}) {
		const EquivalenceReport r = check_equivalence(g, d, 1, 50);
		trials += r.trials;
		mismatches += r.mismatches.size();
		violations += r.violations.size();
	}
	const double t = seconds_since(t0);
	const bool ok = trials >= 200 && mismatches == 0 && violations == 0 && t < 60;
	return {ok ? Outcome::pass : Outcome::fail, std::to_string(trials) + " tables, " + std::to_string(mismatches) +
	                                                " mismatches, " + std::to_string(violations) + " violations, " + num(t) + " s"};
}

Verdict trivial_measures()
{
	std::string detail;
	bool ok = true;
	for (auto [file, expected] : {std::pair{"a1.pta", 1.0}, {"a2.pta", 0.0}}) {
		const auto t0 = Clock::now();
		const MeasureReport r = measure_of_language(load(file));
		const double t = seconds_since(t0);
		const bool good = r.measure && std::abs(*r.measure - expected) <= 1e-9 && t < 1.0;
		ok = ok && good;
		detail += std::string(detail.empty() ? "" : ", ") + file + " = " + (r.measure ? num(*r.measure) : "none") + " in " +
		          num(t) + " s";
	}
	return {ok ? Outcome::pass : Outcome::fail, detail};
}

Verdict clopen_oracle()
{
	const auto t0 = Clock::now();
	double worst = 0;
	std::size_t failures = 0;
	for (std::uint64_t i = 0; i < 50; ++i) {
		const int sigma = i % 2 ? 3 : 2;
		const PatternAssignment p = random_pattern(1000 + i, sigma, 3);
		const MeasureReport r = measure_of_language(pattern_automaton(letters(sigma), p));
		if (!r.measure) {
			++failures;
			continue;
		}
		const double err = std::abs(*r.measure - to_double(pattern_measure(p, sigma)));
		worst = std::max(worst, err);
		if (err > 1e-6) ++failures;
	}
	const double t = seconds_since(t0);
	return {failures == 0 && t < 120 ? Outcome::pass : Outcome::fail,
	        "50 patterns, max error " + num(worst) + ", " + std::to_string(failures) + " failures, " + num(t) + " s"};
}

Verdict safety_oracle()
{
	std::vector<std::pair<std::string, Automaton>> automata{{"A4", load("a4.pta")}};
	for (std::uint64_t s = 1; s <= 10; ++s) automata.emplace_back("random" + std::to_string(s), random_even_automaton(s, 4));
	std::size_t failures = 0;
	double a4_measure = 1;
	std::string notes;
	for (const auto& [name, aut] : automata) {
		const MeasureReport r = measure_of_language(aut);
		if (!r.measure) {
			++failures;
			notes += " " + name + ": " + r.error.value_or("no measure") + ";";
			continue;
		}
		if (name == "A4") a4_measure = *r.measure;
		for (int k = 1; k <= 10; ++k)
			if (*r.measure > safety_prefix_measure(aut, k) + 1e-6) {
				++failures;
				notes += " " + name + " exceeds the depth-" + std::to_string(k) + " bound;";
				break;
			}
		if (*r.measure < safety_prefix_measure(aut, 60) - 1e-3) {
			++failures;
			notes += " " + name + " falls below the depth-60 value;";
		}
	}
	const bool ok = failures == 0 && a4_measure <= 1e-4;
	return {ok ? Outcome::pass : Outcome::fail,
	        "11 automata, " + std::to_string(failures) + " failures, A4 measure " + num(a4_measure) + notes};
}

Verdict some_node_a()
{
	const MeasureReport r = measure_of_language(load("some_a.pta"));
	const bool ok = r.measure && std::abs(*r.measure - 1.0) <= 1e-3;
	return {ok ? Outcome::pass : Outcome::fail, "measure " + (r.measure ? num(*r.measure) : r.error.value_or("none"))};
}

Verdict order_machinery()
{
	const auto t0 = Clock::now();
	const OrderReport r = check_order_agreement(1, 200);
	const double t = seconds_since(t0);
	const Dist alpha = Dist::from_atoms({{RSet{1}, 0.5}, {RSet{2}, 0.5}});
	const Dist beta = Dist::from_atoms({{RSet{0}, 0.5}, {RSet{3}, 0.5}});
	const bool incomparable = !dist_leq_coupling(alpha, beta, 0) && !dist_leq_coupling(beta, alpha, 0) &&
	                          !dist_leq_naive(2, alpha, beta) && !dist_leq_naive(2, beta, alpha);
	const bool ok = r.ok() && incomparable && t < 10;
	return {ok ? Outcome::pass : Outcome::fail,
	        std::to_string(r.trials) + " pairs, " + std::to_string(r.comparable) + " comparable, " +
	            std::to_string(r.mismatches.size()) + " disagreements, incomparable pair " +
	            (incomparable ? "detected" : "missed") + ", " + num(t) + " s"};
}

Verdict structural_invariants()
{
	MeasureOptions strict;
	strict.check_invariants = true;
	std::size_t total = 0;
	std::string detail;
	bool ok = true;
	for (const char* file : {"a1.pta", "a3.pta", "some_a.pta"}) {
		const MeasureReport r = measure_of_language(load(file), strict);
		ok = ok && r.measure.has_value();
		total += r.violation_count;
		detail += std::string(detail.empty() ? "" : ", ") + file + ": " + std::to_string(r.violation_count);
		if (!r.violations.empty()) detail += " (" + r.violations.front() + ")";
	}
	return {ok && total == 0 ? Outcome::pass : Outcome::fail, "violations " + detail};
}

Verdict formula_size()
{
	for (int d = 2; d <= 20; d += 2)
		if (term_size(build_phi(d)) != static_cast<std::size_t>(3 * d - 1))
			return {Outcome::fail, "term_size(build_phi(" + std::to_string(d) + ")) = " + std::to_string(term_size(build_phi(d)))};
	return {Outcome::pass, "term_size = 3d-1 for d = 2, 4, ..., 20"};
}

Verdict exact_consistency()
{
	const std::string solver = TREEMEASURE_SOLVER;
	std::string detail;
	bool syntax_ok = true;
	bool solver_ok = true;
	for (const char* file : {"a1.pta", "a2.pta", "a3.pta"}) {
		const Automaton aut = load(file);
		const std::string script = export_measure(aut);
		const auto problems = validate_smtlib(script);
		syntax_ok = syntax_ok && problems.empty();
		detail += std::string(detail.empty() ? "" : ", ") + file + ": syntax " + (problems.empty() ? "ok" : problems.front());
		if (solver.empty()) continue;
		const MeasureReport r = measure_of_language(aut);
		if (!r.measure) {
			solver_ok = false;
			detail += ", no numeric measure";
			continue;
		}
		const auto path = std::filesystem::temp_directory_path() / (std::string("treemeasure_acceptance_") + file + ".smt2");
		std::ofstream(path) << consistency_script(aut, *r.measure);
		const auto t0 = Clock::now();
		const SolverVerdict v = run_solver(solver, path.string(), 600).verdict;
		std::filesystem::remove(path);
		detail += ", solver " + to_string(v) + " in " + num(seconds_since(t0)) + " s";
		solver_ok = solver_ok && v == SolverVerdict::unsat;
	}
	if (!syntax_ok) return {Outcome::fail, detail};
	if (solver.empty()) return {Outcome::skip, detail + "; solver check skipped (no solver configured)"};
	return {solver_ok ? Outcome::pass : Outcome::fail, detail};
}

} // namespace

int main()
{
	const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
	    {"realisation equivalence on random monotone tables", realisation_equivalence},
	    {"trivial measures A1 = 1, A2 = 0", trivial_measures},
	    {"clopen pattern oracle", clopen_oracle},
	    {"safety prefix oracle", safety_oracle},
	    {"some node labeled a has measure 1", some_node_a},
	    {"coupling order agrees with upset order", order_machinery},
	    {"structural invariants under strict checking", structural_invariants},
	    {"formula size is linear", formula_size},
	    {"exported formulas are well-formed and consistent", exact_consistency},
	};
	int failed = 0;
	for (std::size_t i = 0; i < criteria.size(); ++i) {
		Verdict v;
		try {
			v = criteria[i].second();
		} catch (const std::exception& e) {
			v = {Outcome::fail, std::string("exception: ") + e.what()};
		}
		const char* tag = v.outcome == Outcome::pass ? "PASS" : v.outcome == Outcome::fail ? "FAIL" : "SKIP";
		if (v.outcome == Outcome::fail) ++failed;
		std::cout << tag << " criterion " << i + 1 << ": " << criteria[i].first << " (" << v.detail << ")" << std::endl;
	}
	return failed == 0 ? 0 : 1;
}
