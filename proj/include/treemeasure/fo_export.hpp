#ifndef TREEMEASURE_FO_EXPORT_HPP
#define TREEMEASURE_FO_EXPORT_HPP

#include <cstddef>
#include <string>

#include "treemeasure/automaton.hpp"
#include "treemeasure/rational.hpp"
#include "treemeasure/smtlib.hpp"

namespace treemeasure {

/// Largest |Q|*d the exporter accepts.
inline constexpr std::size_t max_export_width = 4;

/**
 * SMT-LIB 2 script (logic NRA) defining the real constant `measure` as the
 * coin-flipping measure of L(aut).
 *
 * Every distribution-valued subterm F of Phi_1 becomes a predicate
 * f_k(x, y) meaning y = F(x), over vectors with one Real per RSet.  Lim
 * nodes are encoded as least (greatest) fixed points above (below) x,
 * comparing vectors with the upset characterization of the stochastic
 * order.  Ends with (check-sat).  Throws DomainError when |Q|*d is larger
 * than max_export_width.
 */
std::string export_measure(const Automaton& aut);

enum class Relation { less, less_eq, equal, greater_eq, greater };

/// "<", "<=", "=", ">=", ">"; throws DomainError otherwise.
Relation parse_relation(const std::string& text);
std::string to_string(Relation r);

/// export_measure plus (assert (rel measure q)); q must lie in [0,1].
std::string export_compare(const Automaton& aut, const Rational& q, Relation rel = Relation::greater);

/// export_measure plus an assertion that measure lies outside
/// [numeric - band, numeric + band]; `unsat` confirms the numeric value.
std::string consistency_script(const Automaton& aut, double numeric, double band = 1e-6);

enum class SolverVerdict { sat, unsat, unknown };

std::string to_string(SolverVerdict v);

struct SolverResult {
	SolverVerdict verdict = SolverVerdict::unknown;
	/// Raw solver output (stdout and stderr).
	std::string output;
};

/// Runs `timeout <seconds> <solver> <script_path>`; the first line of output
/// decides the verdict.  Throws std::runtime_error when the process cannot
/// be started.
SolverResult run_solver(const std::string& solver, const std::string& script_path, int timeout_seconds = 120);

} // namespace treemeasure

#endif
