#ifndef TREEMEASURE_SMTLIB_HPP
#define TREEMEASURE_SMTLIB_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace treemeasure {

/// S-expression node: an atom or a list.
struct SExpr {
	bool is_atom = false;
	std::string atom;
	std::vector<SExpr> list;
	std::size_t line = 0;

	bool is_list() const noexcept { return !is_atom; }
	bool head_is(std::string_view name) const { return !is_atom && !list.empty() && list[0].is_atom && list[0].atom == name; }
};

/// Splits a script into top-level commands.  Throws ParseError on
/// unbalanced parentheses or stray tokens.
std::vector<SExpr> parse_smtlib(std::string_view text);

/**
 * Problems found in a script (empty when well-formed): unknown commands,
 * symbols used before declaration, duplicate declarations, wrong arity of
 * define-fun calls.  Covers the fragment emitted by the exporter.
 */
std::vector<std::string> validate_smtlib(std::string_view text);

struct FormulaStats {
	/// Real-sorted binders (declare-const, define-fun parameters, quantifier
	/// variables), not counting `measure`.
	std::size_t variables = 0;
	/// Quantifier blocks along the worst nesting chain, with define-fun
	/// calls expanded and polarity taken into account.
	std::size_t alternation_depth = 0;
};

/// Throws ParseError / DomainError on malformed input.
FormulaStats formula_stats(std::string_view text);

} // namespace treemeasure

#endif
