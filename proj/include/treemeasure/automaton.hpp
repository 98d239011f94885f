#ifndef TREEMEASURE_AUTOMATON_HPP
#define TREEMEASURE_AUTOMATON_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "treemeasure/errors.hpp"

namespace treemeasure {

using StateId = std::size_t;
using LetterId = std::size_t;

struct Transition {
	StateId state;
	LetterId letter;
	StateId left;
	StateId right;

	auto operator<=>(const Transition&) const = default;
};

/**
 * Nondeterministic min-parity automaton over infinite binary trees.
 *
 * States and letters are dense indices into `states` / `alphabet`.  A run
 * is accepting when on every branch the minimal priority seen infinitely
 * often is even; that condition is never executed directly, it is what the
 * measure pipeline evaluates.
 */
struct Automaton {
	std::vector<std::string> alphabet;
	std::vector<std::string> states;
	StateId initial = 0;
	std::vector<int> priority;
	/// Even priority ceiling, >= every priority.
	int d = 2;
	/// Kept sorted and duplicate-free.
	std::vector<Transition> transitions;

	std::size_t num_states() const noexcept { return states.size(); }
	std::size_t num_letters() const noexcept { return alphabet.size(); }

	std::optional<StateId> find_state(std::string_view name) const;
	std::optional<LetterId> find_letter(std::string_view name) const;
	/// Throws DomainError when the letter is not part of the alphabet.
	LetterId letter_id(std::string_view name) const;

	int max_priority() const;

	bool operator==(const Automaton&) const = default;
};

/// Sorts and deduplicates transitions and pads d to the smallest even
/// number >= every priority (and >= 2).
void normalize(Automaton& aut);

struct SourceLocation {
	std::size_t line = 0;
	std::size_t column = 0;
};

enum class Severity { error, warning };

struct Diagnostic {
	Severity severity;
	std::string message;
	std::optional<SourceLocation> location;
};

/// Parses the line-oriented `.pta` format.  Throws ParseError.
Automaton parse_automaton(std::string_view text);

/// All invariant violations (errors) plus blocking-state warnings.
std::vector<Diagnostic> validate(const Automaton& aut);

bool has_errors(const std::vector<Diagnostic>& diags);

std::string to_string(const Diagnostic& diag);

/// Deterministic serialization; parse_automaton(canonical_text(a)) == a
/// for every parsed automaton.
std::string canonical_text(const Automaton& aut);

} // namespace treemeasure

#endif
