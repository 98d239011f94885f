#include "treemeasure/automaton.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

namespace treemeasure {

std::optional<StateId> Automaton::find_state(std::string_view name) const
{
	auto it = std::find(states.begin(), states.end(), name);
	if (it == states.end()) return std::nullopt;
	return static_cast<StateId>(it - states.begin());
}

std::optional<LetterId> Automaton::find_letter(std::string_view name) const
{
	auto it = std::find(alphabet.begin(), alphabet.end(), name);
	if (it == alphabet.end()) return std::nullopt;
	return static_cast<LetterId>(it - alphabet.begin());
}

LetterId Automaton::letter_id(std::string_view name) const
{
	if (auto id = find_letter(name)) return *id;
	throw DomainError("unknown letter " + std::string(name));
}

int Automaton::max_priority() const
{
	int m = 0;
	for (int p : priority) m = std::max(m, p);
	return m;
}

void normalize(Automaton& aut)
{
	std::sort(aut.transitions.begin(), aut.transitions.end());
	aut.transitions.erase(std::unique(aut.transitions.begin(), aut.transitions.end()),
	                      aut.transitions.end());
	int m = std::max(aut.max_priority(), 2);
	aut.d = (m % 2 == 0) ? m : m + 1;
}

namespace {

struct Token {
	std::string_view text;
	std::size_t column;
};

std::vector<Token> tokenize(std::string_view line)
{
	if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
	std::vector<Token> out;
	std::size_t i = 0;
	while (i < line.size()) {
		while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
		if (i >= line.size()) break;
		std::size_t start = i;
		while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
		out.push_back({line.substr(start, i - start), start + 1});
	}
	return out;
}

bool is_identifier(std::string_view s)
{
	if (s.empty()) return false;
	return std::all_of(s.begin(), s.end(), [](char c) {
		return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
	});
}

struct PendingTransition {
	std::size_t line;
	Token state, letter, left, right;
};

} // namespace

Automaton parse_automaton(std::string_view text)
{
	Automaton aut;
	std::map<std::string, StateId, std::less<>> state_ids;
	std::map<std::string, LetterId, std::less<>> letter_ids;
	std::optional<std::pair<std::size_t, Token>> initial;
	std::optional<std::size_t> alphabet_line;
	std::vector<PendingTransition> pending;

	std::size_t line_no = 0;
	std::size_t pos = 0;
	while (pos <= text.size()) {
		std::size_t eol = text.find('\n', pos);
		if (eol == std::string_view::npos) eol = text.size();
		std::string_view line = text.substr(pos, eol - pos);
		pos = eol + 1;
		++line_no;

		auto toks = tokenize(line);
		if (toks.empty()) continue;

		auto expect_args = [&](std::size_t n) {
			if (toks.size() != n + 1)
				throw ParseError(line_no, toks[0].column,
				                 std::string(toks[0].text) + " expects " + std::to_string(n) +
				                     " argument(s), got " + std::to_string(toks.size() - 1));
		};
		auto check_name = [&](const Token& t) {
			if (!is_identifier(t.text))
				throw ParseError(line_no, t.column, "invalid name '" + std::string(t.text) + "'");
		};

		std::string_view directive = toks[0].text;
		if (directive == "alphabet") {
			if (alphabet_line)
				throw ParseError(line_no, toks[0].column,
				                 "duplicate alphabet line (first on line " + std::to_string(*alphabet_line) + ")");
			alphabet_line = line_no;
			if (toks.size() < 2) throw ParseError(line_no, toks[0].column, "empty alphabet");
			for (std::size_t i = 1; i < toks.size(); ++i) {
				check_name(toks[i]);
				auto [it, inserted] = letter_ids.emplace(std::string(toks[i].text), aut.alphabet.size());
				if (!inserted)
					throw ParseError(line_no, toks[i].column, "duplicate letter " + std::string(toks[i].text));
				aut.alphabet.emplace_back(toks[i].text);
			}
		} else if (directive == "state") {
			expect_args(2);
			check_name(toks[1]);
			int prio = 0;
			auto [ptr, ec] = std::from_chars(toks[2].text.data(), toks[2].text.data() + toks[2].text.size(), prio);
			if (ec != std::errc{} || ptr != toks[2].text.data() + toks[2].text.size())
				throw ParseError(line_no, toks[2].column, "priority must be an integer");
			if (prio < 1) throw ParseError(line_no, toks[2].column, "priority < 1");
			auto [it, inserted] = state_ids.emplace(std::string(toks[1].text), aut.states.size());
			if (!inserted)
				throw ParseError(line_no, toks[1].column, "duplicate state " + std::string(toks[1].text));
			aut.states.emplace_back(toks[1].text);
			aut.priority.push_back(prio);
		} else if (directive == "initial") {
			expect_args(1);
			if (initial)
				throw ParseError(line_no, toks[0].column,
				                 "duplicate initial line (first on line " + std::to_string(initial->first) + ")");
			initial = std::make_pair(line_no, toks[1]);
		} else if (directive == "trans") {
			expect_args(4);
			pending.push_back({line_no, toks[1], toks[2], toks[3], toks[4]});
		} else {
			throw ParseError(line_no, toks[0].column, "unknown directive " + std::string(directive));
		}
	}

	if (!alphabet_line) throw ParseError(line_no, 1, "missing alphabet line");
	if (aut.states.empty()) throw ParseError(line_no, 1, "no states declared");
	if (!initial) throw ParseError(line_no, 1, "missing initial line");

	auto resolve_state = [&](std::size_t line, const Token& t) {
		auto it = state_ids.find(t.text);
		if (it == state_ids.end()) throw ParseError(line, t.column, "unknown state " + std::string(t.text));
		return it->second;
	};
	aut.initial = resolve_state(initial->first, initial->second);
	for (const auto& p : pending) {
		auto lit = letter_ids.find(p.letter.text);
		if (lit == letter_ids.end())
			throw ParseError(p.line, p.letter.column, "unknown letter " + std::string(p.letter.text));
		aut.transitions.push_back({resolve_state(p.line, p.state), lit->second,
		                           resolve_state(p.line, p.left), resolve_state(p.line, p.right)});
	}
	normalize(aut);
	return aut;
}

std::vector<Diagnostic> validate(const Automaton& aut)
{
	std::vector<Diagnostic> out;
	auto error = [&](std::string msg) { out.push_back({Severity::error, std::move(msg), std::nullopt}); };

	if (aut.alphabet.empty()) error("empty alphabet");
	if (aut.states.empty()) error("empty state list");
	if (aut.priority.size() != aut.states.size())
		error("priority table has " + std::to_string(aut.priority.size()) + " entries for " +
		      std::to_string(aut.states.size()) + " states");
	if (aut.d % 2 != 0 || aut.d < 2) error("d = " + std::to_string(aut.d) + " is not an even number >= 2");

	auto check_unique = [&](const std::vector<std::string>& names, const char* what) {
		std::vector<std::string> sorted = names;
		std::sort(sorted.begin(), sorted.end());
		for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
			if (sorted[i] == sorted[i + 1]) error(std::string("duplicate ") + what + " " + sorted[i]);
		for (const auto& n : names)
			if (!is_identifier(n)) error(std::string("invalid ") + what + " name '" + n + "'");
	};
	check_unique(aut.alphabet, "letter");
	check_unique(aut.states, "state");

	for (std::size_t q = 0; q < aut.priority.size() && q < aut.states.size(); ++q) {
		int p = aut.priority[q];
		if (p < 1 || p > aut.d)
			error("state " + aut.states[q] + " has priority " + std::to_string(p) + " outside 1.." +
			      std::to_string(aut.d));
	}
	if (aut.initial >= aut.states.size()) error("initial state index out of range");

	bool references_ok = true;
	for (const auto& t : aut.transitions) {
		if (t.state >= aut.num_states() || t.left >= aut.num_states() || t.right >= aut.num_states() ||
		    t.letter >= aut.num_letters()) {
			error("transition references an unknown state or letter");
			references_ok = false;
		}
	}
	for (std::size_t i = 0; i + 1 < aut.transitions.size(); ++i)
		if (aut.transitions[i] == aut.transitions[i + 1]) error("duplicate transition");
	if (!std::is_sorted(aut.transitions.begin(), aut.transitions.end()))
		error("transitions are not in canonical order");

	if (references_ok) {
		// Blocking is legal for a nondeterministic automaton: warn only.
		std::vector<std::vector<bool>> enabled(aut.num_states(), std::vector<bool>(aut.num_letters()));
		for (const auto& t : aut.transitions) enabled[t.state][t.letter] = true;
		for (StateId q = 0; q < aut.num_states(); ++q) {
			std::string missing;
			for (LetterId a = 0; a < aut.num_letters(); ++a)
				if (!enabled[q][a]) missing += (missing.empty() ? "" : " ") + aut.alphabet[a];
			if (!missing.empty())
				out.push_back({Severity::warning, "state " + aut.states[q] + " has no transition on: " + missing,
				               std::nullopt});
		}
	}
	return out;
}

bool has_errors(const std::vector<Diagnostic>& diags)
{
	return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.severity == Severity::error; });
}

std::string to_string(const Diagnostic& diag)
{
	std::string s = diag.severity == Severity::error ? "error" : "warning";
	if (diag.location)
		s += " (line " + std::to_string(diag.location->line) + ", column " + std::to_string(diag.location->column) + ")";
	return s + ": " + diag.message;
}

std::string canonical_text(const Automaton& aut)
{
	std::ostringstream os;
	os << "alphabet";
	for (const auto& a : aut.alphabet) os << ' ' << a;
	os << '\n';
	for (StateId q = 0; q < aut.num_states(); ++q) os << "state " << aut.states[q] << ' ' << aut.priority[q] << '\n';
	os << "initial " << aut.states[aut.initial] << '\n';
	std::vector<Transition> sorted = aut.transitions;
	std::sort(sorted.begin(), sorted.end());
	sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
	for (const auto& t : sorted)
		os << "trans " << aut.states[t.state] << ' ' << aut.alphabet[t.letter] << ' ' << aut.states[t.left] << ' '
		   << aut.states[t.right] << '\n';
	return os.str();
}

} // namespace treemeasure
