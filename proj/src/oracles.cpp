#include "treemeasure/oracles.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace treemeasure {

namespace {

void check_node(const std::string& v)
{
	for (char c : v)
		if (c != 'L' && c != 'R') throw DomainError("pattern node '" + v + "' is not a word over {L,R}");
}

std::string state_name(const std::string& node) { return "n" + node; }

} // namespace

std::vector<std::string> letters(int alphabet_size)
{
	if (alphabet_size < 1 || alphabet_size > 26) throw DomainError("alphabet size must be in 1..26");
	std::vector<std::string> out;
	for (int i = 0; i < alphabet_size; ++i) out.emplace_back(1, static_cast<char>('a' + i));
	return out;
}

Rational pattern_measure(const PatternAssignment& p, int alphabet_size)
{
	if (alphabet_size < 1) throw DomainError("alphabet size must be >= 1");
	std::int64_t den = 1;
	for (std::size_t i = 0; i < p.size(); ++i) {
		if (den > INT64_MAX / alphabet_size) throw DomainError("pattern too large for an exact 64-bit rational");
		den *= alphabet_size;
	}
	return Rational(1, den);
}

Automaton pattern_automaton(const std::vector<std::string>& alphabet, const PatternAssignment& p)
{
	if (alphabet.empty()) throw DomainError("empty alphabet");
	Automaton aut;
	aut.alphabet = alphabet;

	std::set<std::string> closure;
	for (const auto& [v, letter] : p) {
		check_node(v);
		if (std::find(alphabet.begin(), alphabet.end(), letter) == alphabet.end())
			throw DomainError("pattern letter '" + letter + "' at node '" + v + "' is not in the alphabet");
		for (std::size_t len = 0; len <= v.size(); ++len) closure.insert(v.substr(0, len));
	}

	// Shorter words first, so the root (if any) is state 0.
	std::vector<std::string> nodes(closure.begin(), closure.end());
	std::stable_sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
	for (const auto& v : nodes) aut.states.push_back(state_name(v));
	const StateId sink = aut.states.size();
	aut.states.push_back("sink");
	aut.priority.assign(aut.states.size(), 2);
	aut.initial = nodes.empty() ? sink : 0;

	auto id_of = [&](const std::string& v) -> StateId {
		auto it = std::find(nodes.begin(), nodes.end(), v);
		return it == nodes.end() ? sink : static_cast<StateId>(it - nodes.begin());
	};
	for (StateId q = 0; q < nodes.size(); ++q) {
		const std::string& v = nodes[q];
		const StateId left = id_of(v + "L");
		const StateId right = id_of(v + "R");
		auto fixed = p.find(v);
		for (LetterId a = 0; a < alphabet.size(); ++a)
			if (fixed == p.end() || fixed->second == alphabet[a]) aut.transitions.push_back({q, a, left, right});
	}
	for (LetterId a = 0; a < alphabet.size(); ++a) aut.transitions.push_back({sink, a, sink, sink});
	normalize(aut);
	return aut;
}

double safety_prefix_measure(const Automaton& aut, int k)
{
	if (k < 0) throw DomainError("k must be >= 0");
	for (std::size_t q = 0; q < aut.num_states(); ++q)
		if (aut.priority[q] % 2 != 0) throw DomainError("safety oracle needs even priorities; state " + aut.states[q] + " has " + std::to_string(aut.priority[q]));
	if (aut.num_states() > 64) throw DomainError("safety oracle supports at most 64 states");
	if (aut.alphabet.empty()) throw DomainError("empty alphabet");

	const std::uint64_t all = aut.num_states() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << aut.num_states()) - 1;
	std::map<std::uint64_t, double> beta{{all, 1.0}};
	const double w = 1.0 / static_cast<double>(aut.alphabet.size());
	for (int step = 0; step < k; ++step) {
		std::map<std::uint64_t, double> next;
		for (LetterId a = 0; a < aut.alphabet.size(); ++a)
			for (const auto& [sl, ml] : beta)
				for (const auto& [sr, mr] : beta) {
					std::uint64_t s = 0;
					for (const Transition& t : aut.transitions)
						if (t.letter == a && ((sl >> t.left) & 1u) && ((sr >> t.right) & 1u)) s |= std::uint64_t{1} << t.state;
					next[s] += w * ml * mr;
				}
		beta = std::move(next);
	}
	double m = 0;
	for (const auto& [s, mass] : beta)
		if ((s >> aut.initial) & 1u) m += mass;
	return m;
}

PatternAssignment random_pattern(std::uint64_t seed, int alphabet_size, int max_depth)
{
	std::mt19937_64 rng(seed);
	const auto sigma = letters(alphabet_size);
	std::vector<std::string> nodes{""};
	for (std::size_t i = 0; i < nodes.size(); ++i)
		if (static_cast<int>(nodes[i].size()) + 1 < max_depth) {
			nodes.push_back(nodes[i] + "L");
			nodes.push_back(nodes[i] + "R");
		}
	if (max_depth < 1) nodes.clear();
	PatternAssignment p;
	std::bernoulli_distribution pick(0.4);
	std::uniform_int_distribution<int> letter(0, alphabet_size - 1);
	for (const auto& v : nodes)
		if (pick(rng)) p[v] = sigma[static_cast<std::size_t>(letter(rng))];
	return p;
}

Automaton random_even_automaton(std::uint64_t seed, std::size_t max_states)
{
	if (max_states < 1) throw DomainError("max_states must be >= 1");
	std::mt19937_64 rng(seed);
	Automaton aut;
	aut.alphabet = {"a", "b"};
	const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_states)(rng);
	std::uniform_int_distribution<int> prio(1, 2);
	for (std::size_t q = 0; q < n; ++q) {
		aut.states.push_back("q" + std::to_string(q));
		aut.priority.push_back(2 * prio(rng));
	}
	std::uniform_int_distribution<StateId> state(0, n - 1);
	std::bernoulli_distribution enabled(0.9), second(0.5);
	for (StateId q = 0; q < n; ++q)
		for (LetterId a = 0; a < 2; ++a) {
			if (!enabled(rng)) continue;
			const int count = second(rng) ? 2 : 1;
			for (int c = 0; c < count; ++c) aut.transitions.push_back({q, a, state(rng), state(rng)});
		}
	aut.initial = 0;
	normalize(aut);
	return aut;
}

} // namespace treemeasure
