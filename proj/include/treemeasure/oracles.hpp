#ifndef TREEMEASURE_ORACLES_HPP
#define TREEMEASURE_ORACLES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "treemeasure/automaton.hpp"
#include "treemeasure/rational.hpp"

namespace treemeasure {

/// Finite map from tree nodes (words over {L,R}, "" is the root) to letters.
using PatternAssignment = std::map<std::string, std::string>;

/// |Sigma|^-|dom p|.
Rational pattern_measure(const PatternAssignment& p, int alphabet_size);

/**
 * Automaton accepting exactly the trees that agree with p.  One state per
 * node of the prefix closure of dom p (named `n`, `nL`, `nLR`, ...) plus an
 * all-accepting `sink`; all priorities 2.  Nodes in dom p only have
 * transitions on their letter.
 */
Automaton pattern_automaton(const std::vector<std::string>& alphabet, const PatternAssignment& p);

/// Probability that some run exists on the uniformly labeled depth-k prefix
/// (nodes v with |v| < k), computed over plain state sets.  Needs all
/// priorities even.
double safety_prefix_measure(const Automaton& aut, int k);

/// Random pattern over nodes with |v| < max_depth; letters drawn from
/// alphabet_size letters named a, b, c, ...
PatternAssignment random_pattern(std::uint64_t seed, int alphabet_size, int max_depth);

/// Random automaton with priorities in {2, 4}, at most max_states states.
Automaton random_even_automaton(std::uint64_t seed, std::size_t max_states);

std::vector<std::string> letters(int alphabet_size);

} // namespace treemeasure

#endif
