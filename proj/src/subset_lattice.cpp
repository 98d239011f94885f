#include "treemeasure/subset_lattice.hpp"

#include <algorithm>

namespace treemeasure {

RSetLayout::RSetLayout(std::size_t num_states, int d) : states_(num_states), d_(d)
{
	if (num_states == 0 || d < 1) throw DomainError("RSet layout needs at least one state and one coordinate");
	if (width() > 64)
		throw DomainError("|Q|*d = " + std::to_string(width()) + " exceeds the 64-bit RSet width");
	state_mask_ = states_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << states_) - 1;
	full_ = width() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width()) - 1;
}

RSetLayout RSetLayout::of(const Automaton& aut) { return RSetLayout(aut.num_states(), aut.d); }

std::string RSetLayout::to_string(RSet r, const Automaton* aut) const
{
	std::string s = "{";
	bool first = true;
	for (int i = 1; i <= d_; ++i)
		for (StateId q = 0; q < states_; ++q)
			if (contains(r, q, i)) {
				if (!first) s += ",";
				first = false;
				s += "(" + (aut ? aut->states[q] : std::to_string(q)) + "," + std::to_string(i) + ")";
			}
	return s + "}";
}

namespace {

void check_letter(const Automaton& aut, LetterId a)
{
	if (a >= aut.num_letters()) throw DomainError("unknown letter index " + std::to_string(a));
}

} // namespace

QSet delta_a(const Automaton& aut, LetterId a, RSet rl, RSet rr)
{
	check_letter(aut, a);
	RSetLayout layout = RSetLayout::of(aut);
	QSet out;
	for (const auto& t : aut.transitions) {
		if (t.letter != a) continue;
		int p = aut.priority[t.state];
		if (layout.contains(rl, t.left, p) && layout.contains(rr, t.right, p)) out.insert(t.state);
	}
	return out;
}

RSet big_delta_a(const Automaton& aut, LetterId a, RSet rl, RSet rr)
{
	check_letter(aut, a);
	return DeltaKernel(aut).big_delta(a, rl, rr);
}

DeltaKernel::DeltaKernel(const Automaton& aut) : layout_(RSetLayout::of(aut)), by_letter_(aut.num_letters())
{
	for (const auto& t : aut.transitions)
		by_letter_.at(t.letter).push_back({t.state, aut.priority.at(t.state), t.left, t.right});
}

RSet DeltaKernel::big_delta(LetterId a, RSet rl, RSet rr) const
{
	if (a >= by_letter_.size()) throw DomainError("unknown letter index " + std::to_string(a));
	const int d = layout_.d();
	std::uint64_t out = 0;
	for (const Edge& e : by_letter_[a]) {
		// Coordinates i >= priority all read the priority coordinate.
		const int top = std::min(e.priority, d);
		for (int i = 1; i < top; ++i)
			if ((rl.bits & layout_.bit(e.left, i)) && (rr.bits & layout_.bit(e.right, i)))
				out |= layout_.bit(e.state, i);
		if ((rl.bits & layout_.bit(e.left, top)) && (rr.bits & layout_.bit(e.right, top)))
			for (int i = top; i <= d; ++i) out |= layout_.bit(e.state, i);
	}
	return RSet{out};
}

RSet bid_r(const RSetLayout& layout, int n, RSet r)
{
	const int d = layout.d();
	if (n < 1 || n > d) throw DomainError("Bid index " + std::to_string(n) + " outside 1.." + std::to_string(d));
	QSet source = n == 1 ? QSet{} : n == 2 ? layout.all_states() : layout.slice(r, n - 2);
	RSet out = r;
	for (int i = n; i <= d; ++i) out = layout.with_slice(out, i, source);
	return out;
}

RSet cut_r(const RSetLayout& layout, int n, RSet r)
{
	const int d = layout.d();
	if (n < 1 || n > d - 1)
		throw DomainError("Cut index " + std::to_string(n) + " outside 1.." + std::to_string(d - 1));
	QSet source = layout.slice(r, n + 1);
	RSet out = r;
	for (int i = n; i <= d; ++i) out = layout.with_slice(out, i, source);
	return out;
}

bool parity_leq(int i, int j)
{
	const bool i_odd = i % 2 != 0;
	const bool j_odd = j % 2 != 0;
	if (i_odd && j_odd) return i <= j;
	if (!i_odd && !j_odd) return i >= j;
	return i_odd;
}

bool is_ordered(const RSetLayout& layout, RSet r)
{
	const int d = layout.d();
	for (int i = 1; i <= d; ++i)
		for (int j = 1; j <= d; ++j)
			if (i != j && parity_leq(i, j) && !layout.slice(r, i).subset_of(layout.slice(r, j))) return false;
	return true;
}

bool is_n_fixed(const RSetLayout& layout, int n, RSet r)
{
	const int d = layout.d();
	if (n < 1 || n > d + 1) throw DomainError("n-fixed index " + std::to_string(n) + " outside 1.." + std::to_string(d + 1));
	if (n == d + 1) return true;
	QSet ref = layout.slice(r, n);
	for (int i = n + 1; i <= d; ++i)
		if (layout.slice(r, i) != ref) return false;
	return true;
}

} // namespace treemeasure
