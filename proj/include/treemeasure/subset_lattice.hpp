#ifndef TREEMEASURE_SUBSET_LATTICE_HPP
#define TREEMEASURE_SUBSET_LATTICE_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "treemeasure/automaton.hpp"

namespace treemeasure {

/// Subset of Q, one bit per state.
struct QSet {
	std::uint64_t bits = 0;

	bool contains(StateId q) const noexcept { return (bits >> q) & 1u; }
	void insert(StateId q) noexcept { bits |= std::uint64_t{1} << q; }
	bool subset_of(QSet other) const noexcept { return (bits & ~other.bits) == 0; }

	auto operator<=>(const QSet&) const = default;
};

/// Subset of Q x {1..d}.  Totally ordered by the numeric value of the mask
/// so that distribution supports have a canonical order.
struct RSet {
	std::uint64_t bits = 0;

	bool subset_of(RSet other) const noexcept { return (bits & ~other.bits) == 0; }

	auto operator<=>(const RSet&) const = default;
};

/**
 * Bit layout of RSets for a fixed |Q| and d.
 *
 * Coordinate-major: the pair (q, i) lives at bit (i-1)*|Q| + q, so the
 * priority-i slice { q | (q,i) in R } is a contiguous |Q|-bit field.
 */
class RSetLayout {
public:
	RSetLayout(std::size_t num_states, int d);
	/// Throws DomainError when |Q|*d exceeds 64.
	static RSetLayout of(const Automaton& aut);

	std::size_t num_states() const noexcept { return states_; }
	int d() const noexcept { return d_; }
	std::size_t width() const noexcept { return states_ * static_cast<std::size_t>(d_); }

	std::uint64_t bit(StateId q, int i) const noexcept
	{
		return std::uint64_t{1} << ((static_cast<std::size_t>(i) - 1) * states_ + q);
	}
	bool contains(RSet r, StateId q, int i) const noexcept { return (r.bits & bit(q, i)) != 0; }

	QSet slice(RSet r, int i) const noexcept
	{
		return QSet{(r.bits >> ((static_cast<std::size_t>(i) - 1) * states_)) & state_mask_};
	}
	RSet with_slice(RSet r, int i, QSet s) const noexcept
	{
		auto shift = (static_cast<std::size_t>(i) - 1) * states_;
		return RSet{(r.bits & ~(state_mask_ << shift)) | ((s.bits & state_mask_) << shift)};
	}

	RSet empty() const noexcept { return RSet{0}; }
	RSet full() const noexcept { return RSet{full_}; }
	QSet all_states() const noexcept { return QSet{state_mask_}; }

	std::string to_string(RSet r, const Automaton* aut = nullptr) const;

private:
	std::size_t states_;
	int d_;
	std::uint64_t state_mask_;
	std::uint64_t full_;
};

/// delta_a(rl, rr) = { q | (q,a,qL,qR) in gamma, (qL,Omega(q)) in rl, (qR,Omega(q)) in rr }.
QSet delta_a(const Automaton& aut, LetterId a, RSet rl, RSet rr);

/// Coordinate i of the result is delta_a applied to the i-truncated inputs:
/// (q,i) is in the result iff some (q,a,qL,qR) has (qL,min(Omega(q),i)) in rl
/// and (qR,min(Omega(q),i)) in rr.
RSet big_delta_a(const Automaton& aut, LetterId a, RSet rl, RSet rr);

/// Precomputed transition tables for repeated big_delta_a evaluation.
class DeltaKernel {
public:
	explicit DeltaKernel(const Automaton& aut);

	const RSetLayout& layout() const noexcept { return layout_; }
	std::size_t num_letters() const noexcept { return by_letter_.size(); }

	RSet big_delta(LetterId a, RSet rl, RSet rr) const;

private:
	struct Edge {
		StateId state;
		int priority;
		StateId left;
		StateId right;
	};
	RSetLayout layout_;
	std::vector<std::vector<Edge>> by_letter_;
};

/// Coordinates >= n take coordinate n-2 (coordinate -1 is empty, 0 is full).
RSet bid_r(const RSetLayout& layout, int n, RSet r);
/// Coordinates >= n take coordinate n+1.
RSet cut_r(const RSetLayout& layout, int n, RSet r);

inline RSet bid_r(const Automaton& aut, int n, RSet r) { return bid_r(RSetLayout::of(aut), n, r); }
inline RSet cut_r(const Automaton& aut, int n, RSet r) { return cut_r(RSetLayout::of(aut), n, r); }

/// The parity order 1 < 3 < 5 < ... < 6 < 4 < 2 (reflexive).
bool parity_leq(int i, int j);

bool is_ordered(const RSetLayout& layout, RSet r);
/// 1 <= n <= d+1; n = d+1 holds vacuously.
bool is_n_fixed(const RSetLayout& layout, int n, RSet r);

inline bool is_ordered(const Automaton& aut, RSet r) { return is_ordered(RSetLayout::of(aut), r); }
inline bool is_n_fixed(const Automaton& aut, int n, RSet r) { return is_n_fixed(RSetLayout::of(aut), n, r); }

} // namespace treemeasure

#endif
