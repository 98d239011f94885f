#ifndef TREEMEASURE_FINITE_LATTICE_HPP
#define TREEMEASURE_FINITE_LATTICE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treemeasure/unary_mu.hpp"

namespace treemeasure {

/// Element of the powerset lattice P({0..g-1}).
using LatticeElement = std::uint32_t;
/// Element of V^d, one lattice element per coordinate 1..d.
using LatticeTuple = std::vector<LatticeElement>;

/**
 * Explicit monotone function delta: V^d -> V on V = P({0..g-1}).
 *
 * Inputs are indexed by concatenating the coordinate masks, coordinate i
 * occupying bits [(i-1)g, ig).  The coordinatewise order on V^d is then
 * plain bitmask inclusion on indices.
 */
class DeltaTable {
public:
	/// Throws DomainError on a size-bound violation, a value outside V, or a
	/// non-monotone table.
	DeltaTable(int g, int d, std::vector<LatticeElement> values);

	static DeltaTable from_function(int g, int d, const std::function<LatticeElement(std::span<const LatticeElement>)>& f);

	int g() const noexcept { return g_; }
	int d() const noexcept { return d_; }
	LatticeElement top() const noexcept { return (LatticeElement{1} << g_) - 1; }
	std::size_t size() const noexcept { return values_.size(); }

	LatticeElement operator()(std::span<const LatticeElement> args) const;
	LatticeElement at_index(std::size_t index) const { return values_.at(index); }
	const std::vector<LatticeElement>& values() const noexcept { return values_; }

	/// Replay format: `g`, `d` lines, then one `x1 .. xd -> y` line per input.
	std::string to_text() const;
	static DeltaTable parse(std::string_view text);

	bool operator==(const DeltaTable&) const = default;

private:
	int g_;
	int d_;
	std::vector<LatticeElement> values_;
};

/// g >= 1, d even >= 2 and ((2^g)^d)^2 <= 65536 (exhaustive monotonicity check).
void check_table_bounds(int g, int d);

DeltaTable random_monotone_delta(int g, int d, std::uint64_t seed);

/// mu x1. nu x2. ... nu xd. delta(x1..xd) by Knaster-Tarski iteration.
LatticeElement nested_fixpoint(const DeltaTable& tbl);

/// V^d interpretation of Delta, Bid_n and Cut_n for the unary evaluator, with
/// exact-equality stabilization and optional invariant checks.
class LatticeDomain {
public:
	using value_type = LatticeTuple;

	explicit LatticeDomain(const DeltaTable& tbl, bool check_invariants = false,
	                       std::size_t cap = 1'000'000);

	LatticeTuple apply(const Symbol& s, const LatticeTuple& x) const;
	bool stabilized(const LatticeTuple& prev, const LatticeTuple& next) const { return prev == next; }
	std::size_t iteration_cap() const noexcept { return cap_; }

	void after_basic(const Symbol& s, const LatticeTuple& y);
	void after_lim_step(const LimContext& ctx, const LatticeTuple& prev, const LatticeTuple& next);

	LatticeTuple delta(const LatticeTuple& x) const;
	LatticeTuple bottom() const { return LatticeTuple(static_cast<std::size_t>(tbl_.d()), 0); }

	bool is_ordered(const LatticeTuple& x) const;
	bool is_n_fixed(int n, const LatticeTuple& x) const;
	bool is_n_saturated(int n, const LatticeTuple& x) const;

	const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
	void violation(std::string msg);

	const DeltaTable& tbl_;
	bool check_;
	std::size_t cap_;
	std::vector<std::string> violations_;
};

std::string to_string(const LatticeTuple& x);

struct LatticeRun {
	LatticeElement value;
	std::vector<std::string> violations;
	EvalTrace trace;
};

/// Coordinate 1 of Phi_1 evaluated at the bottom tuple.
LatticeElement phi_on_lattice(const DeltaTable& tbl);
LatticeRun phi_on_lattice_checked(const DeltaTable& tbl);

struct Mismatch {
	std::size_t trial;
	std::uint64_t table_seed;
	LatticeElement phi;
	LatticeElement nested;
	std::string table_text;
};

struct EquivalenceReport {
	int g = 0;
	int d = 0;
	std::uint64_t seed = 0;
	std::size_t trials = 0;
	std::vector<Mismatch> mismatches;
	/// Invariant violations observed during the Phi_1 runs.
	std::vector<std::string> violations;

	bool ok() const noexcept { return mismatches.empty() && violations.empty(); }
};

/// Seed of the table used by trial `trial` of a run seeded with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial);

EquivalenceReport check_equivalence(int g, int d, std::uint64_t seed, std::size_t trials);

} // namespace treemeasure

#endif
