#ifndef TREEMEASURE_POWERDOMAIN_HPP
#define TREEMEASURE_POWERDOMAIN_HPP

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "treemeasure/automaton.hpp"
#include "treemeasure/subset_lattice.hpp"
#include "treemeasure/unary_mu.hpp"

namespace treemeasure {

/**
 * Sparse probability distribution over RSets.
 *
 * The support is kept sorted by RSet and never stores explicit zeros.
 * Masses are not renormalized, except that Delta keeps the input total.
 */
class Dist {
public:
	using Atom = std::pair<RSet, double>;

	Dist() = default;

	/// Merges duplicate atoms (summing in input order), drops zero masses,
	/// sorts.  Throws DomainError on negative or non-finite masses.
	static Dist from_atoms(std::vector<Atom> atoms);

	double mass(RSet r) const;
	std::span<const Atom> atoms() const noexcept { return atoms_; }
	std::size_t support_size() const noexcept { return atoms_.size(); }
	double total() const;

	bool operator==(const Dist&) const = default;

private:
	std::vector<Atom> atoms_;
};

Dist point_mass(RSet r);

/// Delta_D(alpha)(R) = sum_a 1/|Sigma| sum_{Delta_a(RL,RR)=R} alpha(RL) alpha(RR).
Dist dist_delta(const Automaton& aut, const Dist& alpha);
Dist dist_delta(const DeltaKernel& kernel, const Dist& alpha);

/// Pushforward of alpha along bid_r(n, .) or cut_r(n, .).
Dist dist_superficial(const Automaton& aut, const Symbol& which, const Dist& alpha);
Dist dist_superficial(const RSetLayout& layout, const Symbol& which, const Dist& alpha);

/// Upward-closed families of P({0..width-1}), each as a bitmask over the
/// 2^width subsets.  width <= 4.
const std::vector<std::uint64_t>& upward_closed_families(std::size_t width);

/// alpha <= beta in the stochastic order, checked on every upward-closed
/// family (tolerance 1e-12).  Requires width <= 4.
bool dist_leq_naive(std::size_t width, const Dist& alpha, const Dist& beta);
bool dist_leq_naive(const Automaton& aut, const Dist& alpha, const Dist& beta);

/// alpha <= beta iff a transport plan moving mass only from R to supersets
/// R' exists; solved as max-flow, accepting an unrouted mass <= slack.
bool dist_leq_coupling(const Dist& alpha, const Dist& beta, double slack);
/// Mass of alpha that cannot be routed upward into beta.
double coupling_deficit(const Dist& alpha, const Dist& beta);

double tv_distance(const Dist& alpha, const Dist& beta);

/// `{0.5: 1, 0.5: 2}` style rendering of atoms as raw masks.
std::string to_string(const Dist& alpha);

/// Random distribution on P({0..width-1}) with 1..max_atoms atoms.
Dist random_dist(std::mt19937_64& rng, std::size_t width, std::size_t max_atoms);
/// Moves a random fraction of every atom's mass to a random superset.
Dist shift_upward(std::mt19937_64& rng, std::size_t width, const Dist& alpha);

struct OrderMismatch {
	std::size_t trial;
	std::size_t width;
	Dist alpha;
	Dist beta;
	bool naive;
	bool coupling;
};

struct OrderReport {
	std::size_t trials = 0;
	/// Pairs the naive check found comparable (alpha <= beta).
	std::size_t comparable = 0;
	std::vector<OrderMismatch> mismatches;

	bool ok() const noexcept { return mismatches.empty(); }
};

/// Compares dist_leq_coupling (slack 0) with dist_leq_naive on random pairs
/// of widths 1..4, half of them built comparable by upward shifts.  Trial 0
/// is the incomparable pair 1/2{p} + 1/2{q} versus 1/2{} + 1/2{p,q}, checked
/// in both directions.
OrderReport check_order_agreement(std::uint64_t seed, std::size_t trials);

struct MeasureOptions {
	double tol = 1e-9;
	std::size_t iteration_cap = 1'000'000;
	std::size_t max_support = 65536;
	bool check_invariants = false;
};

class SupportLimit : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/**
 * Interpretation of the basic symbols over distributions on R, with
 * total-variation stabilization.
 *
 * With invariant checking on it records, without aborting:
 *   - simplex drift above 1e-9 after any basic function,
 *   - support atoms that are not n-fixed after Bid_n,
 *   - lim iterates that fail to ascend (up) or descend (down) within
 *     coupling slack 1e-9,
 *   - Psi_n iterates with atoms that are not ordered or not n-fixed, or
 *     whose (q,i) marginals for i < n move under Delta_D by more than tol.
 */
class DistDomain {
public:
	using value_type = Dist;

	DistDomain(const Automaton& aut, MeasureOptions opts);

	Dist apply(const Symbol& s, const Dist& alpha);
	bool stabilized(const Dist& prev, const Dist& next) const { return tv_distance(prev, next) < opts_.tol; }
	std::size_t iteration_cap() const noexcept { return opts_.iteration_cap; }

	void after_basic(const Symbol& s, const Dist& y);
	void after_lim_step(const LimContext& ctx, const Dist& prev, const Dist& next);

	const RSetLayout& layout() const noexcept { return kernel_.layout(); }
	const std::vector<std::string>& violations() const noexcept { return violations_; }
	std::size_t violation_count() const noexcept { return violation_count_; }
	std::size_t max_support() const noexcept { return max_support_; }

private:
	void violation(std::string msg);

	const Automaton& aut_;
	MeasureOptions opts_;
	DeltaKernel kernel_;
	std::vector<std::string> violations_;
	std::size_t violation_count_ = 0;
	std::size_t max_support_ = 1;
};

DistDomain d_interpretation(const Automaton& aut, double tol, std::size_t cap);

struct LimReport {
	std::string path;
	std::string label;
	std::size_t invocations = 0;
	std::size_t iterations = 0;
	std::size_t max_iterations = 0;
	bool converged = true;
};

struct MeasureReport {
	/// Present only when every lim node stabilized.
	std::optional<double> measure;
	int d = 0;
	std::size_t states = 0;
	std::size_t term_size = 0;
	std::vector<LimReport> lims;
	std::size_t max_support = 0;
	std::vector<std::string> violations;
	std::size_t violation_count = 0;
	double tol = 0;
	std::size_t cap = 0;
	/// Set when evaluation stopped early (iteration or support limit).
	std::optional<std::string> error;
	bool iteration_limit = false;
	double wall_seconds = 0;
	/// Final distribution Phi_1(bottom); empty when evaluation failed.
	Dist final_distribution;
};

/// Sum of Phi_1(point(empty)) over { R | (q_I, 1) in R }.
MeasureReport measure_of_language(const Automaton& aut, const MeasureOptions& opts = {});

/// JSON document with the fields measure, d, states, term_size, lims,
/// max_support, violations, tol, cap (plus error when evaluation stopped).
/// Wall time is deliberately left out so output is reproducible.
std::string to_json(const MeasureReport& report);

} // namespace treemeasure

#endif
