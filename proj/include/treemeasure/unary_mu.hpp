#ifndef TREEMEASURE_UNARY_MU_HPP
#define TREEMEASURE_UNARY_MU_HPP

#include <concepts>
#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "treemeasure/errors.hpp"

namespace treemeasure {

enum class BasicKind { delta, bid, cut };

/// A basic function symbol: Delta, Bid_n or Cut_n.
struct Symbol {
	BasicKind kind = BasicKind::delta;
	int index = 0;

	static Symbol delta() { return {BasicKind::delta, 0}; }
	static Symbol bid(int n) { return {BasicKind::bid, n}; }
	static Symbol cut(int n) { return {BasicKind::cut, n}; }

	std::string name() const;

	bool operator==(const Symbol&) const = default;
};

/**
 * Term of the unary mu-calculus:
 *
 *     F ::= H | F1 ; F2 | up(F) | down(F)
 *
 * Immutable and cheap to copy (nodes are shared).  `up(F)` maps x to the
 * least fixed point of F above x, `down(F)` to the greatest one below x.
 * Lim nodes may carry a level annotation (the n of the S_n invariant the
 * node operates on); build_phi sets it, hand-written terms leave it 0.
 */
class Term {
public:
	enum class Kind { basic, seq, lim_up, lim_down };

	static Term basic(Symbol s);
	static Term seq(Term first, Term second);
	static Term lim_up(Term body, int level = 0);
	static Term lim_down(Term body, int level = 0);

	Kind kind() const noexcept;
	const Symbol& symbol() const;
	const Term& first() const;
	const Term& second() const;
	const Term& body() const;
	int level() const noexcept;

	bool is_lim() const noexcept { return kind() == Kind::lim_up || kind() == Kind::lim_down; }

private:
	struct Node;
	explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
	std::shared_ptr<const Node> node_;
};

/// Phi_1 for priority ceiling d (even, >= 2).
Term build_phi(int d);

/// Phi_n for 1 <= n <= d.
Term build_phi_n(int n, int d);

/// Number of basic-symbol leaves.
std::size_t term_size(const Term& t);

/// Checks Bid indices in 1..d and Cut indices in 1..d-1; throws DomainError.
void check_indices(const Term& t, int d);

/// Parenthesized rendering, e.g. `Bid1 ; up( up(Delta) ; Bid2 ; down(Delta) ; Cut1 )`.
std::string to_string(const Term& t);

/// Short description of a lim node for traces, e.g. `up(Delta)` or `up(Psi1)`.
std::string lim_label(const Term& lim);

// --- evaluation -----------------------------------------------------------

enum class LimDirection { up, down };

struct LimContext {
	const Term& node;
	const std::string& path;
	LimDirection direction;
	/// Level annotation of the node (0 when absent).
	int level;
	/// True when the body is a bare basic symbol, as in up(Delta).
	bool body_is_basic;
};

class IterationLimit : public std::runtime_error {
public:
	IterationLimit(std::string path, std::string label, std::size_t cap)
		: std::runtime_error("lim node " + path + " (" + label + ") did not stabilize within " +
		                     std::to_string(cap) + " iterations"),
		  path_(std::move(path)), cap_(cap) {}

	const std::string& path() const noexcept { return path_; }
	std::size_t cap() const noexcept { return cap_; }

private:
	std::string path_;
	std::size_t cap_;
};

/// Interpretation of the basic symbols over an element universe.  The
/// domain owns the stabilization test; the evaluator never compares
/// elements itself.
template <class D>
concept Domain = requires(D& dom, const typename D::value_type& v, const Symbol& s) {
	typename D::value_type;
	{ dom.apply(s, v) } -> std::convertible_to<typename D::value_type>;
	{ dom.stabilized(v, v) } -> std::convertible_to<bool>;
	{ dom.iteration_cap() } -> std::convertible_to<std::size_t>;
};

struct LimStats {
	std::string label;
	LimDirection direction = LimDirection::up;
	std::size_t invocations = 0;
	/// Body applications that changed the value, summed over invocations.
	std::size_t iterations = 0;
	/// All body applications, including the final stabilizing one.
	std::size_t applications = 0;
	std::size_t max_iterations = 0;
	bool converged = true;
};

struct EvalTrace {
	/// Keyed by term path: "/" is the root, "/1/0" the first child of the second child.
	std::map<std::string, LimStats> lims;
	std::size_t basic_applications = 0;
};

/**
 * Evaluates terms over a Domain.  Lim nodes iterate their body from the
 * argument until `stabilized(prev, next)`; the last iterate is returned.
 *
 * Optional domain hooks, called when present:
 *   after_basic(const Symbol&, const value_type&)
 *   after_lim_step(const LimContext&, const value_type& prev, const value_type& next)
 *
 * The trace stays readable after an IterationLimit was thrown.
 */
template <Domain D>
class Evaluator {
public:
	using value_type = typename D::value_type;

	explicit Evaluator(D& dom) : dom_(dom) {}

	value_type run(const Term& t, const value_type& x0)
	{
		std::string path = "/";
		return eval(t, x0, path);
	}

	const EvalTrace& trace() const noexcept { return trace_; }

private:
	value_type eval(const Term& t, const value_type& x, std::string& path)
	{
		switch (t.kind()) {
		case Term::Kind::basic: {
			value_type y = dom_.apply(t.symbol(), x);
			++trace_.basic_applications;
			if constexpr (requires { dom_.after_basic(t.symbol(), y); }) dom_.after_basic(t.symbol(), y);
			return y;
		}
		case Term::Kind::seq: {
			auto mid = with_child(path, 0, [&](std::string& p) { return eval(t.first(), x, p); });
			return with_child(path, 1, [&](std::string& p) { return eval(t.second(), mid, p); });
		}
		case Term::Kind::lim_up:
		case Term::Kind::lim_down:
			return eval_lim(t, x, path);
		}
		throw std::logic_error("unreachable term kind");
	}

	value_type eval_lim(const Term& t, const value_type& x, std::string& path)
	{
		const LimDirection dir = t.kind() == Term::Kind::lim_up ? LimDirection::up : LimDirection::down;
		LimStats& stats = trace_.lims[path];
		if (stats.invocations == 0) {
			stats.label = lim_label(t);
			stats.direction = dir;
		}
		++stats.invocations;
		const LimContext ctx{t, path, dir, t.level(), t.body().kind() == Term::Kind::basic};
		const std::size_t cap = dom_.iteration_cap();

		value_type prev = x;
		std::size_t productive = 0;
		for (std::size_t applied = 0;; ++applied) {
			if (applied >= cap) {
				trace_.lims[path].converged = false;
				throw IterationLimit(path, lim_label(t), cap);
			}
			value_type next = with_child(path, 0, [&](std::string& p) { return eval(t.body(), prev, p); });
			// `stats` may dangle after nested insertions into the map.
			LimStats& s = trace_.lims[path];
			++s.applications;
			if constexpr (requires { dom_.after_lim_step(ctx, prev, next); }) dom_.after_lim_step(ctx, prev, next);
			if (dom_.stabilized(prev, next)) {
				s.iterations += productive;
				if (productive > s.max_iterations) s.max_iterations = productive;
				return next;
			}
			++productive;
			prev = std::move(next);
		}
	}

	template <class F>
	auto with_child(std::string& path, int index, F&& f)
	{
		const std::size_t old = path.size();
		if (path.size() > 1) path += '/';
		path += std::to_string(index);
		struct Restore {
			std::string& p;
			std::size_t n;
			~Restore() { p.resize(n); }
		} restore{path, old};
		return f(path);
	}

	D& dom_;
	EvalTrace trace_;
};

template <Domain D>
typename D::value_type evaluate(const Term& t, D& dom, const typename D::value_type& x0)
{
	return Evaluator<D>(dom).run(t, x0);
}

template <Domain D>
std::pair<typename D::value_type, EvalTrace> evaluate_traced(const Term& t, D& dom, const typename D::value_type& x0)
{
	Evaluator<D> ev(dom);
	auto v = ev.run(t, x0);
	return {std::move(v), ev.trace()};
}

} // namespace treemeasure

#endif
