#include "treemeasure/finite_lattice.hpp"

#include "treemeasure/subset_lattice.hpp"

#include <random>
#include <sstream>

namespace treemeasure {

namespace {

std::size_t input_index(int g, std::span<const LatticeElement> args)
{
	std::size_t idx = 0;
	for (std::size_t i = 0; i < args.size(); ++i) idx |= static_cast<std::size_t>(args[i]) << (i * static_cast<std::size_t>(g));
	return idx;
}

LatticeTuple decode_index(int g, int d, std::size_t idx)
{
	LatticeTuple x(static_cast<std::size_t>(d));
	const std::size_t mask = (std::size_t{1} << g) - 1;
	for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = static_cast<LatticeElement>((idx >> (i * g)) & mask);
	return x;
}

bool subset(LatticeElement a, LatticeElement b) { return (a & ~b) == 0; }

} // namespace

void check_table_bounds(int g, int d)
{
	if (g < 1) throw DomainError("ground set size g must be >= 1");
	if (d < 2 || d % 2 != 0) throw DomainError("d must be even and >= 2");
	// (2^g)^d inputs, every ordered pair of them checked for monotonicity.
	if (2 * g * d > 16)
		throw DomainError("table with g=" + std::to_string(g) + ", d=" + std::to_string(d) +
		                  " exceeds the exhaustive-check bound ((2^g)^d)^2 <= 65536");
}

DeltaTable::DeltaTable(int g, int d, std::vector<LatticeElement> values) : g_(g), d_(d), values_(std::move(values))
{
	check_table_bounds(g, d);
	const std::size_t n = std::size_t{1} << (g * d);
	if (values_.size() != n)
		throw DomainError("table has " + std::to_string(values_.size()) + " entries, expected " + std::to_string(n));
	for (LatticeElement v : values_)
		if (v > top()) throw DomainError("table value " + std::to_string(v) + " outside the lattice");
	for (std::size_t x = 0; x < n; ++x)
		for (std::size_t y = 0; y < n; ++y)
			if ((x & ~y) == 0 && !subset(values_[x], values_[y]))
				throw DomainError("table is not monotone at inputs " + to_string(decode_index(g, d, x)) + " <= " +
				                  to_string(decode_index(g, d, y)));
}

DeltaTable DeltaTable::from_function(int g, int d, const std::function<LatticeElement(std::span<const LatticeElement>)>& f)
{
	check_table_bounds(g, d);
	const std::size_t n = std::size_t{1} << (g * d);
	std::vector<LatticeElement> values(n);
	for (std::size_t idx = 0; idx < n; ++idx) {
		LatticeTuple x = decode_index(g, d, idx);
		values[idx] = f(x);
	}
	return DeltaTable(g, d, std::move(values));
}

LatticeElement DeltaTable::operator()(std::span<const LatticeElement> args) const
{
	if (args.size() != static_cast<std::size_t>(d_)) throw DomainError("delta expects " + std::to_string(d_) + " arguments");
	return values_[input_index(g_, args)];
}

std::string DeltaTable::to_text() const
{
	std::ostringstream os;
	os << "g " << g_ << "\nd " << d_ << '\n';
	for (std::size_t idx = 0; idx < values_.size(); ++idx) {
		for (LatticeElement v : decode_index(g_, d_, idx)) os << v << ' ';
		os << "-> " << values_[idx] << '\n';
	}
	return os.str();
}

DeltaTable DeltaTable::parse(std::string_view text)
{
	std::istringstream is{std::string(text)};
	std::string key;
	int g = 0, d = 0;
	if (!(is >> key >> g) || key != "g") throw DomainError("replay table: expected 'g <int>'");
	if (!(is >> key >> d) || key != "d") throw DomainError("replay table: expected 'd <int>'");
	check_table_bounds(g, d);
	std::vector<LatticeElement> values(std::size_t{1} << (g * d));
	std::vector<bool> seen(values.size());
	for (std::size_t line = 0; line < values.size(); ++line) {
		LatticeTuple x(static_cast<std::size_t>(d));
		for (auto& v : x)
			if (!(is >> v)) throw DomainError("replay table: truncated mapping line");
		std::string arrow;
		LatticeElement y = 0;
		if (!(is >> arrow >> y) || arrow != "->") throw DomainError("replay table: expected '-> <value>'");
		for (auto v : x)
			if (v >= (LatticeElement{1} << g)) throw DomainError("replay table: input outside the lattice");
		const std::size_t idx = input_index(g, x);
		if (seen[idx]) throw DomainError("replay table: duplicate input");
		seen[idx] = true;
		values[idx] = y;
	}
	return DeltaTable(g, d, std::move(values));
}

DeltaTable random_monotone_delta(int g, int d, std::uint64_t seed)
{
	check_table_bounds(g, d);
	std::mt19937_64 rng(seed);
	const int bits = g * d;
	const std::size_t n = std::size_t{1} << bits;
	const LatticeElement top = (LatticeElement{1} << g) - 1;

	// Sparse random generators, then the monotone closure
	// f(x) = join of generators at inputs below x.
	static constexpr double densities[] = {0.02, 0.05, 0.1, 0.2, 0.35};
	const double density = densities[rng() % std::size(densities)];
	std::bernoulli_distribution place(density);
	std::uniform_int_distribution<LatticeElement> value(1, top);
	std::vector<LatticeElement> values(n, 0);
	for (std::size_t idx = 0; idx < n; ++idx)
		if (place(rng)) values[idx] = value(rng);
	for (int b = 0; b < bits; ++b)
		for (std::size_t idx = 0; idx < n; ++idx)
			if (idx & (std::size_t{1} << b)) values[idx] |= values[idx ^ (std::size_t{1} << b)];
	return DeltaTable(g, d, std::move(values));
}

namespace {

LatticeElement solve_level(const DeltaTable& tbl, LatticeTuple& x, int level)
{
	const int d = tbl.d();
	LatticeElement y = (level % 2 != 0) ? 0 : tbl.top();
	for (;;) {
		x[static_cast<std::size_t>(level - 1)] = y;
		LatticeElement next = level == d ? tbl(x) : solve_level(tbl, x, level + 1);
		// Inner levels clobber x[level..]; restore ours before comparing.
		x[static_cast<std::size_t>(level - 1)] = y;
		if (next == y) return y;
		y = next;
	}
}

} // namespace

LatticeElement nested_fixpoint(const DeltaTable& tbl)
{
	LatticeTuple x(static_cast<std::size_t>(tbl.d()), 0);
	return solve_level(tbl, x, 1);
}

LatticeDomain::LatticeDomain(const DeltaTable& tbl, bool check_invariants, std::size_t cap)
	: tbl_(tbl), check_(check_invariants), cap_(cap)
{
}

LatticeTuple LatticeDomain::delta(const LatticeTuple& x) const
{
	const std::size_t d = x.size();
	LatticeTuple out(d);
	LatticeTuple args(d);
	for (std::size_t i = 0; i < d; ++i) {
		for (std::size_t j = 0; j < d; ++j) args[j] = x[std::min(i, j)];
		out[i] = tbl_(args);
	}
	return out;
}

LatticeTuple LatticeDomain::apply(const Symbol& s, const LatticeTuple& x) const
{
	const int d = tbl_.d();
	switch (s.kind) {
	case BasicKind::delta: return delta(x);
	case BasicKind::bid: {
		if (s.index < 1 || s.index > d) throw DomainError(s.name() + " out of range");
		const int n = s.index;
		const LatticeElement src = n == 1 ? 0 : n == 2 ? tbl_.top() : x[static_cast<std::size_t>(n - 3)];
		LatticeTuple y = x;
		for (int i = n; i <= d; ++i) y[static_cast<std::size_t>(i - 1)] = src;
		return y;
	}
	case BasicKind::cut: {
		if (s.index < 1 || s.index > d - 1) throw DomainError(s.name() + " out of range");
		const int n = s.index;
		const LatticeElement src = x[static_cast<std::size_t>(n)];
		LatticeTuple y = x;
		for (int i = n; i <= d; ++i) y[static_cast<std::size_t>(i - 1)] = src;
		return y;
	}
	}
	throw std::logic_error("unknown basic symbol");
}

bool LatticeDomain::is_ordered(const LatticeTuple& x) const
{
	const int d = tbl_.d();
	for (int i = 1; i <= d; ++i)
		for (int j = 1; j <= d; ++j)
			if (parity_leq(i, j) && !subset(x[static_cast<std::size_t>(i - 1)], x[static_cast<std::size_t>(j - 1)]))
				return false;
	return true;
}

bool LatticeDomain::is_n_fixed(int n, const LatticeTuple& x) const
{
	for (int i = n; i <= tbl_.d(); ++i)
		if (x[static_cast<std::size_t>(i - 1)] != x[static_cast<std::size_t>(n - 1)]) return false;
	return true;
}

bool LatticeDomain::is_n_saturated(int n, const LatticeTuple& x) const
{
	const LatticeTuple dx = delta(x);
	for (int i = 1; i < n; ++i)
		if (dx[static_cast<std::size_t>(i - 1)] != x[static_cast<std::size_t>(i - 1)]) return false;
	return true;
}

void LatticeDomain::violation(std::string msg)
{
	if (violations_.size() < 100) violations_.push_back(std::move(msg));
}

void LatticeDomain::after_basic(const Symbol& s, const LatticeTuple& y)
{
	if (!check_ || s.kind != BasicKind::bid) return;
	if (!is_n_fixed(s.index, y)) violation("after " + s.name() + ": " + to_string(y) + " is not " + std::to_string(s.index) + "-fixed");
}

void LatticeDomain::after_lim_step(const LimContext& ctx, const LatticeTuple& prev, const LatticeTuple& next)
{
	if (!check_) return;
	const bool up = ctx.direction == LimDirection::up;
	for (std::size_t i = 0; i < prev.size(); ++i) {
		const bool monotone = up ? subset(prev[i], next[i]) : subset(next[i], prev[i]);
		if (!monotone) {
			violation(ctx.path + " " + lim_label(ctx.node) + ": iterate " + to_string(next) + " is not " +
			          (up ? "above " : "below ") + to_string(prev));
			break;
		}
	}
	if (ctx.body_is_basic || ctx.level < 1) return;
	const int n = ctx.level;
	if (!is_ordered(next)) violation("Psi" + std::to_string(n) + " iterate " + to_string(next) + " is not ordered");
	if (!is_n_fixed(n, next))
		violation("Psi" + std::to_string(n) + " iterate " + to_string(next) + " is not " + std::to_string(n) + "-fixed");
	if (!is_n_saturated(n, next))
		violation("Psi" + std::to_string(n) + " iterate " + to_string(next) + " is not " + std::to_string(n) + "-saturated");
}

std::string to_string(const LatticeTuple& x)
{
	std::string s = "(";
	for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
	return s + ")";
}

LatticeRun phi_on_lattice_checked(const DeltaTable& tbl)
{
	LatticeDomain dom(tbl, true);
	Evaluator<LatticeDomain> ev(dom);
	LatticeTuple out = ev.run(build_phi(tbl.d()), dom.bottom());
	return {out.at(0), dom.violations(), ev.trace()};
}

LatticeElement phi_on_lattice(const DeltaTable& tbl)
{
	LatticeDomain dom(tbl, false);
	return evaluate(build_phi(tbl.d()), dom, dom.bottom()).at(0);
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial)
{
	std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
	                  static_cast<std::uint32_t>(trial)};
	std::uint32_t out[2];
	seq.generate(out, out + 2);
	return (std::uint64_t{out[0]} << 32) | out[1];
}

EquivalenceReport check_equivalence(int g, int d, std::uint64_t seed, std::size_t trials)
{
	check_table_bounds(g, d);
	EquivalenceReport report;
	report.g = g;
	report.d = d;
	report.seed = seed;
	report.trials = trials;
	for (std::size_t t = 0; t < trials; ++t) {
		const std::uint64_t ts = trial_seed(seed, t);
		DeltaTable tbl = random_monotone_delta(g, d, ts);
		LatticeRun run = phi_on_lattice_checked(tbl);
		LatticeElement expected = nested_fixpoint(tbl);
		if (run.value != expected) report.mismatches.push_back({t, ts, run.value, expected, tbl.to_text()});
		for (auto& v : run.violations) report.violations.push_back("trial " + std::to_string(t) + ": " + v);
	}
	return report;
}

} // namespace treemeasure
