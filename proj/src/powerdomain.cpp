#include "treemeasure/powerdomain.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <queue>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace treemeasure {

namespace {

constexpr double kOrderTolerance = 1e-12;
constexpr double kSimplexDrift = 1e-9;
constexpr double kMonotoneSlack = 1e-9;

Dist from_accumulator(const std::unordered_map<std::uint64_t, double>& acc)
{
	std::vector<Dist::Atom> atoms;
	atoms.reserve(acc.size());
	for (const auto& [bits, m] : acc) atoms.emplace_back(RSet{bits}, m);
	return Dist::from_atoms(std::move(atoms));
}

} // namespace

Dist Dist::from_atoms(std::vector<Atom> atoms)
{
	for (const auto& [r, m] : atoms)
		if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("distribution mass must be finite and >= 0");
	std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.first < b.first; });
	Dist out;
	for (const auto& [r, m] : atoms) {
		if (!out.atoms_.empty() && out.atoms_.back().first == r)
			out.atoms_.back().second += m;
		else
			out.atoms_.emplace_back(r, m);
	}
	std::erase_if(out.atoms_, [](const Atom& a) { return a.second == 0.0; });
	return out;
}

double Dist::mass(RSet r) const
{
	auto it = std::lower_bound(atoms_.begin(), atoms_.end(), r, [](const Atom& a, RSet key) { return a.first < key; });
	return (it != atoms_.end() && it->first == r) ? it->second : 0.0;
}

double Dist::total() const
{
	double s = 0;
	for (const auto& a : atoms_) s += a.second;
	return s;
}

Dist point_mass(RSet r) { return Dist::from_atoms({{r, 1.0}}); }

Dist dist_delta(const DeltaKernel& kernel, const Dist& alpha)
{
	const auto atoms = alpha.atoms();
	const std::size_t letters = kernel.num_letters();
	if (letters == 0) throw DomainError("empty alphabet");
	const double weight = 1.0 / static_cast<double>(letters);
	std::unordered_map<std::uint64_t, double> acc;
	// Fixed enumeration order: letter, left atom, right atom.
	for (LetterId a = 0; a < letters; ++a)
		for (const auto& [rl, ml] : atoms)
			for (const auto& [rr, mr] : atoms) acc[kernel.big_delta(a, rl, rr).bits] += weight * ml * mr;
	// The pair product squares the total, so rounding error would double on every
	// application; rescale to the input total to keep it from compounding.
	double produced = 0;
	for (const auto& [bits, m] : acc) produced += m;
	const double wanted = alpha.total();
	if (produced > 0 && wanted > 0)
		for (auto& [bits, m] : acc) m *= wanted / produced;
	return from_accumulator(acc);
}

Dist dist_delta(const Automaton& aut, const Dist& alpha) { return dist_delta(DeltaKernel(aut), alpha); }

Dist dist_superficial(const RSetLayout& layout, const Symbol& which, const Dist& alpha)
{
	std::vector<Dist::Atom> atoms;
	atoms.reserve(alpha.support_size());
	for (const auto& [r, m] : alpha.atoms()) {
		switch (which.kind) {
		case BasicKind::bid: atoms.emplace_back(bid_r(layout, which.index, r), m); break;
		case BasicKind::cut: atoms.emplace_back(cut_r(layout, which.index, r), m); break;
		case BasicKind::delta: throw DomainError("Delta is not a superficial function");
		}
	}
	if (atoms.empty()) {
		// Validate the index even on an empty input.
		if (which.kind == BasicKind::bid) bid_r(layout, which.index, RSet{});
		if (which.kind == BasicKind::cut) cut_r(layout, which.index, RSet{});
	}
	return Dist::from_atoms(std::move(atoms));
}

Dist dist_superficial(const Automaton& aut, const Symbol& which, const Dist& alpha)
{
	return dist_superficial(RSetLayout::of(aut), which, alpha);
}

const std::vector<std::uint64_t>& upward_closed_families(std::size_t width)
{
	if (width > 4) throw DomainError("upward-closed family enumeration needs width <= 4, got " + std::to_string(width));
	static std::array<std::vector<std::uint64_t>, 5> cache;
	static std::array<std::once_flag, 5> once;
	std::call_once(once[width], [width] {
		const std::size_t elems = std::size_t{1} << width;
		const std::uint64_t families = std::uint64_t{1} << elems;
		auto& out = cache[width];
		for (std::uint64_t fam = 0; fam < families; ++fam) {
			bool closed = true;
			for (std::size_t r = 0; r < elems && closed; ++r) {
				if (!((fam >> r) & 1u)) continue;
				for (std::size_t b = 0; b < width; ++b)
					if (!((fam >> (r | (std::size_t{1} << b))) & 1u)) {
						closed = false;
						break;
					}
			}
			if (closed) out.push_back(fam);
		}
	});
	return cache[width];
}

bool dist_leq_naive(std::size_t width, const Dist& alpha, const Dist& beta)
{
	const auto& families = upward_closed_families(width);
	const std::uint64_t limit = std::uint64_t{1} << width;
	for (const Dist* x : {&alpha, &beta})
		for (const auto& [r, m] : x->atoms())
			if (r.bits >= limit) throw DomainError("distribution atom outside the width-" + std::to_string(width) + " lattice");
	for (std::uint64_t fam : families) {
		double a = 0, b = 0;
		for (const auto& [r, m] : alpha.atoms())
			if ((fam >> r.bits) & 1u) a += m;
		for (const auto& [r, m] : beta.atoms())
			if ((fam >> r.bits) & 1u) b += m;
		if (a > b + kOrderTolerance) return false;
	}
	return true;
}

bool dist_leq_naive(const Automaton& aut, const Dist& alpha, const Dist& beta)
{
	return dist_leq_naive(RSetLayout::of(aut).width(), alpha, beta);
}

namespace {

/// Dinic max-flow on real capacities.
class MaxFlow {
public:
	explicit MaxFlow(std::size_t n) : adj_(n), level_(n), next_(n) {}

	void add_edge(std::size_t u, std::size_t v, double cap)
	{
		adj_[u].push_back({v, adj_[v].size(), cap});
		adj_[v].push_back({u, adj_[u].size() - 1, 0.0});
	}

	double run(std::size_t s, std::size_t t)
	{
		double flow = 0;
		while (bfs(s, t)) {
			std::fill(next_.begin(), next_.end(), 0);
			for (;;) {
				double f = dfs(s, t, std::numeric_limits<double>::infinity());
				if (f <= kEps) break;
				flow += f;
			}
		}
		return flow;
	}

private:
	static constexpr double kEps = 1e-18;

	struct Edge {
		std::size_t to;
		std::size_t rev;
		double cap;
	};

	bool bfs(std::size_t s, std::size_t t)
	{
		std::fill(level_.begin(), level_.end(), -1);
		std::queue<std::size_t> q;
		level_[s] = 0;
		q.push(s);
		while (!q.empty()) {
			std::size_t u = q.front();
			q.pop();
			for (const Edge& e : adj_[u])
				if (e.cap > kEps && level_[e.to] < 0) {
					level_[e.to] = level_[u] + 1;
					q.push(e.to);
				}
		}
		return level_[t] >= 0;
	}

	double dfs(std::size_t u, std::size_t t, double pushed)
	{
		if (u == t) return pushed;
		for (std::size_t& i = next_[u]; i < adj_[u].size(); ++i) {
			Edge& e = adj_[u][i];
			if (e.cap <= kEps || level_[e.to] != level_[u] + 1) continue;
			double f = dfs(e.to, t, std::min(pushed, e.cap));
			if (f > kEps) {
				e.cap -= f;
				adj_[e.to][e.rev].cap += f;
				return f;
			}
		}
		return 0;
	}

	std::vector<std::vector<Edge>> adj_;
	std::vector<int> level_;
	std::vector<std::size_t> next_;
};

} // namespace

double coupling_deficit(const Dist& alpha, const Dist& beta)
{
	const auto a = alpha.atoms();
	const auto b = beta.atoms();
	const std::size_t source = 0;
	const std::size_t sink = 1 + a.size() + b.size();
	MaxFlow net(sink + 1);
	for (std::size_t i = 0; i < a.size(); ++i) net.add_edge(source, 1 + i, a[i].second);
	for (std::size_t j = 0; j < b.size(); ++j) net.add_edge(1 + a.size() + j, sink, b[j].second);
	const double inf = std::numeric_limits<double>::infinity();
	for (std::size_t i = 0; i < a.size(); ++i)
		for (std::size_t j = 0; j < b.size(); ++j)
			if (a[i].first.subset_of(b[j].first)) net.add_edge(1 + i, 1 + a.size() + j, inf);
	return std::max(0.0, alpha.total() - net.run(source, sink));
}

bool dist_leq_coupling(const Dist& alpha, const Dist& beta, double slack)
{
	return coupling_deficit(alpha, beta) <= slack + kOrderTolerance;
}

double tv_distance(const Dist& alpha, const Dist& beta)
{
	const auto a = alpha.atoms();
	const auto b = beta.atoms();
	double s = 0;
	std::size_t i = 0, j = 0;
	while (i < a.size() || j < b.size()) {
		if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
			s += a[i++].second;
		} else if (i == a.size() || b[j].first < a[i].first) {
			s += b[j++].second;
		} else {
			s += std::abs(a[i++].second - b[j++].second);
		}
	}
	return 0.5 * s;
}

DistDomain::DistDomain(const Automaton& aut, MeasureOptions opts) : aut_(aut), opts_(opts), kernel_(aut)
{
	if (!(opts_.tol > 0)) throw DomainError("tolerance must be > 0");
	if (opts_.iteration_cap < 1) throw DomainError("iteration cap must be >= 1");
	if (opts_.max_support < 1) throw DomainError("support cap must be >= 1");
}

Dist DistDomain::apply(const Symbol& s, const Dist& alpha)
{
	Dist out = s.kind == BasicKind::delta ? dist_delta(kernel_, alpha) : dist_superficial(kernel_.layout(), s, alpha);
	if (out.support_size() > opts_.max_support)
		throw SupportLimit("support size " + std::to_string(out.support_size()) + " after " + s.name() +
		                   " exceeds the cap " + std::to_string(opts_.max_support));
	max_support_ = std::max(max_support_, out.support_size());
	return out;
}

void DistDomain::violation(std::string msg)
{
	++violation_count_;
	if (violations_.size() < 100) violations_.push_back(std::move(msg));
}

void DistDomain::after_basic(const Symbol& s, const Dist& y)
{
	if (!opts_.check_invariants) return;
	const double drift = std::abs(y.total() - 1.0);
	if (drift > kSimplexDrift) violation("after " + s.name() + ": simplex drift " + std::to_string(drift));
	if (s.kind != BasicKind::bid) return;
	for (const auto& [r, m] : y.atoms())
		if (!is_n_fixed(layout(), s.index, r)) {
			violation("after " + s.name() + ": atom " + layout().to_string(r, &aut_) + " is not " +
			          std::to_string(s.index) + "-fixed");
			break;
		}
}

void DistDomain::after_lim_step(const LimContext& ctx, const Dist& prev, const Dist& next)
{
	if (!opts_.check_invariants) return;
	const bool up = ctx.direction == LimDirection::up;
	const double deficit = up ? coupling_deficit(prev, next) : coupling_deficit(next, prev);
	if (deficit > kMonotoneSlack)
		violation(ctx.path + " " + lim_label(ctx.node) + ": iterate not " + (up ? "ascending" : "descending") +
		          " (coupling deficit " + std::to_string(deficit) + ")");

	if (ctx.body_is_basic || ctx.level < 1) return;
	const int n = ctx.level;
	const std::string where = "Psi" + std::to_string(n) + " iterate";
	for (const auto& [r, m] : next.atoms()) {
		if (!is_ordered(layout(), r)) {
			violation(where + ": atom " + layout().to_string(r, &aut_) + " is not ordered");
			break;
		}
		if (!is_n_fixed(layout(), n, r)) {
			violation(where + ": atom " + layout().to_string(r, &aut_) + " is not " + std::to_string(n) + "-fixed");
			break;
		}
	}
	if (n < 2) return;
	// n-saturation, observed through the (q,i) marginals for i < n.
	const Dist moved = dist_delta(kernel_, next);
	for (int i = 1; i < n; ++i)
		for (StateId q = 0; q < layout().num_states(); ++q) {
			double before = 0, after = 0;
			for (const auto& [r, m] : next.atoms())
				if (layout().contains(r, q, i)) before += m;
			for (const auto& [r, m] : moved.atoms())
				if (layout().contains(r, q, i)) after += m;
			if (std::abs(before - after) > opts_.tol)
				violation(where + ": marginal of (" + aut_.states[q] + "," + std::to_string(i) + ") moves from " +
				          std::to_string(before) + " to " + std::to_string(after) + " under Delta");
		}
}

DistDomain d_interpretation(const Automaton& aut, double tol, std::size_t cap)
{
	MeasureOptions opts;
	opts.tol = tol;
	opts.iteration_cap = cap;
	return DistDomain(aut, opts);
}

MeasureReport measure_of_language(const Automaton& aut, const MeasureOptions& opts)
{
	const auto started = std::chrono::steady_clock::now();
	auto diags = validate(aut);
	if (has_errors(diags)) {
		for (const auto& d : diags)
			if (d.severity == Severity::error) throw DomainError("invalid automaton: " + d.message);
	}

	const Term phi = build_phi(aut.d);
	DistDomain dom(aut, opts);
	Evaluator<DistDomain> ev(dom);

	MeasureReport report;
	report.d = aut.d;
	report.states = aut.num_states();
	report.term_size = term_size(phi);
	report.tol = opts.tol;
	report.cap = opts.iteration_cap;

	try {
		Dist out = ev.run(phi, point_mass(dom.layout().empty()));
		const std::uint64_t initial_bit = dom.layout().bit(aut.initial, 1);
		double m = 0;
		for (const auto& [r, mass] : out.atoms())
			if (r.bits & initial_bit) m += mass;
		report.measure = m;
		report.final_distribution = std::move(out);
	} catch (const IterationLimit& e) {
		report.error = e.what();
		report.iteration_limit = true;
	} catch (const SupportLimit& e) {
		report.error = e.what();
	}

	for (const auto& [path, s] : ev.trace().lims)
		report.lims.push_back({path, s.label, s.invocations, s.iterations, s.max_iterations, s.converged});
	report.max_support = dom.max_support();
	report.violations = dom.violations();
	report.violation_count = dom.violation_count();
	report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
	return report;
}

std::string to_json(const MeasureReport& report)
{
	nlohmann::ordered_json j;
	j["measure"] = report.measure ? nlohmann::ordered_json(*report.measure) : nlohmann::ordered_json(nullptr);
	j["d"] = report.d;
	j["states"] = report.states;
	j["term_size"] = report.term_size;
	auto lims = nlohmann::ordered_json::array();
	for (const auto& l : report.lims)
		lims.push_back({{"path", l.path},
		                {"label", l.label},
		                {"invocations", l.invocations},
		                {"iterations", l.iterations},
		                {"max_iterations", l.max_iterations},
		                {"converged", l.converged}});
	j["lims"] = std::move(lims);
	j["max_support"] = report.max_support;
	j["violations"] = report.violations;
	j["violation_count"] = report.violation_count;
	j["tol"] = report.tol;
	j["cap"] = report.cap;
	if (report.error) j["error"] = *report.error;
	return j.dump(2) + "\n";
}

} // namespace treemeasure

namespace treemeasure {

std::string to_string(const Dist& alpha)
{
	std::ostringstream s;
	s.precision(17);
	s << "{";
	bool first = true;
	for (const auto& [r, m] : alpha.atoms()) {
		s << (first ? "" : ", ") << m << ": " << r.bits;
		first = false;
	}
	s << "}";
	return s.str();
}

Dist random_dist(std::mt19937_64& rng, std::size_t width, std::size_t max_atoms)
{
	if (width > 63 || max_atoms < 1) throw DomainError("random_dist: bad width or atom count");
	std::uniform_int_distribution<std::size_t> count(1, max_atoms);
	std::uniform_int_distribution<std::uint64_t> set(0, (std::uint64_t{1} << width) - 1);
	std::uniform_int_distribution<int> weight(1, 8);
	const std::size_t n = count(rng);
	std::vector<std::pair<std::uint64_t, int>> raw;
	int total = 0;
	for (std::size_t i = 0; i < n; ++i) {
		raw.emplace_back(set(rng), weight(rng));
		total += raw.back().second;
	}
	std::vector<Dist::Atom> atoms;
	for (const auto& [bits, w] : raw) atoms.emplace_back(RSet{bits}, static_cast<double>(w) / total);
	return Dist::from_atoms(std::move(atoms));
}

Dist shift_upward(std::mt19937_64& rng, std::size_t width, const Dist& alpha)
{
	std::uniform_int_distribution<std::uint64_t> extra(0, (std::uint64_t{1} << width) - 1);
	std::uniform_int_distribution<int> eighths(0, 8);
	std::vector<Dist::Atom> atoms;
	for (const auto& [r, m] : alpha.atoms()) {
		const double moved = m * eighths(rng) / 8.0;
		atoms.emplace_back(r, m - moved);
		atoms.emplace_back(RSet{r.bits | extra(rng)}, moved);
	}
	return Dist::from_atoms(std::move(atoms));
}

OrderReport check_order_agreement(std::uint64_t seed, std::size_t trials)
{
	OrderReport report;
	report.trials = trials;
	std::mt19937_64 rng(seed);
	auto check = [&](std::size_t trial, std::size_t width, const Dist& a, const Dist& b) {
		const bool naive = dist_leq_naive(width, a, b);
		const bool coupling = dist_leq_coupling(a, b, 0.0);
		if (naive) ++report.comparable;
		if (naive != coupling) report.mismatches.push_back({trial, width, a, b, naive, coupling});
	};
	for (std::size_t t = 0; t < trials; ++t) {
		if (t == 0) {
			const Dist alpha = Dist::from_atoms({{RSet{0b01}, 0.5}, {RSet{0b10}, 0.5}});
			const Dist beta = Dist::from_atoms({{RSet{0b00}, 0.5}, {RSet{0b11}, 0.5}});
			check(t, 2, alpha, beta);
			check(t, 2, beta, alpha);
			continue;
		}
		const std::size_t width = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
		const Dist alpha = random_dist(rng, width, 6);
		const Dist beta = t % 2 == 0 ? shift_upward(rng, width, alpha) : random_dist(rng, width, 6);
		check(t, width, alpha, beta);
	}
	return report;
}

} // namespace treemeasure
