#include "treemeasure/fo_export.hpp"

#include <array>
#include <cstdio>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "treemeasure/powerdomain.hpp"
#include "treemeasure/subset_lattice.hpp"
#include "treemeasure/unary_mu.hpp"

namespace treemeasure {

namespace {

/// Builds the script for one automaton.  Vector variables are named
/// <role>_<node>_<RSet bits>, so every name is unique across the script.
class Exporter {
public:
	explicit Exporter(const Automaton& aut) : aut_(aut), layout_(RSetLayout::of(aut)), kernel_(aut)
	{
		if (has_errors(validate(aut))) throw DomainError("cannot export an invalid automaton");
		if (layout_.width() > max_export_width)
			throw DomainError("export needs |Q|*d <= " + std::to_string(max_export_width) + ", got " +
			                  std::to_string(layout_.num_states()) + "*" + std::to_string(layout_.d()) + " = " +
			                  std::to_string(layout_.width()) +
			                  " (the stochastic order is encoded by enumerating upward-closed families)");
		size_ = std::size_t{1} << layout_.width();
	}

	std::string body()
	{
		out_ << "; coin-flipping measure of a parity tree automaton\n";
		out_ << "; states " << aut_.num_states() << ", d " << aut_.d << ", |R| " << size_ << "\n";
		out_ << "(set-logic NRA)\n";
		helpers();
		const Term phi = build_phi(aut_.d);
		const std::size_t root = emit(phi);

		for (std::size_t r = 0; r < size_; ++r) out_ << "(declare-const o_" << r << " Real)\n";
		out_ << "(assert (f_" << root;
		for (std::size_t r = 0; r < size_; ++r) out_ << (r == 0 ? " 1" : " 0");
		out_ << vec("o") << "))\n";

		out_ << "(declare-const measure Real)\n";
		std::vector<std::string> in_i;
		const std::uint64_t initial_bit = layout_.bit(aut_.initial, 1);
		for (std::size_t r = 0; r < size_; ++r)
			if (r & initial_bit) in_i.push_back("o_" + std::to_string(r));
		out_ << "(assert (= measure " << sum(in_i) << "))\n";
		return out_.str();
	}

private:
	std::string vec(const std::string& role, std::size_t node) const
	{
		std::string s;
		for (std::size_t r = 0; r < size_; ++r) s += " " + role + "_" + std::to_string(node) + "_" + std::to_string(r);
		return s;
	}

	std::string vec(const std::string& role) const
	{
		std::string s;
		for (std::size_t r = 0; r < size_; ++r) s += " " + role + "_" + std::to_string(r);
		return s;
	}

	std::string binders(const std::string& role, std::size_t node) const
	{
		std::string s;
		for (std::size_t r = 0; r < size_; ++r)
			s += (r ? " (" : "(") + role + "_" + std::to_string(node) + "_" + std::to_string(r) + " Real)";
		return s;
	}

	static std::string sum(const std::vector<std::string>& terms)
	{
		if (terms.empty()) return "0";
		if (terms.size() == 1) return terms[0];
		std::string s = "(+";
		for (const auto& t : terms) s += " " + t;
		return s + ")";
	}

	void helpers()
	{
		out_ << "(define-fun simplex (";
		for (std::size_t r = 0; r < size_; ++r) out_ << (r ? " " : "") << "(s_" << r << " Real)";
		out_ << ") Bool\n  (and";
		std::vector<std::string> all;
		for (std::size_t r = 0; r < size_; ++r) {
			out_ << " (>= s_" << r << " 0)";
			all.push_back("s_" + std::to_string(r));
		}
		out_ << "\n    (= " << sum(all) << " 1)))\n";

		out_ << "(define-fun leq (";
		for (std::size_t r = 0; r < size_; ++r) out_ << (r ? " " : "") << "(a_" << r << " Real)";
		for (std::size_t r = 0; r < size_; ++r) out_ << " (b_" << r << " Real)";
		out_ << ") Bool\n  (and";
		for (std::uint64_t fam : upward_closed_families(layout_.width())) {
			if (fam == 0) continue;
			std::vector<std::string> lhs, rhs;
			for (std::size_t r = 0; r < size_; ++r)
				if ((fam >> r) & 1u) {
					lhs.push_back("a_" + std::to_string(r));
					rhs.push_back("b_" + std::to_string(r));
				}
			out_ << "\n    (<= " << sum(lhs) << " " << sum(rhs) << ")";
		}
		out_ << "))\n";
	}

	std::string head(std::size_t k) const
	{
		return "(define-fun f_" + std::to_string(k) + " (" + binders("x", k) + " " + binders("y", k) + ") Bool\n";
	}

	std::string call(std::size_t k, const std::string& a, const std::string& b) const
	{
		return "(f_" + std::to_string(k) + a + b + ")";
	}

	std::size_t emit(const Term& t)
	{
		switch (t.kind()) {
		case Term::Kind::basic: return emit_basic(t.symbol());
		case Term::Kind::seq: {
			const std::size_t first = emit(t.first());
			const std::size_t second = emit(t.second());
			const std::size_t k = next_++;
			out_ << "; " << to_string(t) << "\n" << head(k);
			out_ << "  (and (simplex" << vec("x", k) << ")\n";
			out_ << "    (exists (" << binders("z", k) << ")\n";
			out_ << "      (and " << call(first, vec("x", k), vec("z", k)) << "\n";
			out_ << "           " << call(second, vec("z", k), vec("y", k)) << "))))\n";
			return k;
		}
		case Term::Kind::lim_up:
		case Term::Kind::lim_down: {
			const bool up = t.kind() == Term::Kind::lim_up;
			const std::size_t b = emit(t.body());
			const std::size_t k = next_++;
			const std::string x = vec("x", k), y = vec("y", k), w = vec("w", k);
			out_ << "; " << to_string(t) << "\n" << head(k);
			out_ << "  (and (simplex" << x << ") (simplex" << y << ")\n";
			out_ << "    " << call(b, y, y) << "\n";
			out_ << "    (leq" << (up ? x + y : y + x) << ")\n";
			out_ << "    (forall (" << binders("w", k) << ")\n";
			out_ << "      (=> (and (simplex" << w << ") " << call(b, w, w) << " (leq" << (up ? x + w : w + x) << "))\n";
			out_ << "          (leq" << (up ? y + w : w + y) << ")))))\n";
			return k;
		}
		}
		throw std::logic_error("unreachable term kind");
	}

	std::size_t emit_basic(const Symbol& s)
	{
		const std::size_t k = next_++;
		const std::string xk = "x_" + std::to_string(k) + "_";
		const std::string yk = "y_" + std::to_string(k) + "_";
		std::vector<std::vector<std::string>> terms(size_);
		if (s.kind == BasicKind::delta) {
			std::vector<std::map<std::pair<std::size_t, std::size_t>, std::int64_t>> counts(size_);
			for (LetterId a = 0; a < aut_.num_letters(); ++a)
				for (std::size_t rl = 0; rl < size_; ++rl)
					for (std::size_t rr = 0; rr < size_; ++rr)
						++counts[kernel_.big_delta(a, RSet{rl}, RSet{rr}).bits][{rl, rr}];
			const auto letters = static_cast<std::int64_t>(aut_.num_letters());
			for (std::size_t r = 0; r < size_; ++r)
				for (const auto& [pair, c] : counts[r]) {
					const Rational coef(c, letters);
					std::string prod = xk + std::to_string(pair.first) + " " + xk + std::to_string(pair.second);
					terms[r].push_back(coef == Rational(1) ? "(* " + prod + ")" : "(* " + to_smtlib(coef) + " " + prod + ")");
				}
		} else {
			for (std::size_t r = 0; r < size_; ++r) {
				RSet image = s.kind == BasicKind::bid ? bid_r(layout_, s.index, RSet{r}) : cut_r(layout_, s.index, RSet{r});
				terms[image.bits].push_back(xk + std::to_string(r));
			}
		}
		out_ << "; " << s.name() << "\n" << head(k) << "  (and (simplex" << vec("x", k) << ")";
		for (std::size_t r = 0; r < size_; ++r) out_ << "\n    (= " << yk << r << " " << sum(terms[r]) << ")";
		out_ << "))\n";
		return k;
	}

	const Automaton& aut_;
	RSetLayout layout_;
	DeltaKernel kernel_;
	std::size_t size_ = 0;
	std::size_t next_ = 0;
	std::ostringstream out_;
};

std::string shell_quote(const std::string& s)
{
	std::string q = "'";
	for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
	return q + "'";
}

} // namespace

std::string export_measure(const Automaton& aut) { return Exporter(aut).body() + "(check-sat)\n"; }

Relation parse_relation(const std::string& text)
{
	if (text == "<") return Relation::less;
	if (text == "<=") return Relation::less_eq;
	if (text == "=") return Relation::equal;
	if (text == ">=") return Relation::greater_eq;
	if (text == ">") return Relation::greater;
	throw DomainError("unknown relation '" + text + "' (expected <, <=, =, >=, >)");
}

std::string to_string(Relation r)
{
	switch (r) {
	case Relation::less: return "<";
	case Relation::less_eq: return "<=";
	case Relation::equal: return "=";
	case Relation::greater_eq: return ">=";
	case Relation::greater: return ">";
	}
	return "?";
}

std::string export_compare(const Automaton& aut, const Rational& q, Relation rel)
{
	if (q < 0 || q > 1) throw DomainError("threshold " + to_string(q) + " outside [0,1]");
	std::string s = Exporter(aut).body();
	s += "(assert (" + to_string(rel) + " measure " + to_smtlib(q) + "))\n(check-sat)\n";
	return s;
}

std::string consistency_script(const Automaton& aut, double numeric, double band)
{
	if (!(band > 0)) throw DomainError("consistency band must be > 0");
	const Rational m = approximate(numeric);
	const Rational b = approximate(band);
	std::string s = Exporter(aut).body();
	s += "(assert (or (< measure " + to_smtlib(m - b) + ") (> measure " + to_smtlib(m + b) + ")))\n(check-sat)\n";
	return s;
}

std::string to_string(SolverVerdict v)
{
	switch (v) {
	case SolverVerdict::sat: return "sat";
	case SolverVerdict::unsat: return "unsat";
	case SolverVerdict::unknown: return "unknown";
	}
	return "unknown";
}

SolverResult run_solver(const std::string& solver, const std::string& script_path, int timeout_seconds)
{
	const std::string cmd =
	    "timeout " + std::to_string(timeout_seconds) + " " + shell_quote(solver) + " " + shell_quote(script_path) + " 2>&1";
	std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
	if (!pipe) throw std::runtime_error("cannot start solver " + solver);
	SolverResult result;
	std::array<char, 4096> buf{};
	while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe.get())) result.output.append(buf.data(), n);
	const std::string first = result.output.substr(0, result.output.find('\n'));
	if (first == "sat")
		result.verdict = SolverVerdict::sat;
	else if (first == "unsat")
		result.verdict = SolverVerdict::unsat;
	return result;
}

} // namespace treemeasure
