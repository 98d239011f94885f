#include "treemeasure/unary_mu.hpp"

#include <vector>

namespace treemeasure {

std::string Symbol::name() const
{
	switch (kind) {
	case BasicKind::delta: return "Delta";
	case BasicKind::bid: return "Bid" + std::to_string(index);
	case BasicKind::cut: return "Cut" + std::to_string(index);
	}
	return "?";
}

struct Term::Node {
	Kind kind;
	Symbol symbol;
	std::vector<Term> children;
	int level = 0;
};

Term Term::basic(Symbol s) { return Term(std::make_shared<const Node>(Node{Kind::basic, s, {}, 0})); }

Term Term::seq(Term first, Term second)
{
	return Term(std::make_shared<const Node>(Node{Kind::seq, {}, {std::move(first), std::move(second)}, 0}));
}

Term Term::lim_up(Term body, int level)
{
	return Term(std::make_shared<const Node>(Node{Kind::lim_up, {}, {std::move(body)}, level}));
}

Term Term::lim_down(Term body, int level)
{
	return Term(std::make_shared<const Node>(Node{Kind::lim_down, {}, {std::move(body)}, level}));
}

Term::Kind Term::kind() const noexcept { return node_->kind; }
int Term::level() const noexcept { return node_->level; }

const Symbol& Term::symbol() const
{
	if (node_->kind != Kind::basic) throw std::logic_error("symbol() on a non-basic term");
	return node_->symbol;
}

const Term& Term::first() const
{
	if (node_->kind != Kind::seq) throw std::logic_error("first() on a non-seq term");
	return node_->children[0];
}

const Term& Term::second() const
{
	if (node_->kind != Kind::seq) throw std::logic_error("second() on a non-seq term");
	return node_->children[1];
}

const Term& Term::body() const
{
	if (!is_lim()) throw std::logic_error("body() on a non-lim term");
	return node_->children[0];
}

Term build_phi_n(int n, int d)
{
	if (d < 2 || d % 2 != 0) throw DomainError("build_phi: d = " + std::to_string(d) + " must be even and >= 2");
	if (n < 1 || n > d) throw DomainError("build_phi: n = " + std::to_string(n) + " outside 1.." + std::to_string(d));
	const Term delta = Term::basic(Symbol::delta());
	const Term bid = Term::basic(Symbol::bid(n));
	if (n == d) return Term::seq(bid, Term::lim_down(delta, n));
	const bool odd = n % 2 != 0;
	Term inner = odd ? Term::lim_up(delta, n) : Term::lim_down(delta, n);
	Term psi = Term::seq(Term::seq(inner, build_phi_n(n + 1, d)), Term::basic(Symbol::cut(n)));
	return Term::seq(bid, odd ? Term::lim_up(psi, n) : Term::lim_down(psi, n));
}

Term build_phi(int d) { return build_phi_n(1, d); }

std::size_t term_size(const Term& t)
{
	switch (t.kind()) {
	case Term::Kind::basic: return 1;
	case Term::Kind::seq: return term_size(t.first()) + term_size(t.second());
	default: return term_size(t.body());
	}
}

void check_indices(const Term& t, int d)
{
	switch (t.kind()) {
	case Term::Kind::basic: {
		const Symbol& s = t.symbol();
		if (s.kind == BasicKind::bid && (s.index < 1 || s.index > d))
			throw DomainError(s.name() + " outside Bid1..Bid" + std::to_string(d));
		if (s.kind == BasicKind::cut && (s.index < 1 || s.index > d - 1))
			throw DomainError(s.name() + " outside Cut1..Cut" + std::to_string(d - 1));
		return;
	}
	case Term::Kind::seq:
		check_indices(t.first(), d);
		check_indices(t.second(), d);
		return;
	default:
		check_indices(t.body(), d);
	}
}

namespace {

void flatten_seq(const Term& t, std::vector<const Term*>& out)
{
	if (t.kind() == Term::Kind::seq) {
		flatten_seq(t.first(), out);
		flatten_seq(t.second(), out);
	} else {
		out.push_back(&t);
	}
}

} // namespace

std::string to_string(const Term& t)
{
	switch (t.kind()) {
	case Term::Kind::basic: return t.symbol().name();
	case Term::Kind::seq: {
		std::vector<const Term*> parts;
		flatten_seq(t, parts);
		std::string s;
		for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " ; " : "") + to_string(*parts[i]);
		return s;
	}
	case Term::Kind::lim_up:
	case Term::Kind::lim_down: {
		const char* op = t.kind() == Term::Kind::lim_up ? "up" : "down";
		if (t.body().kind() == Term::Kind::basic) return std::string(op) + "(" + to_string(t.body()) + ")";
		return std::string(op) + "( " + to_string(t.body()) + " )";
	}
	}
	return "?";
}

std::string lim_label(const Term& lim)
{
	const char* op = lim.kind() == Term::Kind::lim_up ? "up" : "down";
	if (lim.body().kind() == Term::Kind::basic) return std::string(op) + "(" + lim.body().symbol().name() + ")";
	if (lim.level() > 0) return std::string(op) + "(Psi" + std::to_string(lim.level()) + ")";
	return std::string(op) + "(...)";
}

} // namespace treemeasure
