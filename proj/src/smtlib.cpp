#include "treemeasure/smtlib.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <utility>

#include "treemeasure/errors.hpp"

namespace treemeasure {

namespace {

class Reader {
public:
	explicit Reader(std::string_view text) : text_(text) {}

	std::vector<SExpr> all()
	{
		std::vector<SExpr> out;
		for (;;) {
			skip();
			if (pos_ >= text_.size()) return out;
			if (text_[pos_] == ')') fail("unbalanced ')'");
			out.push_back(read());
		}
	}

private:
	[[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, column(), msg); }

	std::size_t column() const
	{
		auto nl = text_.rfind('\n', pos_ == 0 ? 0 : pos_ - 1);
		return nl == std::string_view::npos ? pos_ + 1 : pos_ - nl;
	}

	void skip()
	{
		while (pos_ < text_.size()) {
			char c = text_[pos_];
			if (c == ';') {
				while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
			} else if (std::isspace(static_cast<unsigned char>(c))) {
				if (c == '\n') ++line_;
				++pos_;
			} else {
				return;
			}
		}
	}

	SExpr read()
	{
		skip();
		if (pos_ >= text_.size()) fail("unexpected end of input, missing ')'");
		SExpr e;
		e.line = line_;
		char c = text_[pos_];
		if (c == '(') {
			++pos_;
			for (;;) {
				skip();
				if (pos_ >= text_.size()) fail("unexpected end of input, missing ')'");
				if (text_[pos_] == ')') {
					++pos_;
					return e;
				}
				e.list.push_back(read());
			}
		}
		e.is_atom = true;
		std::size_t start = pos_;
		if (c == '"' || c == '|') {
			++pos_;
			while (pos_ < text_.size() && text_[pos_] != c) {
				if (text_[pos_] == '\n') ++line_;
				++pos_;
			}
			if (pos_ >= text_.size()) fail(std::string("unterminated ") + (c == '"' ? "string" : "quoted symbol"));
			++pos_;
		} else {
			while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';' &&
			       !std::isspace(static_cast<unsigned char>(text_[pos_])))
				++pos_;
		}
		e.atom = std::string(text_.substr(start, pos_ - start));
		return e;
	}

	std::string_view text_;
	std::size_t pos_ = 0;
	std::size_t line_ = 1;
};

bool is_numeral(const std::string& s)
{
	if (s.empty()) return false;
	bool dot = false;
	for (char c : s) {
		if (c == '.' && !dot) {
			dot = true;
			continue;
		}
		if (!std::isdigit(static_cast<unsigned char>(c))) return false;
	}
	return s.front() != '.' && s.back() != '.';
}

const std::set<std::string>& builtin_ops()
{
	static const std::set<std::string> ops{"and", "or", "not", "=>", "xor", "=", "distinct", "ite", "+", "-",
	                                       "*", "/", "<", "<=", ">", ">=", "abs", "to_real", "to_int"};
	return ops;
}

const std::set<std::string>& sorts() {
	static const std::set<std::string> s{"Real", "Int", "Bool"};
	return s;
}

struct Symbol {
	std::size_t arity = 0;
};

class Checker {
public:
	std::vector<std::string> problems;

	void command(const SExpr& c)
	{
		if (c.is_atom || c.list.empty() || !c.list[0].is_atom) {
			problem(c, "command is not a non-empty list");
			return;
		}
		const std::string& head = c.list[0].atom;
		if (head == "set-logic" || head == "set-option" || head == "set-info" || head == "check-sat" ||
		    head == "get-model" || head == "exit")
			return;
		if (head == "declare-const") {
			if (c.list.size() != 3 || !c.list[1].is_atom || !is_sort(c.list[2])) return problem(c, "malformed declare-const");
			declare(c, c.list[1].atom, 0);
		} else if (head == "declare-fun") {
			if (c.list.size() != 4 || !c.list[1].is_atom || c.list[2].is_atom || !is_sort(c.list[3]))
				return problem(c, "malformed declare-fun");
			declare(c, c.list[1].atom, c.list[2].list.size());
		} else if (head == "define-fun") {
			if (c.list.size() != 5 || !c.list[1].is_atom || c.list[2].is_atom || !is_sort(c.list[3]))
				return problem(c, "malformed define-fun");
			std::vector<std::set<std::string>> scope(1);
			for (const SExpr& p : c.list[2].list) {
				if (p.is_atom || p.list.size() != 2 || !p.list[0].is_atom || !is_sort(p.list[1])) {
					problem(p, "malformed parameter in define-fun " + c.list[1].atom);
					continue;
				}
				if (!scope[0].insert(p.list[0].atom).second)
					problem(p, "duplicate parameter " + p.list[0].atom + " in define-fun " + c.list[1].atom);
			}
			term(c.list[4], scope);
			declare(c, c.list[1].atom, c.list[2].list.size());
		} else if (head == "assert") {
			if (c.list.size() != 2) return problem(c, "assert takes one term");
			std::vector<std::set<std::string>> scope;
			term(c.list[1], scope);
		} else if (head == "get-value") {
			std::vector<std::set<std::string>> scope;
			if (c.list.size() != 2 || c.list[1].is_atom) return problem(c, "malformed get-value");
			for (const SExpr& t : c.list[1].list) term(t, scope);
		} else {
			problem(c, "unknown command " + head);
		}
	}

private:
	static bool is_sort(const SExpr& s) { return s.is_atom && sorts().count(s.atom); }

	void problem(const SExpr& at, const std::string& msg) { problems.push_back("line " + std::to_string(at.line) + ": " + msg); }

	void declare(const SExpr& at, const std::string& name, std::size_t arity)
	{
		if (builtin_ops().count(name) || global_.count(name)) {
			problem(at, "duplicate declaration of " + name);
			return;
		}
		global_[name] = Symbol{arity};
	}

	static bool bound(const std::vector<std::set<std::string>>& scope, const std::string& name)
	{
		return std::any_of(scope.begin(), scope.end(), [&](const auto& s) { return s.count(name) > 0; });
	}

	void term(const SExpr& t, std::vector<std::set<std::string>>& scope)
	{
		if (t.is_atom) {
			if (is_numeral(t.atom) || t.atom == "true" || t.atom == "false" || bound(scope, t.atom)) return;
			auto it = global_.find(t.atom);
			if (it == global_.end())
				problem(t, "symbol " + t.atom + " used before declaration");
			else if (it->second.arity != 0)
				problem(t, "function " + t.atom + " used without arguments");
			return;
		}
		if (t.list.empty()) return problem(t, "empty application");
		const SExpr& head = t.list[0];
		if (!head.is_atom) return problem(t, "application head is not a symbol");
		if (head.atom == "exists" || head.atom == "forall") {
			if (t.list.size() != 3 || t.list[1].is_atom || t.list[1].list.empty())
				return problem(t, "malformed " + head.atom);
			std::set<std::string> vars;
			for (const SExpr& b : t.list[1].list) {
				if (b.is_atom || b.list.size() != 2 || !b.list[0].is_atom || !is_sort(b.list[1])) {
					problem(b, "malformed binder");
					continue;
				}
				if (!vars.insert(b.list[0].atom).second) problem(b, "duplicate binder " + b.list[0].atom);
			}
			scope.push_back(std::move(vars));
			term(t.list[2], scope);
			scope.pop_back();
			return;
		}
		if (builtin_ops().count(head.atom)) {
			if (t.list.size() < 2) problem(t, head.atom + " without arguments");
			if ((head.atom == "+" || head.atom == "*" || head.atom == "/" || head.atom == "<=" || head.atom == "<" ||
			     head.atom == ">" || head.atom == ">=" || head.atom == "=" || head.atom == "=>") &&
			    t.list.size() < 3)
				problem(t, head.atom + " needs at least two arguments");
		} else {
			auto it = global_.find(head.atom);
			if (it == global_.end()) {
				problem(t, "function " + head.atom + " used before declaration");
			} else if (it->second.arity != t.list.size() - 1) {
				problem(t, "function " + head.atom + " expects " + std::to_string(it->second.arity) + " arguments, got " +
				               std::to_string(t.list.size() - 1));
			}
		}
		for (std::size_t i = 1; i < t.list.size(); ++i) term(t.list[i], scope);
	}

	std::map<std::string, Symbol> global_;
};

struct Alt {
	std::size_t e = 0;
	std::size_t a = 0;
};

Alt join(Alt x, Alt y) { return {std::max(x.e, y.e), std::max(x.a, y.a)}; }

class AltCounter {
public:
	explicit AltCounter(const std::vector<SExpr>& cmds)
	{
		for (const SExpr& c : cmds)
			if (c.head_is("define-fun") && c.list.size() == 5 && c.list[1].is_atom) defs_[c.list[1].atom] = &c.list[4];
	}

	Alt of(const SExpr& t, bool pos)
	{
		if (t.is_atom || t.list.empty() || !t.list[0].is_atom) return {};
		const std::string& head = t.list[0].atom;
		if ((head == "exists" || head == "forall") && t.list.size() == 3) {
			Alt body = of(t.list[2], pos);
			const bool existential = (head == "exists") == pos;
			if (existential) return {std::max({std::size_t{1}, body.e, body.a + 1}), 0};
			return {0, std::max({std::size_t{1}, body.a, body.e + 1})};
		}
		Alt r;
		if (head == "not") {
			for (std::size_t i = 1; i < t.list.size(); ++i) r = join(r, of(t.list[i], !pos));
		} else if (head == "=>") {
			for (std::size_t i = 1; i < t.list.size(); ++i) r = join(r, of(t.list[i], i + 1 == t.list.size() ? pos : !pos));
		} else if (head == "and" || head == "or") {
			for (std::size_t i = 1; i < t.list.size(); ++i) r = join(r, of(t.list[i], pos));
		} else {
			for (std::size_t i = 1; i < t.list.size(); ++i) r = join(r, join(of(t.list[i], pos), of(t.list[i], !pos)));
			if (auto it = defs_.find(head); it != defs_.end()) r = join(r, call(head, *it->second, pos));
		}
		return r;
	}

private:
	Alt call(const std::string& name, const SExpr& body, bool pos)
	{
		auto key = std::make_pair(name, pos);
		if (auto it = memo_.find(key); it != memo_.end()) return it->second;
		if (!active_.insert(key).second) throw DomainError("recursive definition of " + name);
		Alt r = of(body, pos);
		active_.erase(key);
		memo_[key] = r;
		return r;
	}

	std::map<std::string, const SExpr*> defs_;
	std::map<std::pair<std::string, bool>, Alt> memo_;
	std::set<std::pair<std::string, bool>> active_;
};

std::size_t count_real_binders(const SExpr& t)
{
	if (t.is_atom) return 0;
	std::size_t n = 0;
	if ((t.head_is("exists") || t.head_is("forall")) && t.list.size() == 3 && t.list[1].is_list())
		for (const SExpr& b : t.list[1].list)
			if (b.is_list() && b.list.size() == 2 && b.list[1].is_atom && b.list[1].atom == "Real") ++n;
	for (const SExpr& c : t.list) n += count_real_binders(c);
	return n;
}

} // namespace

std::vector<SExpr> parse_smtlib(std::string_view text) { return Reader(text).all(); }

std::vector<std::string> validate_smtlib(std::string_view text)
{
	std::vector<SExpr> cmds;
	try {
		cmds = parse_smtlib(text);
	} catch (const ParseError& e) {
		return {e.what()};
	}
	Checker check;
	for (const SExpr& c : cmds) check.command(c);
	return check.problems;
}

FormulaStats formula_stats(std::string_view text)
{
	const auto cmds = parse_smtlib(text);
	if (auto problems = validate_smtlib(text); !problems.empty())
		throw DomainError("malformed script: " + problems.front());
	FormulaStats stats;
	AltCounter alt(cmds);
	for (const SExpr& c : cmds) {
		if (c.head_is("declare-const") && c.list.size() == 3 && c.list[2].atom == "Real" && c.list[1].atom != "measure")
			++stats.variables;
		if (c.head_is("define-fun") && c.list.size() == 5) {
			for (const SExpr& p : c.list[2].list)
				if (p.list.size() == 2 && p.list[1].atom == "Real") ++stats.variables;
			stats.variables += count_real_binders(c.list[4]);
		}
		if (c.head_is("assert") && c.list.size() == 2) {
			stats.variables += count_real_binders(c.list[1]);
			Alt a = alt.of(c.list[1], true);
			stats.alternation_depth = std::max({stats.alternation_depth, a.e, a.a});
		}
	}
	return stats;
}

} // namespace treemeasure
