#include "treemeasure/rational.hpp"

#include <charconv>
#include <cmath>

#include "treemeasure/errors.hpp"

namespace treemeasure {

namespace {

std::int64_t parse_digits(std::string_view digits, std::string_view whole)
{
	std::int64_t v = 0;
	if (digits.empty()) throw DomainError("not a rational number: '" + std::string(whole) + "'");
	auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
	if (ec != std::errc{} || ptr != digits.data() + digits.size())
		throw DomainError("not a rational number: '" + std::string(whole) + "'");
	return v;
}

} // namespace

Rational parse_rational(std::string_view text)
{
	std::string_view s = text;
	bool negative = false;
	if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
		negative = s.front() == '-';
		s.remove_prefix(1);
	}
	Rational q;
	try {
		if (auto slash = s.find('/'); slash != std::string_view::npos) {
			auto den = parse_digits(s.substr(slash + 1), text);
			if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
			q = Rational(parse_digits(s.substr(0, slash), text), den);
		} else if (auto dot = s.find('.'); dot != std::string_view::npos) {
			std::string_view frac = s.substr(dot + 1);
			if (frac.size() > 17) throw DomainError("too many decimal digits in '" + std::string(text) + "'");
			std::int64_t scale = 1;
			for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
			std::int64_t whole = s.substr(0, dot).empty() ? 0 : parse_digits(s.substr(0, dot), text);
			std::int64_t part = frac.empty() ? 0 : parse_digits(frac, text);
			q = Rational(whole) + Rational(part, scale);
		} else {
			q = Rational(parse_digits(s, text));
		}
	} catch (const boost::bad_rational&) {
		throw DomainError("not a rational number: '" + std::string(text) + "'");
	}
	return negative ? -q : q;
}

std::string to_string(const Rational& q)
{
	if (q.denominator() == 1) return std::to_string(q.numerator());
	return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

std::string to_smtlib(const Rational& q)
{
	const std::int64_t num = q.numerator() < 0 ? -q.numerator() : q.numerator();
	std::string body = q.denominator() == 1 ? std::to_string(num)
	                                        : "(/ " + std::to_string(num) + " " + std::to_string(q.denominator()) + ")";
	return q.numerator() < 0 ? "(- " + body + ")" : body;
}

Rational approximate(double x)
{
	if (!std::isfinite(x) || std::abs(x) > 1e9) throw DomainError("cannot approximate " + std::to_string(x));
	constexpr std::int64_t scale = 1'000'000'000;
	return Rational(std::llround(x * static_cast<double>(scale)), scale);
}

double to_double(const Rational& q) { return boost::rational_cast<double>(q); }

} // namespace treemeasure
