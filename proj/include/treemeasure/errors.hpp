#ifndef TREEMEASURE_ERRORS_HPP
#define TREEMEASURE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace treemeasure {

/// Raised when an argument lies outside the domain of an operation
/// (unknown letter, index out of range, size bound exceeded, ...).
class DomainError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// A `.pta` document could not be parsed.
class ParseError : public std::runtime_error {
public:
	ParseError(std::size_t line, std::size_t column, const std::string& message)
		: std::runtime_error("line " + std::to_string(line) + ", column " +
		                     std::to_string(column) + ": " + message),
		  line_(line), column_(column), message_(message) {}

	std::size_t line() const noexcept { return line_; }
	std::size_t column() const noexcept { return column_; }
	const std::string& message() const noexcept { return message_; }

private:
	std::size_t line_;
	std::size_t column_;
	std::string message_;
};

} // namespace treemeasure

#endif
