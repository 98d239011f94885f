#ifndef TREEMEASURE_CLI_HPP
#define TREEMEASURE_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace treemeasure {

/// Exit codes of the command-line tool.
enum ExitCode : int {
	exit_ok = 0,
	exit_input = 1,
	exit_io = 2,
	exit_nonconvergence = 3,
};

/// Runs the tool with argv-style arguments (args[0] is the program name).
/// Machine-readable JSON goes to `out`, human diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace treemeasure

#endif
