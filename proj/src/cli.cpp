#include "treemeasure/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "treemeasure/automaton.hpp"
#include "treemeasure/finite_lattice.hpp"
#include "treemeasure/fo_export.hpp"
#include "treemeasure/powerdomain.hpp"
#include "treemeasure/rational.hpp"

namespace treemeasure {

namespace {

using json = nlohmann::ordered_json;

struct IoError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

enum class LogLevel { error, warn, info, debug };

LogLevel log_level_from_env()
{
	const char* v = std::getenv("TREEMEASURE_LOG");
	if (!v) return LogLevel::info;
	std::string s(v);
	if (s == "error" || s == "0") return LogLevel::error;
	if (s == "warn" || s == "1") return LogLevel::warn;
	if (s == "debug" || s == "3") return LogLevel::debug;
	return LogLevel::info;
}

class Log {
public:
	Log(std::ostream& err, LogLevel level) : err_(err), level_(level) {}

	void at(LogLevel l, const std::string& msg) const
	{
		if (l <= level_) err_ << msg << "\n";
	}
	void error(const std::string& msg) const { at(LogLevel::error, "error: " + msg); }
	void warn(const std::string& msg) const { at(LogLevel::warn, "warning: " + msg); }
	void info(const std::string& msg) const { at(LogLevel::info, msg); }
	void debug(const std::string& msg) const { at(LogLevel::debug, msg); }

private:
	std::ostream& err_;
	LogLevel level_;
};

struct RunConfig {
	std::string input;
	std::string threshold;
	double tol = 1e-9;
	std::size_t max_iter = 1'000'000;
	std::size_t max_support = 65536;
	bool strict = false;
	std::string out;
	std::string solver;
	std::string relation = ">";
	int solver_timeout = 300;
	double band = 1e-6;
	std::uint64_t seed = 1;
	std::size_t trials = 0;
	int g = 0;
	int d = 0;
	std::string kind;
	std::string replay;
};

std::string read_file(const std::string& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in) throw IoError("cannot read " + path);
	std::ostringstream s;
	s << in.rdbuf();
	if (in.bad()) throw IoError("error while reading " + path);
	return s.str();
}

void write_file(const std::string& path, const std::string& content)
{
	std::ofstream out(path, std::ios::binary);
	if (!out) throw IoError("cannot write " + path);
	out << content;
	out.flush();
	if (!out) throw IoError("error while writing " + path);
}

std::string fmt(double x)
{
	std::ostringstream s;
	s.precision(12);
	s << x;
	return s.str();
}

/// Parses and validates; diagnostics go to the log.  Throws DomainError on errors.
Automaton load_automaton(const std::string& path, const Log& log)
{
	Automaton aut = parse_automaton(read_file(path));
	bool bad = false;
	for (const auto& diag : validate(aut)) {
		if (diag.severity == Severity::error) {
			log.error(path + ": " + to_string(diag));
			bad = true;
		} else {
			log.warn(path + ": " + to_string(diag));
		}
	}
	if (bad) throw DomainError(path + ": automaton has errors");
	return aut;
}

MeasureOptions options_of(const RunConfig& cfg)
{
	MeasureOptions opts;
	opts.tol = cfg.tol;
	opts.iteration_cap = cfg.max_iter;
	opts.max_support = cfg.max_support;
	opts.check_invariants = cfg.strict;
	return opts;
}

void check_numeric_flags(const RunConfig& cfg)
{
	if (!(cfg.tol > 0)) throw UsageError("--tol must be > 0");
	if (cfg.max_iter < 1) throw UsageError("--max-iter must be >= 1");
	if (cfg.max_support < 1) throw UsageError("--max-support must be >= 1");
}

MeasureReport run_measure(const Automaton& aut, const RunConfig& cfg, const Log& log)
{
	MeasureReport report = measure_of_language(aut, options_of(cfg));
	log.info("wall time " + fmt(report.wall_seconds) + " s");
	for (const auto& l : report.lims)
		log.debug("lim " + l.path + " " + l.label + ": " + std::to_string(l.invocations) + " invocations, " +
		          std::to_string(l.iterations) + " iterations");
	if (report.error) log.error(*report.error);
	for (const auto& v : report.violations) log.warn("invariant violation: " + v);
	return report;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, const Log& log)
{
	json j;
	j["file"] = cfg.input;
	json errors = json::array(), warnings = json::array();
	try {
		const Automaton aut = parse_automaton(read_file(cfg.input));
		for (const auto& diag : validate(aut)) {
			(diag.severity == Severity::error ? errors : warnings).push_back(to_string(diag));
			(diag.severity == Severity::error ? log.error(to_string(diag)) : log.warn(to_string(diag)));
		}
		j["states"] = aut.num_states();
		j["letters"] = aut.num_letters();
		j["d"] = aut.d;
	} catch (const ParseError& e) {
		errors.push_back(e.what());
		log.error(cfg.input + ": " + e.what());
	}
	j["valid"] = errors.empty();
	j["errors"] = errors;
	j["warnings"] = warnings;
	out << j.dump(2) << "\n";
	return errors.empty() ? exit_ok : exit_input;
}

int cmd_measure(const RunConfig& cfg, std::ostream& out, const Log& log)
{
	check_numeric_flags(cfg);
	const Automaton aut = load_automaton(cfg.input, log);
	const MeasureReport report = run_measure(aut, cfg, log);
	const std::string doc = to_json(report);
	if (!cfg.out.empty()) write_file(cfg.out, doc);
	out << doc;
	if (report.measure) log.info("measure " + fmt(*report.measure));
	if (report.iteration_limit) return exit_nonconvergence;
	if (report.error) return exit_input;
	if (cfg.strict && report.violation_count > 0) return exit_input;
	return exit_ok;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, const Log& log)
{
	check_numeric_flags(cfg);
	if (!(cfg.band >= 0)) throw UsageError("--band must be >= 0");
	Rational q;
	try {
		q = parse_rational(cfg.threshold);
	} catch (const DomainError& e) {
		throw UsageError(e.what());
	}
	if (q < 0 || q > 1) throw UsageError("threshold " + to_string(q) + " outside [0,1]");
	const Automaton aut = load_automaton(cfg.input, log);
	const MeasureReport report = run_measure(aut, cfg, log);

	json j;
	j["q"] = to_string(q);
	j["band"] = cfg.band;
	j["approximate"] = true;
	if (!report.measure) {
		j["verdict"] = nullptr;
		j["measure"] = nullptr;
		j["error"] = report.error.value_or("no measure");
		out << j.dump(2) << "\n";
		return report.iteration_limit ? exit_nonconvergence : exit_input;
	}
	const double m = *report.measure;
	const double diff = m - to_double(q);
	const std::string verdict = std::abs(diff) <= cfg.band ? "EQUAL" : diff > 0 ? "GREATER" : "LESS";
	j["verdict"] = verdict;
	j["measure"] = m;
	out << j.dump(2) << "\n";
	log.info(verdict + " (approximate, measure " + fmt(m) + " vs " + to_string(q) + ", band " + fmt(cfg.band) + ")");
	return exit_ok;
}

int cmd_export(const RunConfig& cfg, std::ostream& out, const Log& log)
{
	const Automaton aut = load_automaton(cfg.input, log);
	std::string script;
	if (cfg.threshold.empty()) {
		script = export_measure(aut);
	} else {
		Rational q;
		try {
			q = parse_rational(cfg.threshold);
		} catch (const DomainError& e) {
			throw UsageError(e.what());
		}
		if (q < 0 || q > 1) throw UsageError("threshold " + to_string(q) + " outside [0,1]");
		script = export_compare(aut, q, parse_relation(cfg.relation));
	}
	if (auto problems = validate_smtlib(script); !problems.empty())
		throw std::logic_error("exported script failed validation: " + problems.front());
	const FormulaStats stats = formula_stats(script);
	log.info("variables " + std::to_string(stats.variables) + ", quantifier alternation depth " +
	         std::to_string(stats.alternation_depth));

	int code = exit_ok;
	json j;
	if (!cfg.out.empty()) {
		write_file(cfg.out, script);
		j["out"] = cfg.out;
		j["bytes"] = script.size();
		j["variables"] = stats.variables;
		j["alternation_depth"] = stats.alternation_depth;
	} else {
		out << script;
	}

	if (!cfg.solver.empty()) {
		check_numeric_flags(cfg);
		const MeasureReport report = run_measure(aut, cfg, log);
		if (!report.measure) throw DomainError("numeric measure unavailable: " + report.error.value_or("?"));
		const std::string check = consistency_script(aut, *report.measure);
		const auto path = std::filesystem::temp_directory_path() /
		                  ("treemeasure_check_" + std::to_string(std::hash<std::string>{}(check)) + ".smt2");
		write_file(path.string(), check);
		const SolverResult result = run_solver(cfg.solver, path.string(), cfg.solver_timeout);
		std::filesystem::remove(path);
		log.info("consistency check (measure outside numeric +- 1e-6): " + to_string(result.verdict));
		if (result.verdict == SolverVerdict::unknown) log.debug(result.output);
		if (!cfg.out.empty()) {
			j["numeric_measure"] = *report.measure;
			j["consistency"] = to_string(result.verdict);
		}
		if (result.verdict == SolverVerdict::sat) {
			log.error("solver found the exported measure inconsistent with the numeric value");
			code = exit_input;
		} else if (result.verdict == SolverVerdict::unknown) {
			code = exit_nonconvergence;
		}
	}
	if (!cfg.out.empty()) out << j.dump(2) << "\n";
	return code;
}

int selftest_lattice(const RunConfig& cfg, std::ostream& out, const Log& log)
{
	if (!cfg.replay.empty()) {
		const DeltaTable tbl = DeltaTable::parse(read_file(cfg.replay));
		const LatticeRun run = phi_on_lattice_checked(tbl);
		const LatticeElement nested = nested_fixpoint(tbl);
		json j;
		j["replay"] = cfg.replay;
		j["phi"] = run.value;
		j["nested"] = nested;
		j["violations"] = run.violations;
		j["ok"] = run.value == nested && run.violations.empty();
		out << j.dump(2) << "\n";
		return j["ok"].get<bool>() ? exit_ok : exit_input;
	}

	std::vector<std::pair<int, int>> pairs;
	if (cfg.g == 0 && cfg.d == 0) {
		pairs = {{1, 2}, {2, 2}, {1, 4}, {2, 4}};
	} else {
		if (cfg.g == 0 || cfg.d == 0) throw UsageError("--g and --d must be given together");
		pairs = {{cfg.g, cfg.d}};
	}
	const std::size_t trials = cfg.trials ? cfg.trials : 50;
	for (auto [g, d] : pairs) {
		try {
			check_table_bounds(g, d);
		} catch (const DomainError& e) {
			throw UsageError(e.what());
		}
	}

	json runs = json::array();
	bool ok = true;
	const auto started = std::chrono::steady_clock::now();
	for (auto [g, d] : pairs) {
		const EquivalenceReport rep = check_equivalence(g, d, cfg.seed, trials);
		json r;
		r["g"] = g;
		r["d"] = d;
		r["trials"] = rep.trials;
		r["mismatches"] = rep.mismatches.size();
		r["violations"] = rep.violations.size();
		json files = json::array();
		for (const Mismatch& m : rep.mismatches) {
			const std::string dir = cfg.out.empty() ? "." : cfg.out;
			const std::string path = (std::filesystem::path(dir) / ("lattice_g" + std::to_string(g) + "_d" +
			                                                        std::to_string(d) + "_trial" +
			                                                        std::to_string(m.trial) + ".txt"))
			                             .string();
			write_file(path, m.table_text);
			files.push_back(path);
			log.error("g=" + std::to_string(g) + " d=" + std::to_string(d) + " trial " + std::to_string(m.trial) +
			          ": phi " + std::to_string(m.phi) + " != nested " + std::to_string(m.nested) + " (replay " + path + ")");
		}
		for (const auto& v : rep.violations) log.error("invariant violation: " + v);
		r["replay_files"] = files;
		ok = ok && rep.ok();
		runs.push_back(r);
	}
	log.info("lattice selftest wall time " +
	         fmt(std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()) + " s");
	json j;
	j["kind"] = "lattice";
	j["seed"] = cfg.seed;
	j["runs"] = runs;
	j["ok"] = ok;
	out << j.dump(2) << "\n";
	return ok ? exit_ok : exit_input;
}

int selftest_order(const RunConfig& cfg, std::ostream& out, const Log& log)
{
	const std::size_t trials = cfg.trials ? cfg.trials : 200;
	const OrderReport rep = check_order_agreement(cfg.seed, trials);
	json files = json::array();
	for (const OrderMismatch& m : rep.mismatches) {
		const std::string dir = cfg.out.empty() ? "." : cfg.out;
		const std::string path = (std::filesystem::path(dir) / ("order_trial" + std::to_string(m.trial) + ".txt")).string();
		write_file(path, "width " + std::to_string(m.width) + "\nalpha " + to_string(m.alpha) + "\nbeta " +
		                     to_string(m.beta) + "\nnaive " + (m.naive ? "true" : "false") + "\ncoupling " +
		                     (m.coupling ? "true" : "false") + "\n");
		files.push_back(path);
		log.error("order trial " + std::to_string(m.trial) + ": naive and coupling disagree (" + path + ")");
	}
	json j;
	j["kind"] = "order";
	j["seed"] = cfg.seed;
	j["trials"] = rep.trials;
	j["comparable"] = rep.comparable;
	j["mismatches"] = rep.mismatches.size();
	j["replay_files"] = files;
	j["ok"] = rep.ok();
	out << j.dump(2) << "\n";
	return rep.ok() ? exit_ok : exit_input;
}

int cmd_selftest(const RunConfig& cfg, std::ostream& out, const Log& log)
{
	if (cfg.kind == "lattice") return selftest_lattice(cfg, out, log);
	if (cfg.kind == "order") return selftest_order(cfg, out, log);
	throw UsageError("unknown selftest kind '" + cfg.kind + "' (expected lattice or order)");
}

void add_pipeline_flags(CLI::App* cmd, RunConfig& cfg)
{
	cmd->add_option("--tol", cfg.tol, "total-variation stabilization tolerance")->capture_default_str();
	cmd->add_option("--max-iter", cfg.max_iter, "body applications per lim invocation")->capture_default_str();
	cmd->add_option("--max-support", cfg.max_support, "largest allowed distribution support")->capture_default_str();
	cmd->add_flag("--strict-invariants", cfg.strict, "check structural invariants; violations fail the run");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
	const Log log(err, log_level_from_env());
	RunConfig cfg;

	CLI::App app{"Coin-flipping measure of regular tree languages", "treemeasure"};
	app.require_subcommand(1);
	app.set_version_flag("--version", "treemeasure 1.0");

	auto* validate_cmd = app.add_subcommand("validate", "check an automaton file");
	validate_cmd->add_option("file", cfg.input, "automaton (.pta)")->required();

	auto* measure_cmd = app.add_subcommand("measure", "compute the measure of L(A)");
	measure_cmd->add_option("file", cfg.input, "automaton (.pta)")->required();
	add_pipeline_flags(measure_cmd, cfg);
	measure_cmd->add_option("--out", cfg.out, "also write the report here");

	auto* compare_cmd = app.add_subcommand("compare", "compare the measure with a rational q (approximate)");
	compare_cmd->add_option("file", cfg.input, "automaton (.pta)")->required();
	compare_cmd->add_option("q", cfg.threshold, "threshold in [0,1], e.g. 1/2 or 0.5")->required();
	compare_cmd->add_option("--band", cfg.band, "EQUAL tolerance band")->capture_default_str();
	add_pipeline_flags(compare_cmd, cfg);

	auto* export_cmd = app.add_subcommand("export", "write the SMT-LIB characterization of the measure");
	export_cmd->add_option("file", cfg.input, "automaton (.pta)")->required();
	export_cmd->add_option("q", cfg.threshold, "optional threshold; adds (assert (<relation> measure q))");
	export_cmd->add_option("--relation", cfg.relation, "one of < <= = >= >")->capture_default_str();
	export_cmd->add_option("--out", cfg.out, "output file (default: stdout)");
	export_cmd->add_option("--solver", cfg.solver, "solver binary for the numeric consistency check");
	export_cmd->add_option("--solver-timeout", cfg.solver_timeout, "seconds before the solver is stopped")
	    ->capture_default_str()
	    ->check(CLI::PositiveNumber);
	add_pipeline_flags(export_cmd, cfg);

	auto* selftest_cmd = app.add_subcommand("selftest", "randomized oracle checks (lattice | order)");
	selftest_cmd->add_option("kind", cfg.kind, "lattice or order")->required();
	selftest_cmd->add_option("--g", cfg.g, "ground set size (lattice)");
	selftest_cmd->add_option("--d", cfg.d, "tuple length (lattice)");
	selftest_cmd->add_option("--trials", cfg.trials, "trials (per (g,d) pair for lattice)");
	selftest_cmd->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
	selftest_cmd->add_option("--out", cfg.out, "directory for replay files of failures");
	selftest_cmd->add_option("--replay", cfg.replay, "re-run one dumped lattice table");

	std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
	std::reverse(rest.begin(), rest.end());
	try {
		app.parse(rest);
	} catch (const CLI::ParseError& e) {
		const int code = app.exit(e, out, err);
		return code == 0 ? exit_ok : exit_input;
	}

	try {
		if (validate_cmd->parsed()) return cmd_validate(cfg, out, log);
		if (measure_cmd->parsed()) return cmd_measure(cfg, out, log);
		if (compare_cmd->parsed()) return cmd_compare(cfg, out, log);
		if (export_cmd->parsed()) return cmd_export(cfg, out, log);
		if (selftest_cmd->parsed()) return cmd_selftest(cfg, out, log);
	} catch (const IoError& e) {
		log.error(e.what());
		return exit_io;
	} catch (const UsageError& e) {
		log.error(e.what());
		return exit_input;
	} catch (const ParseError& e) {
		log.error(cfg.input + ": " + e.what());
		return exit_input;
	} catch (const DomainError& e) {
		log.error(e.what());
		return exit_input;
	} catch (const IterationLimit& e) {
		log.error(e.what());
		return exit_nonconvergence;
	} catch (const std::exception& e) {
		log.error(std::string("internal error: ") + e.what());
		return exit_input;
	}
	return exit_input;
}

} // namespace treemeasure
