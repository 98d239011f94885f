#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "treemeasure/cli.hpp"

using namespace treemeasure;

namespace {

struct Result {
	int code;
	std::string out;
	std::string err;
};

Result run(std::vector<std::string> args)
{
	args.insert(args.begin(), "treemeasure");
	std::ostringstream out, err;
	const int code = run_cli(args, out, err);
	return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(TREEMEASURE_DATA_DIR) + "/" + name; }

nlohmann::json parse(const std::string& s) { return nlohmann::json::parse(s); }

} // namespace

TEST_CASE("validate")
{
	CHECK(run({"validate", data("a1.pta")}).code == exit_ok);
	const Result bad = run({"validate", data("bad_state.pta")});
	CHECK(bad.code == exit_input);
	CHECK(bad.err.find("unknown state r") != std::string::npos);
	CHECK_FALSE(parse(bad.out)["valid"].get<bool>());
	CHECK(run({"validate", data("does_not_exist.pta")}).code == exit_io);
	const Result warn = run({"validate", data("a2.pta")});
	CHECK(warn.code == exit_ok);
	CHECK(parse(warn.out)["warnings"].size() == 1);
}

TEST_CASE("measure")
{
	const Result a1 = run({"measure", data("a1.pta")});
	CHECK(a1.code == exit_ok);
	CHECK(a1.out.find("\"measure\": 1.0") != std::string::npos);
	const auto j = parse(a1.out);
	CHECK(j["d"] == 2);
	CHECK(j["term_size"] == 5);
	CHECK(j["lims"].size() == 3);

	const Result a3 = run({"measure", "--strict-invariants", data("a3.pta")});
	CHECK(a3.code == exit_ok);
	CHECK(parse(a3.out)["measure"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
	CHECK(parse(a3.out)["violations"].empty());

	CHECK(run({"measure", "--tol", "0", data("a1.pta")}).code == exit_input);
	CHECK(run({"measure", "--max-iter", "0", data("a1.pta")}).code == exit_input);
	CHECK(run({"measure", data("bad_state.pta")}).code == exit_input);
	CHECK(run({"measure", data("missing.pta")}).code == exit_io);
	CHECK(run({"measure", "--max-iter", "1", data("a1.pta")}).code == exit_nonconvergence);
}

TEST_CASE("stdout is byte-identical across runs")
{
	CHECK(run({"measure", data("some_a.pta")}).out == run({"measure", data("some_a.pta")}).out);
	CHECK(run({"export", data("a3.pta")}).out == run({"export", data("a3.pta")}).out);
}

TEST_CASE("compare")
{
	CHECK(parse(run({"compare", data("a1.pta"), "0.5"}).out)["verdict"] == "GREATER");
	CHECK(parse(run({"compare", data("a2.pta"), "0"}).out)["verdict"] == "EQUAL");
	const auto j = parse(run({"compare", data("a3.pta"), "1/2"}).out);
	CHECK(j["verdict"] == "EQUAL");
	CHECK(j["approximate"] == true);
	CHECK(parse(run({"compare", data("a2.pta"), "1/3"}).out)["verdict"] == "LESS");
	CHECK(run({"compare", data("a1.pta"), "3/2"}).code == exit_input);
	CHECK(run({"compare", data("a1.pta"), "half"}).code == exit_input);
}

TEST_CASE("export")
{
	const auto path = std::filesystem::temp_directory_path() / "treemeasure_cli_export.smt2";
	const Result r = run({"export", data("a1.pta"), "--out", path.string()});
	CHECK(r.code == exit_ok);
	CHECK(std::filesystem::exists(path));
	CHECK(parse(r.out)["variables"] == 140);
	std::filesystem::remove(path);

	const Result cmp = run({"export", data("a1.pta"), "1/2"});
	CHECK(cmp.out.find("(assert (> measure (/ 1 2)))") != std::string::npos);

	const Result wide = run({"export", data("some_a.pta"), "--out", path.string()});
	CHECK(wide.code == exit_ok);
	std::filesystem::remove(path);

	const auto three = std::filesystem::temp_directory_path() / "treemeasure_three.pta";
	std::ofstream(three) << "alphabet a\nstate p 2\nstate q 2\nstate r 2\ninitial p\ntrans p a q r\n";
	const Result too_wide = run({"export", three.string()});
	CHECK(too_wide.code == exit_input);
	CHECK(too_wide.err.find("|Q|*d") != std::string::npos);
	std::filesystem::remove(three);
}

TEST_CASE("selftest")
{
	const Result lat = run({"selftest", "lattice", "--g", "2", "--d", "2", "--trials", "100"});
	CHECK(lat.code == exit_ok);
	CHECK(parse(lat.out)["ok"] == true);
	const Result order = run({"selftest", "order", "--trials", "200"});
	CHECK(order.code == exit_ok);
	CHECK(parse(order.out)["mismatches"] == 0);
	CHECK(run({"selftest", "bogus"}).code == exit_input);
	CHECK(run({"selftest", "lattice", "--g", "3", "--d", "4"}).code == exit_input);
}

TEST_CASE("usage errors")
{
	CHECK(run({}).code == exit_input);
	CHECK(run({"frobnicate"}).code == exit_input);
	CHECK(run({"--help"}).code == exit_ok);
}
