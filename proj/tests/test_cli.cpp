#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using pseudospec::cli::Json;
using pseudospec::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

Json call_json(std::vector<std::string> args, int want_code = 0) {
  args.push_back("--format");
  args.push_back("json");
  const Result r = call(args);
  INFO(r.err);
  REQUIRE(r.code == want_code);
  return Json::parse(r.out);
}

std::string job(const std::string& name) { return std::string(PSEUDOSPEC_JOBS_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

const std::vector<std::string> kMorse = {"--potential", "morse-complex", "--A", "3", "--B", "4", "--C", "5"};

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("cli: morse spectrum, both methods", "[cli]") {
  const Json j = call_json(cat(cat({"spectrum"}, kMorse), {"--method", "both", "--points", "800"}));
  CHECK(j["command"] == "spectrum");
  const auto& rows = j["results"]["levels"];
  REQUIRE(rows.size() == 5);
  const double want[] = {-25, -16, -9, -4, -1};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(rows[i]["exact"]["re"].get<double>() == want[i]);
    CHECK(std::abs(rows[i]["grid"]["re"].get<double>() - want[i]) <= 1e-4 * std::abs(want[i]));
    CHECK(rows[i]["imag_grid"].get<double>() <= 1e-6);
  }
  CHECK(j["inputs"]["discretization"]["points"] == 800);
  CHECK(j["inputs"]["discretization"]["x_min"] == -4.0);
}

TEST_CASE("cli: oscillator closed form is n + 1/2", "[cli]") {
  const Json j = call_json({"spectrum", "--potential", "ho-shifted", "--beta", "1", "--gamma", "0.7", "--method", "exact", "--levels", "6"});
  const auto& rows = j["results"]["levels"];
  REQUIRE(rows.size() == 6);
  for (std::size_t n = 0; n < 6; ++n) {
    CHECK(rows[n]["exact"]["re"].get<double>() == static_cast<double>(n) + 0.5);
    CHECK(rows[n]["grid"].is_null());
  }
}

TEST_CASE("cli: table and csv layouts", "[cli]") {
  const auto base = std::vector<std::string>{"spectrum", "--potential", "ho-shifted", "--method", "exact", "--levels", "2"};
  const Result t = call(base);
  REQUIRE(t.code == 0);
  CHECK(t.out.rfind("spectrum\n", 0) == 0);
  CHECK(t.out.find("E_exact") != std::string::npos);
  const Result c = call(cat(base, {"--format", "csv"}));
  REQUIRE(c.code == 0);
  CHECK(c.out == "n,E_exact,E_grid,|dE|,|Im E_grid|\n0,0.5,,,\n1,1.5,,,\n");
}

TEST_CASE("cli: invalid parameters exit 2 and name the constraint", "[cli]") {
  const Result r = call({"spectrum", "--potential", "morse-complex", "--A", "-1", "--B", "4", "--C", "5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("A > 0") != std::string::npos);
  CHECK(r.out.empty());
  CHECK(call({"spectrum", "--potential", "no-such-thing"}).code == 2);
  CHECK(call({"spectrum"}).code == 2);
  CHECK(call({"spectrum", "--bogus"}).code == 2);
  CHECK(call({"spectrum", "--potential", "ho-shifted", "--method", "magic"}).code == 2);
  CHECK(call({"spectrum", "--potential", "ho-shifted", "--order", "fd6", "--method", "grid"}).code == 2);
  CHECK(call({"spectrum", "--potential", "ho-shifted", "--method", "grid", "--points", "5"}).code == 2);
  CHECK(call({"--format", "xml", "spectrum", "--potential", "ho-shifted"}).code == 2);
  CHECK(call({"check-pseudo", "--potential", "ho-shifted", "--tol", "-1"}).code == 2);
  CHECK(call({"laguerre-integral", "--m", "1"}).code == 2);
  CHECK(call({"laguerre-integral", "--m", "5", "--n", "5", "--c", "3"}).code == 2);
  CHECK(call({"orthogonality", "--potential", "khare-mandal", "--zeta", "2", "--M", "1"}).code == 2);
  CHECK(call({}).code == 2);
}

TEST_CASE("cli: help exits 0", "[cli]") {
  const Result r = call({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("spectrum") != std::string::npos);
}

TEST_CASE("cli: check-pseudo passes at the natural shift", "[cli]") {
  const Json km = call_json({"check-pseudo", "--potential", "khare-mandal", "--zeta", "2", "--M", "1"});
  CHECK(km["results"]["passed"] == true);
  CHECK(km["results"]["theta"].get<double>() == Catch::Approx(1.5707963267948966).epsilon(1e-15));
  CHECK(km["inputs"]["grid"]["points"] == 2001);
  for (const auto& args : std::vector<std::vector<std::string>>{
           cat({"check-pseudo"}, kMorse),
           {"check-pseudo", "--potential", "ho-shifted", "--beta", "1", "--gamma", "0.7"},
           {"check-pseudo", "--potential", "eckart-shifted", "--alpha", "6", "--beta", "0.5", "--gamma", "0.4"},
           {"check-pseudo", "--potential", "morse-general", "--V1", "4", "--V2", "12"}}) {
    const Json j = call_json(args);
    CHECK(j["results"]["max_residual"].get<double>() <= 1e-10 * j["diagnostics"]["scale"].get<double>());
  }
}

TEST_CASE("cli: a wrong shift fails the check with exit 1", "[cli]") {
  const Result r = call({"check-pseudo", "--potential", "morse-complex", "--A", "1", "--B", "1", "--C", "3", "--theta-override", "0.3"});
  CHECK(r.code == 1);
  CHECK(r.out.find("fail") != std::string::npos);
  const Json j = call_json({"check-pseudo", "--potential", "morse-complex", "--A", "1", "--B", "1", "--C", "3", "--theta-override", "0.3"}, 1);
  CHECK(j["results"]["passed"] == false);
  CHECK(j["inputs"]["theta_override"] == 0.3);
}

TEST_CASE("cli: no known shift exits 4", "[cli]") {
  const Result r = call({"check-pseudo", "--potential", "morse-general", "--V1", "4", "--V2", "12", "--V2i", "1"});
  CHECK(r.code == 4);
  CHECK_FALSE(r.err.empty());
  CHECK(call({"orthogonality", "--potential", "morse-general", "--V1", "4", "--V2", "12", "--V2i", "1", "--pairing", "eta"}).code != 0);
}

TEST_CASE("cli: non-convergence exits 3", "[cli]") {
  // a tolerance no quadrature can meet
  CHECK(call({"laguerre-integral", "--m", "1", "--n", "2", "--c", "4", "--tol", "1e-300"}).code == 3);
}

TEST_CASE("cli: eta orthogonality of the complex Morse states", "[cli]") {
  const Json j = call_json(cat({"orthogonality"}, kMorse));
  CHECK(j["results"]["off_diag_max_rel"].get<double>() <= 1e-8);
  CHECK(j["results"]["passed"] == true);
  REQUIRE(j["results"]["gram"].size() == 5);
  CHECK(j["results"]["gram"][0][0]["re"].get<double>() == Catch::Approx(362880.0).epsilon(1e-10));
}

TEST_CASE("cli: PT pairing is asserted only for PT-symmetric members", "[cli]") {
  const Json sym = call_json({"orthogonality", "--potential", "ho-shifted", "--beta", "0", "--gamma", "0.7", "--pairing", "pt"});
  CHECK(sym["results"]["asserted"] == true);
  CHECK(sym["results"]["passed"] == true);
  const Json gen = call_json({"orthogonality", "--potential", "ho-shifted", "--beta", "1", "--gamma", "0.7", "--pairing", "pt"});
  CHECK(gen["results"]["asserted"] == false);
  CHECK(gen["results"]["passed"].is_null());
  CHECK(gen["results"]["gram"].size() == 4);
  const Json plain = call_json({"orthogonality", "--potential", "eckart-shifted", "--alpha", "12", "--pairing", "plain"});
  CHECK(plain["results"]["off_diag_max_rel"].get<double>() <= 1e-8);
}

TEST_CASE("cli: laguerre integral by both methods", "[cli]") {
  const Json zero = call_json({"laguerre-integral", "--m", "0", "--n", "1", "--c", "3"});
  CHECK(std::abs(zero["results"]["quadrature"]["value"]["re"].get<double>()) <= 1e-10);
  CHECK(std::abs(zero["results"]["gamma_expansion"]["value"]["re"].get<double>()) <= 1e-10);
  const Json diag = call_json({"laguerre-integral", "--m", "3", "--n", "3", "--c", "5.5"});
  CHECK(diag["results"]["gamma_expansion"]["value"]["re"].get<double>() == Catch::Approx(1344.0).epsilon(1e-12));
  CHECK(diag["results"]["abs_diff"].get<double>() <= 1e-10 * 1344.0);
  CHECK(diag["diagnostics"]["trusted"] == true);
}

TEST_CASE("cli: convergence table", "[cli]") {
  const Json j = call_json({"converge", "--potential", "ho-shifted", "--order", "fd2", "--refinements", "2"});
  const auto& rows = j["results"]["rows"];
  REQUIRE(rows.size() == 3);
  CHECK(rows[0]["points"] == 100);
  CHECK(rows[1]["points"] == 201);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i]["orders"][0].get<double>() >= 1.8);
  CHECK(j["diagnostics"]["plateau_detected"] == false);
  CHECK(call({"converge", "--potential", "ho-shifted", "--refinements", "1"}).code == 2);
}

TEST_CASE("cli: job files", "[cli]") {
  const Result r = call({"--job", job("laguerre_integral.json")});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["command"] == "laguerre-integral");
  CHECK(j["results"]["gamma_expansion"]["value"]["re"].get<double>() == Catch::Approx(90.0).epsilon(1e-12));

  // subcommand agreeing with the file is accepted, a different one is not
  CHECK(call({"--job", job("laguerre_integral.json"), "laguerre-integral"}).code == 0);
  CHECK(call({"--job", job("laguerre_integral.json"), "spectrum"}).code == 2);

  CHECK(call({"--job", job("eckart_orthogonality.json")}).code == 0);
  CHECK(call({"--job", job("ho_check_pseudo.json")}).code == 0);
}

TEST_CASE("cli: flags override job values", "[cli]") {
  const Json j = call_json({"--job", job("laguerre_integral.json"), "laguerre-integral", "--m", "1", "--n", "1"});
  CHECK(j["inputs"]["m"] == 1);
  CHECK(j["inputs"]["c"] == 4.0);
  CHECK(j["results"]["gamma_expansion"]["value"]["re"].get<double>() == Catch::Approx(840.0).epsilon(1e-12));

  const Json p = call_json({"--job", job("ho_check_pseudo.json"), "check-pseudo", "--gamma", "0.2", "--points", "11"});
  CHECK(p["inputs"]["potential"]["beta"] == 1.0);
  CHECK(p["inputs"]["potential"]["gamma"] == 0.2);
  CHECK(p["inputs"]["grid"]["points"] == 11);
  CHECK(p["results"]["theta"].get<double>() == Catch::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("cli: malformed job files exit 2", "[cli]") {
  CHECK(call({"--job", "/nonexistent/job.json"}).code == 2);
  CHECK(call({"--job", temp_file("ps_bad1.json", "{ not json")}).code == 2);
  CHECK(call({"--job", temp_file("ps_bad2.json", R"({"command": "spectrum", "colour": 1})")}).code == 2);
  CHECK(call({"--job", temp_file("ps_bad3.json", R"({"command": "laguerre-integral", "options": {"m": -1, "n": 0, "c": 3}})")}).code == 2);
  CHECK(call({"--job", temp_file("ps_bad4.json", R"({"potential": {"name": "ho-shifted", "beta": "x"}, "command": "check-pseudo"})")}).code == 2);
  CHECK(call({"--job", temp_file("ps_bad5.json", R"({"potential": {"name": "ho-shifted"}})")}).code == 2);
  CHECK(call({"--job", temp_file("ps_bad6.json", R"({"command": "fly"})")}).code == 2);
}

TEST_CASE("cli: output is byte-identical across runs", "[cli]") {
  const std::vector<std::string> args = cat(cat({"spectrum"}, kMorse), {"--method", "both", "--points", "300", "--format", "json"});
  const Result a = call(args);
  const Result b = call(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const std::vector<std::string> o = cat(cat({"orthogonality"}, kMorse), {"--format", "csv"});
  CHECK(call(o).out == call(o).out);
}

TEST_CASE("cli: json numbers carry 17 significant digits and null for non-finite", "[cli]") {
  const Json j = call_json({"check-pseudo", "--potential", "ho-shifted", "--beta", "1", "--gamma", "0.7"});
  std::ostringstream os;
  pseudospec::cli::write_json(os, Json{{"a", 0.1}, {"b", std::nan("")}, {"c", 1.0 / 0.0}, {"d", Json::array({1, 2})}});
  CHECK(os.str() == "{\n  \"a\": 0.10000000000000001,\n  \"b\": null,\n  \"c\": null,\n  \"d\": [1, 2]\n}");
  CHECK(j["inputs"]["potential"]["gamma"] == 0.7);
}

TEST_CASE("cli: plot file", "[cli]") {
  const auto path = (std::filesystem::temp_directory_path() / "ps_plot.csv").string();
  std::filesystem::remove(path);
  const Result r = call({"spectrum", "--potential", "ho-shifted", "--method", "exact", "--levels", "3", "--plot", path, "--plot-state", "1"});
  REQUIRE(r.code == 0);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,ReV,ImV,RePsi,ImPsi");
  std::size_t lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == 401);
  CHECK(call({"spectrum", "--potential", "ho-shifted", "--method", "exact", "--levels", "3", "--plot", path, "--plot-state", "9"}).code == 2);
}
