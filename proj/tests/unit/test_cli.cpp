#include <doctest.h>

#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "jacobi/cli.hpp"

namespace fs = std::filesystem;
using namespace jacobi;

namespace {

struct CliResult {
  int code;
  std::string out;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "jacobi-spectra");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream captured;
  auto* old_out = std::cout.rdbuf(captured.rdbuf());
  std::ostringstream errors;
  auto* old_err = std::cerr.rdbuf(errors.rdbuf());
  const int code = cli::run(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  return {code, captured.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("jacobi_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("sha256 test vector") {
  CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("exit code mapping") {
  CHECK(cli::exit_code_for(ErrorCode::GramIllConditioned) == cli::kExitSolver);
  CHECK(cli::exit_code_for(ErrorCode::NonConvergence) == cli::kExitSolver);
  CHECK(cli::exit_code_for(ErrorCode::UnstableKernel) == cli::kExitCheckFailed);
  CHECK(cli::exit_code_for(ErrorCode::UnknownCurve) == cli::kExitUsage);
  CHECK(cli::exit_code_for(ErrorCode::CutoffTooSmall) == cli::kExitUsage);
}

TEST_CASE("option parsing helpers") {
  CHECK(cli::parse_int_list("6, 8,10") == std::vector<int>{6, 8, 10});
  CHECK_THROWS_AS(cli::parse_int_list("6,x"), JacobiError);
  CHECK(cli::parse_checks("all").size() == 6);
  CHECK(cli::parse_checks("thm1,topology").size() == 2);
  CHECK_THROWS_AS(cli::parse_checks("thm9"), JacobiError);
  CHECK_THROWS_AS(cli::parse_emit("json,pdf"), JacobiError);
  Tolerances t;
  cli::apply_tolerance(t, "thm=1e-3");
  cli::apply_tolerance(t, "kernel=2e-6");
  CHECK(t.thm == 1e-3);
  CHECK(t.kernel_threshold == 2e-6);
  CHECK_THROWS_AS(cli::apply_tolerance(t, "bogus=1"), JacobiError);
  CHECK_THROWS_AS(cli::apply_tolerance(t, "thm=-1"), JacobiError);
  CHECK_THROWS_AS(cli::apply_tolerance(t, "thm"), JacobiError);
}

TEST_CASE("config round trip and unknown keys") {
  cli::RunConfig c;
  c.curve = "Conic_CP2";
  c.cutoffs = {4, 6, 8};
  c.tol.spec = 1e-7;
  cli::RunConfig d;
  cli::merge_config(d, cli::to_json(c));
  CHECK(cli::to_json(d) == cli::to_json(c));
  CHECK_THROWS_AS(cli::merge_config(d, nlohmann::json{{"colour", 1}}), JacobiError);
  CHECK_THROWS_AS(cli::merge_config(d, nlohmann::json{{"cutoff", "ten"}}), JacobiError);
}

TEST_CASE("list-curves table") {
  const auto r = run_cli({"list-curves"});
  CHECK(r.code == 0);
  CHECK(r.out.find("Line_CP2 | CP2 c₀=4 | 𝔠=6 | g=0 | Λ₁=12 ×4 | ker 2") != std::string::npos);
  CHECK(r.out.find("FlatSubtorus | T⁴ | 𝔠=0 | g=1 | Λ₁=4π² | ker 1") != std::string::npos);
  CHECK(r.out.find("FactorSphere | S²×S² K=1 | 𝔠=1 | g=0 | Λ₁=2 ×3 | ker 1") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run_cli({"spectrum"}).code == cli::kExitUsage);
  CHECK(run_cli({"spectrum", "--curve", "Hyperboloid"}).code == cli::kExitUsage);
  CHECK(run_cli({"spectrum", "--curve", "FactorSphere", "--tol", "bogus=1"}).code == cli::kExitUsage);
  CHECK(run_cli({"spectrum", "--curve", "FactorSphere", "--emit", "pdf"}).code == cli::kExitUsage);
  CHECK(run_cli({"spectrum", "--curve", "Conic_CP2", "--cutoff", "1", "--out", scratch("small").string()}).code == cli::kExitUsage);
  CHECK(run_cli({"converge", "--curve", "FactorSphere", "--cutoffs", "3,4", "--out", scratch("two").string()}).code == cli::kExitUsage);
  CHECK(run_cli({"spectrum", "--curve", "FactorSphere", "--cutoff", "-3"}).code == cli::kExitUsage);
  CHECK(run_cli({"spectrum", "--config", "/nonexistent/config.json"}).code == cli::kExitUsage);
  CHECK(run_cli({"spectrum", "--curve", "FactorSphere[K1=-1,K2=1]", "--out", scratch("neg").string()}).code == cli::kExitUsage);
}

TEST_CASE("spectrum outputs and manifest hashes") {
  const fs::path out = scratch("spectrum");
  const auto r = run_cli({"spectrum", "--curve", "FactorSphere", "--cutoff", "5", "--emit", "json,csv,svg", "--out", out.string()});
  REQUIRE(r.code == 0);
  for (const char* f : {"spectrum.json", "ladder.csv", "ladder.svg", "manifest.json"}) CHECK(fs::exists(out / f));
  const auto spectrum = nlohmann::json::parse(slurp(out / "spectrum.json"));
  CHECK(spectrum["kernel_dim"] == 1);
  CHECK(spectrum["lambda1"].get<double>() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(spectrum["clusters"][0]["multiplicity"] == 3);
  CHECK(spectrum["prediction"]["multiplicity"] == 3);
  const std::string svg = slurp(out / "ladder.svg");
  CHECK(svg.find("kernel, dim 1") != std::string::npos);
  CHECK(svg.find("2c = 2") != std::string::npos);

  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["command"] == "spectrum");
  REQUIRE(manifest["files"].size() == 3);
  for (const auto& f : manifest["files"]) {
    CHECK(f["sha256"] == cli::sha256_hex(slurp(out / f["path"].get<std::string>())));
  }
}

TEST_CASE("emit selects formats") {
  const fs::path out = scratch("emit");
  REQUIRE(run_cli({"spectrum", "--curve", "FactorSphere", "--cutoff", "4", "--emit", "csv", "--out", out.string()}).code == 0);
  CHECK(fs::exists(out / "ladder.csv"));
  CHECK_FALSE(fs::exists(out / "spectrum.json"));
  CHECK_FALSE(fs::exists(out / "ladder.svg"));
}

TEST_CASE("config file and flag precedence") {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.json");
    cfg << R"({"curve": "FactorSphere", "cutoff": 4, "emit": ["json"]})";
  }
  REQUIRE(run_cli({"spectrum", "--config", (dir / "run.json").string(), "--out", (dir / "a").string()}).code == 0);
  CHECK(nlohmann::json::parse(slurp(dir / "a" / "spectrum.json"))["cutoff"] == 4);
  REQUIRE(run_cli({"spectrum", "--config", (dir / "run.json").string(), "--cutoff", "6", "--out", (dir / "b").string()}).code == 0);
  CHECK(nlohmann::json::parse(slurp(dir / "b" / "spectrum.json"))["cutoff"] == 6);
}

TEST_CASE("same seed gives byte-identical JSON") {
  const std::vector<std::string> base = {"verify", "--curve", "Line_CP2", "--checks", "identities,topology", "--samples", "4", "--seed", "7"};
  const fs::path da = scratch("det_a"), db = scratch("det_b"), dc = scratch("det_c");
  auto a = base, b = base, c = base;
  a.insert(a.end(), {"--out", da.string()});
  b.insert(b.end(), {"--out", db.string()});
  c.insert(c.end(), {"--out", dc.string()});
  c[c.size() - 3] = "8";
  REQUIRE(run_cli(a).code == 0);
  REQUIRE(run_cli(b).code == 0);
  REQUIRE(run_cli(c).code == 0);
  const std::string ja = slurp(da / "verify.json");
  CHECK(!ja.empty());
  CHECK(ja == slurp(db / "verify.json"));
  CHECK(ja != slurp(dc / "verify.json"));
}

TEST_CASE("verify --all writes per-curve reports") {
  const fs::path out = scratch("all");
  const auto r = run_cli({"verify", "--all", "--checks", "topology", "--out", out.string()});
  CHECK(r.code == 0);
  const auto agg = nlohmann::json::parse(slurp(out / "verify.json"));
  CHECK(agg["overall"] == true);
  REQUIRE(agg["curves"].size() == catalog().size());
  for (const auto& entry : agg["curves"]) CHECK(fs::exists(out / entry["path"].get<std::string>()));
  CHECK(agg["curves"][0]["curve"] == "Line_CP2");
}

TEST_CASE("failed check exits 1") {
  // A kernel threshold this loose swallows the first eigenspace at cutoffs 4 and 5.
  const auto r = run_cli({"verify", "--curve", "FactorSphere", "--checks", "thm2", "--cutoffs", "3,4,5", "--tol", "kernel=0.15", "--out", scratch("fail").string()});
  CHECK(r.code == cli::kExitCheckFailed);
  CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("converge outputs and unstable kernel") {
  const fs::path out = scratch("converge");
  REQUIRE(run_cli({"converge", "--curve", "FactorSphere", "--cutoff", "5", "--out", out.string()}).code == 0);
  const auto table = nlohmann::json::parse(slurp(out / "convergence.json"));
  REQUIRE(table["rows"].size() == 3);
  CHECK(table["rows"][0]["cutoff"] == 3);
  CHECK(table["rows"][2]["cutoff"] == 5);
  CHECK(fs::exists(out / "convergence.csv"));
  CHECK(slurp(out / "convergence.svg").find("<svg") != std::string::npos);

  CHECK(run_cli({"converge", "--curve", "FactorSphere", "--cutoffs", "3,4,5", "--tol", "kernel=0.2", "--out", scratch("unstable").string()})
            .code == cli::kExitCheckFailed);
}

TEST_CASE("dump-geometry") {
  const fs::path out = scratch("geometry");
  REQUIRE(run_cli({"dump-geometry", "--curve", "FlatSubtorus", "--resolution", "16", "--out", out.string()}).code == 0);
  const auto g = nlohmann::json::parse(slurp(out / "geometry.json"));
  CHECK(g["genus"] == 1);
  CHECK(g["weights"].size() == g["nodes_re"].size());
}
