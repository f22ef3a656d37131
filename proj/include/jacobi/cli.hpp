#pragma once

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <set>
#include <string>
#include <vector>

#include "jacobi/errors.hpp"
#include "jacobi/theorems.hpp"

namespace jacobi::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSolver = 3;

struct RunConfig {
  std::string curve;
  bool all = false;
  int cutoff = 0;                // 0: top of the default ladder
  std::vector<int> cutoffs;
  std::set<CheckGroup> checks = all_check_groups();
  std::filesystem::path out = "jacobi-out";
  std::set<std::string> emit{"json", "csv"};
  std::uint64_t seed = 1;
  int samples = 20;
  int resolution = 0;            // 0: derived from the cutoff
  Tolerances tol;
};

nlohmann::json to_json(const RunConfig& config);
/// Fields present in `j` override those of `config`.
void merge_config(RunConfig& config, const nlohmann::json& j);
RunConfig load_config_file(const std::filesystem::path& path);

/// KEY=VAL with KEY in geom, adj, spec, thm, quad, kernel, cluster, rank.
void apply_tolerance(Tolerances& tol, const std::string& assignment);
std::vector<int> parse_int_list(const std::string& text);
std::set<CheckGroup> parse_checks(const std::string& text);
std::set<std::string> parse_emit(const std::string& text);

int exit_code_for(ErrorCode code);

std::string sha256_hex(const std::string& data);

/// Timings and content hashes of one command's outputs.
class RunManifest {
 public:
  RunManifest(std::string command, const RunConfig& config);
  void time_phase(const std::string& phase, double seconds);
  /// Writes `content` under the output directory and records its hash.
  void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& content);
  nlohmann::json to_json() const;
  void save(const std::filesystem::path& dir) const;

 private:
  std::string command_;
  nlohmann::json config_;
  nlohmann::json timings_ = nlohmann::json::object();
  nlohmann::json files_ = nlohmann::json::array();
};

/// Entry point of the jacobi-spectra tool; returns the process exit code.
int run(int argc, char** argv);

}  // namespace jacobi::cli
