#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "jacobi/cli.hpp"

#ifndef JACOBI_VERSION
#define JACOBI_VERSION "0.0.0"
#endif

namespace jacobi::cli {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double& tolerance_slot(Tolerances& tol, const std::string& key) {
  if (key == "geom") return tol.geom;
  if (key == "adj") return tol.adj;
  if (key == "spec") return tol.spec;
  if (key == "thm") return tol.thm;
  if (key == "quad") return tol.quad;
  if (key == "kernel") return tol.kernel_threshold;
  if (key == "cluster") return tol.cluster_gap;
  if (key == "rank") return tol.rank_threshold;
  throw JacobiError(ErrorCode::InvalidArgument, "unknown tolerance key '" + key + "'");
}

nlohmann::json tolerances_json(const Tolerances& t) {
  return {{"geom", t.geom}, {"adj", t.adj},           {"spec", t.spec},           {"thm", t.thm},
          {"quad", t.quad}, {"kernel", t.kernel_threshold}, {"cluster", t.cluster_gap}, {"rank", t.rank_threshold}};
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw JacobiError(ErrorCode::InvalidArgument, "not an integer: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::set<CheckGroup> parse_checks(const std::string& text) {
  std::set<CheckGroup> out;
  for (const auto& item : split(text, ',')) {
    if (item == "all") return all_check_groups();
    const auto g = parse_check_group(item);
    if (!g) throw JacobiError(ErrorCode::InvalidArgument, "unknown check group '" + item + "'");
    out.insert(*g);
  }
  if (out.empty()) throw JacobiError(ErrorCode::InvalidArgument, "empty check list");
  return out;
}

std::set<std::string> parse_emit(const std::string& text) {
  std::set<std::string> out;
  for (const auto& item : split(text, ',')) {
    if (item != "json" && item != "csv" && item != "svg") throw JacobiError(ErrorCode::InvalidArgument, "unknown emit format '" + item + "'");
    out.insert(item);
  }
  return out;
}

void apply_tolerance(Tolerances& tol, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw JacobiError(ErrorCode::InvalidArgument, "expected KEY=VAL, got '" + assignment + "'");
  const std::string key = trim(assignment.substr(0, eq));
  const std::string val = trim(assignment.substr(eq + 1));
  double& slot = tolerance_slot(tol, key);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(val, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != val.size() || !(v > 0.0)) throw JacobiError(ErrorCode::InvalidArgument, "tolerance " + key + " needs a positive number");
  slot = v;
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json checks = nlohmann::json::array();
  for (CheckGroup g : c.checks) checks.push_back(std::string(to_string(g)));
  return {{"curve", c.curve},     {"all", c.all},           {"cutoff", c.cutoff},   {"cutoffs", c.cutoffs},
          {"checks", checks},     {"out", c.out.string()},  {"emit", c.emit},       {"seed", c.seed},
          {"samples", c.samples}, {"resolution", c.resolution}, {"tol", tolerances_json(c.tol)}};
}

void merge_config(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw JacobiError(ErrorCode::InvalidArgument, "config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "curve") c.curve = value.get<std::string>();
      else if (key == "all") c.all = value.get<bool>();
      else if (key == "cutoff") c.cutoff = value.get<int>();
      else if (key == "cutoffs") c.cutoffs = value.get<std::vector<int>>();
      else if (key == "checks") c.checks = value.is_string() ? parse_checks(value.get<std::string>()) : [&] {
          std::string joined;
          for (const auto& v : value) joined += v.get<std::string>() + ",";
          return parse_checks(joined);
        }();
      else if (key == "out") c.out = value.get<std::string>();
      else if (key == "emit") {
        std::string joined;
        if (value.is_string()) joined = value.get<std::string>();
        else for (const auto& v : value) joined += v.get<std::string>() + ",";
        c.emit = parse_emit(joined);
      } else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "samples") c.samples = value.get<int>();
      else if (key == "resolution") c.resolution = value.get<int>();
      else if (key == "tol") {
        for (const auto& [tk, tv] : value.items()) tolerance_slot(c.tol, tk) = tv.get<double>();
      } else {
        throw JacobiError(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw JacobiError(ErrorCode::InvalidArgument, std::string("bad config value: ") + e.what());
  }
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw JacobiError(ErrorCode::InvalidArgument, "cannot read config file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw JacobiError(ErrorCode::InvalidArgument, "config is not valid JSON: " + std::string(e.what()));
  }
  RunConfig c;
  merge_config(c, j);
  return c;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::GramIllConditioned:
    case ErrorCode::NonConvergence: return kExitSolver;
    case ErrorCode::UnstableKernel: return kExitCheckFailed;
    default: return kExitUsage;
  }
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    out += buf;
  }
  return out;
}

RunManifest::RunManifest(std::string command, const RunConfig& config)
    : command_(std::move(command)), config_(cli::to_json(config)) {}

void RunManifest::time_phase(const std::string& phase, double seconds) {
  timings_[phase] = timings_.value(phase, 0.0) + seconds;
}

void RunManifest::write_file(const std::filesystem::path& dir, const std::string& name, const std::string& content) {
  std::filesystem::create_directories((dir / name).parent_path());
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw JacobiError(ErrorCode::InvalidArgument, "cannot write " + (dir / name).string());
  out << content;
  files_.push_back({{"path", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
}

nlohmann::json RunManifest::to_json() const {
  return {{"tool", "jacobi-spectra"}, {"version", JACOBI_VERSION}, {"catalog_version", 1}, {"command", command_},
          {"config", config_},        {"timings_seconds", timings_}, {"files", files_}};
}

void RunManifest::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  out << to_json().dump(2) << '\n';
}

}  // namespace jacobi::cli
