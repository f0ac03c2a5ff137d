#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "fpplab/weights.hpp"

namespace fpplab {

inline constexpr const char* kLibraryVersion = "0.1.0";

// One experiment. File form (see docs/formats.md):
//
//   # comment
//   key = value            keys before the first section apply to every section
//   [recipe-name]
//   key = value
//
// Unknown keys are kept in `params` and passed to the recipe.
struct ExperimentConfig {
  std::string recipe = "smoke";
  WeightModel model = WeightModel::dirac(1.0);
  int dim = 2;
  std::vector<double> horizons{8.0};
  double margin = 1.05;  // box margin factor
  double speed = 1.0;    // M in B(t) within S(M t)
  int box_radius = 0;    // 0: derived from margin * speed * max horizon
  int replications = 1;
  std::uint64_t seed = 1;
  int probes = 64;       // probe times per replication
  std::string out = "out";
  int threads = 1;
  double memory_mb = 4096.0;
  std::map<std::string, std::string> params;

  double max_horizon() const;
  int resolved_box_radius() const;
  // throws std::invalid_argument
  void validate() const;

  // canonical text; parse(serialize()) == *this
  std::string serialize() const;
  static ExperimentConfig parse(const std::string& text, const std::string& section = "");
  static ExperimentConfig load(const std::filesystem::path& path, const std::string& section = "");
  // FNV-1a over serialize() without `out` and `threads`
  std::uint64_t hash() const;
  std::string hash_hex() const;

  double param(const std::string& key, double fallback) const;
  long param_int(const std::string& key, long fallback) const;
  std::string param_str(const std::string& key, const std::string& fallback) const;
  std::vector<double> param_list(const std::string& key, const std::vector<double>& fallback) const;

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.serialize() == b.serialize();
  }
};

struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  // "# config_hash=<hex>" line, header, rows
  std::string render(const std::string& config_hash) const;
};

struct RunRecord {
  std::string recipe;
  std::string config_hash;
  std::string version = kLibraryVersion;
  std::vector<CsvTable> tables;
  nlohmann::json summary = nlohmann::json::object();
  std::size_t guard_failures = 0;
  double wall_seconds = 0.0;
  std::vector<std::filesystem::path> files;
};

class GuardFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> recipe_names();
bool is_recipe(const std::string& name);
// Defaults for a named recipe; throws on an unknown name.
ExperimentConfig default_config(const std::string& recipe);

// Validates, runs, writes <out>/<recipe>.<table>.csv, <out>/<recipe>.json and
// the resolved config as <out>/<recipe>.ini.
RunRecord run_recipe(const ExperimentConfig& config);
// Same without touching the file system.
RunRecord execute_recipe(const ExperimentConfig& config);
void write_record(const RunRecord& record, const std::filesystem::path& out);

// Aggregates every <recipe>.json under `dir`.
nlohmann::json aggregate_report(const std::filesystem::path& dir);

// Runs fn(i) for i in [0, n) on `threads` workers; results come back in
// index order whatever the completion order.
template <class R>
std::vector<R> parallel_ordered(std::size_t n, int threads, const std::function<R(std::size_t)>& fn) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto k = static_cast<std::size_t>(std::max(1, threads));
  if (k == 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(k, n); ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// %.17g, so that every CSV cell round-trips
std::string format_double(double x);

}  // namespace fpplab
