#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stcut/instance.hpp"

namespace stcut {

inline constexpr int kAutoOracleMax = 12;

struct RunOptions {
  // Overrides the LP and SDP default tolerances.
  std::optional<double> tolerance;
  bool timing = false;
  // Attach OPT_st from enumeration when n <= oracle_max.
  bool with_oracle = true;
  int oracle_max = kAutoOracleMax;
  // divide_and_conquer weighs sides by mu.
  bool dnc_mass = false;
};

// STCUT_TOL, if set. Throws kInvalidArgument on a malformed or nonpositive value.
std::optional<double> tolerance_from_env();

struct ResultRecord {
  std::string method;
  std::vector<Vertex> cut;  // side holding s, ascending
  Sparsity sparsity = Sparsity::infinite();  // normalized, D = 1
  double size_sparsity = 0.0;                // raw capacities, cardinalities
  bool st_separating = false;
  std::optional<double> relaxation;  // LP value, or SDP value in the mu convention
  double bridge = 1.0;
  std::optional<Sparsity> opt;
  std::uint64_t seed = 0;
  std::optional<double> wall_ms;
  nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
};

const std::vector<std::string>& method_names();

// `inst` may be raw or normalized.
ResultRecord run(const std::string& method, const Instance& inst, std::uint64_t seed,
                 const RunOptions& options = {});

nlohmann::ordered_json to_json(const ResultRecord& record);
// One line, no trailing newline.
std::string to_json_string(const ResultRecord& record);

struct BenchOptions {
  int n_min = 4;
  int n_max = 8;
  int trials = 5;
  std::vector<std::string> methods;
  std::uint64_t seed = 0;
  GraphModel model = GnpModel{0.5};
  RunOptions run;
  // OPT_st is computed per instance up to this size.
  int oracle_max = kDefaultOracleCap;
};

struct BenchRow {
  int row = 0;  // instance index; seed = seed0 + row
  int n = 0;
  std::uint64_t seed = 0;
  std::string method;
  std::optional<Sparsity> opt;
  std::optional<ResultRecord> record;
  std::string error;  // error code name when record is empty
  std::string message;
};

std::vector<BenchRow> run_bench(const BenchOptions& options);
// Long format, one row per (instance, method); 12 significant digits.
std::string bench_csv(const std::vector<BenchRow>& rows, bool timing = false);
nlohmann::ordered_json bench_summary(const std::vector<BenchRow>& rows);

}  // namespace stcut
