#include "stcut/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "stcut/dnc.hpp"
#include "stcut/relax_lp.hpp"
#include "stcut/relax_sdp.hpp"
#include "stcut/spectral.hpp"

namespace stcut {

namespace {

using Json = nlohmann::ordered_json;

Json real(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

Json real(const Sparsity& x) { return x.is_finite() ? Json(x.value()) : Json("inf"); }

Json members(const Cut& cut) { return cut.members(); }

const char* case_name(CaseReport::Kind kind) {
  return kind == CaseReport::Kind::kDenseBall ? "dense_ball" : "no_dense_ball";
}

std::string fmt12(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt12(const std::optional<Sparsity>& x) {
  if (!x) return "";
  return x->is_finite() ? fmt12(x->value()) : "inf";
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

}  // namespace

std::optional<double> tolerance_from_env() {
  const char* raw = std::getenv("STCUT_TOL");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const double value = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !std::isfinite(value) || value <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, std::string("STCUT_TOL is not a positive number: ") + raw);
  }
  return value;
}

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names{"lp", "sdp", "dnc", "exact", "spectral"};
  return names;
}

ResultRecord run(const std::string& method, const Instance& inst, std::uint64_t seed, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const Instance norm = inst.normalized() ? inst : normalize(inst);
  ResultRecord record;
  record.method = method;
  record.seed = seed;
  record.bridge = norm.bridge();
  Json& diag = record.diagnostics;

  std::optional<Cut> cut;
  if (method == "lp") {
    LpPipelineOptions lp;
    if (options.tolerance) lp.lp.tolerance = *options.tolerance;
    LpPipelineResult result = lp_pipeline(norm, seed, lp);
    record.relaxation = result.diagnostics.lp_value;
    diag["p"] = result.diagnostics.num_sets;
    diag["l1_ratio"] = real(result.diagnostics.l1_ratio);
    diag["demand_retention"] = result.diagnostics.demand_retention;
    diag["simplex_iterations"] = result.diagnostics.simplex_iterations;
    cut = std::move(result.cut);
  } else if (method == "sdp") {
    CheegerOptions sdp;
    if (options.tolerance) sdp.sdp.tolerance = *options.tolerance;
    CheegerResult result = cheeger_st(norm, seed, sdp);
    const CheegerDiagnostics& d = result.diagnostics;
    record.relaxation = d.sdp_value;
    diag["case"] = case_name(d.report.kind);
    if (d.report.kind == CaseReport::Kind::kDenseBall) diag["center"] = d.report.center;
    diag["ball_mass"] = d.report.ball_mass;
    diag["far_mass"] = d.report.far_mass;
    diag["trials"] = d.trials;
    diag["alpha"] = d.alpha;
    diag["bound"] = d.bound;
    diag["gap_bound"] = d.gap_bound;
    diag["sdp_iterations"] = d.sdp_iterations;
    cut = std::move(result.cut);
  } else if (method == "dnc") {
    DncOptions dnc;
    dnc.use_mass = options.dnc_mass;
    DncResult result = divide_and_conquer(norm, seed, dnc);
    diag["flow"] = result.flow;
    diag["swapped"] = result.swapped;
    diag["t_steps"] = result.t_steps;
    diag["rho_verified"] = result.rho_verified;
    diag["objective"] = dnc.use_mass ? "mass" : "size";
    Json recorded = Json::array();
    for (const RecordedCut& r : result.recorded) {
      recorded.push_back(Json{{"step", step_tag_name(r.tag)}, {"cut", members(r.cut)}, {"value", real(r.value)}});
    }
    diag["recorded"] = std::move(recorded);
    cut = std::move(result.cut);
  } else if (method == "exact") {
    CutValue result = exact_st_opt(norm);
    record.opt = result.value;
    cut = std::move(result.cut);
  } else if (method == "spectral") {
    SpectralResult result = conductance_sweep(norm.capacity());
    diag["lambda2"] = result.lambda2;
    diag["conductance"] = result.conductance;
    diag["multiplicity"] = result.multiplicity;
    cut = std::move(result.cut);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown method '" + method + "'");
  }

  const Cut side = cut->side_of(norm.s());
  record.cut = side.members();
  record.sparsity = sparsity(norm, side);
  record.size_sparsity = size_sparsity(norm.raw_capacity(), side);
  record.st_separating = is_st_separating(norm, side);
  if (!record.opt && options.with_oracle && norm.num_vertices() <= options.oracle_max) {
    record.opt = exact_st_opt(norm).value;
  }
  if (options.timing) {
    record.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return record;
}

nlohmann::ordered_json to_json(const ResultRecord& record) {
  Json j;
  j["method"] = record.method;
  j["cut"] = record.cut;
  j["sparsity"] = real(record.sparsity);
  j["size_sparsity"] = real(record.size_sparsity);
  j["st_separating"] = record.st_separating;
  j["relaxation"] = record.relaxation ? real(*record.relaxation) : Json(nullptr);
  j["bridge"] = record.bridge;
  j["opt"] = record.opt ? real(*record.opt) : Json(nullptr);
  j["seed"] = record.seed;
  if (record.wall_ms) j["wall_ms"] = *record.wall_ms;
  j["diagnostics"] = record.diagnostics;
  return j;
}

std::string to_json_string(const ResultRecord& record) { return to_json(record).dump(); }

std::vector<BenchRow> run_bench(const BenchOptions& options) {
  if (options.n_min < 2 || options.n_max < options.n_min) throw Error(ErrorCode::kInvalidArgument, "bad n range");
  if (options.trials < 1) throw Error(ErrorCode::kInvalidArgument, "trials must be positive");
  if (options.methods.empty()) throw Error(ErrorCode::kInvalidArgument, "no methods");
  for (const std::string& m : options.methods) {
    if (std::find(method_names().begin(), method_names().end(), m) == method_names().end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown method '" + m + "'");
    }
  }
  RunOptions run_options = options.run;
  run_options.with_oracle = false;

  std::vector<BenchRow> rows;
  int row = 0;
  for (int n = options.n_min; n <= options.n_max; ++n) {
    for (int trial = 0; trial < options.trials; ++trial, ++row) {
      const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(row);
      GenOptions gen;
      gen.n = n;
      gen.model = options.model;
      gen.seed = seed;
      std::optional<Instance> inst;
      std::optional<Sparsity> opt;
      std::string gen_error;
      std::string gen_message;
      try {
        inst = normalize(gen_random(gen));
        if (n <= options.oracle_max) opt = exact_st_opt(*inst, options.oracle_max).value;
      } catch (const Error& e) {
        gen_error = error_code_name(e.code());
        gen_message = e.what();
      }
      for (const std::string& method : options.methods) {
        BenchRow r;
        r.row = row;
        r.n = n;
        r.seed = seed;
        r.method = method;
        r.opt = opt;
        if (!inst) {
          r.error = gen_error;
          r.message = gen_message;
        } else {
          try {
            r.record = run(method, *inst, seed, run_options);
            r.record->opt = opt;
          } catch (const Error& e) {
            r.error = error_code_name(e.code());
            r.message = e.what();
          }
        }
        rows.push_back(std::move(r));
      }
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows, bool timing) {
  std::ostringstream out;
  out << "row,n,seed,method,status,st_separating,sparsity,opt,ratio,size_sparsity,relaxation,bridge,relax_gap,case,"
         "cut";
  if (timing) out << ",wall_ms";
  out << '\n';
  for (const BenchRow& r : rows) {
    out << r.row << ',' << r.n << ',' << r.seed << ',' << r.method << ',';
    if (!r.record) {
      out << r.error << ",,,";
      out << fmt12(r.opt) << ",,,,,,,";
      if (timing) out << ',';
      out << '\n';
      continue;
    }
    const ResultRecord& rec = *r.record;
    out << "ok," << (rec.st_separating ? "true" : "false") << ',' << fmt12(std::optional<Sparsity>(rec.sparsity))
        << ',' << fmt12(r.opt) << ',';
    if (r.opt && r.opt->is_finite() && r.opt->value() > 0.0 && rec.sparsity.is_finite()) {
      out << fmt12(rec.sparsity.value() / r.opt->value());
    }
    out << ',' << fmt12(rec.size_sparsity) << ',';
    if (rec.relaxation) out << fmt12(*rec.relaxation);
    out << ',' << fmt12(rec.bridge) << ',';
    if (rec.relaxation && r.opt && r.opt->is_finite()) {
      // Both sides in the D = 1 convention.
      const double lower = rec.method == "sdp" ? *rec.relaxation * rec.bridge : *rec.relaxation;
      if (lower > 0.0) out << fmt12(r.opt->value() / lower);
    }
    out << ',';
    if (rec.diagnostics.contains("case")) out << rec.diagnostics["case"].get<std::string>();
    out << ',';
    for (std::size_t i = 0; i < rec.cut.size(); ++i) out << (i ? " " : "") << rec.cut[i];
    if (timing) out << ',' << (rec.wall_ms ? fmt12(*rec.wall_ms) : "");
    out << '\n';
  }
  return out.str();
}

nlohmann::ordered_json bench_summary(const std::vector<BenchRow>& rows) {
  std::vector<std::string> methods;
  for (const BenchRow& r : rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
  }
  Json summary;
  summary["rows"] = rows.size();
  Json per_method = Json::object();
  for (const std::string& m : methods) {
    int ok = 0;
    int errors = 0;
    int separating = 0;
    std::vector<double> ratios;
    std::vector<double> no_dense;
    int dense = 0;
    for (const BenchRow& r : rows) {
      if (r.method != m) continue;
      if (!r.record) {
        ++errors;
        continue;
      }
      ++ok;
      const ResultRecord& rec = *r.record;
      separating += rec.st_separating;
      if (r.opt && r.opt->is_finite() && r.opt->value() > 0.0 && rec.sparsity.is_finite()) {
        ratios.push_back(rec.sparsity.value() / r.opt->value());
      }
      if (rec.diagnostics.contains("case")) {
        if (rec.diagnostics["case"] == "dense_ball") {
          ++dense;
        } else if (rec.relaxation && *rec.relaxation > 0.0 && rec.sparsity.is_finite()) {
          no_dense.push_back(rec.sparsity.value() / std::sqrt(*rec.relaxation * rec.bridge));
        }
      }
    }
    Json entry;
    entry["ok"] = ok;
    entry["errors"] = errors;
    entry["st_separating"] = separating;
    entry["median_ratio"] = ratios.empty() ? Json(nullptr) : Json(median(ratios));
    entry["max_ratio"] = ratios.empty() ? Json(nullptr) : Json(*std::max_element(ratios.begin(), ratios.end()));
    if (m == "sdp") {
      entry["dense_ball"] = dense;
      entry["no_dense_ball"] = no_dense.size();
      entry["median_sparsity_over_sqrt_sdp_bridge"] = no_dense.empty() ? Json(nullptr) : Json(median(no_dense));
    }
    per_method[m] = std::move(entry);
  }
  summary["methods"] = std::move(per_method);
  return summary;
}

}  // namespace stcut
