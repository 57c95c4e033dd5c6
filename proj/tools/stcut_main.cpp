#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "stcut/stcut.h"

namespace {

int report(stcut_status status, const stcut_error& err) {
  if (status == STCUT_OK) return 0;
  if (err.line > 0) {
    std::fprintf(stderr, "stcut: %s (line %d): %s\n", stcut_status_name(status), err.line, err.message);
  } else {
    std::fprintf(stderr, "stcut: %s: %s\n", stcut_status_name(status), err.message);
  }
  return stcut_exit_code(status);
}

bool model_from(const std::string& name, stcut_model* model) {
  if (name == "gnp") {
    *model = STCUT_MODEL_GNP;
  } else if (name == "grid") {
    *model = STCUT_MODEL_GRID;
  } else {
    return false;
  }
  return true;
}

std::string summary_path_for(const std::string& csv) {
  const std::string ext = ".csv";
  if (csv.size() > ext.size() && csv.compare(csv.size() - ext.size(), ext.size(), ext) == 0) {
    return csv.substr(0, csv.size() - ext.size()) + ".json";
  }
  return csv + ".json";
}

int solve(const std::string& input, const std::string& method, std::uint64_t seed, bool json, bool timing) {
  stcut_error err{};
  stcut_instance* inst = nullptr;
  stcut_status status = stcut_instance_read(input.c_str(), &inst, &err);
  if (status != STCUT_OK) return report(status, err);

  stcut_solve_options options;
  stcut_solve_options_init(&options);
  options.method = method.c_str();
  options.seed = seed;
  options.timing = timing ? 1 : 0;
  stcut_result* result = nullptr;
  status = stcut_solve(inst, &options, &result, &err);
  stcut_instance_free(inst);
  if (status != STCUT_OK) return report(status, err);

  if (json) {
    std::printf("%s\n", stcut_result_json(result));
  } else {
    std::printf("method    %s\ncut      ", method.c_str());
    const int* cut = stcut_result_cut(result);
    for (size_t i = 0; i < stcut_result_cut_size(result); ++i) std::printf(" %d", cut[i]);
    const double sp = stcut_result_sparsity(result);
    if (std::isinf(sp)) {
      std::printf("\nsparsity  inf\n");
    } else {
      std::printf("\nsparsity  %.12g\n", sp);
    }
    std::printf("size_sp   %.12g\nst_sep    %s\n", stcut_result_size_sparsity(result),
                stcut_result_st_separating(result) ? "yes" : "no");
  }
  stcut_result_free(result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"approximately sparsest st-separating cuts"};
  app.require_subcommand(1);

  std::string input;
  std::string method;
  std::uint64_t seed = 0;
  bool json = false;
  bool timing = false;
  auto* solve_cmd = app.add_subcommand("solve", "solve one instance file");
  solve_cmd->add_option("--input", input, "instance file")->required();
  solve_cmd->add_option("--method", method, "lp, sdp, dnc, exact or spectral")->required();
  solve_cmd->add_option("--seed", seed, "random seed");
  solve_cmd->add_flag("--json", json, "print a JSON record");
  solve_cmd->add_flag("--timing", timing, "include wall time");

  stcut_gen_options gen;
  stcut_gen_options_init(&gen);
  std::string gen_model = "gnp";
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "write a random instance");
  gen_cmd->add_option("--n", gen.n, "vertex count")->required();
  gen_cmd->add_option("--model", gen_model, "gnp or grid");
  gen_cmd->add_option("--p", gen.p, "edge probability")->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--width", gen.width, "grid row length");
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("--out", gen_out, "output file")->required();

  stcut_bench_options bench;
  stcut_bench_options_init(&bench);
  std::string bench_methods = bench.methods;
  std::string bench_model = "gnp";
  std::string bench_out;
  std::string bench_summary;
  bool bench_timing = false;
  auto* bench_cmd = app.add_subcommand("bench", "run a seeded benchmark");
  bench_cmd->add_option("--n-min", bench.n_min, "smallest n")->required();
  bench_cmd->add_option("--n-max", bench.n_max, "largest n")->required();
  bench_cmd->add_option("--trials", bench.trials, "instances per n")->required();
  bench_cmd->add_option("--methods", bench_methods, "comma separated methods");
  bench_cmd->add_option("--seed", bench.seed, "first seed");
  bench_cmd->add_option("--model", bench_model, "gnp or grid");
  bench_cmd->add_option("--p", bench.p, "edge probability")->check(CLI::Range(0.0, 1.0));
  bench_cmd->add_option("--width", bench.width, "grid row length");
  bench_cmd->add_option("--out", bench_out, "CSV output")->required();
  bench_cmd->add_option("--summary", bench_summary, "JSON summary (default: next to the CSV)");
  bench_cmd->add_flag("--timing", bench_timing, "add a wall_ms column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  if (solve_cmd->parsed()) return solve(input, method, seed, json, timing);

  stcut_error err{};
  if (gen_cmd->parsed()) {
    if (!model_from(gen_model, &gen.model)) {
      std::fprintf(stderr, "stcut: unknown model '%s'\n", gen_model.c_str());
      return 3;
    }
    stcut_instance* inst = nullptr;
    stcut_status status = stcut_generate(&gen, &inst, &err);
    if (status != STCUT_OK) return report(status, err);
    status = stcut_instance_write(inst, gen_out.c_str(), &err);
    stcut_instance_free(inst);
    return report(status, err);
  }

  if (!model_from(bench_model, &bench.model)) {
    std::fprintf(stderr, "stcut: unknown model '%s'\n", bench_model.c_str());
    return 3;
  }
  bench.methods = bench_methods.c_str();
  bench.timing = bench_timing ? 1 : 0;
  if (bench_summary.empty()) bench_summary = summary_path_for(bench_out);
  return report(stcut_bench(&bench, bench_out.c_str(), bench_summary.c_str(), &err), err);
}
