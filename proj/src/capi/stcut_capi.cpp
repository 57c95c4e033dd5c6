#include "stcut/stcut.h"

#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stcut/io.hpp"
#include "stcut/run.hpp"

struct stcut_instance {
  stcut::Instance inst;
};

struct stcut_result {
  stcut::ResultRecord record;
  std::vector<int> cut;
  std::string json;
};

namespace {

static_assert(static_cast<int>(stcut::ErrorCode::kIoError) + 1 == STCUT_E_IO, "status codes out of step");

stcut_status set_error(stcut_error* err, stcut_status status, const char* message, int line = 0) {
  if (err != nullptr) {
    err->status = status;
    err->line = line;
    std::snprintf(err->message, sizeof err->message, "%s", message);
  }
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
stcut_status guarded(stcut_error* err, F&& body) {
  try {
    body();
    return set_error(err, STCUT_OK, "");
  } catch (const stcut::Error& e) {
    return set_error(err, static_cast<stcut_status>(static_cast<int>(e.code()) + 1), e.what(), e.line());
  } catch (const std::bad_alloc&) {
    return set_error(err, STCUT_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(err, STCUT_E_INTERNAL, e.what());
  }
}

stcut::GraphModel model_of(stcut_model model, double p, int width) {
  if (model == STCUT_MODEL_GRID) return stcut::GridModel{width};
  if (model != STCUT_MODEL_GNP) throw stcut::Error(stcut::ErrorCode::kInvalidArgument, "unknown graph model");
  return stcut::GnpModel{p};
}

std::optional<double> tolerance_of(double requested) {
  if (requested > 0.0) return requested;
  return stcut::tolerance_from_env();
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw stcut::Error(stcut::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

void write_file(const char* path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw stcut::Error(stcut::ErrorCode::kIoError, std::string("cannot write ") + path);
  out << text;
  if (!out) throw stcut::Error(stcut::ErrorCode::kIoError, std::string("write failed for ") + path);
}

}  // namespace

extern "C" {

const char* stcut_status_name(stcut_status status) {
  if (status == STCUT_OK) return "Ok";
  if (status == STCUT_E_INTERNAL) return "Internal";
  if (status < STCUT_OK || status > STCUT_E_INTERNAL) return "Unknown";
  return stcut::error_code_name(static_cast<stcut::ErrorCode>(static_cast<int>(status) - 1));
}

int stcut_exit_code(stcut_status status) {
  switch (status) {
    case STCUT_OK:
      return 0;
    case STCUT_E_PARSE:
    case STCUT_E_MISSING_TERMINALS:
    case STCUT_E_BAD_PROBABILITY:
    case STCUT_E_IO:
      return 3;
    default:
      return 2;
  }
}

stcut_status stcut_instance_parse(const char* text, stcut_instance** out, stcut_error* err) {
  return guarded(err, [&] {
    require(text, "text");
    require(out, "out");
    *out = new stcut_instance{stcut::parse_instance(text)};
  });
}

stcut_status stcut_instance_read(const char* path, stcut_instance** out, stcut_error* err) {
  return guarded(err, [&] {
    require(path, "path");
    require(out, "out");
    *out = new stcut_instance{stcut::read_instance_file(path)};
  });
}

void stcut_instance_free(stcut_instance* inst) { delete inst; }

int stcut_instance_num_vertices(const stcut_instance* inst) { return inst ? inst->inst.num_vertices() : 0; }
int stcut_instance_source(const stcut_instance* inst) { return inst ? inst->inst.s() : -1; }
int stcut_instance_sink(const stcut_instance* inst) { return inst ? inst->inst.t() : -1; }

stcut_status stcut_instance_write(const stcut_instance* inst, const char* path, stcut_error* err) {
  return guarded(err, [&] {
    require(inst, "instance");
    require(path, "path");
    stcut::write_instance_file(inst->inst, path);
  });
}

char* stcut_instance_to_text(const stcut_instance* inst) {
  if (inst == nullptr) return nullptr;
  const std::string text = stcut::write_instance(inst->inst);
  char* copy = static_cast<char*>(std::malloc(text.size() + 1));
  if (copy != nullptr) std::memcpy(copy, text.c_str(), text.size() + 1);
  return copy;
}

void stcut_string_free(char* text) { std::free(text); }

void stcut_gen_options_init(stcut_gen_options* options) {
  if (options == nullptr) return;
  options->n = 6;
  options->model = STCUT_MODEL_GNP;
  options->p = 0.5;
  options->width = 3;
  options->seed = 0;
}

stcut_status stcut_generate(const stcut_gen_options* options, stcut_instance** out, stcut_error* err) {
  return guarded(err, [&] {
    require(options, "options");
    require(out, "out");
    stcut::GenOptions gen;
    gen.n = options->n;
    gen.model = model_of(options->model, options->p, options->width);
    gen.seed = options->seed;
    *out = new stcut_instance{stcut::gen_random(gen)};
  });
}

void stcut_solve_options_init(stcut_solve_options* options) {
  if (options == nullptr) return;
  options->method = "exact";
  options->seed = 0;
  options->tolerance = 0.0;
  options->timing = 0;
  options->oracle = 1;
}

stcut_status stcut_solve(const stcut_instance* inst, const stcut_solve_options* options, stcut_result** out,
                         stcut_error* err) {
  return guarded(err, [&] {
    require(inst, "instance");
    require(options, "options");
    require(options->method, "method");
    require(out, "out");
    stcut::RunOptions run;
    run.tolerance = tolerance_of(options->tolerance);
    run.timing = options->timing != 0;
    run.with_oracle = options->oracle != 0;
    auto result = std::make_unique<stcut_result>();
    result->record = stcut::run(options->method, inst->inst, options->seed, run);
    result->cut.assign(result->record.cut.begin(), result->record.cut.end());
    result->json = stcut::to_json_string(result->record);
    *out = result.release();
  });
}

void stcut_result_free(stcut_result* result) { delete result; }

size_t stcut_result_cut_size(const stcut_result* result) { return result ? result->cut.size() : 0; }
const int* stcut_result_cut(const stcut_result* result) { return result ? result->cut.data() : nullptr; }

double stcut_result_sparsity(const stcut_result* result) {
  if (result == nullptr) return std::numeric_limits<double>::quiet_NaN();
  return result->record.sparsity.value_or(std::numeric_limits<double>::infinity());
}

double stcut_result_size_sparsity(const stcut_result* result) {
  return result ? result->record.size_sparsity : std::numeric_limits<double>::quiet_NaN();
}

int stcut_result_st_separating(const stcut_result* result) { return result && result->record.st_separating; }

const char* stcut_result_json(const stcut_result* result) { return result ? result->json.c_str() : nullptr; }

void stcut_bench_options_init(stcut_bench_options* options) {
  if (options == nullptr) return;
  options->n_min = 4;
  options->n_max = 8;
  options->trials = 5;
  options->methods = "lp,sdp,dnc,exact";
  options->seed = 0;
  options->model = STCUT_MODEL_GNP;
  options->p = 0.5;
  options->width = 3;
  options->tolerance = 0.0;
  options->timing = 0;
}

stcut_status stcut_bench(const stcut_bench_options* options, const char* csv_path, const char* summary_path,
                         stcut_error* err) {
  return guarded(err, [&] {
    require(options, "options");
    require(options->methods, "methods");
    require(csv_path, "csv path");
    stcut::BenchOptions bench;
    bench.n_min = options->n_min;
    bench.n_max = options->n_max;
    bench.trials = options->trials;
    bench.seed = options->seed;
    bench.model = model_of(options->model, options->p, options->width);
    bench.run.tolerance = tolerance_of(options->tolerance);
    bench.run.timing = options->timing != 0;
    std::stringstream list(options->methods);
    for (std::string m; std::getline(list, m, ',');) {
      if (!m.empty()) bench.methods.push_back(m);
    }
    const auto rows = stcut::run_bench(bench);
    write_file(csv_path, stcut::bench_csv(rows, bench.run.timing));
    if (summary_path != nullptr) write_file(summary_path, stcut::bench_summary(rows).dump(2) + "\n");
  });
}

}  // extern "C"
