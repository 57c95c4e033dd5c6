#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "stcut/metrics.hpp"
#include "stcut/simplex.hpp"

namespace stcut {

// LP relaxation over semi-metrics: one variable d(u,v) per unordered pair
// (lexicographic order), objective sum cap d, demand row sum dem d = 1,
// st-rows d(s,t) = d(s,v) + d(v,t), and three triangle rows per triple.
struct LpModel {
  int n = 0;
  Vertex s = 0;
  Vertex t = 1;
  bool st_constraints = true;
  std::vector<std::pair<Vertex, Vertex>> pairs;
  LinearProgram program;
  int num_demand_rows = 0;
  int num_st_rows = 0;
  int num_triangle_rows = 0;

  int pair_index(Vertex u, Vertex v) const;
};

struct LpSolution {
  SemiMetric d;
  double objective = 0.0;
  double residual = 0.0;
  long iterations = 0;
};

struct LpOptions {
  double tolerance = 1e-7;
  long max_iterations = 500000;
};

inline constexpr int kLpMaxVertices = 20;

// `st_constraints = false` drops the st-rows, giving the ordinary
// (non-st) sparsest-cut relaxation.
LpModel build_lp(const Instance& inst, bool st_constraints = true);
LpSolution solve_lp(const LpModel& model, const LpOptions& options = {});

inline constexpr int kDefaultBourgainL = 8;

int ceil_log2(int n);

// L * ceil(log2 n) sets at each scale j = 1..ceil(log2 n), each vertex kept
// with probability 2^-j. Empty draws are redrawn up to 100 times, then
// replaced by a uniform singleton.
std::vector<std::vector<Vertex>> bourgain_sets(int n, std::uint64_t seed, int L = kDefaultBourgainL);

// g(v) = (1/2p)(f_{A_1}^+(v), f_{A_1}^-(v), ..., f_{A_p}^+(v), f_{A_p}^-(v)).
EmbeddingMap assemble_g(const SemiMetric& d, const std::vector<std::vector<Vertex>>& sets, Vertex s,
                        Vertex t, double tol = 1e-7);

struct LpDiagnostics {
  double lp_value = 0.0;
  Sparsity l1_ratio = Sparsity::infinite();
  int num_sets = 0;
  // sum dem ||g(u)-g(v)||_1 / sum dem d(u,v): measured Bourgain contraction.
  double demand_retention = 0.0;
  long simplex_iterations = 0;
};

struct LpPipelineResult {
  Cut cut;
  Sparsity value;
  LpDiagnostics diagnostics;
};

struct LpPipelineOptions {
  LpOptions lp;
  int bourgain_L = kDefaultBourgainL;
};

LpPipelineResult lp_pipeline(const Instance& inst, std::uint64_t seed, const LpPipelineOptions& options = {});

}  // namespace stcut
