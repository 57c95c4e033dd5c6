#include "stcut/relax_lp.hpp"

#include <algorithm>
#include <cmath>

#include "stcut/rng.hpp"

namespace stcut {

int LpModel::pair_index(Vertex u, Vertex v) const {
  if (u == v) throw Error(ErrorCode::kInvalidArgument, "no variable for a diagonal pair");
  if (u > v) std::swap(u, v);
  // Pairs (0,1),(0,2),...,(0,n-1),(1,2),...
  return u * n - u * (u + 1) / 2 + (v - u - 1);
}

LpModel build_lp(const Instance& inst, bool st_constraints) {
  if (!inst.normalized()) throw Error(ErrorCode::kInvalidArgument, "LP needs a normalized instance");
  LpModel model;
  model.n = inst.num_vertices();
  model.s = inst.s();
  model.t = inst.t();
  model.st_constraints = st_constraints;
  const int n = model.n;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) model.pairs.emplace_back(u, v);
  }
  const int vars = static_cast<int>(model.pairs.size());
  LinearProgram& lp = model.program;
  lp.num_vars = vars;
  lp.objective = Vector::Zero(vars);

  // Ordered-pair sums count each unordered pair twice.
  LinearProgram::Row demand_row;
  demand_row.sense = RowSense::kEqual;
  demand_row.rhs = 1.0;
  for (int e = 0; e < vars; ++e) {
    const auto [u, v] = model.pairs[e];
    lp.objective(e) = 2.0 * inst.capacity()(u, v);
    const double dem = 2.0 * inst.demand_matrix()(u, v);
    if (dem != 0.0) demand_row.coeffs.emplace_back(e, dem);
  }
  lp.rows.push_back(std::move(demand_row));
  model.num_demand_rows = 1;

  const Vertex s = model.s;
  const Vertex t = model.t;
  if (st_constraints) {
    for (Vertex v = 0; v < n; ++v) {
      if (v == s || v == t) continue;
      LinearProgram::Row row;
      row.sense = RowSense::kEqual;
      row.coeffs = {{model.pair_index(s, t), 1.0}, {model.pair_index(s, v), -1.0},
                    {model.pair_index(v, t), -1.0}};
      lp.rows.push_back(std::move(row));
      ++model.num_st_rows;
    }
  }

  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) {
      for (Vertex c = b + 1; c < n; ++c) {
        const Vertex triple[3] = {a, b, c};
        for (int middle = 0; middle < 3; ++middle) {
          const Vertex w = triple[middle];
          const Vertex u = triple[(middle + 1) % 3];
          const Vertex v = triple[(middle + 2) % 3];
          LinearProgram::Row row;
          row.sense = RowSense::kLessEqual;
          row.coeffs = {{model.pair_index(u, v), 1.0}, {model.pair_index(u, w), -1.0},
                        {model.pair_index(w, v), -1.0}};
          lp.rows.push_back(std::move(row));
          ++model.num_triangle_rows;
        }
      }
    }
  }
  return model;
}

LpSolution solve_lp(const LpModel& model, const LpOptions& options) {
  SimplexOptions simplex;
  simplex.max_iterations = options.max_iterations;
  const SimplexResult result = solve_simplex(model.program, simplex);
  if (result.max_violation > options.tolerance) {
    throw Error(ErrorCode::kNumericalFailure, "LP solution violates constraints beyond tolerance");
  }
  const int n = model.n;
  Matrix d = Matrix::Zero(n, n);
  for (std::size_t e = 0; e < model.pairs.size(); ++e) {
    const auto [u, v] = model.pairs[e];
    d(u, v) = d(v, u) = result.x(static_cast<Eigen::Index>(e));
  }
  LpSolution solution{SemiMetric(std::move(d), options.tolerance), result.objective,
                      result.max_violation, result.iterations};
  if (model.st_constraints && !check_st_separating(solution.d, model.s, model.t, options.tolerance)) {
    throw Error(ErrorCode::kNumericalFailure, "LP solution is not st-separating");
  }
  return solution;
}

int ceil_log2(int n) {
  int k = 0;
  while ((1 << k) < n) ++k;
  return k;
}

std::vector<std::vector<Vertex>> bourgain_sets(int n, std::uint64_t seed, int L) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "Bourgain sets need n >= 2");
  if (L < 1) throw Error(ErrorCode::kInvalidArgument, "Bourgain L must be positive");
  constexpr int kRedrawBudget = 100;
  const int scales = ceil_log2(n);
  Rng rng(derive_seed(seed, 0x626f7572));
  std::vector<std::vector<Vertex>> sets;
  sets.reserve(static_cast<std::size_t>(L) * scales * scales);
  for (int j = 1; j <= scales; ++j) {
    const double keep = std::ldexp(1.0, -j);
    for (int r = 0; r < L * scales; ++r) {
      std::vector<Vertex> set;
      for (int attempt = 0; attempt < kRedrawBudget && set.empty(); ++attempt) {
        for (Vertex v = 0; v < n; ++v) {
          if (rng.bernoulli(keep)) set.push_back(v);
        }
      }
      if (set.empty()) set.push_back(static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n))));
      sets.push_back(std::move(set));
    }
  }
  return sets;
}

EmbeddingMap assemble_g(const SemiMetric& d, const std::vector<std::vector<Vertex>>& sets, Vertex s,
                        Vertex t, double tol) {
  if (sets.empty()) throw Error(ErrorCode::kEmptySet, "no Frechet sets");
  const int n = d.size();
  const auto p = static_cast<Eigen::Index>(sets.size());
  Matrix g(n, 2 * p);
  for (Eigen::Index q = 0; q < p; ++q) {
    const EmbeddingMap f = frechet_pm(d, sets[q], s, t, tol);
    g.middleCols(2 * q, 2) = f.matrix();
  }
  g /= 2.0 * static_cast<double>(p);
  return EmbeddingMap(std::move(g));
}

LpPipelineResult lp_pipeline(const Instance& inst, std::uint64_t seed, const LpPipelineOptions& options) {
  if (!inst.normalized()) throw Error(ErrorCode::kInvalidArgument, "LP pipeline needs a normalized instance");
  if (inst.num_vertices() > kLpMaxVertices) {
    throw Error(ErrorCode::kSizeCeiling, "LP pipeline supports at most 20 vertices");
  }
  const LpModel model = build_lp(inst);
  const LpSolution lp = solve_lp(model, options.lp);
  const auto sets = bourgain_sets(inst.num_vertices(), seed, options.bourgain_L);
  const EmbeddingMap g = assemble_g(lp.d, sets, inst.s(), inst.t(), options.lp.tolerance);

  LpDiagnostics diagnostics;
  diagnostics.lp_value = lp.objective;
  diagnostics.l1_ratio = l1_ratio(inst, g);
  diagnostics.num_sets = static_cast<int>(sets.size());
  diagnostics.simplex_iterations = lp.iterations;
  double embedded = 0.0;
  double metric = 0.0;
  const Matrix& dem = inst.demand_matrix();
  for (Vertex u = 0; u < inst.num_vertices(); ++u) {
    for (Vertex v = 0; v < inst.num_vertices(); ++v) {
      embedded += dem(u, v) * g.l1(u, v);
      metric += dem(u, v) * lp.d(u, v);
    }
  }
  diagnostics.demand_retention = metric > 0.0 ? embedded / metric : 0.0;

  SweepResult sweep = sweep_round_st(inst, g);
  return LpPipelineResult{std::move(sweep.cut), sweep.value, diagnostics};
}

}  // namespace stcut
