#include "stcut/dnc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>

#include "stcut/metrics.hpp"
#include "stcut/relax_lp.hpp"
#include "stcut/rng.hpp"

namespace stcut {

namespace {

class Dinic {
 public:
  Dinic(const Matrix& cap, double eps) : n_(static_cast<int>(cap.rows())), eps_(eps), adj_(n_) {
    for (int u = 0; u < n_; ++u) {
      for (int v = u + 1; v < n_; ++v) {
        const double c = cap(u, v);
        if (c <= 0.0) continue;
        adj_[u].push_back(static_cast<int>(arcs_.size()));
        arcs_.push_back({v, c});
        adj_[v].push_back(static_cast<int>(arcs_.size()));
        arcs_.push_back({u, c});
      }
    }
  }

  double run(int s, int t) {
    double total = 0.0;
    while (levels(s, t)) {
      next_.assign(n_, 0);
      while (true) {
        const double pushed = augment(s, t, std::numeric_limits<double>::infinity());
        if (pushed <= eps_) break;
        total += pushed;
      }
    }
    return total;
  }

  std::vector<bool> reachable(int s) const {
    std::vector<bool> seen(n_, false);
    std::vector<int> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int a : adj_[u]) {
        const int v = arcs_[a].to;
        if (!seen[v] && arcs_[a].residual > eps_) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    return seen;
  }

 private:
  struct Arc {
    int to;
    double residual;
  };

  bool levels(int s, int t) {
    level_.assign(n_, -1);
    level_[s] = 0;
    std::queue<int> queue;
    queue.push(s);
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      for (int a : adj_[u]) {
        const int v = arcs_[a].to;
        if (level_[v] < 0 && arcs_[a].residual > eps_) {
          level_[v] = level_[u] + 1;
          queue.push(v);
        }
      }
    }
    return level_[t] >= 0;
  }

  double augment(int u, int t, double limit) {
    if (u == t) return limit;
    for (int& i = next_[u]; i < static_cast<int>(adj_[u].size()); ++i) {
      const int a = adj_[u][i];
      Arc& arc = arcs_[a];
      if (arc.residual <= eps_ || level_[arc.to] != level_[u] + 1) continue;
      const double pushed = augment(arc.to, t, std::min(limit, arc.residual));
      if (pushed > eps_) {
        arc.residual -= pushed;
        arcs_[a ^ 1].residual += pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  int n_;
  double eps_;
  std::vector<std::vector<int>> adj_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<int> next_;
};

double side_weight(const std::vector<bool>& mask, std::span<const double> weight, bool in) {
  double total = 0.0;
  for (std::size_t v = 0; v < mask.size(); ++v) {
    if (mask[v] == in) total += weight[v];
  }
  return total;
}

void check_weights(const Matrix& cap, std::span<const double> weight) {
  if (cap.rows() != cap.cols() || static_cast<Eigen::Index>(weight.size()) != cap.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "capacity and weight sizes differ");
  }
}

constexpr double kTieTolerance = 1e-12;

bool better(double candidate, const std::vector<Vertex>& members, const std::optional<CutValue>& best) {
  if (!best) return true;
  const double incumbent = best->value.value_or(std::numeric_limits<double>::infinity());
  if (std::isinf(candidate) || std::isinf(incumbent)) {
    if (candidate != incumbent) return candidate < incumbent;
    return lex_less(members, best->cut.members());
  }
  const double slack = kTieTolerance * std::max(1.0, std::abs(incumbent));
  if (candidate < incumbent - slack) return true;
  if (candidate > incumbent + slack) return false;
  return lex_less(members, best->cut.members());
}

// Subsets of `free` joined with `fixed`; proper cuts only.
CutValue enumerate_size(const Matrix& cap, std::span<const double> weight, Vertex fixed,
                        const std::vector<Vertex>& free) {
  const int n = static_cast<int>(cap.rows());
  std::optional<CutValue> best;
  const std::uint64_t count = std::uint64_t{1} << free.size();
  std::vector<bool> mask(static_cast<std::size_t>(n));
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    std::fill(mask.begin(), mask.end(), false);
    mask[fixed] = true;
    int members = 1;
    for (std::size_t i = 0; i < free.size(); ++i) {
      if (bits >> i & 1U) {
        mask[free[i]] = true;
        ++members;
      }
    }
    if (members == n) continue;
    Cut cut = Cut::from_mask(mask);
    const double value = weighted_size_sparsity(cap, cut, weight).value_or(std::numeric_limits<double>::infinity());
    if (better(value, cut.members(), best)) {
      best = CutValue{cut, std::isinf(value) ? Sparsity::infinite() : Sparsity::finite(value)};
    }
  }
  if (!best) throw Error(ErrorCode::kInvalidArgument, "no proper cut to enumerate");
  return *best;
}

void check_size(const Matrix& cap, int max_vertices) {
  if (cap.rows() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two vertices");
  if (cap.rows() > max_vertices) throw Error(ErrorCode::kTooLarge, "graph exceeds the exhaustive oracle size cap");
}

Matrix restrict(const Matrix& cap, const std::vector<Vertex>& vertices) {
  const auto k = static_cast<Eigen::Index>(vertices.size());
  Matrix sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = cap(vertices[i], vertices[j]);
  }
  return sub;
}

}  // namespace

FlowCut min_st_cut(const Matrix& cap, Vertex s, Vertex t) {
  const int n = static_cast<int>(cap.rows());
  if (cap.cols() != n) throw Error(ErrorCode::kInvalidArgument, "capacity matrix is not square");
  if (s < 0 || t < 0 || s >= n || t >= n || s == t) throw Error(ErrorCode::kInvalidArgument, "bad terminals");
  const double scale = cap.cwiseAbs().maxCoeff();
  Dinic dinic(cap, 1e-12 * std::max(scale, 1e-300));
  const double flow = dinic.run(s, t);
  std::vector<bool> side = dinic.reachable(s);
  return FlowCut{Cut::from_mask(side), flow, flow <= 0.0};
}

double size_sparsity(const Matrix& cap, const Cut& cut) {
  const std::vector<double> ones(static_cast<std::size_t>(cap.rows()), 1.0);
  return weighted_size_sparsity(cap, cut, ones).value();
}

Sparsity weighted_size_sparsity(const Matrix& cap, const Cut& cut, std::span<const double> weight) {
  check_weights(cap, weight);
  const double smaller = std::min(side_weight(cut.mask(), weight, true), side_weight(cut.mask(), weight, false));
  if (smaller <= 0.0) return Sparsity::infinite();
  return Sparsity::finite(cut_capacity(cap, cut) / smaller);
}

CutValue exact_size_opt(const Matrix& cap, std::span<const double> weight, int max_vertices) {
  check_weights(cap, weight);
  check_size(cap, max_vertices);
  std::vector<Vertex> free;
  for (Vertex v = 1; v < cap.rows(); ++v) free.push_back(v);
  return enumerate_size(cap, weight, 0, free);
}

CutValue exact_st_size_opt(const Matrix& cap, std::span<const double> weight, Vertex s, Vertex t,
                           int max_vertices) {
  check_weights(cap, weight);
  check_size(cap, max_vertices);
  const int n = static_cast<int>(cap.rows());
  if (s < 0 || t < 0 || s >= n || t >= n || s == t) throw Error(ErrorCode::kInvalidArgument, "bad terminals");
  std::vector<Vertex> free;
  for (Vertex v = 0; v < n; ++v) {
    if (v != s && v != t) free.push_back(v);
  }
  return enumerate_size(cap, weight, s, free);
}

const char* step_tag_name(StepTag tag) {
  switch (tag) {
    case StepTag::kS0:
      return "S0";
    case StepTag::kSStep:
      return "S";
    case StepTag::kTStep:
      return "T";
  }
  return "?";
}

std::vector<Vertex> exact_oracle(const Matrix& cap, std::span<const double> weight, std::uint64_t) {
  return exact_size_opt(cap, weight).cut.members();
}

std::vector<Vertex> lp_oracle(const Matrix& cap, std::span<const double> weight, std::uint64_t seed) {
  check_weights(cap, weight);
  const int k = static_cast<int>(cap.rows());
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two vertices");
  if (k == 2 || cap.sum() <= 0.0) return {0};
  double total = 0.0;
  for (double w : weight) total += w;
  std::vector<double> mu(weight.begin(), weight.end());
  for (double& m : mu) m = total > 0.0 ? m / total : 1.0 / k;
  const Instance sub = normalize(Instance::create(0, 1, cap, ProductDemand{mu}));
  const LpSolution lp = solve_lp(build_lp(sub, false));
  const auto sets = bourgain_sets(k, seed);
  Matrix f(k, static_cast<Eigen::Index>(sets.size()));
  for (std::size_t j = 0; j < sets.size(); ++j) {
    for (Vertex v = 0; v < k; ++v) f(v, static_cast<Eigen::Index>(j)) = dist_to_set(lp.d, v, sets[j]);
  }
  return sweep_round(sub, EmbeddingMap(std::move(f))).cut.members();
}

DncResult divide_and_conquer(const Instance& inst, std::uint64_t seed, const DncOptions& options) {
  const int n = inst.num_vertices();
  if (n > kDncMaxVertices) throw Error(ErrorCode::kSizeCeiling, "divide and conquer supports at most 20 vertices");
  const Matrix cap = inst.raw_capacity();
  std::vector<double> weight(static_cast<std::size_t>(n), 1.0);
  if (options.use_mass) weight = inst.mu();

  DncResult result{Cut(n, {inst.s()}), 0.0, {}, 0.0, false, 0, true};
  auto weigh = [&](const std::vector<bool>& mask, bool in) { return side_weight(mask, weight, in); };
  auto value_of = [&](const Cut& cut) {
    return weighted_size_sparsity(cap, cut, weight).value_or(std::numeric_limits<double>::infinity());
  };
  auto record = [&](const std::vector<bool>& mask, StepTag tag) {
    Cut cut = Cut::from_mask(mask).side_of(inst.s());
    const double value = value_of(cut);
    result.recorded.push_back(RecordedCut{std::move(cut), tag, value});
  };

  const FlowCut flow = min_st_cut(cap, inst.s(), inst.t());
  result.flow = flow.flow;
  Vertex s = inst.s();
  Vertex t = inst.t();
  std::vector<bool> in_s = flow.cut.mask();
  const double ws = weigh(in_s, true);
  const double wt = weigh(in_s, false);
  if (wt < ws - kTieTolerance * std::max(1.0, ws)) {
    std::swap(s, t);
    in_s.flip();
    result.swapped = true;
  }
  record(in_s, StepTag::kS0);

  std::vector<Vertex> rest;
  for (Vertex v = 0; v < n; ++v) {
    if (!in_s[v]) rest.push_back(v);
  }
  std::uint64_t call = 0;
  while (rest.size() >= 2) {
    const Matrix sub = restrict(cap, rest);
    std::vector<double> sub_weight;
    for (Vertex v : rest) sub_weight.push_back(weight[v]);
    const std::uint64_t sub_seed = derive_seed(seed, ++call);
    std::vector<Vertex> local;
    if (options.oracle) {
      local = options.oracle(sub, sub_weight, sub_seed);
      result.rho_verified = false;
    } else if (static_cast<int>(rest.size()) <= kExactOracleMax) {
      local = exact_oracle(sub, sub_weight, sub_seed);
    } else {
      local = lp_oracle(sub, sub_weight, sub_seed);
      result.rho_verified = false;
    }

    std::vector<bool> in_c(rest.size(), false);
    for (Vertex i : local) {
      if (i < 0 || i >= static_cast<Vertex>(rest.size())) {
        throw Error(ErrorCode::kInvalidArgument, "oracle returned an out-of-range vertex");
      }
      in_c[i] = true;
    }
    const auto picked = static_cast<std::size_t>(std::count(in_c.begin(), in_c.end(), true));
    if (picked == 0 || picked == rest.size()) throw Error(ErrorCode::kInvalidArgument, "oracle returned no proper cut");

    // Smaller side; ties go to the side without t, then to the lexicographically smaller side.
    std::vector<Vertex> side_a;
    std::vector<Vertex> side_b;
    double wa = 0.0;
    double wb = 0.0;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      (in_c[i] ? side_a : side_b).push_back(rest[i]);
      (in_c[i] ? wa : wb) += weight[rest[i]];
    }
    const double slack = kTieTolerance * std::max(1.0, std::max(wa, wb));
    bool take_a;
    if (wa < wb - slack) {
      take_a = true;
    } else if (wb < wa - slack) {
      take_a = false;
    } else {
      const bool t_in_a = std::find(side_a.begin(), side_a.end(), t) != side_a.end();
      const bool t_in_b = std::find(side_b.begin(), side_b.end(), t) != side_b.end();
      if (t_in_a != t_in_b) {
        take_a = t_in_b;
      } else {
        take_a = lex_less(side_a, side_b);
      }
    }
    const std::vector<Vertex>& c = take_a ? side_a : side_b;

    const bool holds_t = std::find(c.begin(), c.end(), t) != c.end();
    if (!holds_t) {
      for (Vertex v : c) in_s[v] = true;
      record(in_s, StepTag::kSStep);
    } else {
      std::vector<bool> in_t(static_cast<std::size_t>(n), false);
      for (Vertex v : c) in_t[v] = true;
      record(in_t, StepTag::kTStep);
      ++result.t_steps;
    }
    std::vector<Vertex> next;
    for (Vertex v : rest) {
      if (std::find(c.begin(), c.end(), v) == c.end()) next.push_back(v);
    }
    rest = std::move(next);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.recorded.size(); ++i) {
    if (result.recorded[i].value < result.recorded[best].value) best = i;
  }
  result.cut = result.recorded[best].cut;
  result.value = result.recorded[best].value;
  return result;
}

}  // namespace stcut
