#include "stcut/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace stcut {

SemiMetric::SemiMetric(Matrix d, double tolerance) : d_(std::move(d)) {
  const auto n = d_.rows();
  if (d_.cols() != n || n < 1) throw Error(ErrorCode::kInvalidArgument, "metric must be square");
  for (Eigen::Index u = 0; u < n; ++u) {
    if (d_(u, u) != 0.0) throw Error(ErrorCode::kInvalidArgument, "metric must have zero diagonal");
    for (Eigen::Index v = 0; v < n; ++v) {
      if (!std::isfinite(d_(u, v)) || d_(u, v) < 0.0) {
        throw Error(ErrorCode::kInvalidArgument, "metric entries must be finite and >= 0");
      }
      if (d_(u, v) != d_(v, u)) throw Error(ErrorCode::kInvalidArgument, "metric must be symmetric");
    }
  }
  const double violation = max_triangle_violation();
  if (violation > tolerance) {
    std::ostringstream msg;
    msg << "triangle inequality violated by " << violation;
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
}

double SemiMetric::max_triangle_violation() const {
  const auto n = d_.rows();
  double worst = 0.0;
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index v = u + 1; v < n; ++v) {
      for (Eigen::Index w = 0; w < n; ++w) {
        worst = std::max(worst, d_(u, v) - d_(u, w) - d_(w, v));
      }
    }
  }
  return worst;
}

SemiMetric path_metric(const Matrix& cap, bool unit) {
  const auto n = cap.rows();
  const double inf = std::numeric_limits<double>::infinity();
  Matrix d = Matrix::Constant(n, n, inf);
  for (Eigen::Index u = 0; u < n; ++u) {
    d(u, u) = 0.0;
    for (Eigen::Index v = 0; v < n; ++v) {
      if (u != v && cap(u, v) > 0.0) d(u, v) = unit ? 1.0 : 1.0 / cap(u, v);
    }
  }
  for (Eigen::Index w = 0; w < n; ++w) {
    for (Eigen::Index u = 0; u < n; ++u) {
      for (Eigen::Index v = 0; v < n; ++v) d(u, v) = std::min(d(u, v), d(u, w) + d(w, v));
    }
  }
  if (!d.allFinite()) throw Error(ErrorCode::kDisconnected, "graph is disconnected");
  return SemiMetric(d);
}

// ---------------------------------------------------------------------------

EmbeddingMap::EmbeddingMap(Matrix f) : f_(std::move(f)) {
  if (!f_.allFinite()) throw Error(ErrorCode::kInvalidArgument, "embedding entries must be finite");
}

EmbeddingMap EmbeddingMap::from_values(std::span<const double> values) {
  Matrix f(static_cast<Eigen::Index>(values.size()), 1);
  for (std::size_t v = 0; v < values.size(); ++v) f(static_cast<Eigen::Index>(v), 0) = values[v];
  return EmbeddingMap(std::move(f));
}

bool EmbeddingMap::is_st_sandwiching(Vertex s, Vertex t, double tol) const {
  for (Eigen::Index k = 0; k < f_.cols(); ++k) {
    for (Eigen::Index v = 0; v < f_.rows(); ++v) {
      if (f_(v, k) < f_(s, k) - tol || f_(v, k) > f_(t, k) + tol) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

bool check_st_separating(const SemiMetric& d, Vertex s, Vertex t, double tol) {
  for (Vertex v = 0; v < d.size(); ++v) {
    if (std::abs(d(s, t) - d(s, v) - d(v, t)) > tol) return false;
  }
  return true;
}

bool diameter_attained(const SemiMetric& d, Vertex s, Vertex t, double tol) {
  const double diameter = d.matrix().maxCoeff();
  if (diameter > d(s, t) + tol) {
    if (check_st_separating(d, s, t, tol)) {
      throw Error(ErrorCode::kViolatedProperty, "st-separating metric whose terminals miss the diameter");
    }
    return false;
  }
  return true;
}

double dist_to_set(const SemiMetric& d, Vertex v, std::span<const Vertex> set) {
  if (set.empty()) throw Error(ErrorCode::kEmptySet, "distance to an empty set");
  double best = std::numeric_limits<double>::infinity();
  for (Vertex a : set) best = std::min(best, d(v, a));
  return best;
}

EmbeddingMap frechet_pm(const SemiMetric& d, std::span<const Vertex> set, Vertex s, Vertex t,
                        double tol) {
  if (set.empty()) throw Error(ErrorCode::kEmptySet, "Frechet map needs a nonempty set");
  if (!check_st_separating(d, s, t, tol)) {
    throw Error(ErrorCode::kNotStSeparating, "metric is not st-separating");
  }
  const int n = d.size();
  Matrix f(n, 2);
  for (Vertex v = 0; v < n; ++v) {
    const double to_set = dist_to_set(d, v, set);
    f(v, 0) = 0.5 * (d(v, s) + to_set);
    f(v, 1) = 0.5 * (d(v, s) - to_set);
  }
  return EmbeddingMap(std::move(f));
}

// ---------------------------------------------------------------------------

namespace {

struct RatioParts {
  double numerator = 0.0;
  double denominator = 0.0;
};

RatioParts coordinate_parts(const Instance& inst, const Matrix& f, Eigen::Index k) {
  RatioParts parts;
  const int n = inst.num_vertices();
  const Matrix& cap = inst.capacity();
  const Matrix& dem = inst.demand_matrix();
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      const double gap = std::abs(f(u, k) - f(v, k));
      parts.numerator += cap(u, v) * gap;
      parts.denominator += dem(u, v) * gap;
    }
  }
  return parts;
}

void check_map(const Instance& inst, const EmbeddingMap& f) {
  if (!inst.normalized()) throw Error(ErrorCode::kInvalidArgument, "instance must be normalized");
  if (f.num_vertices() != inst.num_vertices()) {
    throw Error(ErrorCode::kInvalidArgument, "embedding and instance sizes differ");
  }
}

bool constant_column(const Matrix& f, Eigen::Index k) {
  return (f.col(k).array() == f(0, k)).all();
}

SweepResult sweep_matrix(const Instance& inst, const Matrix& f) {
  const int n = inst.num_vertices();
  Eigen::Index chosen = -1;
  double best_ratio = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < f.cols(); ++k) {
    const RatioParts parts = coordinate_parts(inst, f, k);
    if (parts.denominator <= 0.0) continue;
    const double ratio = parts.numerator / parts.denominator;
    if (ratio < best_ratio) {
      best_ratio = ratio;
      chosen = k;
    }
  }
  if (chosen < 0) {
    for (Eigen::Index k = 0; k < f.cols() && chosen < 0; ++k) {
      if (!constant_column(f, k)) chosen = k;
    }
  }
  if (chosen < 0) throw Error(ErrorCode::kDegenerateMap, "all rows of the map are identical");

  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex a, Vertex b) { return f(a, chosen) < f(b, chosen); });

  std::optional<SweepResult> best;
  std::vector<bool> mask(n, false);
  for (int i = 0; i + 1 < n; ++i) {
    mask[order[i]] = true;
    if (f(order[i], chosen) == f(order[i + 1], chosen)) continue;
    Cut cut = Cut::from_mask(mask);
    const Sparsity value = sparsity(inst, cut);
    bool take = !best;
    if (best) {
      if (value.is_finite() && best->value.is_finite()) {
        const double b = best->value.value();
        take = value.value() < b - 1e-12 * std::max(1.0, b);
      } else {
        take = value < best->value;
      }
    }
    if (take) best = SweepResult{std::move(cut), value, static_cast<int>(chosen)};
  }
  return *best;
}

}  // namespace

Sparsity l1_ratio(const Instance& inst, const EmbeddingMap& f) {
  check_map(inst, f);
  RatioParts total;
  for (Eigen::Index k = 0; k < f.matrix().cols(); ++k) {
    const RatioParts parts = coordinate_parts(inst, f.matrix(), k);
    total.numerator += parts.numerator;
    total.denominator += parts.denominator;
  }
  if (total.denominator <= 0.0) return Sparsity::infinite();
  return Sparsity::finite(total.numerator / total.denominator);
}

Sparsity coordinate_ratio(const Instance& inst, const EmbeddingMap& f, int k) {
  check_map(inst, f);
  const RatioParts parts = coordinate_parts(inst, f.matrix(), k);
  if (parts.denominator <= 0.0) return Sparsity::infinite();
  return Sparsity::finite(parts.numerator / parts.denominator);
}

SweepResult sweep_round(const Instance& inst, const EmbeddingMap& f) {
  check_map(inst, f);
  return sweep_matrix(inst, f.matrix());
}

SweepResult sweep_round_st(const Instance& inst, const EmbeddingMap& f, double tol) {
  check_map(inst, f);
  const Vertex s = inst.s();
  const Vertex t = inst.t();
  Matrix clamped = f.matrix();
  for (Eigen::Index k = 0; k < clamped.cols(); ++k) {
    const double lo = clamped(s, k);
    const double hi = clamped(t, k);
    if (hi < lo - tol) throw Error(ErrorCode::kNotStSeparating, "map has f(t) < f(s)");
    for (Eigen::Index v = 0; v < clamped.rows(); ++v) {
      double& x = clamped(v, k);
      if (x < lo - tol || x > std::max(lo, hi) + tol) {
        throw Error(ErrorCode::kNotStSeparating, "map is not st-sandwiching");
      }
      x = std::clamp(x, lo, std::max(lo, hi));
    }
  }
  SweepResult result = sweep_matrix(inst, clamped);
  if (!is_st_separating(inst, result.cut)) {
    throw Error(ErrorCode::kNotStSeparating, "sweep over a sandwiching map missed s,t");
  }
  return result;
}

}  // namespace stcut
