#pragma once

#include <span>
#include <vector>

#include "stcut/instance.hpp"

namespace stcut {

inline constexpr double kTriangleTolerance = 1e-8;

// Symmetric nonnegative distance matrix with zero diagonal that satisfies the
// triangle inequality up to `tolerance`.
class SemiMetric {
 public:
  explicit SemiMetric(Matrix d, double tolerance = kTriangleTolerance);

  int size() const noexcept { return static_cast<int>(d_.rows()); }
  double operator()(Vertex u, Vertex v) const { return d_(u, v); }
  const Matrix& matrix() const noexcept { return d_; }
  // Largest triangle violation max(d(u,v) - d(u,w) - d(w,v), 0).
  double max_triangle_violation() const;

 private:
  Matrix d_;
};

// Shortest-path metric of the positive-capacity graph with unit edge lengths
// replaced by 1/capacity (or unit lengths when `unit` is set).
SemiMetric path_metric(const Matrix& cap, bool unit = true);

// Real-valued map V -> R^m; one row per vertex.
class EmbeddingMap {
 public:
  explicit EmbeddingMap(Matrix f);
  static EmbeddingMap from_values(std::span<const double> values);

  int num_vertices() const noexcept { return static_cast<int>(f_.rows()); }
  int dimension() const noexcept { return static_cast<int>(f_.cols()); }
  double operator()(Vertex v, int k) const { return f_(v, k); }
  const Matrix& matrix() const noexcept { return f_; }
  // ||f(u) - f(v)||_1
  double l1(Vertex u, Vertex v) const { return (f_.row(u) - f_.row(v)).lpNorm<1>(); }
  // Every coordinate satisfies f(s) <= f(v) <= f(t) + tol.
  bool is_st_sandwiching(Vertex s, Vertex t, double tol = kDefaultTolerance) const;

 private:
  Matrix f_;
};

bool check_st_separating(const SemiMetric& d, Vertex s, Vertex t, double tol = kDefaultTolerance);

// Checks that s,t attain the diameter. Throws kViolatedProperty when an
// st-separating metric does not, which signals a broken validator.
bool diameter_attained(const SemiMetric& d, Vertex s, Vertex t, double tol = kDefaultTolerance);

double dist_to_set(const SemiMetric& d, Vertex v, std::span<const Vertex> set);

// Columns (f_A^+, f_A^-) with f_A^sigma(v) = (d(v,s) + sigma d(v,A)) / 2.
EmbeddingMap frechet_pm(const SemiMetric& d, std::span<const Vertex> set, Vertex s, Vertex t,
                        double tol = kDefaultTolerance);

// sum cap ||f(u)-f(v)||_1 / sum dem ||f(u)-f(v)||_1 over ordered pairs.
Sparsity l1_ratio(const Instance& inst, const EmbeddingMap& f);
Sparsity coordinate_ratio(const Instance& inst, const EmbeddingMap& f, int k);

struct SweepResult {
  Cut cut;
  Sparsity value;
  int coordinate = 0;
};

// Picks the coordinate with the best single-coordinate ratio, sorts vertices
// by it (ties by index) and returns the sparsest prefix. Thresholds are only
// placed between strictly increasing values; among equally sparse prefixes
// the shorter one wins.
SweepResult sweep_round(const Instance& inst, const EmbeddingMap& f);

// Sweep for maps that are st-sandwiching up to solver noise: every coordinate
// is clamped into [f(s), f(t)] first, so the result always separates s and t.
// Throws kNotStSeparating if some coordinate violates sandwiching by more
// than `tol`.
SweepResult sweep_round_st(const Instance& inst, const EmbeddingMap& f, double tol = 1e-6);

}  // namespace stcut
