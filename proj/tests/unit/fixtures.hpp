#pragma once

#include <random>

#include "stcut/instance.hpp"
#include "stcut/metrics.hpp"

namespace fixtures {

using stcut::Instance;
using stcut::Matrix;

inline Matrix edges(int n, std::initializer_list<std::tuple<int, int, double>> list) {
  Matrix cap = Matrix::Zero(n, n);
  for (auto [u, v, w] : list) cap(u, v) = cap(v, u) = w;
  return cap;
}

inline Instance uniform(int n, Matrix cap, int s, int t) {
  return Instance::create(s, t, std::move(cap), stcut::ProductDemand{std::vector<double>(n, 1.0 / n)});
}

// s = 0, t = 1, one edge of weight 5
inline Instance k2() {
  return Instance::create(0, 1, edges(2, {{0, 1, 5.0}}), stcut::ProductDemand{{0.5, 0.5}});
}

// s - a - t as 0 - 1 - 2
inline Instance path3() { return uniform(3, edges(3, {{0, 1, 1.0}, {1, 2, 1.0}}), 0, 2); }

// s - a - t - b - s as 0 - 1 - 2 - 3 - 0
inline Instance c4() {
  return uniform(4, edges(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}}), 0, 2);
}

inline stcut::SemiMetric path3_metric() {
  Matrix d(3, 3);
  d << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  return stcut::SemiMetric(d);
}

// Sum of a few line metrics, each with s at the minimum and t at the maximum.
inline stcut::SemiMetric random_st_metric(int n, int s, int t, std::mt19937_64& gen, int lines = 3) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix d = Matrix::Zero(n, n);
  for (int k = 0; k < lines; ++k) {
    std::vector<double> y(n);
    for (double& v : y) v = unit(gen);
    y[s] = 0.0;
    y[t] = 1.0;
    const double w = unit(gen) + 0.1;
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) d(u, v) += w * std::abs(y[u] - y[v]);
    }
  }
  return stcut::SemiMetric(d);
}

inline stcut::Instance random_instance(int n, std::uint64_t seed, bool grid = false) {
  stcut::GenOptions o;
  o.n = n;
  o.seed = seed;
  if (grid) o.model = stcut::GridModel{3};
  return stcut::normalize(stcut::gen_random(o));
}

}  // namespace fixtures
