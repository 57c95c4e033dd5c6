#include <doctest.h>

#include <numbers>

#include "fixtures.hpp"
#include "stcut/relax_lp.hpp"
#include "stcut/relax_sdp.hpp"

using namespace stcut;
using fixtures::c4;
using fixtures::k2;
using fixtures::path3;

namespace {

double eval(const GramFunctional& f, const Vector& h) {
  double value = f.constant;
  for (const auto& [k, c] : f.terms) value += c * h(k);
  return value;
}

Vector packed_gram(const SdpModel& model, const Vector& x) {
  Vector h(model.num_variables());
  for (int i = 0; i < model.dim; ++i) {
    for (int j = i; j < model.dim; ++j) h(model.packed(i, j)) = x(model.vertex_of[i]) * x(model.vertex_of[j]);
  }
  return h;
}

double mu_sparsity(const Instance& inst, const Cut& cut) {
  double cap = 0.0;
  double dem = 0.0;
  for (Vertex u = 0; u < inst.num_vertices(); ++u) {
    for (Vertex v = 0; v < inst.num_vertices(); ++v) {
      if (cut.contains(u) == cut.contains(v)) continue;
      cap += inst.capacity()(u, v);
      dem += inst.mu()[u] * inst.mu()[v];
    }
  }
  return cap / dem;
}

SemiMetric squared_line(const std::vector<double>& y) {
  const int n = static_cast<int>(y.size());
  Matrix d(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) d(u, v) = (y[u] - y[v]) * (y[u] - y[v]);
  }
  return SemiMetric(d, 1e300);
}

Frame frame_from(std::vector<double> y, std::vector<std::vector<double>> z, double T) {
  Frame f;
  const int n = static_cast<int>(y.size());
  const int m = z.empty() ? 0 : static_cast<int>(z[0].size());
  f.y = Eigen::Map<Vector>(y.data(), n);
  f.z = Matrix::Zero(n, m);
  for (int v = 0; v < n; ++v) {
    for (int k = 0; k < m; ++k) f.z(v, k) = z[v][k];
  }
  f.T = T;
  return f;
}

double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// E|a + b N(0,1)|
double abs_moment(double a, double b) {
  if (b == 0.0) return std::abs(a);
  return b * std::sqrt(2.0 / std::numbers::pi) * std::exp(-a * a / (2 * b * b)) + a * (1.0 - 2.0 * phi(-a / b));
}

}  // namespace

TEST_CASE("st-cut indicators are feasible with objective equal to their mu-sparsity") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Instance inst = fixtures::random_instance(6, seed, seed % 2 == 1);
    const SdpModel model = build_sdp(inst);
    for (unsigned mask = 0; mask < (1U << 6); ++mask) {
      if (!((mask >> inst.s()) & 1U) || ((mask >> inst.t()) & 1U)) continue;
      std::vector<bool> side(6);
      for (int v = 0; v < 6; ++v) side[v] = (mask >> v) & 1U;
      const Cut cut = Cut::from_mask(side);
      double separated = 0.0;
      for (Vertex u = 0; u < 6; ++u) {
        for (Vertex v = 0; v < 6; ++v) {
          if (side[u] != side[v]) separated += inst.mu()[u] * inst.mu()[v];
        }
      }
      Vector x(6);
      for (int v = 0; v < 6; ++v) x(v) = side[v] ? 0.0 : 1.0 / std::sqrt(separated);
      const Vector h = packed_gram(model, x);
      for (const auto& row : model.equalities) CHECK(std::abs(eval(row, h)) <= 1e-12);
      for (const auto& row : model.inequalities) CHECK(eval(row, h) >= -1e-12);
      double objective = 0.0;
      for (int k = 0; k < model.num_variables(); ++k) objective += model.objective[k] * h(k);
      CHECK(objective == doctest::Approx(mu_sparsity(inst, cut)).epsilon(1e-10));
    }
  }
}

TEST_CASE("SDP examples") {
  const Instance k = normalize(k2());
  const SdpModel km = build_sdp(k);
  CHECK(km.dim == 1);
  const SdpSolution ks = solve_sdp(km);
  CHECK(ks.objective == doctest::Approx(1.0 / k.bridge()).epsilon(1e-6));

  const Instance p = normalize(path3());
  const SdpSolution ps = solve_sdp(build_sdp(p));
  CHECK(ps.objective <= 0.75 / p.bridge() + 1e-6);
  const double lp = solve_lp(build_lp(p)).objective;
  CHECK(ps.objective * p.bridge() <= lp + 1e-6);
  CHECK(ps.min_eigenvalue >= -1e-8);
}

TEST_CASE("SDP is sound and its frames satisfy the invariants") {
  for (int n = 3; n <= 8; ++n) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Instance inst = fixtures::random_instance(n, seed, seed == 1);
      const SdpSolution sol = solve_sdp(build_sdp(inst));
      CHECK(sol.min_eigenvalue >= -1e-8);
      double best = 1e300;
      for (unsigned mask = 0; mask < (1U << n); ++mask) {
        if (!((mask >> inst.s()) & 1U) || ((mask >> inst.t()) & 1U)) continue;
        std::vector<bool> side(n);
        for (int v = 0; v < n; ++v) side[v] = (mask >> v) & 1U;
        best = std::min(best, mu_sparsity(inst, Cut::from_mask(side)));
      }
      CHECK(sol.objective <= best + 1e-6);
      const Frame f = canonical_frame(sol, inst.s(), inst.t());
      for (Vertex v = 0; v < n; ++v) {
        CHECK(f.y(v) >= -1e-6);
        CHECK(f.y(v) <= f.T + 1e-6);
        CHECK(f.z.row(v).norm() <= f.T + 1e-6);
      }
    }
  }
}

TEST_CASE("case_split examples") {
  const std::vector<double> third(3, 1.0 / 3.0);
  const CaseReport a = case_split(squared_line({0, 0.1, 1}), third);
  CHECK(a.kind == CaseReport::Kind::kDenseBall);
  CHECK(a.center == 0);
  CHECK(a.ball == std::vector<Vertex>{0, 1});
  CHECK(a.ball_mass == doctest::Approx(2.0 / 3.0));

  // A ball holding exactly half the mass counts as dense.
  const std::vector<double> half{0.5, 0.5};
  const CaseReport b = case_split(squared_line({0, 1}), half);
  CHECK(b.kind == CaseReport::Kind::kDenseBall);
  CHECK(b.ball_mass == doctest::Approx(0.5));
  CHECK(b.far_mass == doctest::Approx(0.5));

  Matrix d = Matrix::Constant(4, 4, 0.5);
  d.diagonal().setZero();
  const std::vector<double> quarter(4, 0.25);
  const CaseReport c = case_split(SemiMetric(d), quarter);
  CHECK(c.kind == CaseReport::Kind::kNoDenseBall);
  CHECK(c.far_mass == doctest::Approx(0.75));
}

TEST_CASE("far mass complements the mu-weighted ball masses") {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 7;
    const SemiMetric d = fixtures::random_st_metric(n, 0, n - 1, gen);
    std::vector<double> mu(n);
    double total = 0.0;
    for (double& m : mu) total += (m = unit(gen) + 0.01);
    for (double& m : mu) m /= total;
    double weighted = 0.0;
    for (Vertex o = 0; o < n; ++o) {
      for (Vertex v = 0; v < n; ++v) {
        if (d(v, o) <= kBallRadius) weighted += mu[o] * mu[v];
      }
    }
    const CaseReport r = case_split(d, mu);
    CHECK(r.far_mass == doctest::Approx(1.0 - weighted).epsilon(1e-12));
    if (r.kind == CaseReport::Kind::kNoDenseBall) CHECK(r.far_mass >= 0.5);
  }
}

TEST_CASE("dense_ball_round on a planar solution") {
  const Instance p = normalize(path3());
  // Right angle at vertex 1, so the squared distances obey the triangle inequality.
  Matrix x(3, 2);
  x << 0, 0, 0.1, 0.3, 1, 0;
  const Matrix gram = x * x.transpose();
  Matrix sq(3, 3);
  for (Vertex u = 0; u < 3; ++u) {
    for (Vertex v = 0; v < 3; ++v) sq(u, v) = gram(u, u) + gram(v, v) - 2.0 * gram(u, v);
  }
  SdpSolution sol{.x = x, .gram = gram, .d = SemiMetric(sq, 1e-12)};
  double cap = 0.0;
  double dem = 0.0;
  for (Vertex u = 0; u < 3; ++u) {
    for (Vertex v = 0; v < 3; ++v) {
      cap += p.capacity()(u, v) * sol.d(u, v);
      dem += p.mu()[u] * p.mu()[v] * sol.d(u, v);
    }
  }
  sol.objective = cap / dem;
  const CaseReport report = case_split(sol.d, p.mu());
  REQUIRE(report.kind == CaseReport::Kind::kDenseBall);
  const CheegerSweep sweep = dense_ball_round(p, sol, report);
  CHECK(is_st_separating(p, sweep.cut));
  CHECK(sweep.value.value() <= kDenseBallConstant * sol.objective * p.bridge() + 1e-6);

  CaseReport everything = report;
  everything.ball = {0, 1, 2};
  CHECK_THROWS_AS(dense_ball_round(p, sol, everything), Error);
}

TEST_CASE("canonical_frame examples") {
  Matrix line(3, 1);
  line << 0, 0.4, 1;
  const Frame a = canonical_frame(line, 0, 2);
  CHECK(a.T == doctest::Approx(1.0));
  CHECK(a.y(1) == doctest::Approx(0.4));
  CHECK(a.z.cols() == 0);

  Matrix flat(3, 2);
  flat << 0, 0, 0.4, 0, 1, 0;
  const Frame b = canonical_frame(flat, 0, 2);
  CHECK(b.y(1) == doctest::Approx(0.4));
  CHECK(b.z.cwiseAbs().maxCoeff() <= 1e-15);

  Matrix x(3, 2);
  x << 1, 1, 2, 2, 1, 3;  // s, a, t
  const Frame c = canonical_frame(x, 0, 2);
  CHECK(c.T == doctest::Approx(2.0));
  CHECK(c.y(1) == doctest::Approx(1.0));
  CHECK(c.z.row(1).norm() == doctest::Approx(1.0));
  CHECK(c.y(0) == 0.0);
  CHECK(c.y(2) == 2.0);

  Matrix same(2, 1);
  same << 0.3, 0.3;
  CHECK_THROWS_AS(canonical_frame(same, 0, 1), Error);
}

TEST_CASE("gaussian projection pins the terminals and is the identity on flat frames") {
  const Frame flat = frame_from({0, 0.3, 1}, {{0}, {0}, {0}}, 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const EmbeddingMap f = gaussian_project(flat, seed);
    for (int v = 0; v < 3; ++v) CHECK(f(v, 0) == flat.y(v));
  }
  const Frame tilted = frame_from({0, 0.3, 0.9, 2}, {{0, 0}, {0.5, -0.2}, {0.1, 1.2}, {0, 0}}, 2.0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const EmbeddingMap f0 = gaussian_project(tilted, seed);
    CHECK(f0(0, 0) == 0.0);
    CHECK(f0(3, 0) == 2.0);
    const EmbeddingMap f1 = clip(f0, tilted.T);
    CHECK(f1(0, 0) == 0.0);
    CHECK(f1(3, 0) == 2.0);
    for (double alpha : {1.0 / 3.0, 1.0}) {
      const EmbeddingMap f2 = flip_with(f1, tilted.T, alpha);
      CHECK(f2(0, 0) == 0.0);
      CHECK(f2(3, 0) == 2.0);
    }
  }
}

TEST_CASE("projected gaps match the closed-form first absolute moment") {
  const std::vector<Frame> frames{
      frame_from({0, 0.3, 0.9, 2}, {{0, 0}, {0.5, -0.2}, {0.1, 1.2}, {0, 0}}, 2.0),
      frame_from({0, 0.5, 1}, {{0}, {0.5}, {0}}, 1.0),
      frame_from({0, 0.05, 0.95, 1}, {{0, 0, 0}, {0.3, 0.3, 0.1}, {-0.2, 0.1, 0.25}, {0, 0, 0}}, 1.0),
  };
  constexpr int kDraws = 100000;
  for (const Frame& frame : frames) {
    const int n = frame.num_vertices();
    Rng rng(99);
    Matrix sum = Matrix::Zero(n, n);
    Matrix sq = Matrix::Zero(n, n);
    for (int draw = 0; draw < kDraws; ++draw) {
      const EmbeddingMap f = gaussian_project(frame, rng);
      for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
          const double g = std::abs(f(u, 0) - f(v, 0));
          sum(u, v) += g;
          sq(u, v) += g * g;
        }
      }
    }
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        const double mean = sum(u, v) / kDraws;
        const double se = std::sqrt(std::max(sq(u, v) / kDraws - mean * mean, 0.0) / kDraws);
        const double a = frame.y(u) - frame.y(v);
        const double b = (frame.z.row(u) - frame.z.row(v)).norm() / 6.0;
        const double exact = abs_moment(a, b);
        CHECK(std::abs(mean - exact) <= 3.0 * se + 1e-12);
        const double dist = frame.distance(u, v);
        CHECK(exact >= dist / 16.0 - 1e-12);
        CHECK(exact <= std::sqrt(2.0) * dist + 1e-12);
      }
    }
  }
}

TEST_CASE("clip examples and Lipschitz property") {
  const EmbeddingMap f = clip(EmbeddingMap::from_values(std::vector<double>{-0.5, 0.5, 1.2}), 1.0);
  CHECK(f(0, 0) == doctest::Approx(-1.0 / 3.0));
  CHECK(f(1, 0) == 0.5);
  CHECK(f(2, 0) == 1.2);
  const EmbeddingMap g = clip(EmbeddingMap::from_values(std::vector<double>{0.1, 0.9}), 1.0);
  CHECK(g(0, 0) == 0.1);
  CHECK(g(1, 0) == 0.9);

  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> wide(-2.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(5);
    for (double& x : v) x = wide(gen);
    const EmbeddingMap f0 = EmbeddingMap::from_values(v);
    const EmbeddingMap f1 = clip(f0, 1.0);
    for (int a = 0; a < 5; ++a) {
      for (int b = 0; b < 5; ++b) CHECK(std::abs(f1(a, 0) - f1(b, 0)) <= std::abs(f0(a, 0) - f0(b, 0)));
    }
  }
}

TEST_CASE("realization checks") {
  const Frame flat = frame_from({0, 0.3, 1}, {{0}, {0}, {0}}, 1.0);
  const Matrix cap = fixtures::edges(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  const std::vector<double> mu(3, 1.0 / 3.0);
  CHECK(realization_ok(flat, EmbeddingMap::from_values(std::vector<double>{0, 0.3, 1}), cap, mu));
  CHECK_FALSE(realization_ok(flat, EmbeddingMap::from_values(std::vector<double>{0.5, 0.5, 0.5}), cap, mu));
  const Realization r = fix_realization(flat, cap, mu, 4);
  CHECK(r.trials == 1);

  const Frame tilted = frame_from({0, 0.3, 0.9, 2}, {{0, 0}, {0.5, -0.2}, {0.1, 1.2}, {0, 0}}, 2.0);
  const Matrix cap4 = fixtures::edges(4, {{0, 1, 1.0}, {1, 2, 2.0}, {2, 3, 1.0}, {0, 2, 0.5}});
  const std::vector<double> mu4{0.1, 0.4, 0.2, 0.3};
  const Realization a = fix_realization(tilted, cap4, mu4, 17);
  const Realization b = fix_realization(tilted, cap4, mu4, 17);
  CHECK(a.trials == b.trials);
  CHECK(a.f1.matrix() == b.f1.matrix());
}

TEST_CASE("flip examples") {
  CHECK(flip_value(1.2, 1.0, 1.0 / 3.0) == doctest::Approx(14.0 / 15.0));
  CHECK(flip_value(1.2, 1.0, 1.0) == doctest::Approx(0.8));
  CHECK(flip_value(-1.0 / 3.0, 1.0, 1.0 / 3.0) == doctest::Approx(1.0 / 9.0));
  CHECK(flip_value(-1.0 / 3.0, 1.0, 1.0) == doctest::Approx(1.0 / 3.0));
  const double third = std::abs(flip_value(1.3, 1.0, 1.0 / 3.0) - flip_value(0.0, 1.0, 1.0 / 3.0));
  const double full = std::abs(flip_value(1.3, 1.0, 1.0) - flip_value(0.0, 1.0, 1.0));
  CHECK(0.5 * (third + full) == doctest::Approx(0.8));
  CHECK(0.5 * (third + full) >= 1.3 / 6.0);
}

TEST_CASE("clip and flip only shrink gaps, and the flip average keeps a sixth") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> wide(-1.5, 2.5);
  for (int trial = 0; trial < 300; ++trial) {
    const double T = 0.5 + (trial % 5) * 0.3;
    std::vector<double> v(6);
    for (double& x : v) x = wide(gen) * T;
    v[0] = 0.0;
    v[5] = T;
    const EmbeddingMap f0 = EmbeddingMap::from_values(v);
    const EmbeddingMap f1 = clip(f0, T);
    const EmbeddingMap third = flip_with(f1, T, 1.0 / 3.0);
    const EmbeddingMap full = flip_with(f1, T, 1.0);
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) {
        const double g0 = std::abs(f0(a, 0) - f0(b, 0));
        const double g1 = std::abs(f1(a, 0) - f1(b, 0));
        const double g3 = std::abs(third(a, 0) - third(b, 0));
        const double g2 = std::abs(full(a, 0) - full(b, 0));
        CHECK(g1 <= g0 + 1e-12);
        CHECK(g3 <= g1 + 1e-12);
        CHECK(g2 <= g1 + 1e-12);
        CHECK(0.5 * (g3 + g2) >= g1 / 6.0 - 1e-12);
      }
    }
  }
}

TEST_CASE("a bounded variable exceeds half its mean often enough") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 1 + trial % 8;
    const double M = 0.5 + 3.0 * unit(gen);
    std::vector<double> values(k);
    std::vector<double> probs(k);
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
      values[i] = trial % 3 == 0 && i == 0 ? M : M * unit(gen);
      probs[i] = unit(gen) + 1e-3;
      total += probs[i];
    }
    double mean = 0.0;
    for (int i = 0; i < k; ++i) mean += (probs[i] /= total) * values[i];
    double above = 0.0;
    for (int i = 0; i < k; ++i) {
      if (values[i] > 0.5 * mean) above += probs[i];
    }
    CHECK(above >= mean / (2.0 * M) - 1e-15);
  }
}

TEST_CASE("cheeger_st examples") {
  const CheegerResult k = cheeger_st(normalize(k2()), 3);
  CHECK(k.cut.side_of(0).members() == std::vector<Vertex>{0});
  CHECK(k.value.value() == doctest::Approx(1.0));

  const Instance p = normalize(path3());
  const CheegerResult a = cheeger_st(p, 1);
  CHECK(is_st_separating(p, a.cut));
  CHECK(a.value.value() == doctest::Approx(0.75));

  const Instance c = normalize(c4());
  const CheegerResult b = cheeger_st(c, 1);
  CHECK(is_st_separating(c, b.cut));
  CHECK(b.value.value() <= std::min(1.0, kNoDenseBallConstant * std::sqrt(b.diagnostics.sdp_value)) + 1e-9);
}

TEST_CASE("no_dense_ball_round on K2 returns the only cut") {
  const Instance k = normalize(k2());
  const SdpSolution sol = solve_sdp(build_sdp(k));
  const NoDenseBallResult r = no_dense_ball_round(k, sol, 5);
  CHECK(r.cut.side_of(0).members() == std::vector<Vertex>{0});
}

TEST_CASE("cheeger_st guards") {
  CHECK_THROWS_AS(cheeger_st(path3(), 0), Error);
  GenOptions o;
  o.n = 5;
  o.demand = DemandKind::kGeneral;
  try {
    cheeger_st(normalize(gen_random(o)), 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRequiresProductDemand);
  }
  o.n = 17;
  o.demand = DemandKind::kProduct;
  try {
    cheeger_st(normalize(gen_random(o)), 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSizeCeiling);
  }
}
