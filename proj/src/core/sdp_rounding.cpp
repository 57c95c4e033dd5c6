#include <algorithm>
#include <cmath>

#include "stcut/relax_sdp.hpp"

namespace stcut {

double Frame::distance(Vertex u, Vertex v) const {
  const double dy = y(u) - y(v);
  return std::sqrt(dy * dy + (z.row(u) - z.row(v)).squaredNorm());
}

Frame canonical_frame(const Matrix& x, Vertex s, Vertex t) {
  const auto n = x.rows();
  const auto m = x.cols();
  if (s < 0 || t < 0 || s >= n || t >= n || s == t) throw Error(ErrorCode::kInvalidArgument, "bad terminals");
  if (m < 1) throw Error(ErrorCode::kCollapsedTerminals, "solution has no dimensions");
  Matrix shifted = x.rowwise() - x.row(s);
  const double T = shifted.row(t).norm();
  if (T * T <= 1e-10) throw Error(ErrorCode::kCollapsedTerminals, "x_s and x_t coincide");

  // Householder reflection taking x_t to T e_1.
  Eigen::RowVectorXd v = shifted.row(t);
  v(0) -= T;
  const double vv = v.squaredNorm();
  if (vv > 1e-28 * T * T) {
    const Vector proj = shifted * v.transpose();
    shifted -= (2.0 / vv) * proj * v;
  }

  Frame frame;
  frame.T = T;
  frame.y = shifted.col(0);
  frame.z = shifted.rightCols(m - 1);
  frame.y(s) = 0.0;
  frame.z.row(s).setZero();
  frame.y(t) = T;
  frame.z.row(t).setZero();
  return frame;
}

Frame canonical_frame(const SdpSolution& sol, Vertex s, Vertex t) { return canonical_frame(sol.x, s, t); }

CaseReport case_split(const SemiMetric& d, std::span<const double> mu) {
  const int n = d.size();
  if (static_cast<int>(mu.size()) != n) throw Error(ErrorCode::kInvalidArgument, "mu and metric sizes differ");
  CaseReport report;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      if (d(u, v) > kBallRadius) report.far_mass += mu[u] * mu[v];
    }
  }
  for (Vertex o = 0; o < n; ++o) {
    std::vector<Vertex> ball;
    double mass = 0.0;
    for (Vertex v = 0; v < n; ++v) {
      if (d(v, o) <= kBallRadius) {
        ball.push_back(v);
        mass += mu[v];
      }
    }
    if (mass >= 0.5) {
      report.kind = CaseReport::Kind::kDenseBall;
      report.center = o;
      report.ball = std::move(ball);
      report.ball_mass = mass;
      return report;
    }
    report.ball_mass = std::max(report.ball_mass, mass);
  }
  report.kind = CaseReport::Kind::kNoDenseBall;
  if (report.far_mass < 0.5) {
    throw Error(ErrorCode::kLemmaViolation, "neither a dense ball nor enough far mass");
  }
  return report;
}

CheegerSweep dense_ball_round(const Instance& inst, const SdpSolution& sol, const CaseReport& report) {
  if (report.kind != CaseReport::Kind::kDenseBall) {
    throw Error(ErrorCode::kInvalidArgument, "dense-ball rounding needs a dense-ball report");
  }
  if (static_cast<int>(report.ball.size()) == inst.num_vertices()) {
    throw Error(ErrorCode::kInvalidArgument, "ball covers every vertex");
  }
  constexpr double kTolerance = 1e-6;
  const EmbeddingMap f = frechet_pm(sol.d, report.ball, inst.s(), inst.t(), kTolerance);
  SweepResult sweep = sweep_round_st(inst, f, kTolerance);
  return CheegerSweep{std::move(sweep.cut), sweep.value};
}

EmbeddingMap gaussian_project(const Frame& frame, Rng& rng) {
  const auto extra = frame.z.cols();
  Vector g(extra);
  for (Eigen::Index k = 0; k < extra; ++k) g(k) = rng.normal();
  Vector f = frame.y;
  if (extra > 0) f += (frame.z * g) / 6.0;
  return EmbeddingMap(Matrix(f));
}

EmbeddingMap gaussian_project(const Frame& frame, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x676175));
  return gaussian_project(frame, rng);
}

EmbeddingMap clip(const EmbeddingMap& f0, double T) {
  return EmbeddingMap(f0.matrix().cwiseMax(-T / 3.0).cwiseMin(4.0 * T / 3.0));
}

bool realization_ok(const Frame& frame, const EmbeddingMap& f1, const Matrix& cap,
                    std::span<const double> mu) {
  const int n = frame.num_vertices();
  double mu_embedded = 0.0;
  double mu_vectors = 0.0;
  double cap_embedded = 0.0;
  double cap_vectors = 0.0;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      if (u == v) continue;
      const double gap = std::abs(f1(u, 0) - f1(v, 0));
      const double dist = frame.distance(u, v);
      mu_embedded += mu[u] * mu[v] * gap;
      mu_vectors += mu[u] * mu[v] * dist;
      cap_embedded += cap(u, v) * gap;
      cap_vectors += cap(u, v) * dist;
    }
  }
  return mu_embedded > mu_vectors / 240.0 && cap_embedded <= 80.0 * std::sqrt(2.0) * cap_vectors;
}

Realization fix_realization(const Frame& frame, const Matrix& cap, std::span<const double> mu,
                            std::uint64_t seed, int max_trials) {
  Rng rng(derive_seed(seed, 0x666978));
  for (int trial = 1; trial <= max_trials; ++trial) {
    EmbeddingMap f1 = clip(gaussian_project(frame, rng), frame.T);
    if (realization_ok(frame, f1, cap, mu)) return Realization{std::move(f1), trial};
  }
  throw Error(ErrorCode::kAmplificationExhausted, "no acceptable Gaussian realization within the trial budget");
}

double flip_value(double f1, double T, double alpha) {
  if (f1 > T) return T - alpha * (f1 - T);
  if (f1 < 0.0) return -alpha * f1;
  return f1;
}

EmbeddingMap flip_with(const EmbeddingMap& f1, double T, double alpha) {
  Matrix f2 = f1.matrix();
  for (Eigen::Index v = 0; v < f2.rows(); ++v) f2(v, 0) = flip_value(f2(v, 0), T, alpha);
  return EmbeddingMap(std::move(f2));
}

FlipResult flip(const EmbeddingMap& f1, double T, std::span<const double> mu) {
  auto spread = [&](const EmbeddingMap& f) {
    double total = 0.0;
    for (Vertex u = 0; u < f.num_vertices(); ++u) {
      for (Vertex v = 0; v < f.num_vertices(); ++v) total += mu[u] * mu[v] * std::abs(f(u, 0) - f(v, 0));
    }
    return total;
  };
  EmbeddingMap third = flip_with(f1, T, 1.0 / 3.0);
  EmbeddingMap full = flip_with(f1, T, 1.0);
  if (spread(full) > spread(third)) return FlipResult{std::move(full), 1.0};
  return FlipResult{std::move(third), 1.0 / 3.0};
}

NoDenseBallResult no_dense_ball_round(const Instance& inst, const SdpSolution& sol, std::uint64_t seed) {
  const Frame frame = canonical_frame(sol, inst.s(), inst.t());
  const Realization realization = fix_realization(frame, inst.capacity(), inst.mu(), seed);
  const FlipResult flipped = flip(realization.f1, frame.T, inst.mu());
  SweepResult sweep = sweep_round_st(inst, flipped.f2);
  return NoDenseBallResult{std::move(sweep.cut), sweep.value, realization.trials, flipped.alpha};
}

CheegerResult cheeger_st(const Instance& inst, std::uint64_t seed, const CheegerOptions& options) {
  if (!inst.normalized()) throw Error(ErrorCode::kInvalidArgument, "Cheeger rounding needs a normalized instance");
  if (!inst.has_product_demand()) throw Error(ErrorCode::kRequiresProductDemand, "Cheeger rounding needs product demand");
  if (inst.num_vertices() > kSdpMaxVertices) {
    throw Error(ErrorCode::kSizeCeiling, "SDP pipeline supports at most 16 vertices");
  }
  const SdpSolution sol = solve_sdp(build_sdp(inst), options.sdp);
  CheegerDiagnostics diag;
  diag.sdp_value = sol.objective;
  diag.gap_bound = sol.gap_bound;
  diag.bridge = inst.bridge();
  diag.sdp_iterations = sol.iterations;
  diag.report = case_split(sol.d, inst.mu());
  if (diag.report.kind == CaseReport::Kind::kDenseBall) {
    CheegerSweep sweep = dense_ball_round(inst, sol, diag.report);
    diag.bound = kDenseBallConstant * sol.objective * diag.bridge;
    return CheegerResult{std::move(sweep.cut), sweep.value, std::move(diag)};
  }
  NoDenseBallResult round = no_dense_ball_round(inst, sol, seed);
  diag.trials = round.trials;
  diag.alpha = round.alpha;
  diag.bound = kNoDenseBallConstant * std::sqrt(std::max(0.0, sol.objective) * diag.bridge);
  return CheegerResult{std::move(round.cut), round.value, std::move(diag)};
}

}  // namespace stcut
