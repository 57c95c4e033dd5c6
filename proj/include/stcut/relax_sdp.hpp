#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "stcut/metrics.hpp"
#include "stcut/rng.hpp"

namespace stcut {

// A linear functional of the Gram entries, in packed upper-triangle order.
struct GramFunctional {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;
};

// Gram matrix over the vertices other than s (x_s is pinned at the origin),
// so d(s,v) = H_vv and d(u,v) = H_uu + H_vv - 2 H_uv.
struct SdpModel {
  int n = 0;
  Vertex s = 0;
  Vertex t = 1;
  int dim = 0;                      // n - 1
  std::vector<int> index_of;        // vertex -> Gram index, -1 for s
  std::vector<Vertex> vertex_of;    // Gram index -> vertex
  Matrix capacity;                  // normalized
  std::vector<double> mu;
  std::vector<double> objective;    // packed, sum cap d over ordered pairs
  std::vector<GramFunctional> equalities;    // demand row, then st-rows
  std::vector<GramFunctional> inequalities;  // triangle slacks, >= 0
  int num_st_rows = 0;
  // Triangle rows on {s, t, v}: the st-row makes them equalities or
  // nonnegativity of d, so they are left out.
  int num_implied_rows = 0;

  int num_variables() const { return dim * (dim + 1) / 2; }
  int packed(int i, int j) const;
};

inline constexpr int kSdpMaxVertices = 16;

SdpModel build_sdp(const Instance& inst);

struct SdpOptions {
  double tolerance = 1e-6;
  int max_iterations = 200;
};

struct SdpSolution {
  Matrix x;          // n x m, one row per vertex
  Matrix gram;       // n x n
  SemiMetric d;      // squared distances ||x_u - x_v||^2
  double objective = 0.0;
  double gap_bound = 0.0;      // primal-dual gap at exit
  double residual = 0.0;       // worst linear-constraint violation
  double min_eigenvalue = 0.0;
  int iterations = 0;
};

SdpSolution solve_sdp(const SdpModel& model, const SdpOptions& options = {});

// ---------------------------------------------------------------------------

// x_v - x_s rotated so that x_t lies on the first axis: x_v = (y_v, z_v).
struct Frame {
  Vector y;
  Matrix z;  // n x (m-1)
  double T = 0.0;

  int num_vertices() const { return static_cast<int>(y.size()); }
  // ||x_u - x_v||_2
  double distance(Vertex u, Vertex v) const;
};

Frame canonical_frame(const Matrix& x, Vertex s, Vertex t);
Frame canonical_frame(const SdpSolution& sol, Vertex s, Vertex t);

struct CaseReport {
  enum class Kind { kDenseBall, kNoDenseBall };
  Kind kind = Kind::kNoDenseBall;
  Vertex center = -1;
  std::vector<Vertex> ball;
  double ball_mass = 0.0;  // mu(B) of the reported ball, or the largest ball mass
  double far_mass = 0.0;   // Pr_{u,v ~ mu}[d(u,v) > 1/4]
};

inline constexpr double kBallRadius = 0.25;

CaseReport case_split(const SemiMetric& d, std::span<const double> mu);

struct CheegerSweep {
  Cut cut;
  Sparsity value;
};

CheegerSweep dense_ball_round(const Instance& inst, const SdpSolution& sol, const CaseReport& report);

EmbeddingMap gaussian_project(const Frame& frame, Rng& rng);
EmbeddingMap gaussian_project(const Frame& frame, std::uint64_t seed);
EmbeddingMap clip(const EmbeddingMap& f0, double T);

// Sums run over ordered pairs; the capacity scale is irrelevant.
bool realization_ok(const Frame& frame, const EmbeddingMap& f1, const Matrix& cap,
                    std::span<const double> mu);

struct Realization {
  EmbeddingMap f1;
  int trials = 0;
};

inline constexpr int kDefaultAmplificationBudget = 2000;

Realization fix_realization(const Frame& frame, const Matrix& cap, std::span<const double> mu,
                            std::uint64_t seed, int max_trials = kDefaultAmplificationBudget);

double flip_value(double f1, double T, double alpha);

struct FlipResult {
  EmbeddingMap f2;
  double alpha = 0.0;
};

EmbeddingMap flip_with(const EmbeddingMap& f1, double T, double alpha);
// Keeps the alpha in {1/3, 1} with the larger sum mu mu |f2 delta|; ties go to 1/3.
FlipResult flip(const EmbeddingMap& f1, double T, std::span<const double> mu);

struct NoDenseBallResult {
  Cut cut;
  Sparsity value;
  int trials = 0;
  double alpha = 0.0;
};

NoDenseBallResult no_dense_ball_round(const Instance& inst, const SdpSolution& sol, std::uint64_t seed);

inline constexpr double kDenseBallConstant = 32.0;
// 6 * 240 * 80 * sqrt(2) * 4
inline const double kNoDenseBallConstant = 6.0 * 240.0 * 80.0 * std::sqrt(2.0) * 4.0;

struct CheegerDiagnostics {
  double sdp_value = 0.0;
  double gap_bound = 0.0;
  double bridge = 1.0;
  CaseReport report;
  int trials = 0;
  double alpha = 0.0;
  // 32 SDP D in the dense-ball case, K sqrt(SDP D) otherwise.
  double bound = 0.0;
  int sdp_iterations = 0;
};

struct CheegerResult {
  Cut cut;
  Sparsity value;
  CheegerDiagnostics diagnostics;
};

struct CheegerOptions {
  SdpOptions sdp;
};

CheegerResult cheeger_st(const Instance& inst, std::uint64_t seed, const CheegerOptions& options = {});

}  // namespace stcut
