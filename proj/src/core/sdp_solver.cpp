#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "stcut/relax_sdp.hpp"

namespace stcut {

int SdpModel::packed(int i, int j) const {
  if (i > j) std::swap(i, j);
  return i * dim - i * (i - 1) / 2 + (j - i);
}

namespace {

class FunctionalBuilder {
 public:
  explicit FunctionalBuilder(const SdpModel& model) : model_(model) {}

  void add_distance(Vertex u, Vertex v, double coef) {
    const int a = model_.index_of[u];
    const int b = model_.index_of[v];
    if (a >= 0) add(a, a, coef);
    if (b >= 0) add(b, b, coef);
    if (a >= 0 && b >= 0) add(a, b, -2.0 * coef);
  }

  GramFunctional take(double constant = 0.0) {
    GramFunctional f;
    f.constant = constant;
    for (const auto& [k, c] : acc_) {
      if (c != 0.0) f.terms.emplace_back(k, c);
    }
    acc_.clear();
    return f;
  }

 private:
  void add(int i, int j, double coef) { acc_[model_.packed(i, j)] += coef; }

  const SdpModel& model_;
  std::map<int, double> acc_;
};

}  // namespace

SdpModel build_sdp(const Instance& inst) {
  if (!inst.normalized()) throw Error(ErrorCode::kInvalidArgument, "SDP needs a normalized instance");
  SdpModel model;
  model.n = inst.num_vertices();
  model.s = inst.s();
  model.t = inst.t();
  model.mu = inst.mu();
  model.capacity = inst.capacity();
  model.dim = model.n - 1;
  model.index_of.assign(model.n, -1);
  for (Vertex v = 0; v < model.n; ++v) {
    if (v == model.s) continue;
    model.index_of[v] = static_cast<int>(model.vertex_of.size());
    model.vertex_of.push_back(v);
  }
  const int n = model.n;
  const Vertex s = model.s;
  const Vertex t = model.t;

  FunctionalBuilder builder(model);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) builder.add_distance(u, v, 2.0 * model.capacity(u, v));
  }
  model.objective.assign(static_cast<std::size_t>(model.num_variables()), 0.0);
  for (const auto& [k, c] : builder.take().terms) model.objective[k] = c;

  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) builder.add_distance(u, v, 2.0 * model.mu[u] * model.mu[v]);
  }
  model.equalities.push_back(builder.take(-1.0));

  for (Vertex v = 0; v < n; ++v) {
    if (v == s || v == t) continue;
    builder.add_distance(s, v, 1.0);
    builder.add_distance(v, t, 1.0);
    builder.add_distance(s, t, -1.0);
    model.equalities.push_back(builder.take());
    ++model.num_st_rows;
  }

  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) {
      for (Vertex c = b + 1; c < n; ++c) {
        const Vertex triple[3] = {a, b, c};
        const bool has_s = a == s || b == s || c == s;
        const bool has_t = a == t || b == t || c == t;
        if (has_s && has_t) {
          model.num_implied_rows += 3;
          continue;
        }
        for (int middle = 0; middle < 3; ++middle) {
          const Vertex w = triple[middle];
          const Vertex u = triple[(middle + 1) % 3];
          const Vertex v = triple[(middle + 2) % 3];
          builder.add_distance(u, w, 1.0);
          builder.add_distance(w, v, 1.0);
          builder.add_distance(u, v, -1.0);
          model.inequalities.push_back(builder.take());
        }
      }
    }
  }
  return model;
}

namespace {

struct Entry {
  int a;
  int b;
  double coef;  // <A, X> gets coef * X(a, b)
};

// Infeasible primal-dual path following with the HKM direction and
// Mehrotra's predictor-corrector. The cone is the Gram block times one
// nonnegative slack per triangle row:
//   min <C,H>  s.t.  <A_i,H> = b_i (equalities),  <A_k,H> - tau_k = 0.
class PrimalDualSolver {
 public:
  PrimalDualSolver(const SdpModel& model, const SdpOptions& options)
      : model_(model), options_(options), p_(model.dim) {
    std::vector<std::pair<int, int>> entry;
    for (int i = 0; i < p_; ++i) {
      for (int j = i; j < p_; ++j) entry.emplace_back(i, j);
    }
    auto convert = [&](const GramFunctional& f) {
      std::vector<Entry> out;
      for (const auto& [k, c] : f.terms) out.push_back({entry[k].first, entry[k].second, c});
      return out;
    };
    C_ = Matrix::Zero(p_, p_);
    for (std::size_t k = 0; k < model.objective.size(); ++k) {
      const auto [i, j] = entry[k];
      if (i == j) {
        C_(i, i) = model.objective[k];
      } else {
        C_(i, j) = C_(j, i) = 0.5 * model.objective[k];
      }
    }
    q_ = static_cast<int>(model.equalities.size());
    for (const auto& f : model.equalities) rows_.push_back(convert(f));
    for (const auto& f : model.inequalities) rows_.push_back(convert(f));
    m_ = static_cast<int>(rows_.size());
    l_ = m_ - q_;
    b_ = Vector::Zero(m_);
    for (int i = 0; i < q_; ++i) b_(i) = -model.equalities[i].constant;
  }

  struct Output {
    Matrix H;
    double gap = 0.0;
    int iterations = 0;
  };

  Output run() {
    const double scale = 1.0 + std::max(C_.lpNorm<Eigen::Infinity>(), b_.lpNorm<Eigen::Infinity>());
    Matrix X = Matrix::Identity(p_, p_);
    Vector x = Vector::Ones(l_);
    Matrix Z = scale * Matrix::Identity(p_, p_);
    Vector z = scale * Vector::Ones(l_);
    Vector y = Vector::Zero(m_);
    const double dim = static_cast<double>(p_ + l_);
    const double gap_target = 1e-2 * options_.tolerance;
    const double feas_target = 1e-3 * options_.tolerance;

    std::optional<Output> best;
    double best_score = std::numeric_limits<double>::infinity();
    int stalled = 0;
    for (int iter = 1; iter <= options_.max_iterations; ++iter) {
      const Vector rp = b_ - op(X) + lp_op(x);
      const Matrix Rd = C_ - Z - adj(y);
      const Vector rdl = -z - lp_adj(y);
      const double mu = (X.cwiseProduct(Z).sum() + x.dot(z)) / dim;
      const double pobj = C_.cwiseProduct(X).sum();
      const double dobj = b_.dot(y);
      const double infeas = std::max({rp.lpNorm<Eigen::Infinity>(), Rd.lpNorm<Eigen::Infinity>(),
                                      rdl.lpNorm<Eigen::Infinity>()});
      const double gap = std::max(mu * dim, std::abs(pobj - dobj));
      if (infeas <= feas_target && gap <= gap_target) return Output{X, gap, iter - 1};
      // Late iterates can lose primal accuracy; remember the best one that
      // is already good enough.
      const double score = std::max(infeas, gap);
      if (infeas <= 0.1 * options_.tolerance && gap <= 0.1 * options_.tolerance && score < best_score) {
        best_score = score;
        best = Output{X, gap, iter - 1};
      }
      if (stalled >= 3) {
        if (best) return *best;
        throw Error(ErrorCode::kNumericalFailure, "interior-point method stalled");
      }

      Eigen::LLT<Matrix> zchol(Z);
      if (zchol.info() != Eigen::Success) throw Error(ErrorCode::kNumericalFailure, "dual slack left the PSD cone");
      Matrix Zinv = zchol.solve(Matrix::Identity(p_, p_));
      Zinv = (0.5 * (Zinv + Zinv.transpose())).eval();
      const Vector ratio = x.cwiseQuotient(z);

      Matrix M = schur(X, Zinv);
      for (int k = 0; k < l_; ++k) M(q_ + k, q_ + k) += ratio(k);
      // Near the optimum M loses definiteness to rounding; a diagonal shift
      // relative to its largest entry restores it.
      Eigen::LLT<Matrix> mchol(M);
      const double diag_max = M.diagonal().maxCoeff();
      for (double shift = 1e-14; mchol.info() != Eigen::Success; shift *= 100.0) {
        if (shift > 1e-6) throw Error(ErrorCode::kNumericalFailure, "Schur complement is not definite");
        Matrix shifted = M;
        shifted.diagonal().array() += shift * diag_max;
        mchol.compute(shifted);
      }

      const Matrix XRdZ = X * Rd * Zinv;
      auto direction = [&](const Matrix& Rc, const Vector& rc, Matrix& dX, Vector& dx, Matrix& dZ, Vector& dz,
                           Vector& dy) {
        // Rc = target - X Z part (times Z^-1 already applied), rc likewise.
        const Matrix G = Rc - XRdZ;
        const Vector gl = rc - ratio.cwiseProduct(rdl);
        dy = mchol.solve(rp - op(G) + lp_op(gl));
        dZ = Rd - adj(dy);
        dz = rdl - lp_adj(dy);
        dX = Rc - X * dZ * Zinv;
        dX = (0.5 * (dX + dX.transpose())).eval();
        dx = rc - ratio.cwiseProduct(dz);
      };

      Matrix dX, dZ;
      Vector dx, dz, dy;
      direction(-X, -x, dX, dx, dZ, dz, dy);
      double ap = step_length(X, dX, x, dx);
      double ad = step_length(Z, dZ, z, dz);
      const Matrix Xa = X + ap * dX;
      const Matrix Za = Z + ad * dZ;
      const double mu_aff = (Xa.cwiseProduct(Za).sum() + (x + ap * dx).dot(z + ad * dz)) / dim;
      const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

      const Matrix Rc = sigma * mu * Zinv - X - dX * dZ * Zinv;
      const Vector rc = (sigma * mu * Vector::Ones(l_) - dx.cwiseProduct(dz)).cwiseQuotient(z) - x;
      direction(Rc, rc, dX, dx, dZ, dz, dy);
      ap = shrink_to_interior(X, dX, x, dx, std::min(1.0, 0.95 * step_length(X, dX, x, dx)));
      ad = shrink_to_interior(Z, dZ, z, dz, std::min(1.0, 0.95 * step_length(Z, dZ, z, dz)));
      stalled = std::max(ap, ad) < 1e-3 ? stalled + 1 : 0;
      X += ap * dX;
      x += ap * dx;
      Z += ad * dZ;
      z += ad * dz;
      y += ad * dy;
      if (!X.allFinite() || !Z.allFinite() || !y.allFinite()) {
        throw Error(ErrorCode::kNumericalFailure, "non-finite interior-point iterate");
      }
    }
    if (best) return *best;
    throw Error(ErrorCode::kIterationLimit, "SDP solver iteration limit reached");
  }

 private:
  Vector op(const Matrix& X) const {
    Vector out(m_);
    for (int i = 0; i < m_; ++i) {
      double v = 0.0;
      for (const auto& e : rows_[i]) v += e.coef * 0.5 * (X(e.a, e.b) + X(e.b, e.a));
      out(i) = v;
    }
    return out;
  }

  // Contribution of the slack columns, whose coefficient is -1.
  Vector lp_op(const Vector& x) const {
    Vector out = Vector::Zero(m_);
    out.tail(l_) = x;
    return out;
  }

  Vector lp_adj(const Vector& y) const { return -y.tail(l_); }

  Matrix adj(const Vector& y) const {
    Matrix out = Matrix::Zero(p_, p_);
    for (int i = 0; i < m_; ++i) {
      if (y(i) == 0.0) continue;
      for (const auto& e : rows_[i]) {
        if (e.a == e.b) {
          out(e.a, e.a) += y(i) * e.coef;
        } else {
          out(e.a, e.b) += 0.5 * y(i) * e.coef;
          out(e.b, e.a) += 0.5 * y(i) * e.coef;
        }
      }
    }
    return out;
  }

  // M_ij = tr(A_i X A_j Z^-1).
  Matrix schur(const Matrix& X, const Matrix& Zinv) const {
    Matrix M(m_, m_);
    Matrix B(p_, p_);
    for (int j = 0; j < m_; ++j) {
      B.setZero();
      for (const auto& e : rows_[j]) {
        if (e.a == e.b) {
          B.noalias() += e.coef * X.col(e.a) * Zinv.row(e.a);
        } else {
          B.noalias() += 0.5 * e.coef * X.col(e.a) * Zinv.row(e.b);
          B.noalias() += 0.5 * e.coef * X.col(e.b) * Zinv.row(e.a);
        }
      }
      for (int i = j; i < m_; ++i) {
        double v = 0.0;
        for (const auto& e : rows_[i]) v += e.coef * 0.5 * (B(e.a, e.b) + B(e.b, e.a));
        M(i, j) = M(j, i) = v;
      }
    }
    return M;
  }

  // Largest alpha (capped at a large value) keeping both blocks nonnegative.
  double step_length(const Matrix& S, const Matrix& dS, const Vector& s, const Vector& ds) const {
    double alpha = 1e30;
    Eigen::LLT<Matrix> chol(S);
    const Matrix& L = chol.matrixL();
    const Matrix T = L.triangularView<Eigen::Lower>().solve(
        L.triangularView<Eigen::Lower>().solve(dS).transpose());
    const Matrix sym = 0.5 * (T + T.transpose());
    const double lmin = Eigen::SelfAdjointEigenSolver<Matrix>(sym, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
    for (Eigen::Index k = 0; k < s.size(); ++k) {
      if (ds(k) < 0.0) alpha = std::min(alpha, -s(k) / ds(k));
    }
    return alpha;
  }

  // The eigenvalue-based step can overshoot by rounding when S is nearly
  // singular; back off until the Cholesky factorization succeeds.
  double shrink_to_interior(const Matrix& S, const Matrix& dS, const Vector& s, const Vector& ds,
                            double alpha) const {
    for (int attempt = 0; attempt < 60; ++attempt, alpha *= 0.8) {
      if (((s + alpha * ds).array() > 0.0).all() &&
          Eigen::LLT<Matrix>(S + alpha * dS).info() == Eigen::Success) {
        return alpha;
      }
    }
    throw Error(ErrorCode::kNumericalFailure, "interior-point step collapsed");
  }

  const SdpModel& model_;
  SdpOptions options_;
  int p_;
  int q_ = 0;
  int m_ = 0;
  int l_ = 0;
  Matrix C_;
  Vector b_;
  std::vector<std::vector<Entry>> rows_;
};

}  // namespace

SdpSolution solve_sdp(const SdpModel& model, const SdpOptions& options) {
  if (model.n < 2) throw Error(ErrorCode::kInvalidArgument, "SDP needs at least two vertices");
  if (model.n > kSdpMaxVertices) throw Error(ErrorCode::kSizeCeiling, "SDP solver supports at most 16 vertices");
  PrimalDualSolver solver(model, options);
  const auto out = solver.run();
  const double gap_bound = out.gap;
  const int iterations = out.iterations;

  const int n = model.n;
  Matrix gram = Matrix::Zero(n, n);
  for (int i = 0; i < model.dim; ++i) {
    for (int j = i; j < model.dim; ++j) {
      const double value = out.H(i, j);
      gram(model.vertex_of[i], model.vertex_of[j]) = value;
      gram(model.vertex_of[j], model.vertex_of[i]) = value;
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::kNumericalFailure, "Gram eigendecomposition failed");
  constexpr double kRankThreshold = 1e-9;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    if (eig.eigenvalues()(k) > kRankThreshold) kept.push_back(k);
  }
  Matrix x(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    x.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(kept[c]) * std::sqrt(eig.eigenvalues()(kept[c]));
  }
  // Shift so that x_s is exactly the origin.
  const Eigen::RowVectorXd origin = x.row(model.s);
  for (Eigen::Index v = 0; v < n; ++v) x.row(v) -= origin;
  x.row(model.s).setZero();

  Matrix dist = Matrix::Zero(n, n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) dist(u, v) = dist(v, u) = (x.row(u) - x.row(v)).squaredNorm();
  }
  double objective = 0.0;
  double demand = 0.0;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      objective += model.capacity(u, v) * dist(u, v);
      demand += model.mu[u] * model.mu[v] * dist(u, v);
    }
  }
  double residual = std::abs(demand - 1.0);
  for (Vertex v = 0; v < n; ++v) {
    residual = std::max(residual, std::abs(dist(model.s, model.t) - dist(model.s, v) - dist(v, model.t)));
  }
  SemiMetric d(dist, options.tolerance);
  residual = std::max(residual, d.max_triangle_violation());
  if (residual > options.tolerance) {
    throw Error(ErrorCode::kNumericalFailure, "SDP solution violates constraints beyond tolerance");
  }
  SdpSolution sol{x, gram, std::move(d), objective, gap_bound, residual, eig.eigenvalues()(0), iterations};
  return sol;
}

}  // namespace stcut
