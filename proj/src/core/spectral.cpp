#include "stcut/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace stcut {

Eigensystem jacobi_eigen(const Matrix& a, double tol, int max_sweeps) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::kInvalidArgument, "matrix is not square");
  Matrix m = 0.5 * (a + a.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double scale = std::max(m.norm(), 1e-300);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
    }
    if (std::sqrt(off) <= tol * scale) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(m(p, q)) <= 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return m(i, i) < m(j, j); });
  Eigensystem result{Vector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    result.values(k) = m(order[k], order[k]);
    result.vectors.col(k) = v.col(order[k]);
  }
  return result;
}

namespace {

Vector degrees(const Matrix& cap) {
  if (cap.rows() != cap.cols()) throw Error(ErrorCode::kInvalidArgument, "capacity matrix is not square");
  if (cap.rows() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two vertices");
  Vector deg = cap.rowwise().sum() - cap.diagonal();
  for (Eigen::Index v = 0; v < deg.size(); ++v) {
    if (!(deg(v) > 0.0)) throw Error(ErrorCode::kIsolatedVertex, "vertex " + std::to_string(v) + " has no capacity");
  }
  return deg;
}

struct Candidate {
  Cut cut;
  double value;
  Vector y;
};

void sweep_into(const Matrix& cap, const Vector& y, std::optional<Candidate>& best) {
  const auto n = static_cast<int>(y.size());
  std::vector<Vertex> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return y(a) < y(b) || (y(a) == y(b) && a < b); });
  const double gap = 1e-12 * std::max(y.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<bool> mask(static_cast<std::size_t>(n), false);
  for (int i = 0; i + 1 < n; ++i) {
    mask[order[i]] = true;
    if (y(order[i + 1]) - y(order[i]) <= gap) continue;
    Cut cut = Cut::from_mask(mask);
    const double value = conductance(cap, cut);
    if (!best || value < best->value - 1e-12 * std::max(1.0, best->value)) best = Candidate{std::move(cut), value, y};
  }
}

}  // namespace

Matrix normalized_laplacian(const Matrix& cap) {
  const Vector deg = degrees(cap);
  const Vector root = deg.cwiseSqrt().cwiseInverse();
  Matrix a = cap;
  a.diagonal().setZero();
  Matrix l = -(root.asDiagonal() * a * root.asDiagonal());
  l.diagonal().array() += 1.0;
  return l;
}

double conductance(const Matrix& cap, const Cut& cut) {
  const Vector deg = degrees(cap);
  double vol_in = 0.0;
  double vol_out = 0.0;
  for (Vertex v = 0; v < cut.num_vertices(); ++v) (cut.contains(v) ? vol_in : vol_out) += deg(v);
  return cut_capacity(cap, cut) / std::min(vol_in, vol_out);
}

CutValue exact_conductance_opt(const Matrix& cap, int max_vertices) {
  const int n = static_cast<int>(cap.rows());
  degrees(cap);
  if (n > max_vertices) throw Error(ErrorCode::kTooLarge, "graph exceeds the exhaustive oracle size cap");
  std::optional<CutValue> best;
  std::vector<bool> mask(static_cast<std::size_t>(n));
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t bits = 0; bits + 1 < count; ++bits) {
    mask[0] = true;
    for (int v = 1; v < n; ++v) mask[v] = (bits >> (v - 1)) & 1U;
    Cut cut = Cut::from_mask(mask);
    const double value = conductance(cap, cut);
    bool take = !best;
    if (!take) {
      const double incumbent = best->value.value();
      const double slack = 1e-12 * std::max(1.0, incumbent);
      take = value < incumbent - slack || (value <= incumbent + slack && lex_less(cut.members(), best->cut.members()));
    }
    if (take) best = CutValue{std::move(cut), Sparsity::finite(value)};
  }
  return *best;
}

SpectralResult conductance_sweep(const Matrix& cap, SpectralMode mode) {
  const Vector deg = degrees(cap);
  const auto n = deg.size();
  const Matrix l = normalized_laplacian(cap);
  Vector w = mode == SpectralMode::kDegreeWeighted ? Vector(deg.cwiseSqrt()) : Vector(Vector::Ones(n));
  w.normalize();
  // Restrict to the complement of w and push w itself above the spectrum.
  const Matrix p = Matrix::Identity(n, n) - w * w.transpose();
  const Matrix restricted = p * l * p + 3.0 * w * w.transpose();
  const Eigensystem eig = jacobi_eigen(restricted);

  SpectralResult result{eig.values(0), Vector(), Cut(static_cast<int>(n), {0}), 0.0, 0, true};
  std::vector<Vector> basis;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (eig.values(k) - eig.values(0) > 1e-8) break;
    basis.push_back(eig.vectors.col(k));
  }
  result.multiplicity = static_cast<int>(basis.size());
  std::vector<Vector> sweeps = basis;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      sweeps.push_back(basis[i] + basis[j]);
      sweeps.push_back(basis[i] - basis[j]);
    }
  }
  const Vector scale = mode == SpectralMode::kDegreeWeighted ? Vector(deg.cwiseSqrt().cwiseInverse()) : Vector(Vector::Ones(n));
  std::optional<Candidate> best;
  for (const Vector& v : sweeps) sweep_into(cap, scale.cwiseProduct(v), best);
  if (!best) throw Error(ErrorCode::kDegenerateMap, "Fiedler vector is constant");
  result.cut = best->cut;
  result.conductance = best->value;
  result.fiedler = best->y;
  result.cheeger_bound_holds = result.conductance <= std::sqrt(2.0 * std::max(0.0, result.lambda2)) + 1e-8;
  if (mode == SpectralMode::kDegreeWeighted && !result.cheeger_bound_holds) {
    throw Error(ErrorCode::kViolatedProperty, "sweep conductance exceeds sqrt(2 lambda2)");
  }
  return result;
}

}  // namespace stcut
