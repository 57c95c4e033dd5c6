#include "stcut/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stcut {

namespace {

using Column = std::vector<std::pair<int, double>>;

enum class ColumnKind { kStructural, kSlack, kArtificial };

class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& lp, const SimplexOptions& options) : options_(options) {
    const int m = static_cast<int>(lp.rows.size());
    rhs_ = Vector::Zero(m);
    columns_.assign(lp.num_vars, Column{});
    kinds_.assign(lp.num_vars, ColumnKind::kStructural);
    basis_.assign(m, -1);

    row_sign_.assign(m, 1.0);
    for (int i = 0; i < m; ++i) {
      const auto& row = lp.rows[i];
      double sign = row.rhs < 0.0 ? -1.0 : 1.0;
      row_sign_[i] = sign;
      RowSense sense = row.sense;
      if (sign < 0.0 && sense != RowSense::kEqual) {
        sense = sense == RowSense::kLessEqual ? RowSense::kGreaterEqual : RowSense::kLessEqual;
      }
      rhs_(i) = sign * row.rhs;
      for (const auto& [j, a] : row.coeffs) {
        if (a != 0.0) columns_[j].emplace_back(i, sign * a);
      }
      if (sense == RowSense::kLessEqual) {
        basis_[i] = add_column({{i, 1.0}}, ColumnKind::kSlack);
      } else {
        if (sense == RowSense::kGreaterEqual) add_column({{i, -1.0}}, ColumnKind::kSlack);
        basis_[i] = add_column({{i, 1.0}}, ColumnKind::kArtificial);
      }
    }

    cost_ = Vector::Zero(static_cast<Eigen::Index>(columns_.size()));
    cost_.head(lp.num_vars) = lp.objective;
    is_basic_.assign(columns_.size(), false);
    for (int j : basis_) is_basic_[j] = true;
    binv_ = Matrix::Identity(m, m);
    xb_ = rhs_;
  }

  SimplexResult run(const LinearProgram& lp) {
    const int m = static_cast<int>(rhs_.size());
    bool has_artificial = std::any_of(kinds_.begin(), kinds_.end(),
                                      [](ColumnKind k) { return k == ColumnKind::kArtificial; });
    if (has_artificial) {
      Vector phase_one = Vector::Zero(cost_.size());
      for (std::size_t j = 0; j < kinds_.size(); ++j) {
        if (kinds_[j] == ColumnKind::kArtificial) phase_one(static_cast<Eigen::Index>(j)) = 1.0;
      }
      optimize(phase_one, /*allow_artificial=*/true);
      double infeasibility = 0.0;
      for (int i = 0; i < m; ++i) {
        if (kinds_[basis_[i]] == ColumnKind::kArtificial) infeasibility += xb_(i);
      }
      if (infeasibility > 1e-8 * std::max(1.0, rhs_.lpNorm<Eigen::Infinity>())) {
        throw Error(ErrorCode::kInfeasible, "linear program is infeasible");
      }
      drive_out_artificials();
    }
    optimize(cost_, /*allow_artificial=*/false);

    SimplexResult result;
    result.x = Vector::Zero(lp.num_vars);
    for (int i = 0; i < m; ++i) {
      if (basis_[i] < lp.num_vars) result.x(basis_[i]) = std::max(0.0, xb_(i));
    }
    result.objective = lp.objective.dot(result.x);
    result.iterations = iterations_;
    result.max_violation = max_row_violation(lp, result.x);
    return result;
  }

  // Row multipliers of the final basis, in the orientation of the input rows.
  Vector duals() const {
    const int m = static_cast<int>(basis_.size());
    Vector cb(m);
    for (int i = 0; i < m; ++i) cb(i) = cost_(basis_[i]);
    Vector y = binv_.transpose() * cb;
    for (int i = 0; i < m; ++i) y(i) *= row_sign_[i];
    return y;
  }

 private:
  int add_column(Column column, ColumnKind kind) {
    columns_.push_back(std::move(column));
    kinds_.push_back(kind);
    return static_cast<int>(columns_.size()) - 1;
  }

  Vector ftran(int j) const {
    Vector d = Vector::Zero(binv_.rows());
    for (const auto& [i, a] : columns_[j]) d += a * binv_.col(i);
    return d;
  }

  void pivot(int row, int entering, const Vector& d) {
    const double step = xb_(row) / d(row);
    xb_ -= step * d;
    xb_(row) = step;
    for (Eigen::Index i = 0; i < xb_.size(); ++i) {
      if (xb_(i) < 0.0 && xb_(i) > -1e-11) xb_(i) = 0.0;
    }
    binv_.row(row) /= d(row);
    Vector scaled = d;
    scaled(row) = 0.0;
    binv_.noalias() -= scaled * binv_.row(row);

    is_basic_[basis_[row]] = false;
    basis_[row] = entering;
    is_basic_[entering] = true;
    if (++since_refactor_ >= options_.refactor_interval) refactor();
  }

  void refactor() {
    const auto m = static_cast<Eigen::Index>(basis_.size());
    Matrix b = Matrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (const auto& [r, a] : columns_[basis_[i]]) b(r, i) = a;
    }
    Eigen::PartialPivLU<Matrix> lu(b);
    binv_ = lu.inverse();
    xb_ = binv_ * rhs_;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (xb_(i) < 0.0 && xb_(i) > -1e-9) xb_(i) = 0.0;
    }
    if (!binv_.allFinite()) throw Error(ErrorCode::kNumericalFailure, "singular simplex basis");
    since_refactor_ = 0;
  }

  void optimize(const Vector& cost, bool allow_artificial) {
    const int m = static_cast<int>(basis_.size());
    const int total = static_cast<int>(columns_.size());
    int degenerate_run = 0;
    while (true) {
      if (++iterations_ > options_.max_iterations) {
        throw Error(ErrorCode::kIterationLimit, "simplex iteration limit reached");
      }
      const bool bland = degenerate_run >= options_.degenerate_before_bland;

      Vector cb(m);
      for (int i = 0; i < m; ++i) cb(i) = cost(basis_[i]);
      const Vector y = binv_.transpose() * cb;

      int entering = -1;
      double best = -options_.tolerance;
      for (int j = 0; j < total; ++j) {
        if (is_basic_[j]) continue;
        if (!allow_artificial && kinds_[j] == ColumnKind::kArtificial) continue;
        double reduced = cost(j);
        for (const auto& [i, a] : columns_[j]) reduced -= y(i) * a;
        if (reduced < best) {
          entering = j;
          if (bland) break;
          best = reduced;
        }
      }
      if (entering < 0) return;

      const Vector d = ftran(entering);
      int leaving = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        double ratio;
        if (!allow_artificial && kinds_[basis_[i]] == ColumnKind::kArtificial) {
          // Artificials left in the basis are pinned at zero.
          if (std::abs(d(i)) <= options_.pivot_tolerance) continue;
          ratio = 0.0;
        } else {
          if (d(i) <= options_.pivot_tolerance) continue;
          ratio = std::max(0.0, xb_(i)) / d(i);
        }
        bool take = false;
        if (leaving < 0 || ratio < best_ratio - 1e-12) {
          take = true;
        } else if (ratio <= best_ratio + 1e-12) {
          take = bland ? basis_[i] < basis_[leaving] : std::abs(d(i)) > std::abs(d(leaving));
        }
        if (take) {
          leaving = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (leaving < 0) throw Error(ErrorCode::kNumericalFailure, "linear program is unbounded");
      if (kinds_[basis_[leaving]] == ColumnKind::kArtificial && !allow_artificial) xb_(leaving) = 0.0;
      degenerate_run = best_ratio <= 1e-12 ? degenerate_run + 1 : 0;
      pivot(leaving, entering, d);
    }
  }

  void drive_out_artificials() {
    const int m = static_cast<int>(basis_.size());
    for (int i = 0; i < m; ++i) {
      if (kinds_[basis_[i]] != ColumnKind::kArtificial) continue;
      xb_(i) = 0.0;
      for (int j = 0; j < static_cast<int>(columns_.size()); ++j) {
        if (is_basic_[j] || kinds_[j] == ColumnKind::kArtificial) continue;
        double entry = 0.0;
        for (const auto& [r, a] : columns_[j]) entry += binv_(i, r) * a;
        if (std::abs(entry) > 1e-7) {
          pivot(i, j, ftran(j));
          break;
        }
      }
    }
  }

  SimplexOptions options_;
  std::vector<Column> columns_;
  std::vector<ColumnKind> kinds_;
  std::vector<int> basis_;
  std::vector<double> row_sign_;
  std::vector<bool> is_basic_;
  Vector rhs_;
  Vector cost_;
  Vector xb_;
  Matrix binv_;
  long iterations_ = 0;
  int since_refactor_ = 0;
};

}  // namespace

double max_row_violation(const LinearProgram& lp, const Vector& x) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) worst = std::max(worst, -x(j));
  for (const auto& row : lp.rows) {
    double lhs = 0.0;
    for (const auto& [j, a] : row.coeffs) lhs += a * x(j);
    switch (row.sense) {
      case RowSense::kLessEqual: worst = std::max(worst, lhs - row.rhs); break;
      case RowSense::kGreaterEqual: worst = std::max(worst, row.rhs - lhs); break;
      case RowSense::kEqual: worst = std::max(worst, std::abs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

namespace {

// min c^T x, rows (sense) b, x >= 0  has dual  max b^T y, A^T y <= c, with
// y_i <= 0 on <= rows, y_i >= 0 on >= rows, y_i free on = rows.
// Written as a minimization over nonnegative columns z:
//   <= row: y = -z,  >= row: y = z,  = row: y = z+ - z-.
// The primal x is minus the multiplier vector of the dual's rows.
SimplexResult solve_through_dual(const LinearProgram& lp, const SimplexOptions& options) {
  LinearProgram dual;
  dual.rows.resize(static_cast<std::size_t>(lp.num_vars));
  for (auto& row : dual.rows) row.sense = RowSense::kLessEqual;
  for (int j = 0; j < lp.num_vars; ++j) dual.rows[j].rhs = lp.objective(j);
  std::vector<double> objective;
  auto add_column = [&](const LinearProgram::Row& row, double sign) {
    const int col = static_cast<int>(objective.size());
    objective.push_back(-sign * row.rhs);
    for (const auto& [j, a] : row.coeffs) {
      if (a != 0.0) dual.rows[j].coeffs.emplace_back(col, sign * a);
    }
  };
  for (const auto& row : lp.rows) {
    switch (row.sense) {
      case RowSense::kLessEqual: add_column(row, -1.0); break;
      case RowSense::kGreaterEqual: add_column(row, 1.0); break;
      case RowSense::kEqual:
        add_column(row, 1.0);
        add_column(row, -1.0);
        break;
    }
  }
  dual.num_vars = static_cast<int>(objective.size());
  dual.objective = Eigen::Map<const Vector>(objective.data(), dual.num_vars);

  RevisedSimplex solver(dual, options);
  SimplexResult dual_result;
  try {
    dual_result = solver.run(dual);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNumericalFailure) {
      throw Error(ErrorCode::kInfeasible, "linear program is infeasible (dual unbounded)");
    }
    if (e.code() == ErrorCode::kInfeasible) {
      throw Error(ErrorCode::kNumericalFailure, "linear program is unbounded (dual infeasible)");
    }
    throw;
  }
  SimplexResult result;
  result.x = (-solver.duals()).cwiseMax(0.0);
  result.objective = lp.objective.dot(result.x);
  result.iterations = dual_result.iterations;
  result.max_violation = max_row_violation(lp, result.x);
  return result;
}

}  // namespace

SimplexResult solve_simplex(const LinearProgram& lp, const SimplexOptions& options) {
  if (lp.objective.size() != lp.num_vars) {
    throw Error(ErrorCode::kInvalidArgument, "objective size does not match variable count");
  }
  for (const auto& row : lp.rows) {
    for (const auto& [j, a] : row.coeffs) {
      if (j < 0 || j >= lp.num_vars) throw Error(ErrorCode::kInvalidArgument, "row references unknown variable");
    }
  }
  const bool use_dual = options.method == SimplexMethod::kDual ||
                        (options.method == SimplexMethod::kAuto && lp.rows.size() > 2 * static_cast<std::size_t>(lp.num_vars));
  if (use_dual) return solve_through_dual(lp, options);
  RevisedSimplex solver(lp, options);
  return solver.run(lp);
}

}  // namespace stcut
