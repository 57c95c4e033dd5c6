#pragma once

#include <utility>
#include <vector>

#include "stcut/instance.hpp"

namespace stcut {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

// min c^T x  s.t.  each row (sense) rhs,  x >= 0.
struct LinearProgram {
  struct Row {
    std::vector<std::pair<int, double>> coeffs;
    RowSense sense = RowSense::kEqual;
    double rhs = 0.0;
  };

  int num_vars = 0;
  Vector objective;
  std::vector<Row> rows;
};

// kAuto solves the dual when there are more than twice as many rows as
// variables.
enum class SimplexMethod { kAuto, kPrimal, kDual };

struct SimplexOptions {
  SimplexMethod method = SimplexMethod::kAuto;
  double tolerance = 1e-10;     // reduced-cost and feasibility threshold
  double pivot_tolerance = 1e-9;
  long max_iterations = 500000;
  int refactor_interval = 50;
  int degenerate_before_bland = 25;
};

struct SimplexResult {
  Vector x;
  double objective = 0.0;
  long iterations = 0;
  double max_violation = 0.0;  // over the original rows and x >= 0
};

// Two-phase revised simplex with a dense basis inverse. Pricing is Dantzig's
// rule, switching to Bland's rule after a run of degenerate pivots.
// Throws kInfeasible, kIterationLimit, or kNumericalFailure (unbounded).
SimplexResult solve_simplex(const LinearProgram& lp, const SimplexOptions& options = {});

double max_row_violation(const LinearProgram& lp, const Vector& x);

}  // namespace stcut
