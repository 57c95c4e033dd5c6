#pragma once

#include "stcut/instance.hpp"

namespace stcut {

struct Eigensystem {
  Vector values;   // ascending
  Matrix vectors;  // column k pairs with values(k)
};

// Cyclic Jacobi rotations on a dense symmetric matrix.
Eigensystem jacobi_eigen(const Matrix& a, double tol = 1e-14, int max_sweeps = 100);

Matrix normalized_laplacian(const Matrix& cap);

// cut(S) / min(vol S, vol S-bar), vol being capacitated degree.
double conductance(const Matrix& cap, const Cut& cut);
// Brute force over all cuts; ties go to the lexicographically smaller side holding vertex 0.
CutValue exact_conductance_opt(const Matrix& cap, int max_vertices = kDefaultOracleCap);

enum class SpectralMode {
  kDegreeWeighted,  // v orthogonal to Deg^{1/2} 1, sweep over Deg^{-1/2} v
  kVerbatim,        // v orthogonal to 1, sweep over v
};

struct SpectralResult {
  double lambda2 = 0.0;
  Vector fiedler;  // the swept vector that produced `cut`
  Cut cut;
  double conductance = 0.0;
  int multiplicity = 1;
  bool cheeger_bound_holds = true;
};

// Every vector of a degenerate bottom eigenspace is swept, together with
// pairwise sums and differences. The degree-weighted mode throws
// kViolatedProperty when conductance exceeds sqrt(2 lambda2) + 1e-8.
SpectralResult conductance_sweep(const Matrix& cap, SpectralMode mode = SpectralMode::kDegreeWeighted);

}  // namespace stcut
