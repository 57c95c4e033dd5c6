#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "stcut/instance.hpp"

namespace stcut {

struct FlowCut {
  Cut cut;               // side reachable from s in the final residual graph
  double flow = 0.0;
  bool disconnected = false;
};

// Dinic max-flow on an undirected capacity matrix.
FlowCut min_st_cut(const Matrix& cap, Vertex s, Vertex t);

// cap(S, S-bar) / min(|S|, |S-bar|) on the capacities as given.
double size_sparsity(const Matrix& cap, const Cut& cut);
// cap(S, S-bar) / min(w(S), w(S-bar)); infinite when a side has no weight.
Sparsity weighted_size_sparsity(const Matrix& cap, const Cut& cut, std::span<const double> weight);

// Exhaustive minimum of weighted_size_sparsity over all cuts (first member
// of the returned side is vertex 0) or over st-separating cuts (side holds s).
CutValue exact_size_opt(const Matrix& cap, std::span<const double> weight, int max_vertices = kDefaultOracleCap);
CutValue exact_st_size_opt(const Matrix& cap, std::span<const double> weight, Vertex s, Vertex t,
                           int max_vertices = kDefaultOracleCap);

enum class StepTag { kS0, kSStep, kTStep };
const char* step_tag_name(StepTag tag);

struct RecordedCut {
  Cut cut;  // listed by the side holding the input's s
  StepTag tag;
  double value = 0.0;
};

// Returns one side of a cut of the graph `cap` (local indices 0..k-1).
using SparsestCutOracle =
    std::function<std::vector<Vertex>(const Matrix& cap, std::span<const double> weight, std::uint64_t seed)>;

inline constexpr int kExactOracleMax = 12;
inline constexpr int kDncMaxVertices = 20;

// Exact enumeration (rho = 1).
std::vector<Vertex> exact_oracle(const Matrix& cap, std::span<const double> weight, std::uint64_t seed);
// Non-st LP, Bourgain embedding and a plain sweep; rho is not verified.
std::vector<Vertex> lp_oracle(const Matrix& cap, std::span<const double> weight, std::uint64_t seed);

struct DncOptions {
  // Weigh sides by mu instead of counting vertices (product demands).
  bool use_mass = false;
  // Empty means exact_oracle up to kExactOracleMax vertices, lp_oracle above.
  SparsestCutOracle oracle;
};

struct DncResult {
  Cut cut;
  double value = 0.0;  // weighted size-sparsity of `cut`
  std::vector<RecordedCut> recorded;
  double flow = 0.0;
  bool swapped = false;       // s and t were relabelled for step 1
  int t_steps = 0;
  bool rho_verified = true;   // every oracle call was exact
};

DncResult divide_and_conquer(const Instance& inst, std::uint64_t seed = 0, const DncOptions& options = {});

}  // namespace stcut
