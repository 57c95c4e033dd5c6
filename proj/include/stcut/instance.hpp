#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "stcut/error.hpp"

namespace stcut {

using Vertex = int;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultTolerance = 1e-9;

// A proper nonempty vertex subset S; the complement is implied.
class Cut {
 public:
  Cut(int n, std::vector<Vertex> members);
  static Cut from_mask(const std::vector<bool>& mask);

  int num_vertices() const noexcept { return static_cast<int>(mask_.size()); }
  int size() const noexcept { return static_cast<int>(members_.size()); }
  bool contains(Vertex v) const { return mask_.at(v); }
  const std::vector<Vertex>& members() const noexcept { return members_; }
  const std::vector<bool>& mask() const noexcept { return mask_; }
  Cut complement() const;
  // The side containing v, as a cut.
  Cut side_of(Vertex v) const { return contains(v) ? *this : complement(); }

  bool operator==(const Cut& other) const { return mask_ == other.mask_; }

 private:
  std::vector<bool> mask_;
  std::vector<Vertex> members_;
};

// Sparsity value: a nonnegative real, or infinite when the cut separates no
// demand.
class Sparsity {
 public:
  static Sparsity finite(double value);
  static Sparsity infinite() { return Sparsity(); }

  bool is_finite() const noexcept { return finite_; }
  bool is_infinite() const noexcept { return !finite_; }
  double value() const;  // throws on infinite
  double value_or(double fallback) const noexcept { return finite_ ? value_ : fallback; }

  std::partial_ordering operator<=>(const Sparsity& other) const noexcept;
  bool operator==(const Sparsity& other) const noexcept {
    return finite_ == other.finite_ && (!finite_ || value_ == other.value_);
  }

 private:
  Sparsity() = default;
  double value_ = 0.0;
  bool finite_ = false;
};

struct GeneralDemand {
  Matrix weights;  // symmetric, zero diagonal
};

struct ProductDemand {
  std::vector<double> mu;  // probability distribution over V
};

using Demand = std::variant<GeneralDemand, ProductDemand>;

// Capacities and demands are stored over ordered pairs: a symmetric matrix
// with cap(u,v) = cap(v,u) and zero diagonal. A raw instance holds edge
// weights on both triangles; normalize() rescales so both ordered-pair totals
// are 1.
class Instance {
 public:
  static Instance create(Vertex s, Vertex t, Matrix capacity, Demand demand);

  int num_vertices() const noexcept { return static_cast<int>(cap_.rows()); }
  Vertex s() const noexcept { return s_; }
  Vertex t() const noexcept { return t_; }
  bool normalized() const noexcept { return normalized_; }
  bool has_product_demand() const noexcept {
    return std::holds_alternative<ProductDemand>(demand_);
  }

  const Matrix& capacity() const noexcept { return cap_; }
  // Capacities before normalization (edge weights, both triangles).
  Matrix raw_capacity() const { return cap_ * cap_scale_; }
  // Demand materialized over ordered pairs. For product demand this is
  // mu(u)mu(v) before normalization and mu(u)mu(v)/D after.
  const Matrix& demand_matrix() const noexcept { return dem_; }
  const Demand& demand() const noexcept { return demand_; }
  // mu for product demand; throws kRequiresProductDemand otherwise.
  const std::vector<double>& mu() const;
  // D = 1 - sum mu^2 for product demand, 1 for general demand.
  double bridge() const noexcept { return bridge_; }

  Instance with_terminals(Vertex s, Vertex t) const;

 private:
  friend Instance normalize(const Instance& inst);
  Instance() = default;

  Vertex s_ = 0;
  Vertex t_ = 1;
  Matrix cap_;
  Matrix dem_;
  Demand demand_;
  double cap_scale_ = 1.0;
  double bridge_ = 1.0;
  bool normalized_ = false;
};

Instance normalize(const Instance& inst);

double cut_capacity(const Matrix& cap, const Cut& cut);  // sum over u in S, v not in S
Sparsity sparsity(const Instance& inst, const Cut& cut);
bool is_st_separating(const Instance& inst, const Cut& cut);
bool is_st_separating(const Cut& cut, Vertex s, Vertex t);

struct CutValue {
  Cut cut;
  Sparsity value;
};

inline constexpr int kDefaultOracleCap = 20;

// Exhaustive minimizers. Ties resolve to the lexicographically smallest
// sorted member list; the reported side contains s (st version) or vertex 0.
CutValue exact_st_opt(const Instance& inst, int max_n = kDefaultOracleCap);
CutValue exact_opt(const Instance& inst, int max_n = kDefaultOracleCap);

// Lexicographic comparison of sorted member lists.
bool lex_less(const std::vector<Vertex>& a, const std::vector<Vertex>& b);

// Random benchmark instances.
struct GnpModel {
  double p = 0.5;
};
struct GridModel {
  int width = 2;  // vertices laid row-major, last row may be partial
};
using GraphModel = std::variant<GnpModel, GridModel>;

enum class WeightLaw { kUnit, kUniform };
enum class DemandKind { kProduct, kUniformProduct, kDegreeProduct, kGeneral };

struct GenOptions {
  int n = 6;
  GraphModel model = GnpModel{};
  WeightLaw weights = WeightLaw::kUniform;
  DemandKind demand = DemandKind::kProduct;
  std::uint64_t seed = 0;
};

// Deterministic for fixed options. The graph is resampled until connected
// (at most 100 draws); s,t is the pair at maximum hop distance, ties
// lexicographic. Returns an unnormalized instance.
Instance gen_random(const GenOptions& options);

}  // namespace stcut
