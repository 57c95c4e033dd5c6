#include "stcut/instance.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "stcut/rng.hpp"

namespace stcut {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kZeroCapacity: return "ZeroCapacity";
    case ErrorCode::kZeroDemand: return "ZeroDemand";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kDisconnected: return "Disconnected";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kNotStSeparating: return "NotStSeparating";
    case ErrorCode::kViolatedProperty: return "ViolatedProperty";
    case ErrorCode::kDegenerateMap: return "DegenerateMap";
    case ErrorCode::kIterationLimit: return "IterationLimit";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kRequiresProductDemand: return "RequiresProductDemand";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kLemmaViolation: return "LemmaViolation";
    case ErrorCode::kCollapsedTerminals: return "CollapsedTerminals";
    case ErrorCode::kAmplificationExhausted: return "AmplificationExhausted";
    case ErrorCode::kIsolatedVertex: return "IsolatedVertex";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingTerminals: return "MissingTerminals";
    case ErrorCode::kBadProbability: return "BadProbability";
    case ErrorCode::kSizeCeiling: return "SizeCeiling";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Cut

Cut::Cut(int n, std::vector<Vertex> members) : mask_(static_cast<std::size_t>(n), false) {
  for (Vertex v : members) {
    if (v < 0 || v >= n) {
      throw Error(ErrorCode::kInvalidArgument, "cut member out of range");
    }
    mask_[v] = true;
  }
  for (Vertex v = 0; v < n; ++v) {
    if (mask_[v]) members_.push_back(v);
  }
  if (members_.empty() || static_cast<int>(members_.size()) == n) {
    throw Error(ErrorCode::kInvalidArgument, "cut side must be a proper nonempty subset");
  }
}

Cut Cut::from_mask(const std::vector<bool>& mask) {
  std::vector<Vertex> members;
  for (std::size_t v = 0; v < mask.size(); ++v) {
    if (mask[v]) members.push_back(static_cast<Vertex>(v));
  }
  return Cut(static_cast<int>(mask.size()), std::move(members));
}

Cut Cut::complement() const {
  std::vector<bool> flipped(mask_.size());
  for (std::size_t v = 0; v < mask_.size(); ++v) flipped[v] = !mask_[v];
  return from_mask(flipped);
}

// ---------------------------------------------------------------------------
// Sparsity

Sparsity Sparsity::finite(double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "finite sparsity must be a nonnegative real");
  }
  Sparsity s;
  s.value_ = value;
  s.finite_ = true;
  return s;
}

double Sparsity::value() const {
  if (!finite_) throw Error(ErrorCode::kInvalidArgument, "sparsity is infinite");
  return value_;
}

std::partial_ordering Sparsity::operator<=>(const Sparsity& other) const noexcept {
  if (finite_ && other.finite_) return value_ <=> other.value_;
  if (finite_) return std::partial_ordering::less;
  if (other.finite_) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

// ---------------------------------------------------------------------------
// Instance

namespace {

constexpr double kProbabilityTolerance = 1e-9;

void check_symmetric_nonnegative(const Matrix& m, const char* what) {
  const auto n = m.rows();
  if (m.cols() != n) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be square");
  for (Eigen::Index u = 0; u < n; ++u) {
    if (m(u, u) != 0.0) {
      throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must have zero diagonal");
    }
    for (Eigen::Index v = 0; v < n; ++v) {
      if (!std::isfinite(m(u, v)) || m(u, v) < 0.0) {
        throw Error(ErrorCode::kInvalidArgument, std::string(what) + " entries must be finite and >= 0");
      }
      if (m(u, v) != m(v, u)) {
        throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be symmetric");
      }
    }
  }
}

Matrix product_matrix(const std::vector<double>& mu) {
  const auto n = static_cast<Eigen::Index>(mu.size());
  Matrix dem = Matrix::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index v = 0; v < n; ++v) {
      if (u != v) dem(u, v) = mu[u] * mu[v];
    }
  }
  return dem;
}

}  // namespace

Instance Instance::create(Vertex s, Vertex t, Matrix capacity, Demand demand) {
  const int n = static_cast<int>(capacity.rows());
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "instance needs at least two vertices");
  if (s < 0 || s >= n || t < 0 || t >= n || s == t) {
    throw Error(ErrorCode::kMissingTerminals, "terminals must be distinct vertices in range");
  }
  check_symmetric_nonnegative(capacity, "capacity");
  if (capacity.sum() <= 0.0) throw Error(ErrorCode::kZeroCapacity, "total capacity is zero");

  Instance inst;
  inst.s_ = s;
  inst.t_ = t;
  inst.cap_ = std::move(capacity);

  if (auto* product = std::get_if<ProductDemand>(&demand)) {
    if (static_cast<int>(product->mu.size()) != n) {
      throw Error(ErrorCode::kInvalidArgument, "mu must have one entry per vertex");
    }
    double total = 0.0;
    for (double p : product->mu) {
      if (!std::isfinite(p) || p < 0.0) {
        throw Error(ErrorCode::kBadProbability, "mu entries must be finite and >= 0");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
      std::ostringstream msg;
      msg << "mu sums to " << total << ", expected 1";
      throw Error(ErrorCode::kBadProbability, msg.str());
    }
    if (std::abs(total - 1.0) > 1e-15) {
      for (double& p : product->mu) p /= total;
    }
    double squares = 0.0;
    for (double p : product->mu) squares += p * p;
    inst.bridge_ = 1.0 - squares;
    inst.dem_ = product_matrix(product->mu);
  } else {
    auto& general = std::get<GeneralDemand>(demand);
    if (general.weights.rows() != n) {
      throw Error(ErrorCode::kInvalidArgument, "demand matrix size mismatch");
    }
    check_symmetric_nonnegative(general.weights, "demand");
    inst.dem_ = general.weights;
    inst.bridge_ = 1.0;
  }
  if (inst.dem_.sum() <= 0.0) throw Error(ErrorCode::kZeroDemand, "total demand is zero");
  inst.demand_ = std::move(demand);
  return inst;
}

const std::vector<double>& Instance::mu() const {
  if (const auto* product = std::get_if<ProductDemand>(&demand_)) return product->mu;
  throw Error(ErrorCode::kRequiresProductDemand, "instance does not have product demand");
}

Instance Instance::with_terminals(Vertex s, Vertex t) const {
  const int n = num_vertices();
  if (s < 0 || s >= n || t < 0 || t >= n || s == t) {
    throw Error(ErrorCode::kMissingTerminals, "terminals must be distinct vertices in range");
  }
  Instance copy = *this;
  copy.s_ = s;
  copy.t_ = t;
  return copy;
}

Instance normalize(const Instance& inst) {
  if (inst.normalized_) return inst;
  const double cap_total = inst.cap_.sum();
  const double dem_total = inst.dem_.sum();
  if (cap_total <= 0.0) throw Error(ErrorCode::kZeroCapacity, "total capacity is zero");
  if (dem_total <= 0.0) throw Error(ErrorCode::kZeroDemand, "total demand is zero");
  Instance out = inst;
  out.cap_ = inst.cap_ / cap_total;
  out.cap_scale_ = inst.cap_scale_ * cap_total;
  if (inst.has_product_demand()) {
    // Always rebuilt from mu so repeated normalization is exact.
    out.dem_ = product_matrix(inst.mu()) / inst.bridge_;
  } else {
    out.dem_ = inst.dem_ / dem_total;
  }
  out.normalized_ = true;
  return out;
}

// ---------------------------------------------------------------------------
// Cut evaluation

double cut_capacity(const Matrix& cap, const Cut& cut) {
  double total = 0.0;
  const int n = cut.num_vertices();
  for (Vertex u : cut.members()) {
    for (Vertex v = 0; v < n; ++v) {
      if (!cut.contains(v)) total += cap(u, v);
    }
  }
  return total;
}

Sparsity sparsity(const Instance& inst, const Cut& cut) {
  if (!inst.normalized()) {
    throw Error(ErrorCode::kInvalidArgument, "sparsity requires a normalized instance");
  }
  if (cut.num_vertices() != inst.num_vertices()) {
    throw Error(ErrorCode::kInvalidArgument, "cut and instance sizes differ");
  }
  // Evaluate on the side with the smaller index set so S and its complement
  // produce bit-identical sums.
  const Cut side = cut.contains(0) ? cut : cut.complement();
  const double dem = cut_capacity(inst.demand_matrix(), side);
  if (dem <= 0.0) return Sparsity::infinite();
  return Sparsity::finite(cut_capacity(inst.capacity(), side) / dem);
}

bool is_st_separating(const Cut& cut, Vertex s, Vertex t) {
  return cut.contains(s) != cut.contains(t);
}

bool is_st_separating(const Instance& inst, const Cut& cut) {
  return is_st_separating(cut, inst.s(), inst.t());
}

bool lex_less(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// ---------------------------------------------------------------------------
// Oracles

namespace {

constexpr double kTieTolerance = 1e-12;

// Strictly better, or tied within tolerance and lexicographically smaller.
bool improves(const Sparsity& candidate, const std::vector<Vertex>& members,
              const std::optional<CutValue>& best) {
  if (!best) return true;
  if (candidate.is_finite() && best->value.is_finite()) {
    const double a = candidate.value();
    const double b = best->value.value();
    const double slack = kTieTolerance * std::max(1.0, std::abs(b));
    if (a < b - slack) return true;
    if (a > b + slack) return false;
    return lex_less(members, best->cut.members());
  }
  if (candidate.is_finite()) return true;
  if (best->value.is_finite()) return false;
  return lex_less(members, best->cut.members());
}

// Enumerates every subset of `free` joined with `fixed`, tracking the best.
CutValue enumerate(const Instance& inst, std::vector<Vertex> fixed, const std::vector<Vertex>& free) {
  const int n = inst.num_vertices();
  std::optional<CutValue> best;
  const std::uint64_t count = std::uint64_t{1} << free.size();
  std::vector<bool> mask(static_cast<std::size_t>(n));
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    std::fill(mask.begin(), mask.end(), false);
    for (Vertex v : fixed) mask[v] = true;
    int members = static_cast<int>(fixed.size());
    for (std::size_t i = 0; i < free.size(); ++i) {
      if (bits >> i & 1U) {
        mask[free[i]] = true;
        ++members;
      }
    }
    if (members == 0 || members == n) continue;
    Cut cut = Cut::from_mask(mask);
    Sparsity value = sparsity(inst, cut);
    if (improves(value, cut.members(), best)) best = CutValue{std::move(cut), value};
  }
  if (!best) throw Error(ErrorCode::kInvalidArgument, "no proper cut to enumerate");
  return *best;
}

void check_oracle_size(const Instance& inst, int max_n) {
  if (!inst.normalized()) throw Error(ErrorCode::kInvalidArgument, "oracle requires a normalized instance");
  if (inst.num_vertices() > max_n) {
    throw Error(ErrorCode::kTooLarge, "instance exceeds the exhaustive oracle size cap");
  }
}

}  // namespace

CutValue exact_st_opt(const Instance& inst, int max_n) {
  check_oracle_size(inst, max_n);
  std::vector<Vertex> free;
  for (Vertex v = 0; v < inst.num_vertices(); ++v) {
    if (v != inst.s() && v != inst.t()) free.push_back(v);
  }
  return enumerate(inst, {inst.s()}, free);
}

CutValue exact_opt(const Instance& inst, int max_n) {
  check_oracle_size(inst, max_n);
  std::vector<Vertex> free;
  for (Vertex v = 1; v < inst.num_vertices(); ++v) free.push_back(v);
  return enumerate(inst, {0}, free);
}

// ---------------------------------------------------------------------------
// Generators

namespace {

constexpr int kResampleBudget = 100;

std::vector<std::vector<int>> hop_distances(const Matrix& cap) {
  const int n = static_cast<int>(cap.rows());
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (int src = 0; src < n; ++src) {
    std::deque<int> queue{src};
    dist[src][src] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v = 0; v < n; ++v) {
        if (cap(u, v) > 0.0 && dist[src][v] < 0) {
          dist[src][v] = dist[src][u] + 1;
          queue.push_back(v);
        }
      }
    }
  }
  return dist;
}

double draw_weight(WeightLaw law, Rng& rng) {
  return law == WeightLaw::kUnit ? 1.0 : rng.uniform_open_closed();
}

Matrix draw_graph(const GenOptions& options, Rng& rng) {
  const int n = options.n;
  Matrix cap = Matrix::Zero(n, n);
  auto add = [&](int u, int v) {
    const double w = draw_weight(options.weights, rng);
    cap(u, v) = w;
    cap(v, u) = w;
  };
  if (n == 2) {
    add(0, 1);
    return cap;
  }
  if (const auto* gnp = std::get_if<GnpModel>(&options.model)) {
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (rng.bernoulli(gnp->p)) add(u, v);
      }
    }
  } else {
    const int width = std::get<GridModel>(options.model).width;
    for (int v = 0; v < n; ++v) {
      if ((v + 1) % width != 0 && v + 1 < n) add(v, v + 1);
      if (v + width < n) add(v, v + width);
    }
  }
  return cap;
}

}  // namespace

Instance gen_random(const GenOptions& options) {
  if (options.n < 2) throw Error(ErrorCode::kInvalidArgument, "n must be at least 2");
  if (const auto* gnp = std::get_if<GnpModel>(&options.model)) {
    if (!(gnp->p >= 0.0 && gnp->p <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "p must lie in [0,1]");
  } else if (std::get<GridModel>(options.model).width < 1) {
    throw Error(ErrorCode::kInvalidArgument, "grid width must be positive");
  }
  const int n = options.n;
  Rng rng(derive_seed(options.seed, 0x67656e));

  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    Matrix cap = draw_graph(options, rng);
    const auto dist = hop_distances(cap);
    bool connected = true;
    for (int v = 0; v < n && connected; ++v) connected = dist[0][v] >= 0;
    if (!connected) continue;

    Vertex s = 0;
    Vertex t = 1;
    int far = -1;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (dist[u][v] > far) {
          far = dist[u][v];
          s = u;
          t = v;
        }
      }
    }

    Demand demand;
    switch (options.demand) {
      case DemandKind::kProduct: {
        std::vector<double> mu(n);
        double total = 0.0;
        for (double& p : mu) total += (p = rng.uniform_open_closed());
        for (double& p : mu) p /= total;
        demand = ProductDemand{std::move(mu)};
        break;
      }
      case DemandKind::kUniformProduct:
        demand = ProductDemand{std::vector<double>(n, 1.0 / n)};
        break;
      case DemandKind::kDegreeProduct: {
        std::vector<double> mu(n);
        const double total = cap.sum();
        for (int v = 0; v < n; ++v) mu[v] = cap.row(v).sum() / total;
        demand = ProductDemand{std::move(mu)};
        break;
      }
      case DemandKind::kGeneral: {
        Matrix dem = Matrix::Zero(n, n);
        for (int u = 0; u < n; ++u) {
          for (int v = u + 1; v < n; ++v) dem(u, v) = dem(v, u) = rng.uniform_open_closed();
        }
        demand = GeneralDemand{std::move(dem)};
        break;
      }
    }
    return Instance::create(s, t, std::move(cap), std::move(demand));
  }
  throw Error(ErrorCode::kDisconnected, "no connected graph within the resample budget");
}

}  // namespace stcut
