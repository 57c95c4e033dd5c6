#include <doctest.h>

#include "fixtures.hpp"

using namespace stcut;
using fixtures::c4;
using fixtures::k2;
using fixtures::path3;

namespace {

double sp(const Instance& inst, std::vector<Vertex> side) {
  return sparsity(inst, Cut(inst.num_vertices(), std::move(side))).value();
}

}  // namespace

TEST_CASE("normalize K2 puts all mass on the single pair") {
  const Instance n = normalize(k2());
  CHECK(n.normalized());
  // Two ordered entries carry unit total mass.
  CHECK(n.capacity()(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(n.capacity()(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(n.demand_matrix()(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(n.capacity().sum() == doctest::Approx(1.0));
  CHECK(n.demand_matrix().sum() == doctest::Approx(1.0));
  CHECK(n.bridge() == doctest::Approx(0.5));
  CHECK(n.raw_capacity()(0, 1) == doctest::Approx(5.0));
}

TEST_CASE("normalize PATH3") {
  const Instance n = normalize(path3());
  CHECK(n.capacity()(0, 1) == doctest::Approx(0.25));
  CHECK(n.capacity()(2, 1) == doctest::Approx(0.25));
  CHECK(n.capacity()(0, 2) == 0.0);
  for (auto [u, v] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
    CHECK(n.demand_matrix()(u, v) + n.demand_matrix()(v, u) == doctest::Approx(1.0 / 3.0));
  }
}

TEST_CASE("normalize is idempotent") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance once = fixtures::random_instance(6, seed);
    const Instance twice = normalize(once);
    CHECK((once.capacity() - twice.capacity()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((once.demand_matrix() - twice.demand_matrix()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("sparsity examples") {
  CHECK(sp(normalize(k2()), {0}) == doctest::Approx(1.0));
  CHECK(sp(normalize(path3()), {0, 1}) == doctest::Approx(0.75));
  CHECK(sp(normalize(c4()), {0, 1}) == doctest::Approx(0.75));
}

TEST_CASE("is_st_separating examples") {
  const Instance p = path3();
  CHECK(is_st_separating(p, Cut(3, {0})));
  CHECK_FALSE(is_st_separating(p, Cut(3, {1})));
  CHECK_FALSE(is_st_separating(p, Cut(3, {0, 2})));
}

TEST_CASE("exact_st_opt examples") {
  const CutValue p = exact_st_opt(normalize(path3()));
  CHECK(p.cut.members() == std::vector<Vertex>{0});
  CHECK(p.value.value() == doctest::Approx(0.75));

  const Instance c = normalize(c4());
  const CutValue q = exact_st_opt(c);
  CHECK(q.cut.members() == std::vector<Vertex>{0, 1});
  CHECK(q.value.value() == doctest::Approx(0.75));
  CHECK(sp(c, {0}) == doctest::Approx(1.0));
  CHECK(sp(c, {0, 3}) == doctest::Approx(0.75));
  CHECK(sp(c, {0, 1, 3}) == doctest::Approx(1.0));

  const CutValue k = exact_st_opt(normalize(k2()));
  CHECK(k.cut.members() == std::vector<Vertex>{0});
  CHECK(k.value.value() == doctest::Approx(1.0));
}

TEST_CASE("exact_opt examples") {
  CHECK(exact_opt(normalize(path3())).value.value() == doctest::Approx(0.75));
  CHECK(exact_opt(normalize(c4())).value.value() == doctest::Approx(0.75));
  CHECK(exact_opt(normalize(k2())).value.value() == doctest::Approx(1.0));
}

TEST_CASE("gen_random is deterministic and K2-shaped at n = 2") {
  GenOptions o;
  o.n = 6;
  o.seed = 7;
  const Instance a = gen_random(o);
  const Instance b = gen_random(o);
  CHECK(a.raw_capacity() == b.raw_capacity());
  CHECK(a.mu() == b.mu());
  CHECK(a.s() == b.s());
  CHECK(a.t() == b.t());

  for (GraphModel model : {GraphModel{GnpModel{0.5}}, GraphModel{GridModel{3}}}) {
    o.n = 2;
    o.model = model;
    const Instance k = gen_random(o);
    CHECK(k.num_vertices() == 2);
    CHECK(k.raw_capacity()(0, 1) > 0.0);
  }
}

TEST_CASE("generated instances satisfy the invariants after normalize") {
  for (int n = 2; n <= 10; ++n) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const Instance inst = fixtures::random_instance(n, seed, seed % 2 == 1);
      CHECK(inst.capacity().sum() == doctest::Approx(1.0));
      CHECK(inst.demand_matrix().sum() == doctest::Approx(1.0));
      CHECK((inst.capacity() - inst.capacity().transpose()).cwiseAbs().maxCoeff() == 0.0);
      CHECK(inst.capacity().diagonal().cwiseAbs().maxCoeff() == 0.0);
      CHECK(inst.capacity().minCoeff() >= 0.0);
      CHECK(inst.s() != inst.t());
    }
  }
}

TEST_CASE("sparsity is invariant under scaling capacities and demands") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    GenOptions o;
    o.n = 6;
    o.seed = seed;
    o.demand = DemandKind::kGeneral;
    const Instance raw = gen_random(o);
    const auto& dem = std::get<GeneralDemand>(raw.demand()).weights;
    const Instance scaled = Instance::create(raw.s(), raw.t(), raw.raw_capacity() * 3.5, GeneralDemand{dem * 0.02});
    const Instance a = normalize(raw);
    const Instance b = normalize(scaled);
    for (unsigned mask = 1; mask + 1 < (1U << 6); ++mask) {
      std::vector<bool> side(6);
      for (int v = 0; v < 6; ++v) side[v] = (mask >> v) & 1U;
      const Cut cut = Cut::from_mask(side);
      const Sparsity x = sparsity(a, cut);
      const Sparsity y = sparsity(b, cut);
      REQUIRE(x.is_finite() == y.is_finite());
      if (x.is_finite()) CHECK(std::abs(x.value() - y.value()) <= 1e-12 * std::max(1.0, x.value()));
    }
  }
}

TEST_CASE("oracle sandwich and complement symmetry") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Instance inst = fixtures::random_instance(7, seed, seed % 2 == 1);
    const double opt = exact_opt(inst).value.value();
    const double opt_st = exact_st_opt(inst).value.value();
    CHECK(opt <= opt_st + 1e-12);
    for (unsigned mask = 1; mask + 1 < (1U << 7); ++mask) {
      std::vector<bool> side(7);
      for (int v = 0; v < 7; ++v) side[v] = (mask >> v) & 1U;
      const Cut cut = Cut::from_mask(side);
      const Sparsity x = sparsity(inst, cut);
      CHECK(x == sparsity(inst, cut.complement()));
      CHECK(x.value() >= opt - 1e-12);
      if (is_st_separating(inst, cut)) CHECK(x.value() >= opt_st - 1e-12);
    }
  }
}

TEST_CASE("some singleton cut has sparsity at most one under general demand") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenOptions o;
    o.n = 3 + static_cast<int>(seed % 6);
    o.seed = seed;
    o.demand = DemandKind::kGeneral;
    const Instance inst = normalize(gen_random(o));
    double best = 1e300;
    for (Vertex v = 0; v < inst.num_vertices(); ++v) {
      best = std::min(best, sparsity(inst, Cut(inst.num_vertices(), {v})).value_or(1e300));
    }
    CHECK(best <= 1.0 + 1e-9);
  }
}
