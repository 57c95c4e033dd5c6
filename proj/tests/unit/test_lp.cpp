#include <doctest.h>

#include "fixtures.hpp"
#include "stcut/relax_lp.hpp"

using namespace stcut;
using fixtures::c4;
using fixtures::k2;
using fixtures::path3;

namespace {

LinearProgram make(int vars, std::vector<double> c) {
  LinearProgram lp;
  lp.num_vars = vars;
  lp.objective = Eigen::Map<Vector>(c.data(), vars);
  return lp;
}

void add_row(LinearProgram& lp, std::vector<std::pair<int, double>> coeffs, RowSense sense, double rhs) {
  lp.rows.push_back({std::move(coeffs), sense, rhs});
}

ErrorCode code_of(const LinearProgram& lp, SimplexMethod method) {
  SimplexOptions o;
  o.method = method;
  try {
    solve_simplex(lp, o);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("simplex solves a small LP by both routes") {
  LinearProgram lp = make(2, {-1, -1});
  add_row(lp, {{0, 1}, {1, 2}}, RowSense::kLessEqual, 4);
  add_row(lp, {{0, 3}, {1, 1}}, RowSense::kLessEqual, 6);
  for (SimplexMethod m : {SimplexMethod::kPrimal, SimplexMethod::kDual}) {
    SimplexOptions o;
    o.method = m;
    const SimplexResult r = solve_simplex(lp, o);
    CHECK(r.objective == doctest::Approx(-14.0 / 5.0));
    CHECK(r.x(0) == doctest::Approx(8.0 / 5.0));
    CHECK(r.x(1) == doctest::Approx(6.0 / 5.0));
  }
}

TEST_CASE("simplex reports infeasible and unbounded programs") {
  LinearProgram bad = make(1, {1});
  add_row(bad, {{0, 1}}, RowSense::kGreaterEqual, 2);
  add_row(bad, {{0, 1}}, RowSense::kLessEqual, 1);
  CHECK(code_of(bad, SimplexMethod::kPrimal) == ErrorCode::kInfeasible);
  CHECK(code_of(bad, SimplexMethod::kDual) == ErrorCode::kInfeasible);

  LinearProgram open = make(1, {-1});
  add_row(open, {{0, 1}}, RowSense::kGreaterEqual, 1);
  CHECK(code_of(open, SimplexMethod::kPrimal) == ErrorCode::kNumericalFailure);
  CHECK(code_of(open, SimplexMethod::kDual) == ErrorCode::kNumericalFailure);
}

TEST_CASE("primal and dual routes agree on random covering programs") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int vars = 2 + trial % 5;
    std::vector<double> c(vars);
    for (double& x : c) x = unit(gen);
    LinearProgram lp = make(vars, c);
    for (int r = 0; r < 3 + trial % 7; ++r) {
      std::vector<std::pair<int, double>> coeffs;
      for (int j = 0; j < vars; ++j) coeffs.emplace_back(j, unit(gen));
      add_row(lp, coeffs, r % 3 == 2 ? RowSense::kEqual : RowSense::kGreaterEqual, unit(gen));
    }
    SimplexOptions p;
    p.method = SimplexMethod::kPrimal;
    SimplexOptions d;
    d.method = SimplexMethod::kDual;
    double primal = 0.0;
    try {
      primal = solve_simplex(lp, p).objective;
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInfeasible);
      CHECK(code_of(lp, SimplexMethod::kDual) == ErrorCode::kInfeasible);
      continue;
    }
    const SimplexResult dual = solve_simplex(lp, d);
    CHECK(dual.objective == doctest::Approx(primal).epsilon(1e-8));
    CHECK(dual.max_violation <= 1e-8);
  }
}

TEST_CASE("build_lp counts rows") {
  const LpModel three = build_lp(normalize(path3()));
  CHECK(three.program.num_vars == 3);
  CHECK(three.num_demand_rows == 1);
  CHECK(three.num_st_rows == 1);
  CHECK(three.num_triangle_rows == 3);

  const LpModel two = build_lp(normalize(k2()));
  CHECK(two.program.num_vars == 1);
  CHECK(two.num_demand_rows == 1);
  CHECK(two.num_st_rows == 0);
  CHECK(two.num_triangle_rows == 0);
}

TEST_CASE("solve_lp examples") {
  CHECK(solve_lp(build_lp(normalize(path3()))).objective == doctest::Approx(0.75));
  CHECK(solve_lp(build_lp(normalize(k2()))).objective == doctest::Approx(1.0));
  CHECK(solve_lp(build_lp(normalize(c4()))).objective <= 0.75 + 1e-7);
}

TEST_CASE("bourgain_sets sizes and determinism") {
  const auto two = bourgain_sets(2, 1, 8);
  CHECK(two.size() == 8);
  for (const auto& a : two) {
    CHECK(!a.empty());
    CHECK(a.size() <= 2);
  }
  const auto eight = bourgain_sets(8, 1, 8);
  CHECK(eight.size() == 72);
  CHECK(bourgain_sets(8, 1, 8) == eight);
  CHECK(bourgain_sets(8, 2, 8) != eight);
}

TEST_CASE("assemble_g examples") {
  const SemiMetric d = fixtures::path3_metric();
  const EmbeddingMap single = assemble_g(d, {{0}}, 0, 2);
  for (int v = 0; v < 3; ++v) {
    CHECK(single(v, 0) == doctest::Approx(d(v, 0) / 2.0));
    CHECK(single(v, 1) == doctest::Approx(0.0));
  }
  const EmbeddingMap many = assemble_g(d, {{0}, {0}, {0}, {0}, {0}}, 0, 2);
  for (int u = 0; u < 3; ++u) {
    for (int v = 0; v < 3; ++v) CHECK(many.l1(u, v) == doctest::Approx(0.5 * std::abs(d(u, 0) - d(v, 0))));
  }
  const EmbeddingMap a = assemble_g(d, {{1}}, 0, 2);
  const double rows[3][2] = {{0.25, -0.25}, {0.25, 0.25}, {0.75, 0.25}};
  for (int v = 0; v < 3; ++v) {
    CHECK(a(v, 0) == doctest::Approx(rows[v][0]));
    CHECK(a(v, 1) == doctest::Approx(rows[v][1]));
  }
}

TEST_CASE("lp_pipeline examples") {
  const LpPipelineResult k = lp_pipeline(normalize(k2()), 0);
  CHECK(k.cut.side_of(0).members() == std::vector<Vertex>{0});
  CHECK(k.value.value() == doctest::Approx(1.0));
  const LpPipelineResult p = lp_pipeline(normalize(path3()), 1);
  CHECK(is_st_separating(normalize(path3()), p.cut));
  CHECK(p.value.value() == doctest::Approx(0.75));
}

TEST_CASE("LP relaxation is sound, the embedding contracts and the pipeline is deterministic") {
  for (int n = 3; n <= 9; ++n) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const Instance inst = fixtures::random_instance(n, seed, seed % 2 == 1);
      const double opt = exact_st_opt(inst).value.value();
      const LpSolution lp = solve_lp(build_lp(inst));
      CHECK(lp.objective <= opt + 1e-6);
      CHECK(check_st_separating(lp.d, inst.s(), inst.t(), 1e-7));
      CHECK(diameter_attained(lp.d, inst.s(), inst.t(), 1e-7));
      const auto sets = bourgain_sets(n, seed);
      const EmbeddingMap g = assemble_g(lp.d, sets, inst.s(), inst.t());
      for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = 0; v < n; ++v) CHECK(g.l1(u, v) <= lp.d(u, v) + 1e-9);
      }
      const LpPipelineResult a = lp_pipeline(inst, seed);
      const LpPipelineResult b = lp_pipeline(inst, seed);
      CHECK(a.cut == b.cut);
      CHECK(is_st_separating(inst, a.cut));
      CHECK(a.value.value() >= opt - 1e-12);
    }
  }
}
