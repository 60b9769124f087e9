#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "grekit/config.hpp"
#include "grekit/growth_frag.hpp"

using namespace grekit;

namespace {

GrowthConfig frag_only(Index n) {
  GrowthConfig cfg;
  cfg.n_cells = n;
  cfg.total_frag_rate = [](double x) { return x; };
  cfg.frag_kernel = [](double y, double) { return 2.0 * y / y; };
  return cfg;
}

GrowthConfig drift_only(Index n) {
  GrowthConfig cfg;
  cfg.n_cells = n;
  cfg.velocity = [](double) { return 1.0; };
  return cfg;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Index>(v.size()));
  Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

}  // namespace

TEST_CASE("zero coefficients give A = 0 and a frozen state") {
  GrowthConfig cfg;
  cfg.n_cells = 7;
  const auto A = build_generator(cfg);
  CHECK(A.matrix.isZero(0.0));
  CHECK(A.max_rate() == 0.0);
  const GridFunction n(Eigen::VectorXd::LinSpaced(7, 0.0, 1.0));
  const auto tr = run_growth(cfg, n, GridFunction(Eigen::VectorXd::Ones(7)));
  CHECK(tr.rows.size() == 2);
  CHECK(tr.conservation_residual() == 0.0);
  CHECK(tr.rows.back().entropy == tr.rows.front().entropy);
}

TEST_CASE("drift generator for three cells") {
  auto cfg = drift_only(3);
  const auto A = build_generator(cfg);
  const double h = 1.0 / 3.0;
  Eigen::MatrixXd want(3, 3);
  want << -1 / h, 0, 0, 1 / h, -1 / h, 0, 0, 1 / h, -1 / h;
  CHECK((A.matrix - want).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("drift step moves half a cell and solves the dual") {
  const auto A = build_generator(drift_only(3));
  const double dt = A.dx / 2.0;
  const auto s = step(A, GridFunction(vec({1, 0, 0})), GridFunction(vec({4, 2, 1})), dt);
  CHECK((s.n_next.values() - vec({0.5, 0.5, 0})).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((s.psi_next.values() - vec({6, 2, 2})).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(s.update.stochasticity() == Stochasticity::Stochastic);
}

TEST_CASE("binary fragmentation preserves the first moment column by column") {
  for (Index n : {1, 2, 5, 40}) {
    const auto A = build_generator(frag_only(n));
    const Eigen::RowVectorXd moments = A.centers.transpose() * A.matrix;
    CHECK(moments.cwiseAbs().maxCoeff() <= 1e-12 * A.matrix.cwiseAbs().maxCoeff());
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (i != j) CHECK(A.matrix(i, j) >= 0.0);
  }
}

TEST_CASE("psi = x is invariant under pure fragmentation") {
  auto cfg = frag_only(30);
  const auto A = build_generator(cfg);
  const double dt = 0.9 / A.max_rate();
  const auto s = step(A, GridFunction(Eigen::VectorXd::Ones(30)), GridFunction(A.centers), dt);
  CHECK((s.psi_next.values() - A.centers).cwiseAbs().maxCoeff() <= 1e-12);

  // The backward recursion psi^k = U^T psi^{k+1} is a contraction, so the
  // invariant survives long runs in terminal mode.
  cfg.psi0 = [](double x) { return x; };
  cfg.dual_mode = DualMode::Terminal;
  cfg.t_end = 500.0 * dt;
  const GridFunction n(Eigen::VectorXd::Ones(30));
  const auto tr = run_growth(cfg, n, n);
  CHECK(tr.rows.size() == 501);
  CHECK(tr.conservation_residual() <= 1e-12);
  CHECK(tr.rows.front().weighted_mass == doctest::Approx(A.dx * A.centers.sum()).epsilon(1e-12));
}

TEST_CASE("forward dual amplifies round-off") {
  // U^{-T} has eigenvalues up to 1 / (1 - theta), so even the exact
  // invariant psi = x drifts away in forward mode.
  auto cfg = frag_only(30);
  cfg.psi0 = [](double x) { return x; };
  cfg.t_end = 400.0;
  const GridFunction n(Eigen::VectorXd::Ones(30));
  CHECK_THROWS_AS(run_growth(cfg, n, n), DualPositivityLost);
}

TEST_CASE("spike under binary fragmentation: entropy decays and mass is kept") {
  const auto setup = growth_setup_from_json(growth_preset("binary-fragmentation"));
  REQUIRE(setup.config.n_cells == 200);
  auto cfg = setup.config;
  const auto tr = run_growth(cfg, setup.n0, setup.m0);
  CHECK(tr.rows.size() > 10);
  CHECK(tr.conservation_residual() <= 1e-10);
  CHECK(tr.max_scaled_increase() <= 1e-10);
  CHECK(tr.min_csiszar_margin() >= -1e-10);
  CHECK(tr.max_stochasticity_residual() <= 1e-12);
  CHECK(tr.rows.back().t == cfg.t_end);
  CHECK(tr.rows.back().entropy.value() < tr.rows.front().entropy.value());
}

TEST_CASE("drift-only with a terminal dual keeps weighted mass while plain mass leaks") {
  const auto setup = growth_setup_from_json(growth_preset("drift-only"));
  const auto& cfg = setup.config;
  REQUIRE(cfg.dual_mode == DualMode::Terminal);
  const auto tr = run_growth(cfg, setup.n0, setup.m0);
  CHECK(tr.conservation_residual() <= 1e-10);
  CHECK(tr.max_scaled_increase() <= 1e-10);

  // Replay the primal without weights: the outflow at x_max removes mass.
  const auto A = build_generator(cfg);
  Eigen::MatrixXd U = tr.dt * A.matrix;
  U.diagonal().array() += 1.0;
  Eigen::VectorXd n = setup.n0.values();
  for (std::size_t k = 1; k + 1 < tr.rows.size(); ++k) n = U * n;
  CHECK(n.sum() < 0.99 * setup.n0.values().sum());
}

TEST_CASE("forward dual under drift loses positivity") {
  auto cfg = drift_only(50);
  cfg.psi0 = [](double) { return 1.0; };
  const GridFunction n(Eigen::VectorXd::Ones(50));
  CHECK_THROWS_AS(run_growth(cfg, n, n), DualPositivityLost);
  try {
    run_growth(cfg, n, n);
  } catch (const PreconditionLost& e) {
    CHECK(e.step() < 5);
  }
}

TEST_CASE("growth error paths") {
  auto cfg = frag_only(10);
  cfg.dt_safety = 1.0;
  CHECK_THROWS_AS(build_generator(cfg), CflViolation);
  cfg.dt_safety = 0.0;
  CHECK_THROWS_AS(build_generator(cfg), CflViolation);

  auto bad = frag_only(10);
  bad.frag_kernel = [](double, double) { return -1.0; };
  CHECK_THROWS_AS(build_generator(bad), InvalidKernel);
  bad.frag_kernel = [](double, double) { return 0.0; };
  CHECK_THROWS_AS(build_generator(bad), InvalidKernel);

  const auto A = build_generator(frag_only(4));
  const GridFunction n(Eigen::VectorXd::Ones(4));
  CHECK_THROWS_AS(step(A, n, n, 1.0 / A.max_rate()), CflViolation);
  CHECK_THROWS_AS(step(A, GridFunction(Eigen::VectorXd::Ones(3)), n, 0.1), DimensionMismatch);
  CHECK_THROWS_AS(run_growth(frag_only(4), GridFunction(Eigen::VectorXd::Ones(3)), n), DimensionMismatch);
}
