#include <doctest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "grekit/config.hpp"
#include "grekit/transport_slab.hpp"

using namespace grekit;

namespace {

TransportConfig small(double sigma, Scattering s = Scattering::Isotropic) {
  TransportConfig cfg;
  cfg.n_x = 10;
  cfg.n_v = 4;
  cfg.sigma = sigma;
  cfg.scattering = s;
  return cfg;
}

}  // namespace

TEST_CASE("ordinates are symmetric without a zero") {
  const auto cfg = small(0.0);
  const auto v = cfg.velocities();
  REQUIRE(v.size() == 4);
  CHECK(v[0] == -0.75);
  CHECK(v[1] == -0.25);
  CHECK(v[2] == 0.25);
  CHECK(v[3] == 0.75);
  CHECK(cfg.max_dt() == doctest::Approx(0.9 / (0.75 / 0.1)).epsilon(1e-15));
}

TEST_CASE("interior streaming conserves mass exactly") {
  const auto cfg = small(0.0);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(cfg.size());
  for (Index m = 0; m < cfg.n_v; ++m) f[cfg.index(5, m)] = 1.0 + m;
  const auto s = transport_step(cfg, GridFunction(f), cfg.max_dt());
  CHECK(s.outflux == 0.0);
  CHECK(total_mass(cfg, s.f_next) == doctest::Approx(total_mass(cfg, GridFunction(f))).epsilon(1e-15));
  // the positive ordinates moved right, the negative ones left
  CHECK(s.f_next[cfg.index(6, 3)] > 0.0);
  CHECK(s.f_next[cfg.index(4, 0)] > 0.0);
  CHECK(s.f_next[cfg.index(4, 3)] == 0.0);
}

TEST_CASE("beam in the last cell leaves through the right face") {
  const auto cfg = small(0.0);
  const double dt = cfg.max_dt();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(cfg.size());
  f[cfg.index(cfg.n_x - 1, 3)] = 2.0;
  const GridFunction f0(f);
  const auto s = transport_step(cfg, f0, dt);
  const double want = dt * 0.75 * 2.0 * cfg.dv();
  CHECK(s.outflux == doctest::Approx(want).epsilon(1e-15));
  CHECK(total_mass(cfg, f0) - total_mass(cfg, s.f_next) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("isotropic uniform interior state is a fixed point of K") {
  auto cfg = small(1.0);
  const Eigen::VectorXd f = Eigen::VectorXd::Constant(cfg.size(), 3.0);
  const double dt = cfg.max_dt();
  const auto with = transport_step(cfg, GridFunction(f), dt);
  cfg.sigma = 0.0;
  const auto without = transport_step(cfg, GridFunction(f), dt);
  for (Index i = 1; i + 1 < cfg.n_x; ++i)
    for (Index m = 0; m < cfg.n_v; ++m)
      CHECK(with.f_next[cfg.index(i, m)] == doctest::Approx(without.f_next[cfg.index(i, m)]).epsilon(1e-15));
  const auto avg = isotropic_average(cfg, f);
  CHECK(avg.isApproxToConstant(3.0));
}

TEST_CASE("stencil agrees with the update matrix") {
  for (auto sc : {Scattering::Isotropic, Scattering::None}) {
    const auto cfg = small(0.7, sc);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd f(cfg.size());
    for (auto& x : f) x = u(rng);
    const auto s = transport_step(cfg, GridFunction(f), cfg.max_dt());
    const Eigen::VectorXd via_matrix = s.update.matrix() * f;
    CHECK((via_matrix - s.f_next.values()).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(s.update.stochasticity() == Stochasticity::Substochastic);
    CHECK(s.update.matrix().minCoeff() >= 0.0);
    CHECK(s.update.matrix().diagonal().minCoeff() >= 1.0 - cfg.cfl_safety - 1e-15);
    const double lost = total_mass(cfg, GridFunction(f)) - total_mass(cfg, s.f_next);
    if (sc == Scattering::Isotropic) {
      CHECK(lost == doctest::Approx(s.outflux).epsilon(1e-12));
    } else {
      CHECK(lost >= s.outflux);
    }
  }
}

TEST_CASE("collision operator keeps the velocity integral") {
  const auto cfg = small(1.0);
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd f(cfg.size());
  for (auto& x : f) x = u(rng);
  const auto avg = isotropic_average(cfg, f);
  for (Index i = 0; i < cfg.n_x; ++i) {
    CHECK(avg[i] * static_cast<double>(cfg.n_v) * cfg.dv() ==
          doctest::Approx(f.segment(i * cfg.n_v, cfg.n_v).sum() * cfg.dv()).epsilon(1e-14));
  }
}

TEST_CASE("beam-isotropic run") {
  const auto setup = transport_setup_from_json(transport_preset("beam-isotropic"));
  REQUIRE(setup.config.n_x == 100);
  REQUIRE(setup.config.n_v == 8);
  const auto tr = run_transport(setup.config, setup.f0, setup.g0);
  CHECK(tr.update_kind == Stochasticity::Substochastic);
  CHECK(tr.entropy_monotone_expected);
  CHECK(tr.max_scaled_increase() <= 1e-10);
  CHECK(tr.max_mass_increase_f() <= 1e-12 * tr.rows[0].mass_f);
  CHECK(tr.max_mass_increase_g() <= 1e-12 * tr.rows[0].mass_g);
  CHECK(tr.min_lr_margin() >= -1e-9);
  CHECK(tr.min_g() > 0.0);
  CHECK(tr.rows.back().t == setup.config.t_end);

  // step 1 against the integrated check on the same update
  const auto s = transport_step(setup.config, setup.f0, tr.dt);
  const auto cs = verify_csiszar(s.update, setup.config.eta, setup.f0, setup.g0, 1e-9);
  CHECK(cs.passed);
  CHECK(tr.rows[0].entropy.value() - tr.rows[1].entropy.value() ==
        doctest::Approx(cs.margins[0]).epsilon(1e-9));
}

TEST_CASE("f0 = g0 keeps the entropy at zero") {
  auto setup = transport_setup_from_json(transport_preset("beam-isotropic"));
  const auto tr = run_transport(setup.config, setup.g0, setup.g0);
  for (const auto& r : tr.rows) CHECK(r.entropy.value() == 0.0);
  CHECK(tr.rows.back().mass_g < tr.rows.front().mass_g);
}

TEST_CASE("f0 = 2 g0 stays proportional without scattering") {
  const auto setup = transport_setup_from_json(transport_preset("free-streaming"));
  REQUIRE(setup.config.sigma == 0.0);
  const auto tr = run_transport(setup.config, setup.f0, setup.g0);
  const double eta2 = setup.config.eta(2.0).value();
  for (const auto& r : tr.rows) {
    CHECK(r.mass_f == doctest::Approx(2.0 * r.mass_g).epsilon(1e-12));
    CHECK(r.entropy.value() == doctest::Approx(eta2 * r.mass_g).epsilon(1e-12));
  }
  CHECK(tr.rows.back().mass_g < tr.rows.front().mass_g);
}

TEST_CASE("transport error paths") {
  auto cfg = small(1.0);
  CHECK_THROWS_AS(TransportScheme(cfg, 2.0 * cfg.max_dt()), CflViolation);
  cfg.cfl_safety = 1.0;
  CHECK_THROWS_AS(cfg.validate(), CflViolation);
  auto odd = small(0.0);
  odd.n_v = 3;
  CHECK_THROWS_AS(odd.validate(), InvalidArgument);
  const auto ok = small(0.0);
  const GridFunction ones(Eigen::VectorXd::Ones(ok.size()));
  CHECK_THROWS_AS(run_transport(ok, ones, GridFunction(Eigen::VectorXd::Zero(ok.size()))), NonPositiveG);
  CHECK_THROWS_AS(transport_step(ok, GridFunction(Eigen::VectorXd::Ones(3)), ok.max_dt()),
                  DimensionMismatch);
}
