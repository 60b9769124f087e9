#include "grekit/transport_slab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace grekit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

Eigen::VectorXd TransportConfig::velocities() const {
  Eigen::VectorXd v(n_v);
  const Index half = n_v / 2;
  const double h = dv();
  for (Index m = 0; m < half; ++m) {
    const double speed = (static_cast<double>(m) + 0.5) * h;
    v[half - 1 - m] = -speed;
    v[half + m] = speed;
  }
  return v;
}

Eigen::VectorXd TransportConfig::cell_centers() const {
  Eigen::VectorXd x(n_x);
  for (Index i = 0; i < n_x; ++i) x[i] = (static_cast<double>(i) + 0.5) * dx();
  return x;
}

double TransportConfig::max_dt() const {
  const double vmax_ordinate = (static_cast<double>(n_v / 2) - 0.5) * dv();
  return cfl_safety / (vmax_ordinate / dx() + sigma);
}

void TransportConfig::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidArgument("transport: length must be > 0");
  if (n_x < 1) throw InvalidArgument("transport: n_x must be >= 1");
  if (!(v_max > 0.0) || !std::isfinite(v_max)) throw InvalidArgument("transport: v_max must be > 0");
  if (n_v < 2 || n_v % 2 != 0) throw InvalidArgument("transport: n_v must be even and >= 2");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("transport: sigma must be >= 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidArgument("transport: t_end must be > 0");
  if (!(cfl_safety > 0.0 && cfl_safety < 1.0)) {
    throw CflViolation("transport: cfl_safety must lie in (0, 1)", 0);
  }
}

TransportScheme::TransportScheme(const TransportConfig& cfg, double dt)
    : cfg_(cfg), dt_(dt), vel_(cfg.velocities()) {
  cfg_.validate();
  const double courant = dt * (vel_.cwiseAbs().maxCoeff() / cfg_.dx() + cfg_.sigma);
  if (!(dt > 0.0) || courant > cfg_.cfl_safety * (1.0 + 1e-12)) {
    throw CflViolation("transport: dt (max|v|/dx + sigma) = " + std::to_string(courant) +
                           " exceeds cfl_safety",
                       0);
  }
}

Eigen::VectorXd isotropic_average(const TransportConfig& cfg, const Eigen::VectorXd& f) {
  Eigen::VectorXd avg(cfg.n_x);
  for (Index i = 0; i < cfg.n_x; ++i) avg[i] = f.segment(i * cfg.n_v, cfg.n_v).mean();
  return avg;
}

TransportScheme::Result TransportScheme::advance(const GridFunction& f) const {
  const auto& c = cfg_;
  if (f.size() != c.size()) throw DimensionMismatch("transport: state length does not match grid");
  const auto& fv = f.values();
  const double nu = dt_ / c.dx();
  const double coll = c.scattering == Scattering::Isotropic ? dt_ * c.sigma : 0.0;
  // Without scattering sigma is pure absorption.
  const double absorb = dt_ * c.sigma;
  const Eigen::VectorXd avg = isotropic_average(c, fv);

  Eigen::VectorXd next(c.size());
  double outflux = 0.0;
  for (Index i = 0; i < c.n_x; ++i) {
    for (Index m = 0; m < c.n_v; ++m) {
      const double v = vel_[m];
      const double self = fv[c.index(i, m)];
      double upwind = 0.0;
      if (v > 0.0 && i > 0) upwind = fv[c.index(i - 1, m)];
      if (v < 0.0 && i + 1 < c.n_x) upwind = fv[c.index(i + 1, m)];
      const double a = nu * std::abs(v);
      next[c.index(i, m)] = (1.0 - a - absorb) * self + a * upwind + coll * avg[i];
    }
  }
  const double dv = c.dv();
  for (Index m = 0; m < c.n_v; ++m) {
    const double v = vel_[m];
    const Index boundary = v > 0.0 ? c.index(c.n_x - 1, m) : c.index(0, m);
    outflux += dt_ * std::abs(v) * fv[boundary] * dv;
  }
  return {GridFunction(std::move(next)), outflux};
}

Eigen::MatrixXd TransportScheme::update_matrix() const {
  const auto& c = cfg_;
  const double nu = dt_ / c.dx();
  const double coll = c.scattering == Scattering::Isotropic ? dt_ * c.sigma : 0.0;
  const double absorb = dt_ * c.sigma;
  const double share = coll / static_cast<double>(c.n_v);
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(c.size(), c.size());
  for (Index i = 0; i < c.n_x; ++i) {
    for (Index m = 0; m < c.n_v; ++m) {
      const double v = vel_[m];
      const double a = nu * std::abs(v);
      const Index row = c.index(i, m);
      U(row, row) += 1.0 - a - absorb;
      if (v > 0.0 && i > 0) U(row, c.index(i - 1, m)) += a;
      if (v < 0.0 && i + 1 < c.n_x) U(row, c.index(i + 1, m)) += a;
      for (Index mm = 0; mm < c.n_v; ++mm) U(row, c.index(i, mm)) += share;
    }
  }
  return U;
}

double total_mass(const TransportConfig& cfg, const GridFunction& f) {
  if (f.size() != cfg.size()) throw DimensionMismatch("transport: state length does not match grid");
  return f.values().sum() * cfg.dx() * cfg.dv();
}

TransportStep transport_step(const TransportConfig& cfg, const GridFunction& f, double dt) {
  const TransportScheme scheme(cfg, dt);
  auto res = scheme.advance(f);
  PositiveOperator op(scheme.update_matrix(), cfg.measure(), cfg.measure());
  return {std::move(res.next), res.outflux, std::move(op)};
}

double TransportTrace::max_mass_increase_f() const {
  double worst = -kInf;
  for (std::size_t k = 1; k < rows.size(); ++k) worst = std::max(worst, rows[k].mass_f - rows[k - 1].mass_f);
  return worst;
}

double TransportTrace::max_mass_increase_g() const {
  double worst = -kInf;
  for (std::size_t k = 1; k < rows.size(); ++k) worst = std::max(worst, rows[k].mass_g - rows[k - 1].mass_g);
  return worst;
}

double TransportTrace::max_scaled_increase() const {
  double worst = -kInf;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto prev = rows[k - 1].entropy;
    const auto cur = rows[k].entropy;
    if (prev.is_infinite()) continue;
    if (cur.is_infinite()) return kInf;
    worst = std::max(worst, (cur.value() - prev.value()) / std::max(1.0, std::abs(prev.value())));
  }
  return worst;
}

double TransportTrace::min_lr_margin() const {
  double best = kInf;
  for (std::size_t k = 1; k < rows.size(); ++k) best = std::min(best, rows[k].lr_min_margin);
  return best;
}

double TransportTrace::min_g() const {
  double best = kInf;
  for (const auto& r : rows) best = std::min(best, r.min_g);
  return best;
}

TransportTrace run_transport(const TransportConfig& cfg, const GridFunction& f0,
                             const GridFunction& g0) {
  cfg.validate();
  if (f0.size() != cfg.size() || g0.size() != cfg.size()) {
    throw DimensionMismatch("run_transport: initial data length does not match grid");
  }
  const double dt_max = cfg.max_dt();
  const double ratio = cfg.t_end / dt_max;
  const auto steps =
      static_cast<std::size_t>(std::max(1.0, std::ceil(ratio - 1e-9 * std::max(1.0, ratio))));
  const double dt = cfg.t_end / static_cast<double>(steps);
  const TransportScheme scheme(cfg, dt);
  const PositiveOperator op(scheme.update_matrix(), cfg.measure(), cfg.measure());
  const Measure mu = cfg.measure();

  TransportTrace trace;
  trace.dt = dt;
  trace.update_kind = op.stochasticity();
  trace.entropy_monotone_expected = is_nonnegative(cfg.eta);
  trace.rows.reserve(steps + 1);

  GridFunction f = f0;
  GridFunction g = g0;
  auto record = [&](std::size_t k, double t, double lr) {
    const double gmin = g.values().minCoeff();
    if (!(gmin > 0.0)) {
      throw NonPositiveG("run_transport: g lost strict positivity", k);
    }
    trace.rows.push_back({k, t, total_mass(cfg, f), total_mass(cfg, g),
                          relative_entropy(cfg.eta, f, g, mu), lr, gmin});
  };
  record(0, 0.0, kNaN);
  for (std::size_t k = 0; k < steps; ++k) {
    const double lr = verify_lr(op, cfg.eta, f, g, 0.0).min_margin;
    f = scheme.advance(f).next;
    g = scheme.advance(g).next;
    const double t = k + 1 == steps ? cfg.t_end : static_cast<double>(k + 1) * dt;
    record(k + 1, t, lr);
  }
  return trace;
}

}  // namespace grekit
