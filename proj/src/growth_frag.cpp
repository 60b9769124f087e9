#include "grekit/growth_frag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace grekit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t step_count(double t_end, double dt) {
  const double r = t_end / dt;
  return static_cast<std::size_t>(std::max(1.0, std::ceil(r - 1e-9 * std::max(1.0, r))));
}

Eigen::VectorXd sample(const Profile& p, const Eigen::VectorXd& x) {
  Eigen::VectorXd out(x.size());
  for (Index j = 0; j < x.size(); ++j) out[j] = p(x[j]);
  return out;
}

void check_courant(const Generator& A, double dt, std::size_t k) {
  if (!(dt > 0.0) || !(dt * A.max_rate() < 1.0)) {
    throw CflViolation("growth step: dt * max|A_jj| = " + std::to_string(dt * A.max_rate()) +
                           " must lie in [0, 1)",
                       k);
  }
}

Eigen::MatrixXd update_matrix(const Generator& A, double dt) {
  Eigen::MatrixXd U = dt * A.matrix;
  U.diagonal().array() += 1.0;
  // Off-diagonals are nonnegative; the diagonal is >= 1 - dt max|A_jj| > 0.
  return U;
}

// Solves U^T psi_next = psi with one round of iterative refinement.
Eigen::VectorXd adjoint_solve(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu_t,
                              const Eigen::MatrixXd& U, const Eigen::VectorXd& psi) {
  Eigen::VectorXd x = lu_t.solve(psi);
  const Eigen::VectorXd r = psi - U.transpose() * x;
  x += lu_t.solve(r);
  return x;
}

void check_dual(const Eigen::VectorXd& psi, std::size_t k) {
  for (Index j = 0; j < psi.size(); ++j) {
    if (!(psi[j] > 0.0) || !std::isfinite(psi[j])) {
      throw DualPositivityLost("dual weight psi[" + std::to_string(j) + "] = " +
                                   std::to_string(psi[j]) + " is not strictly positive",
                               k);
    }
  }
}

}  // namespace

Eigen::VectorXd GrowthConfig::centers() const {
  Eigen::VectorXd x(n_cells);
  const double h = dx();
  for (Index j = 0; j < n_cells; ++j) x[j] = (static_cast<double>(j) + 0.5) * h;
  return x;
}

void GrowthConfig::validate() const {
  if (!(x_max > 0.0) || !std::isfinite(x_max)) throw InvalidArgument("growth: x_max must be > 0");
  if (n_cells < 1) throw InvalidArgument("growth: n_cells must be >= 1");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidArgument("growth: t_end must be > 0");
  if (!(dt_safety > 0.0 && dt_safety < 1.0)) {
    throw CflViolation("growth: dt_safety must lie in (0, 1)", 0);
  }
  const auto x = centers();
  for (Index j = 0; j < n_cells; ++j) {
    if (!(velocity(x[j]) >= 0.0)) throw InvalidArgument("growth: velocity must be >= 0");
    if (!(total_frag_rate(x[j]) >= 0.0)) throw InvalidArgument("growth: B must be >= 0");
    if (!std::isfinite(death_rate(x[j]))) throw InvalidArgument("growth: death rate not finite");
    if (!(psi0(x[j]) > 0.0) || !std::isfinite(psi0(x[j]))) {
      throw InvalidArgument("growth: psi0 must be strictly positive");
    }
  }
}

double Generator::max_rate() const { return matrix.diagonal().cwiseAbs().maxCoeff(); }

Generator build_generator(const GrowthConfig& cfg) {
  cfg.validate();
  const Index n = cfg.n_cells;
  const double h = cfg.dx();
  Generator gen;
  gen.dx = h;
  gen.centers = cfg.centers();
  const auto& x = gen.centers;
  gen.matrix = Eigen::MatrixXd::Zero(n, n);
  auto& A = gen.matrix;

  // -d/dx (v n), upwind, ghost value 0 at x = 0, free outflow at x_max
  const Eigen::VectorXd v = sample(cfg.velocity, x);
  for (Index j = 0; j < n; ++j) {
    A(j, j) -= v[j] / h;
    if (j + 1 < n) A(j + 1, j) += v[j] / h;
  }

  const Eigen::VectorXd B = sample(cfg.total_frag_rate, x);
  for (Index j = 0; j < n; ++j) {
    if (B[j] == 0.0) continue;
    Eigen::VectorXd raw = Eigen::VectorXd::Zero(j + 1);
    for (Index i = 0; i <= j; ++i) {
      const double b = cfg.frag_kernel(x[j], x[i]);
      if (!(b >= 0.0) || !std::isfinite(b)) {
        throw InvalidKernel("fragmentation kernel must be finite and >= 0");
      }
      raw[i] = b * (i == j ? 0.5 * h : h);
    }
    const double moment = x.head(j + 1).dot(raw);
    if (!(moment > 0.0)) {
      throw InvalidKernel("fragmentation kernel has zero first moment in cell " +
                          std::to_string(j) + " while B > 0");
    }
    raw *= x[j] * B[j] / moment;
    for (Index i = 0; i < j; ++i) A(i, j) += raw[i];
    A(j, j) += raw[j] - B[j];
  }

  for (Index j = 0; j < n; ++j) A(j, j) -= cfg.death_rate(x[j]);
  return gen;
}

GrowthStep step(const Generator& A, const GridFunction& n, const GridFunction& psi, double dt) {
  if (n.size() != A.size() || psi.size() != A.size()) {
    throw DimensionMismatch("growth step: state length does not match the generator");
  }
  check_courant(A, dt, 0);
  check_dual(psi.values(), 0);
  const Eigen::MatrixXd U = update_matrix(A, dt);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu_t(U.transpose());
  Eigen::VectorXd psi_next = adjoint_solve(lu_t, U, psi.values());
  check_dual(psi_next, 0);
  GridFunction psi_out(std::move(psi_next));
  PositiveOperator op(U, Measure(A.dx * psi.values()), Measure(A.dx * psi_out.values()));
  return {apply(op, n), std::move(psi_out), std::move(op)};
}

double GrowthTrace::conservation_residual() const {
  if (rows.empty()) return 0.0;
  const double m0 = rows.front().weighted_mass;
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(r.weighted_mass - m0) / m0);
  return worst;
}

double GrowthTrace::max_scaled_increase() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto prev = rows[k - 1].entropy;
    const auto cur = rows[k].entropy;
    if (prev.is_infinite()) continue;
    if (cur.is_infinite()) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, (cur.value() - prev.value()) / std::max(1.0, std::abs(prev.value())));
  }
  return worst;
}

double GrowthTrace::min_csiszar_margin() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < rows.size(); ++k) best = std::min(best, rows[k].csiszar_margin);
  return best;
}

double GrowthTrace::max_stochasticity_residual() const {
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.stochasticity_residual);
  return worst;
}

GrowthTrace run_growth(const GrowthConfig& cfg, const GridFunction& n0, const GridFunction& m0) {
  const Generator A = build_generator(cfg);
  if (n0.size() != A.size() || m0.size() != A.size()) {
    throw DimensionMismatch("run_growth: initial data length does not match n_cells");
  }
  const double rate = A.max_rate();
  const double dt = rate > 0.0 ? cfg.dt_safety / rate : cfg.t_end;
  const std::size_t steps = step_count(cfg.t_end, dt);
  const double dt_last = cfg.t_end - static_cast<double>(steps - 1) * dt;

  const Eigen::MatrixXd U_full = update_matrix(A, dt);
  const Eigen::MatrixXd U_last = steps > 1 ? update_matrix(A, dt_last) : U_full;
  check_courant(A, dt, 0);
  check_courant(A, dt_last, steps - 1);

  // psi^0..psi^steps; filled up front in terminal mode, on the fly otherwise.
  std::vector<Eigen::VectorXd> psi_terminal;
  if (cfg.dual_mode == DualMode::Terminal) {
    psi_terminal.resize(steps + 1);
    psi_terminal[steps] = sample(cfg.psi0, A.centers);
    for (std::size_t k = steps; k-- > 0;) {
      const auto& U = (k + 1 == steps) ? U_last : U_full;
      psi_terminal[k] = U.transpose() * psi_terminal[k + 1];
      check_dual(psi_terminal[k], k);
    }
  }

  std::optional<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_full;
  std::optional<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_last;
  if (cfg.dual_mode == DualMode::Forward) {
    lu_full.emplace(U_full.transpose());
    lu_last.emplace(U_last.transpose());
  }

  GrowthTrace trace;
  trace.dt = dt;
  trace.rows.reserve(steps + 1);

  GridFunction n = n0;
  GridFunction m = m0;
  Eigen::VectorXd psi =
      cfg.dual_mode == DualMode::Terminal ? psi_terminal[0] : sample(cfg.psi0, A.centers);
  check_dual(psi, 0);

  auto record = [&](std::size_t k, double t, double margin, double residual) {
    const Measure mu(A.dx * psi);
    trace.rows.push_back(
        {k, t, relative_entropy(cfg.eta, n, m, mu), weighted_mass(n, mu), margin, residual});
  };
  record(0, 0.0, kNaN, 0.0);

  for (std::size_t k = 0; k < steps; ++k) {
    const bool last = k + 1 == steps;
    const auto& U = last ? U_last : U_full;
    Eigen::VectorXd psi_next;
    if (cfg.dual_mode == DualMode::Terminal) {
      psi_next = psi_terminal[k + 1];
    } else {
      psi_next = adjoint_solve(last ? *lu_last : *lu_full, U, psi);
      check_dual(psi_next, k);
    }
    const PositiveOperator op(U, Measure(A.dx * psi), Measure(A.dx * psi_next));
    const auto report = verify_csiszar(op, cfg.eta, n, m, 0.0);
    n = apply(op, n);
    m = apply(op, m);
    psi = std::move(psi_next);
    const double t = last ? cfg.t_end : static_cast<double>(k + 1) * dt;
    record(k + 1, t, report.margins.front(), op.column_residual());
  }
  return trace;
}

}  // namespace grekit
