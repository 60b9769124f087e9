#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "grekit/convex_eta.hpp"
#include "grekit/weighted_ops.hpp"

namespace grekit {

using Profile = std::function<double(double)>;
/// b(y, x): rate density of producing a fragment of size x from a parent of size y > x.
using FragKernel = std::function<double(double, double)>;

enum class DualMode {
  /// psi0 is the initial dual weight; psi^{k+1} solves (I + dt A)^T psi^{k+1} = psi^k.
  Forward,
  /// psi0 is the dual weight at t_end; psi^k = (I + dt A)^T psi^{k+1} backwards.
  Terminal,
};

struct GrowthConfig {
  double x_max = 1.0;
  Index n_cells = 100;
  Profile velocity = [](double) { return 0.0; };
  Profile death_rate = [](double) { return 0.0; };
  Profile total_frag_rate = [](double) { return 0.0; };
  FragKernel frag_kernel = [](double, double) { return 0.0; };
  double dt_safety = 0.9;
  double t_end = 1.0;
  ConvexEta eta = ConvexEta::quad();
  Profile psi0 = [](double) { return 1.0; };
  DualMode dual_mode = DualMode::Forward;

  double dx() const { return x_max / static_cast<double>(n_cells); }
  /// x_j = (j + 1/2) dx
  Eigen::VectorXd centers() const;
  void validate() const;
};

/// Metzler generator A of the semi-discrete growth-fragmentation system
/// dn/dt = A n.
struct Generator {
  Eigen::MatrixXd matrix;
  double dx = 0.0;
  Eigen::VectorXd centers;

  Index size() const { return matrix.rows(); }
  /// max_j |A_jj|
  double max_rate() const;
};

/// Upwind drift with zero inflow at x = 0, renormalized fragmentation (so
/// that sum_i x_i bhat_ij = x_j B_j column by column) and death.
///
/// Daughters of a parent in cell j are placed in cells i < j with quadrature
/// weight dx and in cell j itself with weight dx/2; the self-cell share
/// enters the diagonal, which is bhat_jj - B_j - w_j - v_j/dx.
Generator build_generator(const GrowthConfig& cfg);

struct GrowthStep {
  GridFunction n_next;
  GridFunction psi_next;
  PositiveOperator update;  ///< I + dt A, stochastic from (psi dx) to (psi_next dx)
};

/// Explicit Euler for the primal and the discrete adjoint solve for the dual.
/// Requires dt * max_j |A_jj| < 1 and psi > 0.
GrowthStep step(const Generator& A, const GridFunction& n, const GridFunction& psi, double dt);

struct GrowthTraceRow {
  std::size_t k = 0;
  double t = 0.0;
  ExtendedReal entropy;
  double weighted_mass = 0.0;
  /// Csiszar margin of the step k-1 -> k (NaN at k = 0).
  double csiszar_margin = 0.0;
  /// Column residual of the update classified at step k-1 -> k (0 at k = 0).
  double stochasticity_residual = 0.0;
};

struct GrowthTrace {
  std::vector<GrowthTraceRow> rows;
  double dt = 0.0;

  /// max_k |<n^k, psi^k> - <n^0, psi^0>| / <n^0, psi^0>
  double conservation_residual() const;
  /// max_k (E_{k+1} - E_k) / max(1, |E_k|) over finite pairs.
  double max_scaled_increase() const;
  double min_csiszar_margin() const;
  double max_stochasticity_residual() const;
};

/// Steps from 0 to cfg.t_end with dt = theta / max_j |A_jj| (last step
/// truncated), tracking the weighted mass of n and the relative entropy
/// sum_j dx psi_j phi(n_j, m_j).
GrowthTrace run_growth(const GrowthConfig& cfg, const GridFunction& n0, const GridFunction& m0);

}  // namespace grekit
