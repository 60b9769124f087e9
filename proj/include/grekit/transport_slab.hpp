#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "grekit/convex_eta.hpp"
#include "grekit/weighted_ops.hpp"

namespace grekit {

enum class Scattering { Isotropic, None };

/// 1-D slab (0, L) with absorbing ends and n_v symmetric discrete ordinates
/// +-(m + 1/2) dv, dv = 2 v_max / n_v.
struct TransportConfig {
  double length = 1.0;
  Index n_x = 100;
  double v_max = 1.0;
  Index n_v = 8;
  double sigma = 0.0;
  Scattering scattering = Scattering::Isotropic;
  double cfl_safety = 0.9;
  double t_end = 1.0;
  ConvexEta eta = ConvexEta::quad();

  double dx() const { return length / static_cast<double>(n_x); }
  double dv() const { return 2.0 * v_max / static_cast<double>(n_v); }
  Index size() const { return n_x * n_v; }
  /// Flat index of (cell i, ordinate m).
  Index index(Index i, Index m) const { return i * n_v + m; }
  /// Ordinates, negative ones first.
  Eigen::VectorXd velocities() const;
  Eigen::VectorXd cell_centers() const;
  /// Largest admissible step, cfl_safety / (max|v| / dx + sigma).
  double max_dt() const;
  Measure measure() const { return Measure::uniform(size(), dx() * dv()); }
  void validate() const;
};

/// Upwind + collision update for one fixed dt.
class TransportScheme {
 public:
  TransportScheme(const TransportConfig& cfg, double dt);

  double dt() const { return dt_; }
  const TransportConfig& config() const { return cfg_; }

  struct Result {
    GridFunction next;
    double outflux;
  };
  Result advance(const GridFunction& f) const;

  /// The dense update matrix of advance().
  Eigen::MatrixXd update_matrix() const;

 private:
  TransportConfig cfg_;
  double dt_;
  Eigen::VectorXd vel_;
};

/// sum f dx dv
double total_mass(const TransportConfig& cfg, const GridFunction& f);

/// Velocity average in each cell, (K f)(x, v) = mean over v' of f(x, v').
Eigen::VectorXd isotropic_average(const TransportConfig& cfg, const Eigen::VectorXd& f);

struct TransportStep {
  GridFunction f_next;
  double outflux;
  PositiveOperator update;
};

TransportStep transport_step(const TransportConfig& cfg, const GridFunction& f, double dt);

struct TransportTraceRow {
  std::size_t k = 0;
  double t = 0.0;
  double mass_f = 0.0;
  double mass_g = 0.0;
  ExtendedReal entropy;
  /// verify_lr min scaled margin of the step k-1 -> k (NaN at k = 0).
  double lr_min_margin = 0.0;
  double min_g = 0.0;
};

struct TransportTrace {
  std::vector<TransportTraceRow> rows;
  double dt = 0.0;
  Stochasticity update_kind = Stochasticity::GeneralPositive;
  /// Entropy monotonicity is only a theorem here for eta >= 0.
  bool entropy_monotone_expected = false;

  double max_mass_increase_f() const;
  double max_mass_increase_g() const;
  double max_scaled_increase() const;
  double min_lr_margin() const;
  double min_g() const;
};

/// Runs f and g through the same scheme with dt = t_end / ceil(t_end / max_dt).
TransportTrace run_transport(const TransportConfig& cfg, const GridFunction& f0,
                             const GridFunction& g0);

}  // namespace grekit
