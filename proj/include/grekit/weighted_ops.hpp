#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "grekit/convex_eta.hpp"
#include "grekit/extended_real.hpp"

namespace grekit {

using Index = Eigen::Index;

/// Column tolerance for the stochastic / substochastic classification.
inline constexpr double kStochasticTolerance = 1e-12;

/// Strictly positive weights of a finite weighted L1 space.
class Measure {
 public:
  explicit Measure(Eigen::VectorXd weights);
  static Measure uniform(Index n, double weight = 1.0);

  Index size() const { return w_.size(); }
  const Eigen::VectorXd& weights() const { return w_; }
  double operator[](Index i) const { return w_[i]; }

 private:
  Eigen::VectorXd w_;
};

/// Nonnegative values on a grid.
class GridFunction {
 public:
  explicit GridFunction(Eigen::VectorXd values);
  static GridFunction zeros(Index n) { return GridFunction(Eigen::VectorXd::Zero(n)); }

  Index size() const { return v_.size(); }
  const Eigen::VectorXd& values() const { return v_; }
  double operator[](Index i) const { return v_[i]; }

 private:
  Eigen::VectorXd v_;
};

/// sum_j mu_j f_j
double weighted_mass(const GridFunction& f, const Measure& mu);

enum class Stochasticity { GeneralPositive, Substochastic, Stochastic };

const char* to_string(Stochasticity s);

/// Entrywise nonnegative m x n matrix from L1(mu_1) (length n) to L1(mu_2)
/// (length m). Classification is computed once at construction from the
/// weighted column sums s_j = sum_i mu2_i M_ij compared with mu1_j.
class PositiveOperator {
 public:
  PositiveOperator(Eigen::MatrixXd matrix, Measure domain, Measure codomain);

  const Eigen::MatrixXd& matrix() const { return m_; }
  const Measure& domain_measure() const { return dom_; }
  const Measure& codomain_measure() const { return cod_; }
  Index rows() const { return m_.rows(); }
  Index cols() const { return m_.cols(); }

  Stochasticity stochasticity() const { return kind_; }
  /// max_j |s_j - mu1_j| / mu1_j
  double column_residual() const { return residual_; }

 private:
  Eigen::MatrixXd m_;
  Measure dom_;
  Measure cod_;
  Stochasticity kind_ = Stochasticity::GeneralPositive;
  double residual_ = 0.0;
};

GridFunction apply(const PositiveOperator& U, const GridFunction& f);

Stochasticity classify_stochasticity(const PositiveOperator& U);

/// H_eta(f | g) = sum_j mu_j phi_eta(f_j, g_j), +inf absorbing.
ExtendedReal relative_entropy(const ConvexEta& eta, const GridFunction& f, const GridFunction& g,
                              const Measure& mu);

/// Outcome of an inequality check.
///
/// `margins[i]` is rhs - lhs of row i; +inf marks a row that holds
/// vacuously (infinite right side) and -inf one that fails with an infinite
/// left side against a finite right side. A row passes when
/// margins[i] >= -tolerance * scales[i]; `min_margin` is the smallest
/// margins[i] / scales[i], so passed <=> min_margin >= -tolerance.
struct MarginReport {
  std::vector<double> margins;
  std::vector<double> scales;
  double min_margin = 0.0;
  Index argmin_index = 0;
  double tolerance = 0.0;
  bool passed = true;
};

/// Pointwise check of phi(Uf, Ug) <= U phi(f, g). In finite dimension the
/// order-continuous extension of U is U itself. Row scales are
/// 1 + max(|lhs|, |rhs|).
MarginReport verify_lr(const PositiveOperator& U, const ConvexEta& eta, const GridFunction& f,
                       const GridFunction& g, double tolerance);

/// Left and right sides of the pointwise inequality, row by row.
struct LrSides {
  std::vector<ExtendedReal> lhs;
  std::vector<ExtendedReal> rhs;
};
LrSides lr_sides(const PositiveOperator& U, const ConvexEta& eta, const GridFunction& f,
                 const GridFunction& g);

/// Integrated check H_{eta,2}(Uf|Ug) <= H_{eta,1}(f|g), scalar margin with
/// unit scale. Requires U stochastic, or substochastic with eta >= 0;
/// otherwise throws NotStochastic.
MarginReport verify_csiszar(const PositiveOperator& U, const ConvexEta& eta, const GridFunction& f,
                            const GridFunction& g, double tolerance);

struct DiscreteTraceRow {
  std::size_t k = 0;
  ExtendedReal entropy;
  double mass = 0.0;
  /// entropy[k-1] - entropy[k]; NaN at k = 0, +inf while the previous entry is infinite.
  double step_margin = 0.0;
};

struct DiscreteTrace {
  std::vector<DiscreteTraceRow> rows;
  /// Largest entropy increase over one step, scaled by max(1, |E_k|); -inf
  /// when no two consecutive finite entries exist.
  double max_scaled_increase() const;
};

/// H(U^k f0 | U^k g0) for k = 0..steps with U square and stochastic for (mu, mu).
DiscreteTrace power_iterate_gre(const PositiveOperator& U, const ConvexEta& eta,
                                const GridFunction& f0, const GridFunction& g0, std::size_t steps);

}  // namespace grekit
