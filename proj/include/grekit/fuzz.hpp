#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "grekit/convex_eta.hpp"
#include "grekit/weighted_ops.hpp"

namespace grekit {

/// Counter-based generator: the i-th draw of stream (seed, stream) is a pure
/// function of (seed, stream, i), so trials can be generated in any order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform on {0, ..., n - 1}.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Fraction of entries zeroed in generated matrices and vectors.
inline constexpr double kFuzzZeroFraction = 0.2;
inline constexpr Index kFuzzMaxDim = 8;

/// One of KL, QUAD, TV, POWER(1.5), or a random 3-piece affine eta.
ConvexEta random_eta(CounterRng& rng, bool nonnegative_only = false);

/// Random 3-piece affine eta, slopes and intercepts uniform in [-2, 2]. With
/// `nonnegative`, the zero piece is added so that eta >= 0.
ConvexEta random_affine_eta(CounterRng& rng, bool nonnegative = false);

/// Entries uniform in [0, 1], each zeroed with kFuzzZeroFraction, plus a
/// forced zero row and/or column with probability 1/4 each.
Eigen::MatrixXd random_positive_matrix(CounterRng& rng, Index rows, Index cols);

/// Entries uniform in [0, 1], each zeroed with kFuzzZeroFraction.
Eigen::VectorXd random_nonnegative_vector(CounterRng& rng, Index n);

/// Random positive matrix rescaled columnwise so sum_i mu2_i M_ij = mu1_j.
/// Returns nullopt when some column is identically zero.
std::optional<Eigen::MatrixXd> project_stochastic(Eigen::MatrixXd m, const Measure& mu1,
                                                  const Measure& mu2);

struct LrTrial {
  Eigen::MatrixXd matrix;
  GridFunction f = GridFunction::zeros(0);
  GridFunction g = GridFunction::zeros(0);
  ConvexEta eta = ConvexEta::kl();
};

/// Dimensions uniform in 1..kFuzzMaxDim, unit weights.
LrTrial make_lr_trial(std::uint64_t seed, std::uint64_t trial);

struct CsiszarTrial {
  std::optional<PositiveOperator> op;  ///< empty when the projection failed
  GridFunction f = GridFunction::zeros(0);
  GridFunction g = GridFunction::zeros(0);
  ConvexEta eta = ConvexEta::kl();
  bool substochastic = false;
  std::string skip_reason;
};

/// Random weight pairs uniform in [0.1, 2]. With `allow_substochastic`, a
/// quarter of the trials shrink every column by a factor in [0.5, 1) and
/// draw eta from the nonnegative family.
CsiszarTrial make_csiszar_trial(std::uint64_t seed, std::uint64_t trial, bool allow_substochastic);

/// Random n x n matrix, strictly positive entries, columns summing to 1.
Eigen::MatrixXd random_column_stochastic(CounterRng& rng, Index n);

}  // namespace grekit
