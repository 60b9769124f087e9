#include "grekit/fuzz.hpp"

#include <cmath>

namespace grekit {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer.
std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix(seed ^ mix(stream + kGolden))) {}

std::uint64_t CounterRng::next() { return mix(key_ + (++counter_) * kGolden); }

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t CounterRng::below(std::uint64_t n) {
  return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
}

ConvexEta random_affine_eta(CounterRng& rng, bool nonnegative) {
  std::vector<AffinePiece> pieces;
  for (int i = 0; i < 3; ++i) pieces.push_back({rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)});
  if (nonnegative) pieces.push_back({0.0, 0.0});
  return ConvexEta::piecewise_affine(std::move(pieces));
}

ConvexEta random_eta(CounterRng& rng, bool nonnegative_only) {
  if (nonnegative_only) {
    switch (rng.below(4)) {
      case 0:
        return ConvexEta::quad();
      case 1:
        return ConvexEta::tv();
      case 2:
        return ConvexEta::power(1.5);
      default:
        return random_affine_eta(rng, true);
    }
  }
  switch (rng.below(5)) {
    case 0:
      return ConvexEta::kl();
    case 1:
      return ConvexEta::quad();
    case 2:
      return ConvexEta::tv();
    case 3:
      return ConvexEta::power(1.5);
    default:
      return random_affine_eta(rng);
  }
}

Eigen::MatrixXd random_positive_matrix(CounterRng& rng, Index rows, Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double u = rng.uniform();
      m(i, j) = rng.bernoulli(kFuzzZeroFraction) ? 0.0 : u;
    }
  }
  if (rng.bernoulli(0.25)) m.row(static_cast<Index>(rng.below(rows))).setZero();
  if (rng.bernoulli(0.25)) m.col(static_cast<Index>(rng.below(cols))).setZero();
  return m;
}

Eigen::VectorXd random_nonnegative_vector(CounterRng& rng, Index n) {
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) {
    const double u = rng.uniform();
    v[i] = rng.bernoulli(kFuzzZeroFraction) ? 0.0 : u;
  }
  return v;
}

std::optional<Eigen::MatrixXd> project_stochastic(Eigen::MatrixXd m, const Measure& mu1,
                                                  const Measure& mu2) {
  for (Index j = 0; j < m.cols(); ++j) {
    const double s = mu2.weights().dot(m.col(j));
    if (!(s > 0.0)) return std::nullopt;
    m.col(j) *= mu1[j] / s;
  }
  return m;
}

LrTrial make_lr_trial(std::uint64_t seed, std::uint64_t trial) {
  CounterRng rng(seed, trial);
  const auto rows = static_cast<Index>(1 + rng.below(kFuzzMaxDim));
  const auto cols = static_cast<Index>(1 + rng.below(kFuzzMaxDim));
  LrTrial t;
  t.matrix = random_positive_matrix(rng, rows, cols);
  t.f = GridFunction(random_nonnegative_vector(rng, cols));
  t.g = GridFunction(random_nonnegative_vector(rng, cols));
  t.eta = random_eta(rng);
  return t;
}

CsiszarTrial make_csiszar_trial(std::uint64_t seed, std::uint64_t trial, bool allow_substochastic) {
  CounterRng rng(seed, trial);
  const auto rows = static_cast<Index>(1 + rng.below(kFuzzMaxDim));
  const auto cols = static_cast<Index>(1 + rng.below(kFuzzMaxDim));
  Eigen::VectorXd w1(cols);
  Eigen::VectorXd w2(rows);
  for (Index j = 0; j < cols; ++j) w1[j] = rng.uniform(0.1, 2.0);
  for (Index i = 0; i < rows; ++i) w2[i] = rng.uniform(0.1, 2.0);
  const Measure mu1(w1);
  const Measure mu2(w2);
  const Eigen::MatrixXd raw = random_positive_matrix(rng, rows, cols);

  CsiszarTrial t;
  t.substochastic = allow_substochastic && rng.bernoulli(0.25);
  t.f = GridFunction(random_nonnegative_vector(rng, cols));
  t.g = GridFunction(random_nonnegative_vector(rng, cols));
  t.eta = random_eta(rng, t.substochastic);
  auto projected = project_stochastic(raw, mu1, mu2);
  if (!projected) {
    t.skip_reason = "zero column, cannot project to a stochastic operator";
    return t;
  }
  if (t.substochastic) {
    for (Index j = 0; j < cols; ++j) projected->col(j) *= rng.uniform(0.5, 1.0);
  }
  t.op.emplace(std::move(*projected), mu1, mu2);
  const auto want = t.substochastic ? Stochasticity::Substochastic : Stochasticity::Stochastic;
  if (t.op->stochasticity() != want) {
    t.skip_reason = std::string("projection classified ") + to_string(t.op->stochasticity());
    t.op.reset();
  }
  return t;
}

Eigen::MatrixXd random_column_stochastic(CounterRng& rng, Index n) {
  Eigen::MatrixXd m(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) m(i, j) = rng.uniform(0.05, 1.0);
    m.col(j) /= m.col(j).sum();
  }
  return m;
}

}  // namespace grekit
