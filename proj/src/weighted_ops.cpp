#include "grekit/weighted_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace grekit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_length(Index got, Index want, const char* what) {
  if (got != want) {
    throw DimensionMismatch(std::string(what) + ": length " + std::to_string(got) + ", expected " +
                            std::to_string(want));
  }
}

}  // namespace

Measure::Measure(Eigen::VectorXd weights) : w_(std::move(weights)) {
  if (w_.size() < 1) throw InvalidArgument("Measure: at least one weight is required");
  for (Index i = 0; i < w_.size(); ++i) {
    if (!(w_[i] > 0.0) || !std::isfinite(w_[i])) {
      throw InvalidArgument("Measure: weights must be finite and strictly positive");
    }
  }
}

Measure Measure::uniform(Index n, double weight) {
  return Measure(Eigen::VectorXd::Constant(n, weight));
}

GridFunction::GridFunction(Eigen::VectorXd values) : v_(std::move(values)) {
  for (Index i = 0; i < v_.size(); ++i) {
    if (!std::isfinite(v_[i])) throw InvalidArgument("GridFunction: non-finite value");
    if (v_[i] < 0.0) {
      throw NegativeInput("GridFunction: negative value at index " + std::to_string(i));
    }
  }
}

double weighted_mass(const GridFunction& f, const Measure& mu) {
  require_length(f.size(), mu.size(), "weighted_mass");
  return mu.weights().dot(f.values());
}

const char* to_string(Stochasticity s) {
  switch (s) {
    case Stochasticity::GeneralPositive:
      return "GENERAL_POSITIVE";
    case Stochasticity::Substochastic:
      return "SUBSTOCHASTIC";
    case Stochasticity::Stochastic:
      return "STOCHASTIC";
  }
  return "?";
}

PositiveOperator::PositiveOperator(Eigen::MatrixXd matrix, Measure domain, Measure codomain)
    : m_(std::move(matrix)), dom_(std::move(domain)), cod_(std::move(codomain)) {
  require_length(m_.cols(), dom_.size(), "PositiveOperator: columns vs domain measure");
  require_length(m_.rows(), cod_.size(), "PositiveOperator: rows vs codomain measure");
  for (Index j = 0; j < m_.cols(); ++j) {
    for (Index i = 0; i < m_.rows(); ++i) {
      const double x = m_(i, j);
      if (!std::isfinite(x)) throw InvalidArgument("PositiveOperator: non-finite entry");
      if (x < 0.0) throw NegativeInput("PositiveOperator: negative entry");
    }
  }
  const Eigen::RowVectorXd sums = cod_.weights().transpose() * m_;
  bool stochastic = true;
  bool sub = true;
  for (Index j = 0; j < m_.cols(); ++j) {
    const double mu = dom_[j];
    const double rel = std::abs(sums[j] - mu) / mu;
    residual_ = std::max(residual_, rel);
    stochastic = stochastic && rel <= kStochasticTolerance;
    sub = sub && sums[j] <= mu * (1.0 + kStochasticTolerance);
  }
  kind_ = stochastic ? Stochasticity::Stochastic
                     : (sub ? Stochasticity::Substochastic : Stochasticity::GeneralPositive);
}

GridFunction apply(const PositiveOperator& U, const GridFunction& f) {
  require_length(f.size(), U.cols(), "apply");
  return GridFunction(U.matrix() * f.values());
}

Stochasticity classify_stochasticity(const PositiveOperator& U) { return U.stochasticity(); }

ExtendedReal relative_entropy(const ConvexEta& eta, const GridFunction& f, const GridFunction& g,
                              const Measure& mu) {
  require_length(f.size(), mu.size(), "relative_entropy: f");
  require_length(g.size(), mu.size(), "relative_entropy: g");
  ExtendedReal total = 0.0;
  for (Index j = 0; j < mu.size(); ++j) total += scale(mu[j], phi_eta(eta, f[j], g[j]));
  return total;
}

LrSides lr_sides(const PositiveOperator& U, const ConvexEta& eta, const GridFunction& f,
                 const GridFunction& g) {
  require_length(f.size(), U.cols(), "verify_lr: f");
  require_length(g.size(), U.cols(), "verify_lr: g");

  Eigen::VectorXd phi(U.cols());
  bool all_finite = true;
  for (Index j = 0; j < U.cols(); ++j) {
    phi[j] = phi_eta(eta, f[j], g[j]).to_double();
    all_finite = all_finite && std::isfinite(phi[j]);
  }

  const Eigen::VectorXd uf = U.matrix() * f.values();
  const Eigen::VectorXd ug = U.matrix() * g.values();

  LrSides sides;
  sides.lhs.reserve(U.rows());
  sides.rhs.reserve(U.rows());
  Eigen::VectorXd rhs_fast;
  if (all_finite) rhs_fast = U.matrix() * phi;
  for (Index i = 0; i < U.rows(); ++i) {
    sides.lhs.push_back(phi_eta(eta, uf[i], ug[i]));
    if (all_finite) {
      sides.rhs.emplace_back(rhs_fast[i]);
      continue;
    }
    // Zero entries do not couple row i to column j, whatever phi_j is.
    ExtendedReal acc = 0.0;
    for (Index j = 0; j < U.cols(); ++j) {
      if (U.matrix()(i, j) > 0.0) acc += scale(U.matrix()(i, j), ExtendedReal(phi[j]));
    }
    sides.rhs.push_back(acc);
  }
  return sides;
}

namespace {

void finish_report(MarginReport& r) {
  r.min_margin = kInf;
  r.argmin_index = 0;
  for (std::size_t i = 0; i < r.margins.size(); ++i) {
    const double m = r.margins[i] / r.scales[i];
    if (m < r.min_margin) {
      r.min_margin = m;
      r.argmin_index = static_cast<Index>(i);
    }
  }
  r.passed = r.min_margin >= -r.tolerance;
}

}  // namespace

MarginReport verify_lr(const PositiveOperator& U, const ConvexEta& eta, const GridFunction& f,
                       const GridFunction& g, double tolerance) {
  const auto sides = lr_sides(U, eta, f, g);
  MarginReport r;
  r.tolerance = tolerance;
  r.margins.reserve(sides.lhs.size());
  r.scales.reserve(sides.lhs.size());
  for (std::size_t i = 0; i < sides.lhs.size(); ++i) {
    const auto lhs = sides.lhs[i];
    const auto rhs = sides.rhs[i];
    if (rhs.is_infinite()) {
      r.margins.push_back(kInf);
      r.scales.push_back(1.0);
    } else if (lhs.is_infinite()) {
      r.margins.push_back(-kInf);
      r.scales.push_back(1.0);
    } else {
      r.margins.push_back(rhs.value() - lhs.value());
      r.scales.push_back(1.0 + std::max(std::abs(lhs.value()), std::abs(rhs.value())));
    }
  }
  finish_report(r);
  return r;
}

MarginReport verify_csiszar(const PositiveOperator& U, const ConvexEta& eta, const GridFunction& f,
                            const GridFunction& g, double tolerance) {
  const auto kind = U.stochasticity();
  if (kind != Stochasticity::Stochastic &&
      !(kind == Stochasticity::Substochastic && is_nonnegative(eta))) {
    throw NotStochastic(std::string("verify_csiszar: operator is ") + to_string(kind) +
                        (kind == Stochasticity::Substochastic ? " and eta takes negative values" : ""));
  }
  const auto before = relative_entropy(eta, f, g, U.domain_measure());
  const auto after = relative_entropy(eta, apply(U, f), apply(U, g), U.codomain_measure());

  MarginReport r;
  r.tolerance = tolerance;
  r.scales = {1.0};
  if (before.is_infinite()) {
    r.margins = {kInf};
  } else if (after.is_infinite()) {
    r.margins = {-kInf};
  } else {
    r.margins = {before.value() - after.value()};
  }
  finish_report(r);
  return r;
}

double DiscreteTrace::max_scaled_increase() const {
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

DiscreteTrace power_iterate_gre(const PositiveOperator& U, const ConvexEta& eta,
                                const GridFunction& f0, const GridFunction& g0, std::size_t steps) {
  if (U.rows() != U.cols()) throw DimensionMismatch("power_iterate_gre: operator must be square");
  require_length(f0.size(), U.cols(), "power_iterate_gre: f0");
  require_length(g0.size(), U.cols(), "power_iterate_gre: g0");
  if (U.stochasticity() != Stochasticity::Stochastic) {
    throw NotStochastic(std::string("power_iterate_gre: operator is ") + to_string(U.stochasticity()));
  }
  const auto& mu = U.domain_measure();
  const Eigen::VectorXd diff = (mu.weights() - U.codomain_measure().weights()).cwiseAbs();
  for (Index i = 0; i < mu.size(); ++i) {
    if (diff[i] > kStochasticTolerance * mu[i]) {
      throw NotStochastic("power_iterate_gre: domain and codomain measures differ");
    }
  }

  DiscreteTrace trace;
  trace.rows.reserve(steps + 1);
  GridFunction f = f0;
  GridFunction g = g0;
  for (std::size_t k = 0; k <= steps; ++k) {
    if (k > 0) {
      f = apply(U, f);
      g = apply(U, g);
    }
    DiscreteTraceRow row;
    row.k = k;
    row.entropy = relative_entropy(eta, f, g, mu);
    row.mass = weighted_mass(f, mu);
    if (k == 0) {
      row.step_margin = std::numeric_limits<double>::quiet_NaN();
    } else {
      const auto prev = trace.rows.back().entropy;
      if (prev.is_infinite()) {
        row.step_margin = kInf;
      } else if (row.entropy.is_infinite()) {
        row.step_margin = -kInf;
      } else {
        row.step_margin = prev.value() - row.entropy.value();
      }
    }
    trace.rows.push_back(row);
  }
  return trace;
}

}  // namespace grekit
