#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "grekit/extended_real.hpp"

namespace grekit {

/// One affine piece x -> slope * x + intercept.
struct AffinePiece {
  double slope = 0.0;
  double intercept = 0.0;
  double operator()(double x) const { return slope * x + intercept; }
};

enum class EtaKind { KL, Quad, TV, Power, PiecewiseAffine };

/// A continuous convex entropy generator eta on [0, inf).
///
///   KL     x ln x  (0 at x = 0)
///   Quad   (x - 1)^2
///   TV     |x - 1|
///   Power  x^p, p > 1
///   PA     max_i (a_i x + b_i)
///
/// Immutable after construction.
class ConvexEta {
 public:
  static ConvexEta kl();
  static ConvexEta quad();
  static ConvexEta tv();
  static ConvexEta power(double p);
  static ConvexEta piecewise_affine(std::vector<AffinePiece> pieces);

  EtaKind kind() const { return kind_; }
  bool is_builtin() const { return kind_ != EtaKind::PiecewiseAffine; }
  double exponent() const { return p_; }
  std::span<const AffinePiece> pieces() const { return pieces_; }

  /// lim_{x -> inf} eta(x) / x.
  ExtendedReal recession_slope() const { return recession_; }

  /// eta(x); throws NegativeInput for x < 0.
  ExtendedReal operator()(double x) const;

  /// A subgradient of eta at x > 0. TV uses 0 at its kink.
  double subgradient(double x) const;

  std::string name() const;

 private:
  ConvexEta(EtaKind k, double p, std::vector<AffinePiece> pieces, ExtendedReal rec)
      : kind_(k), p_(p), pieces_(std::move(pieces)), recession_(rec) {}

  EtaKind kind_;
  double p_ = 0.0;
  std::vector<AffinePiece> pieces_;
  ExtendedReal recession_;
};

ExtendedReal eta_eval(const ConvexEta& eta, double x);

/// Perspective of eta:
///   v * eta(u / v)     v > 0
///   0                  u = v = 0
///   u * eta'(inf)      v = 0, u > 0
ExtendedReal phi_eta(const ConvexEta& eta, double u, double v);

/// Piecewise-affine minorant built from (sub)tangent lines of a builtin eta at
/// strictly increasing positive sample points.
ConvexEta tangent_minorant(const ConvexEta& eta, std::span<const double> sample_points);

/// True when eta >= 0 on [0, inf): checked at 0, on a log grid over
/// [1e-8, 1e8], and through eta'(inf) >= 0.
bool is_nonnegative(const ConvexEta& eta);

void to_json(nlohmann::json& j, const ConvexEta& eta);
ConvexEta eta_from_json(const nlohmann::json& j);

}  // namespace grekit
