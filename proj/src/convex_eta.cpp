#include "grekit/convex_eta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace grekit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0)) throw NegativeInput(std::string(what) + " must be >= 0");
}

}  // namespace

ConvexEta ConvexEta::kl() { return {EtaKind::KL, 0.0, {}, ExtendedReal::infinity()}; }
ConvexEta ConvexEta::quad() { return {EtaKind::Quad, 0.0, {}, ExtendedReal::infinity()}; }
ConvexEta ConvexEta::tv() { return {EtaKind::TV, 0.0, {}, ExtendedReal(1.0)}; }

ConvexEta ConvexEta::power(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw InvalidArgument("POWER eta requires a finite exponent p > 1");
  }
  return {EtaKind::Power, p, {}, ExtendedReal::infinity()};
}

ConvexEta ConvexEta::piecewise_affine(std::vector<AffinePiece> pieces) {
  if (pieces.empty()) throw InvalidArgument("piecewise-affine eta needs at least one piece");
  double top = -kInf;
  for (const auto& pc : pieces) {
    if (!std::isfinite(pc.slope) || !std::isfinite(pc.intercept)) {
      throw InvalidArgument("piecewise-affine eta: non-finite coefficient");
    }
    top = std::max(top, pc.slope);
  }
  return {EtaKind::PiecewiseAffine, 0.0, std::move(pieces), ExtendedReal(top)};
}

ExtendedReal ConvexEta::operator()(double x) const {
  require_nonnegative(x, "eta argument");
  switch (kind_) {
    case EtaKind::KL:
      return x == 0.0 ? ExtendedReal(0.0) : ExtendedReal(x * std::log(x));
    case EtaKind::Quad:
      return (x - 1.0) * (x - 1.0);
    case EtaKind::TV:
      return std::abs(x - 1.0);
    case EtaKind::Power:
      return std::pow(x, p_);
    case EtaKind::PiecewiseAffine: {
      double best = -kInf;
      for (const auto& pc : pieces_) best = std::max(best, pc(x));
      return best;
    }
  }
  return 0.0;
}

double ConvexEta::subgradient(double x) const {
  if (!(x > 0.0)) throw InvalidArgument("subgradient is only taken at x > 0");
  switch (kind_) {
    case EtaKind::KL:
      return std::log(x) + 1.0;
    case EtaKind::Quad:
      return 2.0 * (x - 1.0);
    case EtaKind::TV:
      return x < 1.0 ? -1.0 : (x > 1.0 ? 1.0 : 0.0);
    case EtaKind::Power:
      return p_ * std::pow(x, p_ - 1.0);
    case EtaKind::PiecewiseAffine: {
      const AffinePiece* best = &pieces_.front();
      for (const auto& pc : pieces_) {
        if (pc(x) > (*best)(x)) best = &pc;
      }
      return best->slope;
    }
  }
  return 0.0;
}

std::string ConvexEta::name() const {
  switch (kind_) {
    case EtaKind::KL:
      return "KL";
    case EtaKind::Quad:
      return "QUAD";
    case EtaKind::TV:
      return "TV";
    case EtaKind::Power: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "POWER(%g)", p_);
      return buf;
    }
    case EtaKind::PiecewiseAffine:
      return "PA" + std::to_string(pieces_.size());
  }
  return "?";
}

ExtendedReal eta_eval(const ConvexEta& eta, double x) { return eta(x); }

ExtendedReal phi_eta(const ConvexEta& eta, double u, double v) {
  require_nonnegative(u, "phi_eta: u");
  require_nonnegative(v, "phi_eta: v");
  if (v > 0.0) return scale(v, eta(u / v));
  if (u == 0.0) return 0.0;
  return scale(u, eta.recession_slope());
}

ConvexEta tangent_minorant(const ConvexEta& eta, std::span<const double> sample_points) {
  if (!eta.is_builtin()) throw InvalidArgument("tangent_minorant expects a builtin eta");
  if (sample_points.empty()) throw EmptySampleSet("tangent_minorant: no sample points");
  std::vector<AffinePiece> pieces;
  pieces.reserve(sample_points.size());
  double prev = 0.0;
  for (double s : sample_points) {
    if (!(s > prev)) {
      throw InvalidArgument("tangent_minorant: samples must be positive and strictly increasing");
    }
    prev = s;
    const double slope = eta.subgradient(s);
    pieces.push_back({slope, eta(s).value() - slope * s});
  }
  return ConvexEta::piecewise_affine(std::move(pieces));
}

bool is_nonnegative(const ConvexEta& eta) {
  if (eta.recession_slope() < ExtendedReal(0.0)) return false;
  if (eta(0.0) < ExtendedReal(0.0)) return false;
  // 10 points per decade over [1e-8, 1e8]
  for (int k = -80; k <= 80; ++k) {
    if (eta(std::pow(10.0, k / 10.0)) < ExtendedReal(0.0)) return false;
  }
  return true;
}

void to_json(nlohmann::json& j, const ConvexEta& eta) {
  switch (eta.kind()) {
    case EtaKind::KL:
      j = {{"kind", "KL"}};
      break;
    case EtaKind::Quad:
      j = {{"kind", "QUAD"}};
      break;
    case EtaKind::TV:
      j = {{"kind", "TV"}};
      break;
    case EtaKind::Power:
      j = {{"kind", "POWER"}, {"p", eta.exponent()}};
      break;
    case EtaKind::PiecewiseAffine: {
      auto pieces = nlohmann::json::array();
      for (const auto& pc : eta.pieces()) pieces.push_back({pc.slope, pc.intercept});
      j = {{"kind", "PA"}, {"pieces", pieces}};
      break;
    }
  }
}

ConvexEta eta_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError("eta: expected an object with a string \"kind\"");
  }
  const auto kind = j["kind"].get<std::string>();
  try {
    if (kind == "KL") return ConvexEta::kl();
    if (kind == "QUAD") return ConvexEta::quad();
    if (kind == "TV") return ConvexEta::tv();
    if (kind == "POWER") return ConvexEta::power(j.at("p").get<double>());
    if (kind == "PA" || kind == "PIECEWISE_AFFINE") {
      std::vector<AffinePiece> pieces;
      for (const auto& pc : j.at("pieces")) {
        if (!pc.is_array() || pc.size() != 2) throw ConfigError("eta: each piece is [slope, intercept]");
        pieces.push_back({pc[0].get<double>(), pc[1].get<double>()});
      }
      return ConvexEta::piecewise_affine(std::move(pieces));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("eta: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("eta: ") + e.what());
  }
  throw ConfigError("eta: unknown kind \"" + kind + "\"");
}

}  // namespace grekit
