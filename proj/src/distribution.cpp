#include "pricesim/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pricesim {

struct ValuationDistribution::Node {
  Family family;
  double parameter = 0.0;
  double floor = 0.0;
  // Composite families only. Stored as a full handle so base() can hand out a
  // reference without allocating.
  std::unique_ptr<const ValuationDistribution> base;
};

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

ValuationDistribution ValuationDistribution::uniform() {
  return ValuationDistribution(std::make_shared<const Node>(Node{Family::Uniform, 0.0, 0.0, nullptr}));
}

ValuationDistribution ValuationDistribution::beta_a1(double a) {
  require(std::isfinite(a) && a > 0.0, "beta_a1: a must be positive");
  return ValuationDistribution(std::make_shared<const Node>(Node{Family::BetaA1, a, 0.0, nullptr}));
}

ValuationDistribution ValuationDistribution::beta_1b(double b) {
  require(std::isfinite(b) && b > 0.0, "beta_1b: b must be positive");
  return ValuationDistribution(std::make_shared<const Node>(Node{Family::Beta1B, b, 0.0, nullptr}));
}

ValuationDistribution ValuationDistribution::trunc_exp(double lambda) {
  require(std::isfinite(lambda) && lambda > 0.0, "trunc_exp: lambda must be positive");
  return ValuationDistribution(std::make_shared<const Node>(Node{Family::TruncExp, lambda, 0.0, nullptr}));
}

ValuationDistribution ValuationDistribution::point_mass(double p) {
  require(p >= 0.0 && p <= 1.0, "point_mass: p must lie in [0,1]");
  return ValuationDistribution(std::make_shared<const Node>(Node{Family::PointMass, p, 0.0, nullptr}));
}

ValuationDistribution ValuationDistribution::gap_shifted(ValuationDistribution base, double gap) {
  require(gap > 0.0 && gap < 1.0, "gap_shifted: gap must lie in (0,1)");
  return ValuationDistribution(std::make_shared<const Node>(
      Node{Family::GapShifted, gap, 0.0,
           std::make_unique<const ValuationDistribution>(std::move(base))}));
}

ValuationDistribution ValuationDistribution::horizontal_mix(ValuationDistribution base,
                                                            double alpha, double floor) {
  require(alpha >= 0.0 && alpha < 1.0, "horizontal_mix: alpha must lie in [0,1)");
  require(floor >= 0.0 && floor <= 1.0, "horizontal_mix: floor must lie in [0,1]");
  return ValuationDistribution(std::make_shared<const Node>(
      Node{Family::HorizontalMix, alpha, floor,
           std::make_unique<const ValuationDistribution>(std::move(base))}));
}

ValuationDistribution ValuationDistribution::vertical_shift(ValuationDistribution base,
                                                            double epsilon) {
  require(epsilon > 0.0 && epsilon < 1.0, "vertical_shift: epsilon must lie in (0,1)");
  return ValuationDistribution(std::make_shared<const Node>(
      Node{Family::VerticalShift, epsilon, 0.0,
           std::make_unique<const ValuationDistribution>(std::move(base))}));
}

Family ValuationDistribution::family() const noexcept { return node_->family; }
double ValuationDistribution::parameter() const noexcept { return node_->parameter; }
double ValuationDistribution::floor() const noexcept { return node_->floor; }
const ValuationDistribution* ValuationDistribution::base() const noexcept {
  return node_->base.get();
}

double ValuationDistribution::cdf(double x) const {
  const Node& n = *node_;
  switch (n.family) {
    case Family::Uniform:
      return clamp01(x);
    case Family::BetaA1:
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return std::pow(x, n.parameter);
    case Family::Beta1B:
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return -std::expm1(n.parameter * std::log1p(-x));
    case Family::TruncExp:
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return std::expm1(-n.parameter * x) / std::expm1(-n.parameter);
    case Family::PointMass:
      return x >= n.parameter ? 1.0 : 0.0;
    case Family::GapShifted: {
      const double g = n.parameter;
      if (x < g) return 0.0;
      if (x >= 1.0) return 1.0;
      return n.base->cdf((x - g) / (1.0 - g));
    }
    case Family::HorizontalMix: {
      const double alpha = n.parameter;
      return (1.0 - alpha) * n.base->cdf(x) + (x >= n.floor ? alpha : 0.0);
    }
    case Family::VerticalShift:
      if (x >= 1.0) return 1.0;
      return std::max(n.base->cdf(x) - n.parameter, 0.0);
  }
  return 0.0;
}

double ValuationDistribution::cdf_left(double x) const {
  const Node& n = *node_;
  switch (n.family) {
    case Family::Uniform:
    case Family::BetaA1:
    case Family::Beta1B:
    case Family::TruncExp:
      return cdf(x);
    case Family::PointMass:
      return x > n.parameter ? 1.0 : 0.0;
    case Family::GapShifted: {
      const double g = n.parameter;
      if (x <= g) return 0.0;
      if (x > 1.0) return 1.0;
      return n.base->cdf_left((x - g) / (1.0 - g));
    }
    case Family::HorizontalMix: {
      const double alpha = n.parameter;
      return (1.0 - alpha) * n.base->cdf_left(x) + (x > n.floor ? alpha : 0.0);
    }
    case Family::VerticalShift:
      if (x > 1.0) return 1.0;
      return std::max(n.base->cdf_left(x) - n.parameter, 0.0);
  }
  return 0.0;
}

double ValuationDistribution::quantile(double u) const {
  if (!(u > 0.0 && u <= 1.0)) {
    throw std::domain_error("quantile: u must lie in (0,1]");
  }
  const Node& n = *node_;
  switch (n.family) {
    case Family::Uniform:
      return u;
    case Family::BetaA1:
      return std::pow(u, 1.0 / n.parameter);
    case Family::Beta1B:
      return clamp01(-std::expm1(std::log1p(-u) / n.parameter));
    case Family::TruncExp:
      if (u == 1.0) return 1.0;
      return clamp01(-std::log1p(u * std::expm1(-n.parameter)) / n.parameter);
    case Family::PointMass:
      return n.parameter;
    case Family::GapShifted: {
      const double inner = n.base->quantile(u);
      if (inner >= 1.0) return 1.0;
      return std::min(n.parameter + (1.0 - n.parameter) * inner, 1.0);
    }
    case Family::HorizontalMix: {
      // Three branches: the non-collective mass below the floor, the floor
      // atom itself, and the non-collective mass above it.
      const double alpha = n.parameter;
      const double f = n.floor;
      const double lower = (1.0 - alpha) * n.base->cdf_left(f);
      const double upper = alpha + (1.0 - alpha) * n.base->cdf(f);
      if (u <= lower + kBranchTolerance) {
        return std::min(n.base->quantile(std::min(u / (1.0 - alpha), 1.0)), f);
      }
      if (u <= upper + kBranchTolerance) return f;
      return std::max(n.base->quantile(std::min((u - alpha) / (1.0 - alpha), 1.0)), f);
    }
    case Family::VerticalShift: {
      const double shifted = u + n.parameter;
      if (shifted > 1.0 + kBranchTolerance) return 1.0;
      return n.base->quantile(std::min(shifted, 1.0));
    }
  }
  return 0.0;
}

bool operator==(const ValuationDistribution& lhs, const ValuationDistribution& rhs) {
  if (lhs.node_ == rhs.node_) return true;
  const auto& a = *lhs.node_;
  const auto& b = *rhs.node_;
  if (a.family != b.family || a.parameter != b.parameter || a.floor != b.floor) return false;
  if (static_cast<bool>(a.base) != static_cast<bool>(b.base)) return false;
  return !a.base || *a.base == *b.base;
}

namespace {

struct ClassWithExponent {
  TailClass tail_class;
  double exponent;
};

ClassWithExponent power_class(double a) {
  if (a > 1.0) return {TailClass::PolySuper, a};
  if (a < 1.0) return {TailClass::PolySub, a};
  return {TailClass::Linear, 0.0};
}

// Left-tail class of the part of the law strictly above any atom at zero.
ClassWithExponent continuous_class(const ValuationDistribution& d) {
  switch (d.family()) {
    case Family::Uniform:
    case Family::Beta1B:
    case Family::TruncExp:
      return {TailClass::Linear, 0.0};
    case Family::BetaA1:
      return power_class(d.parameter());
    case Family::PointMass:
      return {d.parameter() > 0.0 ? TailClass::Gap : TailClass::Unknown, 0.0};
    case Family::GapShifted:
      return {TailClass::Gap, 0.0};
    case Family::HorizontalMix:
    case Family::VerticalShift:
      return continuous_class(*d.base());
  }
  return {TailClass::Unknown, 0.0};
}

}  // namespace

TailProfile tail_profile(const ValuationDistribution& d) {
  switch (d.family()) {
    case Family::Uniform:
    case Family::Beta1B:
    case Family::TruncExp:
      return {0.0, 0.0, TailClass::Linear, 0.0};
    case Family::BetaA1: {
      const auto c = power_class(d.parameter());
      return {0.0, 0.0, c.tail_class, c.exponent};
    }
    case Family::PointMass:
      if (d.parameter() > 0.0) return {d.parameter(), 0.0, TailClass::Gap, 0.0};
      return {0.0, 1.0, TailClass::Atom, 0.0};
    case Family::GapShifted: {
      const double g = d.parameter();
      const TailProfile inner = tail_profile(*d.base());
      return {g + (1.0 - g) * inner.gap, 0.0, TailClass::Gap, 0.0};
    }
    case Family::HorizontalMix: {
      const double alpha = d.parameter();
      const TailProfile inner = tail_profile(*d.base());
      if (d.floor() == 0.0) {
        return {0.0, alpha + (1.0 - alpha) * inner.atom_at_zero, TailClass::Atom, 0.0};
      }
      // The collective atom sits at a positive floor, so the base's left tail
      // (scaled by 1 - alpha) is what the lowest quantiles see.
      TailProfile out = inner;
      out.gap = std::min(inner.gap, d.floor());
      out.atom_at_zero = (1.0 - alpha) * inner.atom_at_zero;
      return out;
    }
    case Family::VerticalShift: {
      const double eps = d.parameter();
      const TailProfile inner = tail_profile(*d.base());
      const double atom = std::max(inner.atom_at_zero - eps, 0.0);
      if (atom > kBranchTolerance) return {0.0, atom, TailClass::Atom, 0.0};
      const double gap = d.base()->quantile(eps);
      if (gap > 0.0) return {gap, 0.0, TailClass::Gap, 0.0};
      const auto c = continuous_class(*d.base());
      return {0.0, 0.0, c.tail_class, c.exponent};
    }
  }
  return {};
}

std::string to_string(TailClass c) {
  switch (c) {
    case TailClass::Gap: return "Gap";
    case TailClass::Linear: return "Linear";
    case TailClass::PolySuper: return "PolySuper";
    case TailClass::PolySub: return "PolySub";
    case TailClass::Atom: return "Atom";
    case TailClass::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string to_string(Family f) {
  switch (f) {
    case Family::Uniform: return "uniform";
    case Family::BetaA1: return "beta_a1";
    case Family::Beta1B: return "beta_1b";
    case Family::TruncExp: return "trunc_exp";
    case Family::PointMass: return "point_mass";
    case Family::GapShifted: return "gap_shifted";
    case Family::HorizontalMix: return "horizontal_mix";
    case Family::VerticalShift: return "vertical_shift";
  }
  return "unknown";
}

}  // namespace pricesim
