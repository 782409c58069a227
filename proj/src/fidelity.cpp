#include "qmem/fidelity.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

namespace qmem {
namespace {

// exp(-z) * I0(z) for z >= 0 without overflow.
double scaled_bessel_i0(double z) {
  if (z < 500.0) return std::exp(-z) * std::cyl_bessel_i(0.0, z);
  const double inv = 1.0 / (8.0 * z);
  const double series = 1.0 + inv * (1.0 + inv * (4.5 + inv * (37.5 + inv * 459.375)));
  return series / std::sqrt(2.0 * std::numbers::pi * z);
}

void require_positive_variances(double vx, double vp, const char* what) {
  if (!(vx > 0.0) || !(vp > 0.0)) {
    throw std::invalid_argument(std::string(what) + ": variances must be > 0");
  }
}

}  // namespace

void CoherentSet::validate() const {
  if (!(n_min >= 0.0) || !(n_max > n_min) || !std::isfinite(n_max)) {
    throw std::invalid_argument("CoherentSet: need n_max > n_min >= 0");
  }
}

double CoherentSet::alpha_min() const { return std::sqrt(2.0 * n_min); }
double CoherentSet::alpha_max() const { return std::sqrt(2.0 * n_max); }

double overlap(double x1, double p1, double x2, double p2, double var_x, double var_p) {
  require_positive_variances(var_x, var_p, "overlap");
  const double sx = 1.0 + 2.0 * var_x;
  const double sp = 1.0 + 2.0 * var_p;
  const double dx = x1 - x2;
  const double dp = p1 - p2;
  return 2.0 * std::exp(-dx * dx / sx - dp * dp / sp) / std::sqrt(sx * sp);
}

PhaseSpaceChannel as_phase_space(const ChannelSummary& channel) {
  return {channel.gain_p, channel.gain_x, channel.var_p, channel.var_x};
}

QuadratureResult average_fidelity(const CoherentSet& set, const ChannelSummary& channel,
                                  const QuadratureSpec& quad) {
  set.validate();
  quad.validate();
  const PhaseSpaceChannel ch = as_phase_space(channel);
  require_positive_variances(ch.var_x, ch.var_p, "average_fidelity");

  const double sx = 1.0 + 2.0 * ch.var_x;
  const double sp = 1.0 + 2.0 * ch.var_p;
  const double pref = 2.0 / std::sqrt(sx * sp);
  const double cx = (1.0 - ch.gain_x) * (1.0 - ch.gain_x) / sx;
  const double cp = (1.0 - ch.gain_p) * (1.0 - ch.gain_p) / sp;
  const double a1 = set.alpha_min();
  const double a2 = set.alpha_max();

  // Angular average of exp(-A cos^2 - B sin^2) is exp(-(A+B)/2) I0((A-B)/2).
  auto radial = [&](double alpha) {
    const double a = cx * alpha * alpha;
    const double b = cp * alpha * alpha;
    const double z = 0.5 * std::abs(a - b);
    return alpha * pref * std::exp(-std::min(a, b)) * scaled_bessel_i0(z);
  };
  const double norm = 2.0 / (a2 * a2 - a1 * a1);

  std::size_t n = quad.radial_nodes;
  double previous = norm * integrate_fixed(gauss_legendre(n), a1, a2, radial);
  for (std::size_t d = 0; d < quad.max_doublings; ++d) {
    n *= 2;
    const double current = norm * integrate_fixed(gauss_legendre(n), a1, a2, radial);
    const double err = std::abs(current - previous);
    if (err < quad.tolerance) return {current, err, n, 0};
    previous = current;
  }
  throw NumericalError(fmt::format(
      "average_fidelity: radial quadrature did not converge (radial nodes {}, tolerance {:g})", n,
      quad.tolerance));
}

QuadratureResult average_fidelity_2d(const CoherentSet& set, const ChannelSummary& channel,
                                     const QuadratureSpec& quad) {
  set.validate();
  quad.validate();
  const PhaseSpaceChannel ch = as_phase_space(channel);
  require_positive_variances(ch.var_x, ch.var_p, "average_fidelity_2d");
  const double a1 = set.alpha_min();
  const double a2 = set.alpha_max();

  auto evaluate = [&](std::size_t nr, std::size_t na) {
    const GaussLegendreRule rule = gauss_legendre(nr);
    const double dphi = 2.0 * std::numbers::pi / static_cast<double>(na);
    auto ring = [&](double alpha) {
      double acc = 0.0;
      for (std::size_t j = 0; j < na; ++j) {
        const double phi = dphi * static_cast<double>(j);
        const double x = alpha * std::cos(phi);
        const double p = alpha * std::sin(phi);
        acc += overlap(x, p, ch.gain_x * x, ch.gain_p * p, ch.var_x, ch.var_p);
      }
      return alpha * acc * dphi;
    };
    return integrate_fixed(rule, a1, a2, ring) / (std::numbers::pi * (a2 * a2 - a1 * a1));
  };

  std::size_t nr = quad.radial_nodes;
  std::size_t na = quad.angular_nodes;
  double previous = evaluate(nr, na);
  for (std::size_t d = 0; d < quad.max_doublings; ++d) {
    nr *= 2;
    na *= 2;
    const double current = evaluate(nr, na);
    const double err = std::abs(current - previous);
    if (err < quad.tolerance) return {current, err, nr, na};
    previous = current;
  }
  throw NumericalError(fmt::format(
      "average_fidelity_2d: did not converge (radial nodes {}, angular nodes {}, tolerance {:g})",
      nr, na, quad.tolerance));
}

double classical_fidelity(double g, double n1, double n2) {
  if (!(n1 >= 0.0) || !(n2 > n1)) {
    throw std::invalid_argument("classical_fidelity: need n2 > n1 >= 0");
  }
  const double s = 1.0 + g * g;
  const double c = (1.0 - g) * (1.0 - g) / s;
  if (c == 0.0) return 1.0 / s;
  const double span = n2 - n1;
  // (1 - g)^2 = c (1 + g^2); expm1 keeps the g -> 1 limit accurate.
  return std::exp(-c * n1) * -std::expm1(-c * span) / (span * c * s);
}

ClassicalOptimum optimize_classical_gain(double n1, double n2) {
  if (!(n1 >= 0.0) || !(n2 > n1)) {
    throw std::invalid_argument("optimize_classical_gain: need n2 > n1 >= 0");
  }
  const auto [g, neg_f] = boost::math::tools::brent_find_minima(
      [&](double gain) { return -classical_fidelity(gain, n1, n2); }, 0.0, 1.0,
      std::numeric_limits<double>::digits / 2);
  return {g, -neg_f};
}

double classical_variance_bound(double g) { return kVacuumVariance + g * g; }

ChannelSummary classical_channel(double g) {
  const double v = classical_variance_bound(g);
  return {g, g, v, v};
}

}  // namespace qmem
