#include "qmem/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "qmem/random.hpp"

namespace qmem {
namespace {

double sample_variance(CounterStream& rng, std::uint64_t n, double sd) {
  // Welford, so large n does not lose precision.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    const double v = sd * rng.normal();
    const double d = v - mean;
    mean += d / static_cast<double>(i);
    m2 += d * (v - mean);
  }
  return m2 / static_cast<double>(n - 1);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<CalibrationPoint> synthesize_series(double k2_per_unit, double classical_coeff,
                                                const std::vector<double>& jx_values,
                                                std::uint64_t n_cycles, std::uint64_t seed,
                                                const SynthesisOptions& options) {
  if (n_cycles < 2) throw std::invalid_argument("synthesize_series: n_cycles must be >= 2");
  if (options.shot_noise_cycles == 1) {
    throw std::invalid_argument("synthesize_series: shot_noise_cycles must be 0 or >= 2");
  }
  std::vector<CalibrationPoint> out;
  out.reserve(jx_values.size());
  for (std::size_t i = 0; i < jx_values.size(); ++i) {
    const double jx = jx_values[i];
    if (!(jx >= 0.0) || !std::isfinite(jx)) {
      throw std::invalid_argument("synthesize_series: jx values must be finite and >= 0");
    }
    const double truth = k2_per_unit * jx + classical_coeff * jx * jx;
    if (!(1.0 + truth > 0.0)) {
      throw std::invalid_argument("synthesize_series: total light variance must stay positive");
    }
    CounterStream rng(derive_seed(seed, 0x63616c), i);
    const double out_var = sample_variance(rng, n_cycles, std::sqrt(1.0 + truth));
    double in_var = 1.0;
    double rel_var = 2.0 / static_cast<double>(n_cycles - 1);
    if (options.shot_noise_cycles >= 2) {
      in_var = sample_variance(rng, options.shot_noise_cycles, 1.0);
      rel_var += 2.0 / static_cast<double>(options.shot_noise_cycles - 1);
    }
    const double ratio = out_var / in_var;
    out.push_back({jx, ratio - 1.0, ratio * std::sqrt(rel_var), n_cycles});
  }
  return out;
}

CalibrationFit fit_pnl(const std::vector<CalibrationPoint>& points, std::optional<double> jx_max) {
  if (points.empty()) throw std::invalid_argument("fit_pnl: no points");
  std::vector<double> jx;
  jx.reserve(points.size());
  for (const auto& p : points) jx.push_back(p.jx_proxy);
  const double cut = jx_max.value_or(median(jx));

  std::vector<const CalibrationPoint*> used;
  for (const auto& p : points) {
    if (p.jx_proxy <= cut) used.push_back(&p);
  }
  if (used.size() < 3) throw std::invalid_argument("fit_pnl: need at least 3 points in range");

  const bool all_zero_se =
      std::all_of(points.begin(), points.end(), [](const auto& p) { return p.se == 0.0; });
  auto weight = [&](const CalibrationPoint& p) {
    if (all_zero_se) return 1.0;
    if (!(p.se > 0.0)) throw std::invalid_argument("fit_pnl: standard errors must be > 0");
    return 1.0 / (p.se * p.se);
  };

  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto* p : used) {
    const double w = weight(*p);
    sxx += w * p->jx_proxy * p->jx_proxy;
    sxy += w * p->jx_proxy * p->normalized_noise;
  }
  if (!(sxx > 0.0) || !std::isfinite(sxx)) {
    throw std::invalid_argument("fit_pnl: all weights (or all jx) are zero in range");
  }

  CalibrationFit fit;
  fit.jx_max = cut;
  fit.n_used = used.size();
  fit.slope = sxy / sxx;
  double chi2 = 0.0;
  for (const auto* p : used) {
    const double r = p->normalized_noise - fit.slope * p->jx_proxy;
    chi2 += weight(*p) * r * r;
  }
  const double dof = static_cast<double>(used.size() - 1);
  fit.chi2_per_dof = chi2 / dof;
  // Unweighted fits have no error model, so scale by the residual spread.
  fit.slope_se = all_zero_se ? std::sqrt(fit.chi2_per_dof / sxx) : std::sqrt(1.0 / sxx);

  // Diagnostic: y = b jx + c jx^2 over the whole sweep.
  Eigen::MatrixXd a(static_cast<Eigen::Index>(points.size()), 2);
  Eigen::VectorXd y(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    const double sw = std::sqrt(weight(points[i]));
    a(idx, 0) = sw * points[i].jx_proxy;
    a(idx, 1) = sw * points[i].jx_proxy * points[i].jx_proxy;
    y(idx) = sw * points[i].normalized_noise;
  }
  const Eigen::VectorXd coeff = a.colPivHouseholderQr().solve(y);
  fit.linear_coeff_quadratic_fit = coeff(0);
  fit.quadratic_coeff = coeff(1);
  return fit;
}

double k2_from_variance(double delta_s2_out_sq, double delta_s2_in_sq) {
  if (!(delta_s2_in_sq > 0.0)) {
    throw std::invalid_argument("k2_from_variance: shot-noise variance must be > 0");
  }
  return (delta_s2_out_sq - delta_s2_in_sq) / delta_s2_in_sq;
}

double PnlSensitivity::excursion() const {
  return std::max(std::abs(f_high - f_nominal), std::abs(f_low - f_nominal));
}

PnlSensitivity pnl_sensitivity(const CoherentSet& set, const ChannelSummary& channel, double rel,
                               const QuadratureSpec& quad) {
  if (!(rel > 0.0 && rel < 1.0)) throw std::invalid_argument("pnl_sensitivity: rel in (0, 1)");
  auto at = [&](double lambda) {
    const double s = 1.0 / std::sqrt(lambda);
    const ChannelSummary c{channel.gain_x * s, channel.gain_p * s, channel.var_x / lambda,
                           channel.var_p / lambda};
    return average_fidelity(set, c, quad).value;
  };
  return {at(1.0), at(1.0 - rel), at(1.0 + rel), rel};
}

}  // namespace qmem
