#include "qmem/decoherence.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

namespace qmem {

void DecayParams::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("DecayParams: tau > 0");
  if (!(excess_noise_rate >= 0.0) || !std::isfinite(excess_noise_rate)) {
    throw std::invalid_argument("DecayParams: excess_noise_rate must be >= 0");
  }
}

double decay_factor(double t, const DecayParams& params) {
  params.validate();
  if (!(t >= 0.0)) throw std::invalid_argument("decay: t must be >= 0");
  return std::exp(-t / params.tau);
}

GaussianState apply_decay(const GaussianState& state, double t, const DecayParams& params) {
  const double beta = decay_factor(t, params);
  const double b2 = beta * beta;
  const double floor = kVacuumVariance + params.excess_noise_rate;
  Eigen::MatrixXd cov = b2 * state.cov();
  cov.diagonal().array() += (1.0 - b2) * floor;
  return GaussianState(state.names(), beta * state.mean(), cov);
}

ChannelSummary decay_channel(const ChannelSummary& channel, double t, const DecayParams& params) {
  const double beta = decay_factor(t, params);
  const double b2 = beta * beta;
  const double floor = kVacuumVariance + params.excess_noise_rate;
  return {beta * channel.gain_x, beta * channel.gain_p, b2 * channel.var_x + (1.0 - b2) * floor,
          b2 * channel.var_p + (1.0 - b2) * floor};
}

std::vector<LifetimePoint> fidelity_vs_time(const CoherentSet& set, const StorageParams& params,
                                            const DecayParams& decay,
                                            const std::vector<double>& times,
                                            const QuadratureSpec& quad) {
  decay.validate();
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0)) throw std::invalid_argument("fidelity_vs_time: times must be >= 0");
    if (i > 0 && times[i] < times[i - 1]) {
      throw std::invalid_argument("fidelity_vs_time: times must be sorted");
    }
  }
  const ChannelSummary base = store_channel(params);
  std::vector<LifetimePoint> curve;
  curve.reserve(times.size());
  for (double t : times) {
    curve.push_back({t, average_fidelity(set, decay_channel(base, t, decay), quad).value});
  }
  return curve;
}

double calibrate_tau(const CoherentSet& set, const StorageParams& params, double excess_noise_rate,
                     double t_cross, double threshold, const QuadratureSpec& quad) {
  if (!(t_cross > 0.0)) throw std::invalid_argument("calibrate_tau: t_cross must be > 0");
  const ChannelSummary base = store_channel(params);
  const double f0 = average_fidelity(set, base, quad).value;
  if (!(f0 > threshold)) {
    throw NumericalError(fmt::format(
        "calibrate_tau: undecayed fidelity {:.6f} does not exceed threshold {:.6f}", f0,
        threshold));
  }
  // Work in u = log(tau) so the bracket can span many decades.
  auto excess = [&](double u) {
    const DecayParams d{std::exp(u), excess_noise_rate};
    return average_fidelity(set, decay_channel(base, t_cross, d), quad).value - threshold;
  };
  double lo = std::log(t_cross) - 10.0;
  double hi = std::log(t_cross) + 10.0;
  if (excess(lo) > 0.0 || excess(hi) < 0.0) {
    throw NumericalError("calibrate_tau: threshold crossing not bracketed");
  }
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      excess, lo, hi, boost::math::tools::eps_tolerance<double>(48), iters);
  if (iters >= 200) throw NumericalError("calibrate_tau: root finder did not converge");
  return std::exp(0.5 * (a + b));
}

std::optional<double> find_crossing(const std::vector<LifetimePoint>& curve, double threshold) {
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].fidelity < threshold) {
      if (i == 0) return curve[0].t;
      const auto& p = curve[i - 1];
      const auto& q = curve[i];
      const double s = (p.fidelity - threshold) / (p.fidelity - q.fidelity);
      return p.t + s * (q.t - p.t);
    }
  }
  return std::nullopt;
}

}  // namespace qmem
