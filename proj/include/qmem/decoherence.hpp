#pragma once

#include <optional>
#include <vector>

#include "qmem/fidelity.hpp"
#include "qmem/gaussian.hpp"

namespace qmem {

/// Exponential amplitude decay toward an isotropic CSS-plus-excess state.
struct DecayParams {
  double tau = 1e-2;               // seconds
  double excess_noise_rate = 0.0;  // extra variance at full decay, canonical units

  void validate() const;
};

/// Amplitude factor exp(-t / tau).
double decay_factor(double t, const DecayParams& params);

/// Means scale by beta, covariance -> beta^2 cov + (1 - beta^2)(1/2 + excess) I.
GaussianState apply_decay(const GaussianState& state, double t, const DecayParams& params);

/// The same map on a channel summary.
ChannelSummary decay_channel(const ChannelSummary& channel, double t, const DecayParams& params);

struct LifetimePoint {
  double t = 0.0;
  double fidelity = 0.0;
};

/// Storage channel followed by decay, averaged over the set at each time.
std::vector<LifetimePoint> fidelity_vs_time(const CoherentSet& set, const StorageParams& params,
                                            const DecayParams& decay,
                                            const std::vector<double>& times,
                                            const QuadratureSpec& quad = {});

/// tau for which the decayed channel's fidelity equals `threshold` at t_cross.
/// Throws NumericalError if even tau -> infinity stays below threshold.
double calibrate_tau(const CoherentSet& set, const StorageParams& params, double excess_noise_rate,
                     double t_cross, double threshold, const QuadratureSpec& quad = {});

/// First time where the curve drops below threshold, linearly interpolated.
/// Empty if it never does.
std::optional<double> find_crossing(const std::vector<LifetimePoint>& curve, double threshold);

}  // namespace qmem
