#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qmem/fidelity.hpp"

namespace qmem {

/// One point of a projection-noise calibration sweep.
struct CalibrationPoint {
  double jx_proxy = 0.0;          // spin-size proxy, arbitrary units
  double normalized_noise = 0.0;  // (var_out - var_in) / var_in
  double se = 0.0;
  std::uint64_t n_cycles = 0;
};

struct SynthesisOptions {
  // Cycles used to estimate the shot-noise reference. 0 means the reference
  // is known exactly and only the atomic measurement is sampled.
  std::uint64_t shot_noise_cycles = 0;
};

/// Simulated sweep. At each jx the light variance in shot-noise units is
/// 1 + k2_per_unit * jx + classical_coeff * jx^2, estimated from n_cycles
/// Gaussian samples (so the sample variance has exact chi-square statistics).
std::vector<CalibrationPoint> synthesize_series(double k2_per_unit, double classical_coeff,
                                                const std::vector<double>& jx_values,
                                                std::uint64_t n_cycles, std::uint64_t seed,
                                                const SynthesisOptions& options = {});

struct CalibrationFit {
  double slope = 0.0;  // k^2 per unit jx
  double slope_se = 0.0;
  double quadratic_coeff = 0.0;  // c in y = b jx + c jx^2 over all points
  double linear_coeff_quadratic_fit = 0.0;
  double chi2_per_dof = 0.0;
  double jx_max = 0.0;
  std::size_t n_used = 0;
};

/// Weighted least-squares line through zero over points with jx <= jx_max
/// (default: the median jx, i.e. the lower half of the sweep). If every
/// point has se == 0 the fit is unweighted.
CalibrationFit fit_pnl(const std::vector<CalibrationPoint>& points,
                       std::optional<double> jx_max = std::nullopt);

/// Normalized excess noise from output and input light variances.
double k2_from_variance(double delta_s2_out_sq, double delta_s2_in_sq);

struct PnlSensitivity {
  double f_nominal = 0.0;
  double f_low = 0.0;   // PNL scaled by 1 - rel
  double f_high = 0.0;  // PNL scaled by 1 + rel
  double rel = 0.0;
  double excursion() const;
};

/// Fidelity change when the projection-noise level is misjudged by a factor
/// lambda: everything expressed in PN units rescales, so gains go as
/// 1/sqrt(lambda) and variances as 1/lambda.
PnlSensitivity pnl_sensitivity(const CoherentSet& set, const ChannelSummary& channel,
                               double rel = 0.1, const QuadratureSpec& quad = {});

}  // namespace qmem
