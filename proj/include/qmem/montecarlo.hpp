#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qmem/protocol.hpp"

namespace qmem {

/// Verification arm. The x-arm applies the pi/2 pulse before readout, so its
/// readout carries -X_A^mem; the p-arm reads P_A^mem directly.
enum class Arm { P, X };

std::string_view arm_name(Arm arm);

struct CoherentInput {
  double x = 0.0;
  double p = 0.0;
};

struct TrialRecord {
  std::uint64_t trial_id = 0;
  Arm arm = Arm::P;
  double feedback_outcome = 0.0;
  double verification_outcome = 0.0;  // X of the readout pulse, canonical units
};

/// One storage + verification sequence using the given random stream.
TrialRecord simulate_trial(const CoherentInput& input, const StorageParams& params, Arm arm,
                           std::uint64_t trial_id, CounterStream& rng);

/// Stream used by trial `trial_id` of a series. Series with different arms
/// draw from disjoint keys.
CounterStream trial_stream(std::uint64_t seed, Arm arm, std::uint64_t trial_id);

/// Trials run in parallel over OpenMP threads (threads <= 0: runtime default).
/// Output is identical to run_series_serial for any thread count.
std::vector<TrialRecord> run_series(const CoherentInput& input, const StorageParams& params,
                                    Arm arm, std::size_t n_trials, std::uint64_t seed,
                                    int threads = 0);

std::vector<TrialRecord> run_series_serial(const CoherentInput& input,
                                           const StorageParams& params, Arm arm,
                                           std::size_t n_trials, std::uint64_t seed);

struct ReconstructedState {
  double mean_x = 0.0, mean_x_se = 0.0;
  double mean_p = 0.0, mean_p_se = 0.0;
  double var_x = 0.0, var_x_se = 0.0;
  double var_p = 0.0, var_p_se = 0.0;
  std::size_t n_x = 0, n_p = 0;
  bool var_x_negative = false;  // readout variance fell below shot noise
  bool var_p_negative = false;
};

inline constexpr std::size_t kMinTrialsForEstimate = 100;

/// Memory moments from the two verification arms, scaled by 1/k_readout with
/// the readout shot noise subtracted from the variances.
ReconstructedState estimate_channel(const std::vector<TrialRecord>& records_p,
                                    const std::vector<TrialRecord>& records_x,
                                    double k_readout);

struct GainEstimate {
  double gain_x = 0.0, gain_x_se = 0.0;
  double gain_p = 0.0, gain_p_se = 0.0;
};

/// gain_x = <X_A^mem>/<P_L^in>, gain_p = -<P_A^mem>/<X_L^in>.
GainEstimate estimate_gains(const ReconstructedState& state, const CoherentInput& input);

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  std::size_t n = 0;
};

SampleMoments sample_moments(const std::vector<double>& values);

/// Gaussian drawn over a histogram for comparison.
struct ReferenceGaussian {
  double mean = 0.0;
  double variance = 1.0;
};

/// Histogram scale that turns a readout into the memory quadrature it
/// carries: 1/k for the p-arm, -1/k for the x-arm (undoing the pi/2 sign).
double display_scale(Arm arm, double k_readout);

/// Distribution of display_scale * X_L^read-out for a perfect memory, i.e.
/// the input coherent state transferred exactly (P_A = -X_L^in, X_A = P_L^in).
ReferenceGaussian ideal_reference(const CoherentInput& input, Arm arm, double k_readout);

struct HistogramSeries {
  std::vector<double> bin_edges;
  std::vector<std::size_t> counts;
  std::size_t n_trials = 0;
  double scaled_by = 1.0;
  std::optional<ReferenceGaussian> reference;
};

/// Equal-width bins over [min, max] of scale * verification_outcome.
HistogramSeries make_histogram(const std::vector<TrialRecord>& records, std::size_t bins,
                               double scale,
                               std::optional<ReferenceGaussian> reference = std::nullopt);

}  // namespace qmem
