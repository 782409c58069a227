#include "qmem/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#include <omp.h>

#include "qmem/random.hpp"

namespace qmem {

std::string_view arm_name(Arm arm) { return arm == Arm::P ? "p" : "x"; }

CounterStream trial_stream(std::uint64_t seed, Arm arm, std::uint64_t trial_id) {
  return CounterStream(derive_seed(seed, arm == Arm::P ? 0x70u : 0x78u), trial_id);
}

TrialRecord simulate_trial(const CoherentInput& input, const StorageParams& params, Arm arm,
                           std::uint64_t trial_id, CounterStream& rng) {
  const GaussianState light = coherent_state(input.x, input.p, "light");
  StoreResult stored = store_conditional(light, params, rng);
  GaussianState atoms = arm == Arm::X ? pi_half_pulse(stored.atoms) : std::move(stored.atoms);
  const GaussianState joint =
      readout_map(atoms, params.k_readout, coherent_state(0.0, 0.0, kReadoutMode));
  const HomodyneResult verify = homodyne_measure(joint, kReadoutMode, Quadrature::X, rng);
  return {trial_id, arm, stored.outcome, verify.outcome};
}

std::vector<TrialRecord> run_series_serial(const CoherentInput& input,
                                           const StorageParams& params, Arm arm,
                                           std::size_t n_trials, std::uint64_t seed) {
  if (n_trials == 0) throw std::invalid_argument("run_series: n_trials must be >= 1");
  params.validate();
  std::vector<TrialRecord> out;
  out.reserve(n_trials);
  for (std::size_t i = 0; i < n_trials; ++i) {
    CounterStream rng = trial_stream(seed, arm, i);
    out.push_back(simulate_trial(input, params, arm, i, rng));
  }
  return out;
}

std::vector<TrialRecord> run_series(const CoherentInput& input, const StorageParams& params,
                                    Arm arm, std::size_t n_trials, std::uint64_t seed,
                                    int threads) {
  if (n_trials == 0) throw std::invalid_argument("run_series: n_trials must be >= 1");
  params.validate();
  std::vector<TrialRecord> out(n_trials);
  std::exception_ptr failure;
  const int n_threads = threads > 0 ? threads : omp_get_max_threads();
  const auto n = static_cast<long long>(n_trials);
#pragma omp parallel for schedule(static) num_threads(n_threads)
  for (long long i = 0; i < n; ++i) {
    try {
      const auto id = static_cast<std::uint64_t>(i);
      CounterStream rng = trial_stream(seed, arm, id);
      out[static_cast<std::size_t>(i)] = simulate_trial(input, params, arm, id, rng);
    } catch (...) {
#pragma omp critical(qmem_run_series)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

SampleMoments sample_moments(const std::vector<double>& values) {
  SampleMoments m;
  m.n = values.size();
  if (m.n == 0) return m;
  // Two-pass in record order, so results do not depend on scheduling.
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(m.n);
  if (m.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.variance = ss / static_cast<double>(m.n - 1);
  }
  return m;
}

namespace {

SampleMoments readout_moments(const std::vector<TrialRecord>& records, Arm expected) {
  std::vector<double> values;
  values.reserve(records.size());
  for (const auto& r : records) {
    if (r.arm != expected) throw std::invalid_argument("estimate_channel: record from wrong arm");
    values.push_back(r.verification_outcome);
  }
  return sample_moments(values);
}

}  // namespace

ReconstructedState estimate_channel(const std::vector<TrialRecord>& records_p,
                                    const std::vector<TrialRecord>& records_x,
                                    double k_readout) {
  if (records_p.size() < kMinTrialsForEstimate || records_x.size() < kMinTrialsForEstimate) {
    throw std::invalid_argument("estimate_channel: need at least 100 trials in each arm");
  }
  if (!(k_readout > 0.0)) throw std::invalid_argument("estimate_channel: k_readout must be > 0");
  const SampleMoments mp = readout_moments(records_p, Arm::P);
  const SampleMoments mx = readout_moments(records_x, Arm::X);
  const double k2 = k_readout * k_readout;

  ReconstructedState s;
  s.n_p = mp.n;
  s.n_x = mx.n;
  s.mean_p = mp.mean / k_readout;
  s.mean_p_se = std::sqrt(mp.variance / static_cast<double>(mp.n)) / k_readout;
  // The x-arm reads P after the pi/2 pulse, which is -X_A^mem.
  s.mean_x = -mx.mean / k_readout;
  s.mean_x_se = std::sqrt(mx.variance / static_cast<double>(mx.n)) / k_readout;
  s.var_p = reconstruct_atomic_variance(mp.variance, k_readout);
  s.var_x = reconstruct_atomic_variance(mx.variance, k_readout);
  s.var_p_se = mp.variance * std::sqrt(2.0 / static_cast<double>(mp.n - 1)) / k2;
  s.var_x_se = mx.variance * std::sqrt(2.0 / static_cast<double>(mx.n - 1)) / k2;
  s.var_p_negative = s.var_p < 0.0;
  s.var_x_negative = s.var_x < 0.0;
  return s;
}

GainEstimate estimate_gains(const ReconstructedState& state, const CoherentInput& input) {
  if (input.x == 0.0 || input.p == 0.0) {
    throw std::invalid_argument("estimate_gains: both input quadratures must be nonzero");
  }
  GainEstimate g;
  g.gain_x = state.mean_x / input.p;
  g.gain_x_se = state.mean_x_se / std::abs(input.p);
  g.gain_p = -state.mean_p / input.x;
  g.gain_p_se = state.mean_p_se / std::abs(input.x);
  return g;
}

double display_scale(Arm arm, double k_readout) {
  if (!(k_readout > 0.0)) throw std::invalid_argument("display_scale: k_readout must be > 0");
  return arm == Arm::P ? 1.0 / k_readout : -1.0 / k_readout;
}

ReferenceGaussian ideal_reference(const CoherentInput& input, Arm arm, double k_readout) {
  if (!(k_readout > 0.0)) throw std::invalid_argument("ideal_reference: k_readout must be > 0");
  const double mean = arm == Arm::P ? -input.x : input.p;
  const double var = kVacuumVariance / (k_readout * k_readout) + kVacuumVariance;
  return {mean, var};
}

HistogramSeries make_histogram(const std::vector<TrialRecord>& records, std::size_t bins,
                               double scale, std::optional<ReferenceGaussian> reference) {
  if (records.empty()) throw std::invalid_argument("make_histogram: no records");
  if (bins < 5) throw std::invalid_argument("make_histogram: need at least 5 bins");
  std::vector<double> samples;
  samples.reserve(records.size());
  for (const auto& r : records) samples.push_back(scale * r.verification_outcome);
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }

  HistogramSeries h;
  h.n_trials = samples.size();
  h.scaled_by = scale;
  h.reference = reference;
  h.counts.assign(bins, 0);
  h.bin_edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) h.bin_edges[i] = lo + width * static_cast<double>(i);
  h.bin_edges.back() = hi;
  for (double v : samples) {
    auto idx = static_cast<std::size_t>((v - lo) / width);
    if (idx >= bins) idx = bins - 1;  // the top edge belongs to the last bin
    ++h.counts[idx];
  }
  return h;
}

}  // namespace qmem
