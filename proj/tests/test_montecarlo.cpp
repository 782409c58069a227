#include <doctest.h>

#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "qmem/montecarlo.hpp"
#include "qmem/random.hpp"

using namespace qmem;
using doctest::Approx;

namespace {

std::vector<double> scaled(const std::vector<TrialRecord>& r, double s) {
  std::vector<double> v;
  for (const auto& t : r) v.push_back(s * t.verification_outcome);
  return v;
}

std::vector<TrialRecord> constant_records(Arm arm, std::size_t n, double value) {
  std::vector<TrialRecord> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = {i, arm, 0.0, value};
  return r;
}

}  // namespace

TEST_SUITE("montecarlo") {

TEST_CASE("histograms center where the channel puts them") {
  const CoherentInput in{0.0, -4.0};
  const StorageParams p;
  const auto rp = run_series(in, p, Arm::P, 10000, 5);
  const auto rx = run_series(in, p, Arm::X, 10000, 5);
  const auto mp = sample_moments(scaled(rp, display_scale(Arm::P, 1.0)));
  const auto mx = sample_moments(scaled(rx, display_scale(Arm::X, 1.0)));
  // p-arm: -g <X_L^in> = 0; x-arm: k <P_L^in> = -4.
  CHECK(std::abs(mp.mean - 0.0) < 4 * std::sqrt(mp.variance / 1e4));
  CHECK(std::abs(mx.mean + 4.0) < 4 * std::sqrt(mx.variance / 1e4));
  CHECK(ideal_reference(in, Arm::X, 1.0).mean == -4.0);
  CHECK(ideal_reference(in, Arm::P, 1.0).mean == 0.0);
  CHECK(ideal_reference(in, Arm::P, 2.0).variance == Approx(0.5 / 4 + 0.5));
}

TEST_CASE("single trial reproduces store_conditional") {
  const CoherentInput in{1.0, 0.5};
  const StorageParams p;
  CounterStream a = trial_stream(9, Arm::P, 0);
  const auto rec = simulate_trial(in, p, Arm::P, 0, a);
  CounterStream b = trial_stream(9, Arm::P, 0);
  const auto stored = store_conditional(coherent_state(in.x, in.p), p, b);
  CHECK(rec.feedback_outcome == stored.outcome);
  const auto joint = readout_map(stored.atoms, p.k_readout, coherent_state(0, 0, kReadoutMode));
  CHECK(rec.verification_outcome ==
        homodyne_measure(joint, kReadoutMode, Quadrature::X, b).outcome);
  CHECK(run_series(in, p, Arm::P, 1, 9).front().verification_outcome == rec.verification_outcome);
}

TEST_CASE("records do not depend on thread count") {
  const CoherentInput in{0.3, -1.0};
  StorageParams p;
  p.g = 0.8;
  const auto ref = run_series_serial(in, p, Arm::X, 3000, 77);
  for (int threads : {1, 2, 8}) {
    const auto got = run_series(in, p, Arm::X, 3000, 77, threads);
    REQUIRE(got.size() == ref.size());
    bool same = true;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      same = same && got[i].trial_id == ref[i].trial_id &&
             got[i].feedback_outcome == ref[i].feedback_outcome &&
             got[i].verification_outcome == ref[i].verification_outcome;
    }
    CHECK(same);
  }
  CHECK_THROWS_AS(run_series(in, p, Arm::X, 0, 1), std::invalid_argument);
}

TEST_CASE("estimate_channel agrees with the analytic channel") {
  const CoherentInput in{1.5, -2.0};
  for (double g : {1.0, 0.8}) {
    StorageParams p;
    p.g = g;
    const auto rp = run_series(in, p, Arm::P, 100000, 31);
    const auto rx = run_series(in, p, Arm::X, 100000, 31);
    const auto s = estimate_channel(rp, rx, p.k_readout);
    const auto gains = estimate_gains(s, in);
    const auto ch = store_channel(p);
    CHECK(std::abs(gains.gain_x - ch.gain_x) < 4 * gains.gain_x_se);
    CHECK(std::abs(gains.gain_p - ch.gain_p) < 4 * gains.gain_p_se);
    CHECK(std::abs(s.var_x - ch.var_x) < 4 * s.var_x_se);
    CHECK(std::abs(s.var_p - ch.var_p) < 4 * s.var_p_se);
    CHECK_FALSE(s.var_x_negative);
  }
}

TEST_CASE("gains 0.84 and 0.80 round trip") {
  const CoherentInput in{2.0, 3.0};
  StorageParams p;
  p.k = 0.84;
  p.g = 0.80;
  p.k_readout = 1.3;
  const auto s = estimate_channel(run_series(in, p, Arm::P, 20000, 4),
                                  run_series(in, p, Arm::X, 20000, 4), p.k_readout);
  const auto g = estimate_gains(s, in);
  CHECK(std::abs(g.gain_p - 0.80) < 4 * g.gain_p_se);
  CHECK(std::abs(g.gain_x - 0.84) < 4 * g.gain_x_se);
}

TEST_CASE("degenerate records") {
  const auto s = estimate_channel(constant_records(Arm::P, 200, 1.0),
                                  constant_records(Arm::X, 200, 1.0), 1.0);
  CHECK(s.var_p == Approx(-0.5));
  CHECK(s.var_x == Approx(-0.5));
  CHECK(s.var_p_negative);
  CHECK(s.var_x_negative);
  CHECK_THROWS_AS(estimate_channel(constant_records(Arm::P, 99, 0), constant_records(Arm::X, 200, 0), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_channel(constant_records(Arm::X, 200, 0), constant_records(Arm::X, 200, 0), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_gains(s, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("histogram variance identity") {
  const CoherentInput in{0.5, 0.5};
  StorageParams p;
  p.k_readout = 0.7;
  const auto rp = run_series(in, p, Arm::P, 5000, 12);
  const auto rx = run_series(in, p, Arm::X, 5000, 12);
  const auto s = estimate_channel(rp, rx, p.k_readout);
  const auto hp = sample_moments(scaled(rp, display_scale(Arm::P, 0.7)));
  const auto hx = sample_moments(scaled(rx, display_scale(Arm::X, 0.7)));
  const double shot = 0.5 / (0.7 * 0.7);
  CHECK(hp.variance - shot == Approx(s.var_p).epsilon(1e-12));
  CHECK(hx.variance - shot == Approx(s.var_x).epsilon(1e-12));
}

TEST_CASE("make_histogram") {
  const auto flat = make_histogram(constant_records(Arm::P, 50, 2.0), 10, 1.0);
  int occupied = 0;
  for (auto c : flat.counts) occupied += c > 0;
  CHECK(occupied == 1);
  CHECK_THROWS_AS(make_histogram({}, 10, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_histogram(constant_records(Arm::P, 5, 0), 4, 1.0), std::invalid_argument);

  // 10^4 standard normals in 50 bins: chi-square against the Gaussian.
  std::vector<TrialRecord> recs(10000);
  CounterStream rng(2024, 0);
  for (std::size_t i = 0; i < recs.size(); ++i) recs[i] = {i, Arm::P, 0.0, rng.normal()};
  const auto h = make_histogram(recs, 50, 1.0, ReferenceGaussian{0.0, 1.0});
  CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}) == h.n_trials);
  CHECK(h.bin_edges.front() <= h.bin_edges.back());
  double chi2 = 0.0;
  int dof = -1;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double pr = 0.5 * (std::erf(h.bin_edges[i + 1] / std::sqrt(2.0)) -
                             std::erf(h.bin_edges[i] / std::sqrt(2.0)));
    const double e = pr * 10000;
    if (e < 5) continue;  // sparse tail bins
    chi2 += (h.counts[i] - e) * (h.counts[i] - e) / e;
    ++dof;
  }
  const double pvalue = 1.0 - boost::math::cdf(boost::math::chi_squared(dof), chi2);
  CHECK(pvalue > 0.001);
}

}
