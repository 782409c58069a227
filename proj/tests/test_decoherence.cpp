#include <doctest.h>

#include <cmath>

#include "qmem/decoherence.hpp"

using namespace qmem;
using doctest::Approx;

namespace {

GaussianState sample_state() {
  Eigen::MatrixXd cov(2, 2);
  cov << 1.3, 0.2, 0.2, 0.4;
  Eigen::VectorXd mean(2);
  mean << 1.5, -0.7;
  return GaussianState({"atoms"}, mean, cov);
}

}  // namespace

TEST_SUITE("decoherence") {

TEST_CASE("zero time is the identity") {
  const auto s = sample_state();
  const auto d = apply_decay(s, 0.0, DecayParams{});
  CHECK((d.cov() - s.cov()).norm() < 1e-15);
  CHECK((d.mean() - s.mean()).norm() < 1e-15);
  CHECK(decay_factor(0.0, DecayParams{}) == 1.0);
}

TEST_CASE("long times reach the fixed point") {
  const DecayParams p{1e-3, 0.2};
  const auto d = apply_decay(sample_state(), 1.0, p);
  CHECK(d.mean().norm() < 1e-12);
  CHECK(d.cov()(0, 0) == Approx(0.7));
  CHECK(d.cov()(1, 1) == Approx(0.7));
  CHECK(std::abs(d.cov()(0, 1)) < 1e-12);
}

TEST_CASE("semigroup") {
  const DecayParams p{2e-3, 0.1};
  const auto s = sample_state();
  for (double t1 : {0.0, 1e-4, 7e-4}) {
    for (double t2 : {3e-4, 2e-3}) {
      const auto a = apply_decay(apply_decay(s, t1, p), t2, p);
      const auto b = apply_decay(s, t1 + t2, p);
      CHECK((a.cov() - b.cov()).norm() < 1e-12);
      CHECK((a.mean() - b.mean()).norm() < 1e-12);
    }
  }
}

TEST_CASE("decay keeps states physical") {
  const auto s = sample_state();
  for (double eps : {0.0, 0.3}) {
    for (double t : {1e-5, 1e-3, 1e-2, 0.1}) {
      const auto d = apply_decay(s, t, DecayParams{1e-2, eps});
      CHECK(symplectic_eigenvalues(d.cov()).minCoeff() >= 0.5 - 1e-9);
    }
  }
}

TEST_CASE("channel gains scale with the amplitude factor") {
  const DecayParams p{5e-3, 0.0};
  const ChannelSummary c{0.84, 0.80, 0.9, 0.7};
  const double t = 2e-3;
  const double beta = std::exp(-t / p.tau);
  const auto d = decay_channel(c, t, p);
  CHECK(d.gain_x == Approx(beta * 0.84));
  CHECK(d.gain_p == Approx(beta * 0.80));
  CHECK(d.var_x == Approx(beta * beta * 0.9 + (1 - beta * beta) * 0.5));
  CHECK(d.var_p == Approx(beta * beta * 0.7 + (1 - beta * beta) * 0.5));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(apply_decay(sample_state(), -1.0, DecayParams{}), std::invalid_argument);
  CHECK_THROWS_AS(decay_factor(1.0, DecayParams{0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(decay_factor(1.0, DecayParams{1.0, -0.1}), std::invalid_argument);
  StorageParams sp;
  CHECK_THROWS_AS(fidelity_vs_time({0, 10}, sp, DecayParams{}, {2e-3, 1e-3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fidelity_vs_time({0, 10}, sp, DecayParams{}, {-1e-3}), std::invalid_argument);
}

TEST_CASE("calibrated lifetime crosses the classical limit at 4 ms") {
  const CoherentSet set{0, 10};
  StorageParams sp;
  sp.k = 0.84;
  sp.g = 0.80;
  const double limit = optimize_classical_gain(0, 10).f_max;
  const double tau = calibrate_tau(set, sp, 0.0, 4e-3, limit);
  CHECK(tau > 0);

  std::vector<double> times;
  for (int i = 0; i <= 20; ++i) times.push_back(0.5e-3 * i);
  const auto curve = fidelity_vs_time(set, sp, DecayParams{tau, 0.0}, times);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].fidelity <= curve[i - 1].fidelity);
  }
  CHECK(curve[0].fidelity > limit);
  CHECK(curve[8].fidelity == Approx(limit).epsilon(1e-9));
  const auto crossing = find_crossing(curve, limit);
  REQUIRE(crossing.has_value());
  CHECK(std::abs(*crossing - 4e-3) < 1e-5);

  // A memory that starts below the limit cannot be calibrated.
  StorageParams bad;
  bad.k = 0.2;
  bad.g = 0.2;
  CHECK_THROWS_AS(calibrate_tau(set, bad, 0.0, 4e-3, limit), NumericalError);
}

TEST_CASE("find crossing") {
  const std::vector<LifetimePoint> curve{{0, 0.9}, {1, 0.7}, {2, 0.5}};
  CHECK(*find_crossing(curve, 0.6) == Approx(1.5));
  CHECK(*find_crossing(curve, 0.7) == Approx(1.0));
  CHECK_FALSE(find_crossing(curve, 0.4).has_value());
}

}
