#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qmem/protocol.hpp"
#include "qmem/random.hpp"

using namespace qmem;
using doctest::Approx;

namespace {

// Outcome-averaged moments of the conditional memory state, accumulated
// from sampled trials (law of total covariance).
struct Averaged {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  Eigen::Vector2d mean_se = Eigen::Vector2d::Zero();
};

Averaged average_conditional(const GaussianState& light, const StorageParams& p, int n,
                             std::uint64_t seed) {
  Eigen::Vector2d s1 = Eigen::Vector2d::Zero();
  Eigen::Matrix2d s2 = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d cond = Eigen::Matrix2d::Zero();
  for (int i = 0; i < n; ++i) {
    CounterStream rng(seed, static_cast<std::uint64_t>(i));
    const auto r = store_conditional(light, p, rng);
    s1 += r.atoms.mean();
    s2 += r.atoms.mean() * r.atoms.mean().transpose();
    cond = r.atoms.cov();  // the same for every outcome
  }
  Averaged a;
  a.mean = s1 / n;
  const Eigen::Matrix2d spread = s2 / n - a.mean * a.mean.transpose();
  a.cov = cond + spread;
  a.mean_se = (spread.diagonal() / n).cwiseSqrt();
  return a;
}

}  // namespace

TEST_SUITE("protocol") {

TEST_CASE("interaction map examples") {
  CHECK(interaction_map(0.0).matrix().isIdentity());
  const GaussianState in({"light", "atoms"}, Eigen::Vector4d(0, -4, 0, 0),
                         Eigen::Matrix4d::Identity() * 0.5);
  const auto out = apply_symplectic(in, interaction_map(1.0));
  CHECK(out.mean().isApprox(Eigen::Vector4d(0, -4, -4, 0)));
  for (double k : {0.5, 1.0, 1.7}) {
    CHECK(interaction_map(k).is_symplectic());
    const auto o = apply_symplectic(vacuum_state({"light", "atoms"}), interaction_map(k));
    const double var = o.var_of("light", Quadrature::X);
    CHECK(2.0 * var - 1.0 == Approx(k * k));
  }
  CHECK(feedback_shear(2, 0, 1, 0.7).is_symplectic());
  CHECK(interaction_map(3, 2, 0, 0.4).is_symplectic());
  CHECK_THROWS_AS(interaction_map(2, 1, 1, 1.0), std::invalid_argument);
}

TEST_CASE("store_conditional with a fixed outcome") {
  const StorageParams p;
  const auto r = store_conditional(coherent_state(0, 0), p, 0.0);
  CHECK(r.atoms.mean().isZero(1e-15));
  CHECK(r.atoms.names() == std::vector<std::string>{kAtomsMode});
  // Fixed outcome x: P_A = -g x exactly once conditioned, for any k=g=1 input.
  const auto r2 = store_conditional(coherent_state(0, 0), p, 1.5);
  CHECK(r2.atoms.mean_of(kAtomsMode, Quadrature::P) == Approx(-1.5 + 1.5 * 0.5 / 1.0));
}

TEST_CASE("outcome-averaged memory matches the averaged channel") {
  StorageParams p;
  const auto light = coherent_state(2.0, -1.0);
  const auto avg = store_averaged(light, p);
  CHECK(avg.mean_of(kAtomsMode, Quadrature::P) == Approx(-2.0));
  CHECK(avg.mean_of(kAtomsMode, Quadrature::X) == Approx(-1.0));
  CHECK(avg.var_of(kAtomsMode, Quadrature::P) == Approx(0.5));
  CHECK(avg.var_of(kAtomsMode, Quadrature::X) == Approx(1.0));

  const int n = 200000;
  const auto mc = average_conditional(light, p, n, 17);
  CHECK(std::abs(mc.mean(1) - (-2.0)) < 4 * mc.mean_se(1));
  CHECK(std::abs(mc.mean(0) - (-1.0)) < 4 * mc.mean_se(0) + 1e-12);
  // Variance SEs from the chi-square law of the sample spread.
  CHECK(std::abs(mc.cov(1, 1) - 0.5) < 4 * 0.5 * std::sqrt(2.0 / n));
  CHECK(std::abs(mc.cov(0, 0) - 1.0) < 4 * 1.0 * std::sqrt(2.0 / n));
}

TEST_CASE("averaged state equals closed form for random parameters") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int i = 0; i < 40; ++i) {
    StorageParams p;
    p.k = u(rng);
    p.g = u(rng) - 0.5;
    p.atomic_init_var_x = 0.3 * u(rng);
    p.atomic_init_var_p = 0.25 / p.atomic_init_var_x * u(rng) + 0.25 / p.atomic_init_var_x;
    const double lvx = 0.2 * u(rng);
    const double lvp = 0.25 / lvx;
    const GaussianState light({"light"}, Eigen::Vector2d(0.3, -0.8),
                              Eigen::Vector2d(lvx, lvp).asDiagonal());
    const auto avg = store_averaged(light, p);
    const auto ch = store_channel(p, lvx, lvp);
    CHECK(avg.var_of(kAtomsMode, Quadrature::X) == Approx(ch.var_x).epsilon(1e-12));
    CHECK(avg.var_of(kAtomsMode, Quadrature::P) == Approx(ch.var_p).epsilon(1e-12));
    CHECK(avg.mean_of(kAtomsMode, Quadrature::X) == Approx(ch.gain_x * -0.8).epsilon(1e-12));
    CHECK(avg.mean_of(kAtomsMode, Quadrature::P) == Approx(-ch.gain_p * 0.3).epsilon(1e-12));
    CHECK(check_physical(avg).ok);
  }
}

TEST_CASE("store_channel examples and properties") {
  const auto ideal = store_channel(StorageParams{});
  CHECK(ideal.gain_x == 1.0);
  CHECK(ideal.gain_p == 1.0);
  CHECK(ideal.var_x == 1.0);
  CHECK(ideal.var_p == 0.5);

  StorageParams no_feedback;
  no_feedback.g = 0.0;
  no_feedback.atomic_init_var_p = 0.7;
  const auto nf = store_channel(no_feedback);
  CHECK(nf.gain_p == 0.0);
  CHECK(nf.var_p == Approx(0.7));

  for (double vx : {0.1, 0.01, 1e-4}) {
    CHECK(store_channel(StorageParams::squeezed(1, 1, vx)).var_x == Approx(0.5 + vx));
  }

  // var_p at k = g = 1 does not see the initial P variance.
  StorageParams a = StorageParams::squeezed(1, 1, 0.05);
  CHECK(store_channel(a).var_p == Approx(0.5));

  double last = 0.0;
  for (double k = 0.0; k <= 2.0; k += 0.1) {
    StorageParams p;
    p.k = k;
    const double vx = store_channel(p).var_x;
    CHECK(vx > last);
    last = vx;
  }
}

TEST_CASE("feedback gain minimizing var_p") {
  for (double k : {0.5, 0.84, 1.0, 1.5}) {
    for (double v : {0.5, 0.2, 2.0}) {
      StorageParams p;
      p.k = k;
      p.atomic_init_var_p = v;
      p.atomic_init_var_x = std::max(0.5, 0.25 / v);
      auto var_p = [&](double g) {
        StorageParams q = p;
        q.g = g;
        return store_channel(q).var_p;
      };
      // var_p is quadratic in g: three samples fix the vertex.
      const double f0 = var_p(0.0), f1 = var_p(1.0), f2 = var_p(2.0);
      const double vertex = 1.0 - 0.5 * (f2 - f0) / (f2 - 2 * f1 + f0);
      const double closed = 2.0 * k * v / (1.0 + 2.0 * k * k * v);
      CHECK(std::abs(vertex - closed) < 1e-9);
      const double golden = oracle::golden_section_max([&](double g) { return -var_p(g); },
                                                       -1.0, 3.0, 1e-10);
      CHECK(std::abs(golden - closed) < 1e-6);
    }
  }
}

TEST_CASE("readout map") {
  const GaussianState atoms({kAtomsMode}, Eigen::Vector2d(0.0, -4.0),
                            Eigen::Vector2d(0.7, 0.3).asDiagonal());
  const auto fresh = coherent_state(0, 0, kReadoutMode);
  const auto j = readout_map(atoms, 1.0, fresh);
  CHECK(j.mean_of(kReadoutMode, Quadrature::X) == Approx(-4.0));
  CHECK(j.var_of(kReadoutMode, Quadrature::X) == Approx(0.5 + 0.3));
  const auto j0 = readout_map(atoms, 0.0, fresh);
  CHECK(j0.mean_of(kReadoutMode, Quadrature::X) == 0.0);
  CHECK(j0.var_of(kReadoutMode, Quadrature::X) == 0.5);
  const auto j2 = readout_map(atoms, 1.6, fresh);
  CHECK(j2.var_of(kReadoutMode, Quadrature::X) == Approx(0.5 + 1.6 * 1.6 * 0.3));
}

TEST_CASE("pi/2 pulse") {
  const GaussianState a({kAtomsMode}, Eigen::Vector2d(3.0, 0.0),
                        Eigen::Vector2d(0.9, 0.4).asDiagonal());
  const auto r = pi_half_pulse(a);
  CHECK(r.mean()(0) == Approx(0.0));
  CHECK(r.mean()(1) == Approx(-3.0));
  const auto rr = pi_half_pulse(r);
  CHECK(rr.mean()(0) == Approx(-3.0));
  CHECK(rr.cov().isApprox(a.cov()));
  // The readout after the pulse sees the former X variance.
  const auto j = readout_map(r, 1.0, coherent_state(0, 0, kReadoutMode));
  CHECK(j.var_of(kReadoutMode, Quadrature::X) == Approx(0.5 + 0.9));
}

TEST_CASE("variance reconstruction") {
  CHECK(reconstruct_atomic_variance(1.0, 1.0) == Approx(0.5));
  CHECK(reconstruct_atomic_variance(0.5, 0.3) == 0.0);
  CHECK(reconstruct_atomic_variance(0.4, 1.0) == Approx(-0.1));  // reported, not clamped
  CHECK_THROWS_AS(reconstruct_atomic_variance(1.0, 0.0), std::invalid_argument);

  StorageParams p;
  p.k = 0.84;
  p.g = 0.8;
  const auto mem = store_averaged(coherent_state(0, 0), p);
  for (double kr : {0.5, 1.0, 2.0}) {
    const auto j = readout_map(mem, kr, coherent_state(0, 0, kReadoutMode));
    const double back = reconstruct_atomic_variance(j.var_of(kReadoutMode, Quadrature::X), kr);
    CHECK(std::abs(back - store_channel(p).var_p) < 1e-12);
  }
}

TEST_CASE("parameter validation") {
  StorageParams p;
  p.k = -1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = StorageParams{};
  p.atomic_init_var_x = 0.1;
  p.atomic_init_var_p = 0.1;
  CHECK_THROWS_AS(store_channel(p), std::invalid_argument);
  CHECK_THROWS_AS(store_averaged(vacuum_state({"a", "b"}), StorageParams{}),
                  std::invalid_argument);
}

TEST_CASE("reverse readout") {
  const auto mem = store_averaged(coherent_state(1.2, -0.7), StorageParams{});
  const auto out = reverse_readout(mem, ReverseReadoutParams{});
  CHECK(out.names() == std::vector<std::string>{kReadoutMode});
  CHECK(out.mean_of(kReadoutMode, Quadrature::X) == Approx(1.2));
  CHECK(out.mean_of(kReadoutMode, Quadrature::P) == Approx(-0.7));
  CHECK(out.var_of(kReadoutMode, Quadrature::X) == Approx(1.0));
  CHECK(out.var_of(kReadoutMode, Quadrature::P) == Approx(1.5));
  CHECK(check_physical(out).ok);

  // Squeezed atoms and auxiliary: still mean preserving.
  const auto mem_sq = store_averaged(coherent_state(-2.0, 3.0), StorageParams::squeezed(1, 1, 1e-3));
  ReverseReadoutParams sq;
  sq.aux_var_x = 1e-3;
  sq.aux_var_p = 250.0;
  const auto out_sq = reverse_readout(mem_sq, sq);
  CHECK(out_sq.mean_of(kReadoutMode, Quadrature::X) == Approx(-2.0));
  CHECK(out_sq.mean_of(kReadoutMode, Quadrature::P) == Approx(3.0));
  CHECK(out_sq.var_of(kReadoutMode, Quadrature::P) < 0.51);

  ReverseReadoutParams nofb;
  nofb.g = 0.0;
  CHECK(reverse_readout(mem, nofb).mean_of(kReadoutMode, Quadrature::P) == Approx(0.0));
}

TEST_CASE("conditional reverse readout averages to the deterministic one") {
  const auto mem = store_averaged(coherent_state(0.8, 0.5), StorageParams{});
  const ReverseReadoutParams rp;
  const auto expect = reverse_readout(mem, rp);
  const int n = 100000;
  Eigen::Vector2d s1 = Eigen::Vector2d::Zero();
  Eigen::Matrix2d s2 = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d cond;
  for (int i = 0; i < n; ++i) {
    CounterStream rng(23, static_cast<std::uint64_t>(i));
    const auto r = reverse_readout_conditional(mem, rp, rng);
    s1 += r.light.mean();
    s2 += r.light.mean() * r.light.mean().transpose();
    cond = r.light.cov();
  }
  const Eigen::Vector2d m = s1 / n;
  const Eigen::Matrix2d total = cond + s2 / n - m * m.transpose();
  for (int q = 0; q < 2; ++q) {
    const double var = expect.cov()(q, q);
    CHECK(std::abs(m(q) - expect.mean()(q)) < 4 * std::sqrt(var / n));
    CHECK(std::abs(total(q, q) - var) < 4 * var * std::sqrt(2.0 / n));
  }
}

}
