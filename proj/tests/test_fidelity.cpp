#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qmem/fidelity.hpp"

using namespace qmem;
using doctest::Approx;

TEST_SUITE("fidelity") {

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  for (std::size_t n : {2u, 5u, 16u, 64u}) {
    const auto rule = gauss_legendre(n);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == Approx(2.0).epsilon(1e-14));
    const int deg = static_cast<int>(2 * n - 1);
    const double got = integrate_fixed(rule, 0.0, 1.0, [&](double x) { return std::pow(x, deg); });
    CHECK(got == Approx(1.0 / (deg + 1)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("overlap examples") {
  CHECK(overlap(1.0, -2.0, 1.0, -2.0, 0.5, 0.5) == Approx(1.0));
  CHECK(overlap(0, 0, 0, 0, 1.0, 0.5) == Approx(2.0 / std::sqrt(6.0)));
  CHECK(overlap(1, 0, 0, 0, 0.5, 0.5) == Approx(std::exp(-0.5)));
  CHECK_THROWS_AS(overlap(0, 0, 0, 0, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("overlap agrees with a grid Wigner-function overlap") {
  // O = 2 pi \int W_coh W_out for a pure coherent input.
  const double x1 = 0.4, p1 = -0.3, x2 = -0.2, p2 = 0.5, vx = 0.9, vp = 0.35;
  auto wig = [](double x, double p, double mx, double mp, double sx, double sp) {
    return std::exp(-(x - mx) * (x - mx) / (2 * sx) - (p - mp) * (p - mp) / (2 * sp)) /
           (2 * std::numbers::pi * std::sqrt(sx * sp));
  };
  const int n = 600;
  const double lo = -8, hi = 8, h = (hi - lo) / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = lo + (i + 0.5) * h, p = lo + (j + 0.5) * h;
      acc += wig(x, p, x1, p1, 0.5, 0.5) * wig(x, p, x2, p2, vx, vp);
    }
  }
  CHECK(2 * std::numbers::pi * acc * h * h == Approx(overlap(x1, p1, x2, p2, vx, vp)).epsilon(1e-8));
}

TEST_CASE("overlap symmetries") {
  CHECK(overlap(1, 2, -0.5, 0.3, 0.8, 0.6) == Approx(overlap(-0.5, 0.3, 1, 2, 0.8, 0.6)));
  const double th = 0.7, c = std::cos(th), s = std::sin(th);
  const double a = overlap(1, 2, -0.5, 0.3, 0.8, 0.8);
  const double b = overlap(c + s * 2, -s + c * 2, -0.5 * c + s * 0.3, 0.5 * s + c * 0.3, 0.8, 0.8);
  CHECK(a == Approx(b));
}

TEST_CASE("average fidelity of simple channels") {
  const CoherentSet sets[] = {{0, 1}, {0, 8}, {2, 5}, {0, 40}};
  for (const auto& set : sets) {
    CHECK(average_fidelity(set, ChannelSummary{1, 1, 0.5, 0.5}).value == Approx(1.0).epsilon(1e-12));
    CHECK(average_fidelity(set, store_channel(StorageParams{})).value ==
          Approx(2.0 / std::sqrt(6.0)).epsilon(1e-12));
  }
}

TEST_CASE("exact angular reduction equals 2-d quadrature") {
  const ChannelSummary chans[] = {{0.84, 0.80, 0.7735, 0.7735},
                                  {0.5, 1.2, 0.6, 2.0},
                                  {0.95, 0.95, 0.55, 0.9},
                                  {1.0, 0.3, 0.5, 0.5}};
  for (const auto& ch : chans) {
    for (const CoherentSet set : {CoherentSet{0, 8}, CoherentSet{1, 3}}) {
      const double a = average_fidelity(set, ch).value;
      const double b = average_fidelity_2d(set, ch).value;
      CHECK(std::abs(a - b) < 1e-8);
      const PhaseSpaceChannel ps = as_phase_space(ch);
      const double c = oracle::polar_average(
          [&](double x, double p) {
            return oracle::overlap(x, p, ps.gain_x * x, ps.gain_p * p, ps.var_x, ps.var_p);
          },
          set.n_min, set.n_max);
      CHECK(std::abs(a - c) < 1e-7);
    }
  }
}

TEST_CASE("quadrature failure reports node counts") {
  QuadratureSpec q;
  q.tolerance = 1e-300;
  q.max_doublings = 2;
  try {
    average_fidelity({0, 8}, ChannelSummary{0.8, 0.8, 0.7, 0.7}, q);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("radial nodes 64") != std::string::npos);
  }
}

TEST_CASE("classical fidelity closed form against quadrature") {
  // Reference values: scipy dblquad of the coherent-state overlap over the set.
  const std::pair<double, double> ref[] = {
      {0.5, 0.39905174100}, {0.7, 0.53223166245}, {0.809, 0.55411089414}, {0.95, 0.52287102687}};
  for (auto [g, f] : ref) {
    CHECK(std::abs(classical_fidelity(g, 0, 8) - f) < 1e-10);
    const double s = 1 + g * g;
    const double quad = oracle::polar_average(
        [&](double x, double p) {
          const double a2 = x * x + p * p;
          return std::exp(-0.5 * (1 - g) * (1 - g) * a2 / s) / s;
        },
        0, 8);
    CHECK(std::abs(classical_fidelity(g, 0, 8) - quad) < 1e-6);
    CHECK(std::abs(average_fidelity_2d({0, 8}, classical_channel(g)).value -
                   classical_fidelity(g, 0, 8)) < 1e-6);
  }
  CHECK(classical_fidelity(1.0, 0, 8) == 0.5);
  CHECK(classical_fidelity(1.0, 3, 100) == 0.5);
  CHECK_THROWS_AS(classical_fidelity(0.5, 4, 4), std::invalid_argument);
}

TEST_CASE("classical optimum") {
  const auto o8 = optimize_classical_gain(0, 8);
  CHECK(o8.g_opt == Approx(0.809).epsilon(0.005 / 0.809));
  CHECK(std::abs(o8.f_max - 0.554) < 0.002);
  const auto o4 = optimize_classical_gain(0, 4);
  CHECK(std::abs(o4.f_max - 0.596) < 0.002);

  for (auto [n1, n2] : {std::pair{0.0, 8.0}, {0.0, 4.0}, {1.0, 6.0}, {0.0, 10.0}}) {
    const auto o = optimize_classical_gain(n1, n2);
    const double g = oracle::golden_section_max(
        [&](double x) { return classical_fidelity(x, n1, n2); }, 0.0, 1.0, 1e-12);
    CHECK(std::abs(o.g_opt - g) < 1e-6);
  }

  // Thin shell: pointwise optimum from a dense grid.
  const double n = 3.0;
  const auto thin = optimize_classical_gain(n - 1e-6, n);
  double best_g = 0, best_f = -1;
  for (int i = 0; i <= 100000; ++i) {
    const double g = i / 100000.0;
    const double s = 1 + g * g;
    const double f = std::exp(-(1 - g) * (1 - g) * n / s) / s;
    if (f > best_f) best_f = f, best_g = g;
  }
  CHECK(std::abs(thin.g_opt - best_g) < 2e-5);
}

TEST_CASE("classical optimum decreases with the set size") {
  double last = 1.0;
  for (double n2 : {1.0, 2.0, 4.0, 8.0, 16.0, 64.0, 1000.0, 1e6}) {
    const double f = optimize_classical_gain(0, n2).f_max;
    CHECK(f <= last);
    last = f;
  }
  CHECK(last == Approx(0.5).epsilon(1e-3));
}

TEST_CASE("variance bounds") {
  CHECK(classical_variance_bound(1.0) == 1.5);
  CHECK(to_pn_units(classical_variance_bound(1.0)) == 3.0);
  CHECK(classical_variance_bound(0.0) == 0.5);
  CHECK(to_pn_units(classical_variance_bound(0.809)) == Approx(2.309).epsilon(1e-4));
  CHECK(0.67 * to_pn_units(classical_variance_bound(0.809)) == Approx(1.547).epsilon(1e-3));
  CHECK(from_pn_units(to_pn_units(0.37)) == 0.37);
}

TEST_CASE("set validation") {
  CHECK_THROWS_AS(average_fidelity({3, 3}, ChannelSummary{}), std::invalid_argument);
  CHECK_THROWS_AS(average_fidelity({-1, 3}, ChannelSummary{}), std::invalid_argument);
  CHECK_THROWS_AS(average_fidelity({0, 3}, ChannelSummary{1, 1, 0, 1}), std::invalid_argument);
}

}
