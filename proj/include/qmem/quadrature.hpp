#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmem {

/// Raised when an iterative numerical method fails to meet its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule via Newton iteration on P_n.
GaussLegendreRule gauss_legendre(std::size_t n);

/// Fixed-rule integral of f over [a, b].
template <class F>
double integrate_fixed(const GaussLegendreRule& rule, double a, double b, F&& f) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * acc;
}

struct QuadratureSpec {
  std::size_t radial_nodes = 16;
  std::size_t angular_nodes = 16;
  double tolerance = 1e-10;
  std::size_t max_doublings = 10;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t radial_nodes = 0;
  std::size_t angular_nodes = 0;
};

}  // namespace qmem
