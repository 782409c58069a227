#pragma once

#include "qmem/protocol.hpp"
#include "qmem/quadrature.hpp"

namespace qmem {

/// Coherent inputs with mean photon number n = alpha^2 / 2 in [n_min, n_max]
/// and uniformly distributed phase.
struct CoherentSet {
  double n_min = 0.0;
  double n_max = 8.0;

  void validate() const;
  double alpha_min() const;
  double alpha_max() const;
};

/// Overlap of a coherent state at (x1, p1) with a Gaussian state at (x2, p2)
/// with quadrature variances var_x, var_p.
double overlap(double x1, double p1, double x2, double p2, double var_x, double var_p);

/// The storage channel as seen from the input light's phase space. The
/// memory holds X_L^in in -P_A and P_L^in in X_A, so the input X quadrature
/// is governed by (gain_p, var_p) and the input P quadrature by
/// (gain_x, var_x).
struct PhaseSpaceChannel {
  double gain_x = 1.0;  // applied to the input X quadrature
  double gain_p = 1.0;  // applied to the input P quadrature
  double var_x = kVacuumVariance;
  double var_p = kVacuumVariance;
};

PhaseSpaceChannel as_phase_space(const ChannelSummary& channel);

/// Set-averaged overlap. The angular integral is done exactly
/// (modified Bessel I0), the radial one by Gauss-Legendre with node doubling.
QuadratureResult average_fidelity(const CoherentSet& set, const ChannelSummary& channel,
                                  const QuadratureSpec& quad = {});

/// Same average by direct 2-d quadrature: Gauss-Legendre in the amplitude,
/// periodic trapezoid in the phase, both doubled until converged.
QuadratureResult average_fidelity_2d(const CoherentSet& set, const ChannelSummary& channel,
                                     const QuadratureSpec& quad = {});

/// Measure-and-prepare fidelity with gain g averaged over the set, closed
/// form. At g = 1 returns the limit 1 / (1 + g^2) = 1/2.
double classical_fidelity(double g, double n1, double n2);

struct ClassicalOptimum {
  double g_opt = 0.0;
  double f_max = 0.0;
};

/// Maximizes classical_fidelity over g in (0, 1].
ClassicalOptimum optimize_classical_gain(double n1, double n2);

/// Output variance per quadrature of measure-and-prepare recording with gain
/// g, canonical units.
double classical_variance_bound(double g);

/// Variance in projection-noise units (a CSS reads 1).
inline double to_pn_units(double canonical_variance) { return 2.0 * canonical_variance; }
inline double from_pn_units(double pn_variance) { return 0.5 * pn_variance; }

/// Channel summary for measure-and-prepare recording with gain g.
ChannelSummary classical_channel(double g);

}  // namespace qmem
