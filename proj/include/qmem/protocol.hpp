#pragma once

#include <string>

#include "qmem/gaussian.hpp"

namespace qmem {

class CounterStream;

// Mode names used by the protocol. The memory is a single canonical mode
// built from the two-cell spin combinations.
inline const std::string kAtomsMode = "atoms";
inline const std::string kReadoutMode = "readout";
inline const std::string kAuxMode = "aux";

struct StorageParams {
  double k = 1.0;          // write coupling
  double g = 1.0;          // feedback gain
  double k_readout = 1.0;  // verification coupling
  double atomic_init_var_x = kVacuumVariance;
  double atomic_init_var_p = kVacuumVariance;

  /// Minimum-uncertainty initial atoms with X variance `var_x`.
  static StorageParams squeezed(double k, double g, double var_x);

  void validate() const;  // throws std::invalid_argument
};

/// Averaged storage channel. Gains carry the sign convention of the memory:
/// gain_x = <X_A^mem>/<P_L^in>, gain_p = -<P_A^mem>/<X_L^in>.
struct ChannelSummary {
  double gain_x = 1.0;
  double gain_p = 1.0;
  double var_x = kVacuumVariance;
  double var_p = kVacuumVariance;
};

/// Initial memory state: zero mean, diagonal covariance from `params`.
GaussianState initial_atoms(const StorageParams& params);

/// QND light-atom interaction on the 2-mode ordering (X_L, P_L, X_A, P_A):
///   X_L' = X_L + k P_A,  P_L' = P_L,  X_A' = X_A + k P_L,  P_A' = P_A.
SymplecticMap interaction_map(double k);

/// The same interaction embedded in an n-mode state.
SymplecticMap interaction_map(std::size_t n_modes, std::size_t light, std::size_t atoms,
                              double k);

/// Ensemble-averaged feedback P_A -> P_A - g X_L, written as the symplectic
/// shear it is equivalent to once the light mode is traced out.
SymplecticMap feedback_shear(std::size_t n_modes, std::size_t light, std::size_t atoms,
                             double g);

struct StoreResult {
  double outcome = 0.0;  // homodyne result for X_L^out
  GaussianState atoms;
};

/// Interaction, homodyne measurement of X_L^out, displacement of P_A by
/// -g * outcome. The outcome is sampled from `rng`.
StoreResult store_conditional(const GaussianState& input_light, const StorageParams& params,
                              CounterStream& rng);

/// Same, with a prescribed measurement outcome.
StoreResult store_conditional(const GaussianState& input_light, const StorageParams& params,
                              double outcome);

/// Outcome-averaged memory state for an arbitrary single-mode Gaussian input.
GaussianState store_averaged(const GaussianState& input_light, const StorageParams& params);

/// Closed-form averaged channel for inputs with the given light variances
/// (coherent inputs by default).
ChannelSummary store_channel(const StorageParams& params,
                             double light_var_x = kVacuumVariance,
                             double light_var_p = kVacuumVariance);

/// Joint (readout light, atoms) state after the verification interaction.
/// The light's X quadrature then carries X_L^read-in + k_readout P_A^mem.
GaussianState readout_map(const GaussianState& atoms, double k_readout,
                          const GaussianState& fresh_light);

/// Magnetic pi/2 rotation of the memory mode: X -> P, P -> -X.
GaussianState pi_half_pulse(const GaussianState& atoms);

/// Atomic P variance from a readout X variance: (readout_var - 1/2) / k^2.
/// Results below zero are returned unchanged; callers flag them.
double reconstruct_atomic_variance(double readout_var, double k_readout);

/// Retrieval by running storage with the roles of light and atoms swapped.
/// The readout light crosses the atoms, an auxiliary pulse measures X_A^out
/// (after an internal quarter turn of the atoms), and the result is fed back
/// onto the readout light's P with gain g. An optional half turn of the
/// outgoing light restores the input phase reference.
struct ReverseReadoutParams {
  double k = 1.0;
  double g = 1.0;
  double k_aux = 1.0;
  double readout_var_x = kVacuumVariance;
  double readout_var_p = kVacuumVariance;
  double aux_var_x = kVacuumVariance;
  double aux_var_p = kVacuumVariance;
  bool restore_phase = true;

  void validate() const;
};

/// Outcome-averaged retrieved light (single mode named "readout").
GaussianState reverse_readout(const GaussianState& atoms, const ReverseReadoutParams& params);

struct ReverseResult {
  double outcome = 0.0;  // estimate of X_A^out from the auxiliary pulse
  GaussianState light;
};

ReverseResult reverse_readout_conditional(const GaussianState& atoms,
                                          const ReverseReadoutParams& params,
                                          CounterStream& rng);

}  // namespace qmem
