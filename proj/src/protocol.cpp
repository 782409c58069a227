#include "qmem/protocol.hpp"

#include <cmath>
#include <stdexcept>

#include "qmem/random.hpp"

namespace qmem {
namespace {

void require_single_mode(const GaussianState& s, const char* what) {
  if (s.n_modes() != 1) throw std::invalid_argument(std::string(what) + ": expected one mode");
}

GaussianState squeezed_vacuum(const std::string& name, double var_x, double var_p) {
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
  cov(0, 0) = var_x;
  cov(1, 1) = var_p;
  return GaussianState({name}, Eigen::VectorXd::Zero(2), std::move(cov));
}

// Joint (input light, atoms) state after the write interaction.
GaussianState write_interaction(const GaussianState& input_light, const StorageParams& params) {
  require_single_mode(input_light, "store");
  params.validate();
  const GaussianState joint = combine(input_light, initial_atoms(params));
  return apply_symplectic(joint, interaction_map(params.k));
}

StoreResult finish_store(HomodyneResult measured, const StorageParams& params) {
  GaussianState atoms = displace(measured.conditional, kAtomsMode, 0.0, -params.g * measured.outcome);
  return {measured.outcome, std::move(atoms)};
}

// Readout light, atoms, aux after the pass of the readout light, the quarter
// turn of the atoms and the auxiliary probe.
GaussianState reverse_prepare(const GaussianState& atoms, const ReverseReadoutParams& params) {
  require_single_mode(atoms, "reverse_readout");
  params.validate();
  GaussianState joint = combine(
      combine(squeezed_vacuum(kReadoutMode, params.readout_var_x, params.readout_var_p),
              atoms),
      squeezed_vacuum(kAuxMode, params.aux_var_x, params.aux_var_p));
  joint = apply_symplectic(joint, interaction_map(3, 0, 1, params.k));
  joint = apply_symplectic(joint, quarter_turn(3, 1));
  // After the quarter turn P_A = -X_A^out, so X_aux' = X_aux - k_aux X_A^out.
  return apply_symplectic(joint, interaction_map(3, 2, 1, params.k_aux));
}

GaussianState restore_phase(const GaussianState& light, const ReverseReadoutParams& params) {
  if (!params.restore_phase) return light;
  return apply_symplectic(light, half_turn(1, 0));
}

}  // namespace

StorageParams StorageParams::squeezed(double k, double g, double var_x) {
  StorageParams p;
  p.k = k;
  p.g = g;
  p.atomic_init_var_x = var_x;
  p.atomic_init_var_p = 0.25 / var_x;
  return p;
}

void StorageParams::validate() const {
  if (!std::isfinite(k) || k < 0.0) throw std::invalid_argument("StorageParams: k must be >= 0");
  if (!std::isfinite(g)) throw std::invalid_argument("StorageParams: g must be finite");
  if (!std::isfinite(k_readout) || k_readout < 0.0) {
    throw std::invalid_argument("StorageParams: k_readout must be >= 0");
  }
  if (!(atomic_init_var_x > 0.0) || !(atomic_init_var_p > 0.0)) {
    throw std::invalid_argument("StorageParams: initial atomic variances must be > 0");
  }
  if (atomic_init_var_x * atomic_init_var_p < 0.25 - 1e-9) {
    throw std::invalid_argument("StorageParams: initial atomic variances violate uncertainty");
  }
}

GaussianState initial_atoms(const StorageParams& params) {
  return squeezed_vacuum(kAtomsMode, params.atomic_init_var_x, params.atomic_init_var_p);
}

SymplecticMap interaction_map(double k) { return interaction_map(2, 0, 1, k); }

SymplecticMap interaction_map(std::size_t n_modes, std::size_t light, std::size_t atoms,
                              double k) {
  if (!std::isfinite(k)) throw std::invalid_argument("interaction_map: k must be finite");
  if (light >= n_modes || atoms >= n_modes || light == atoms) {
    throw std::invalid_argument("interaction_map: bad mode indices");
  }
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(dim, dim);
  const auto xl = static_cast<Eigen::Index>(2 * light);
  const auto xa = static_cast<Eigen::Index>(2 * atoms);
  s(xl, xa + 1) = k;  // X_L += k P_A
  s(xa, xl + 1) = k;  // X_A += k P_L
  return SymplecticMap(std::move(s));
}

SymplecticMap feedback_shear(std::size_t n_modes, std::size_t light, std::size_t atoms,
                             double g) {
  if (light >= n_modes || atoms >= n_modes || light == atoms) {
    throw std::invalid_argument("feedback_shear: bad mode indices");
  }
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(dim, dim);
  const auto xl = static_cast<Eigen::Index>(2 * light);
  const auto xa = static_cast<Eigen::Index>(2 * atoms);
  s(xa + 1, xl) = -g;  // P_A -= g X_L
  s(xl + 1, xa) = -g;  // P_L -= g X_A (discarded with the light)
  return SymplecticMap(std::move(s));
}

StoreResult store_conditional(const GaussianState& input_light, const StorageParams& params,
                              CounterStream& rng) {
  const GaussianState joint = write_interaction(input_light, params);
  return finish_store(homodyne_measure(joint, input_light.names().front(), Quadrature::X, rng),
                      params);
}

StoreResult store_conditional(const GaussianState& input_light, const StorageParams& params,
                              double outcome) {
  const GaussianState joint = write_interaction(input_light, params);
  return finish_store(
      homodyne_measure(joint, input_light.names().front(), Quadrature::X, outcome), params);
}

GaussianState store_averaged(const GaussianState& input_light, const StorageParams& params) {
  const GaussianState joint =
      apply_symplectic(write_interaction(input_light, params), feedback_shear(2, 0, 1, params.g));
  return partial_trace(joint, {kAtomsMode});
}

ChannelSummary store_channel(const StorageParams& params, double light_var_x,
                             double light_var_p) {
  params.validate();
  const double k = params.k;
  const double g = params.g;
  ChannelSummary out;
  out.gain_x = k;
  out.gain_p = g;
  out.var_x = params.atomic_init_var_x + k * k * light_var_p;
  out.var_p = (1.0 - k * g) * (1.0 - k * g) * params.atomic_init_var_p + g * g * light_var_x;
  return out;
}

GaussianState readout_map(const GaussianState& atoms, double k_readout,
                          const GaussianState& fresh_light) {
  require_single_mode(atoms, "readout_map");
  require_single_mode(fresh_light, "readout_map");
  const GaussianState joint = combine(fresh_light, atoms);
  return apply_symplectic(joint, interaction_map(k_readout));
}

GaussianState pi_half_pulse(const GaussianState& atoms) {
  require_single_mode(atoms, "pi_half_pulse");
  return apply_symplectic(atoms, quarter_turn(1, 0));
}

double reconstruct_atomic_variance(double readout_var, double k_readout) {
  if (!(k_readout > 0.0)) {
    throw std::invalid_argument("reconstruct_atomic_variance: k_readout must be > 0");
  }
  return (readout_var - kVacuumVariance) / (k_readout * k_readout);
}

void ReverseReadoutParams::validate() const {
  if (!std::isfinite(k) || !std::isfinite(g)) {
    throw std::invalid_argument("ReverseReadoutParams: k and g must be finite");
  }
  if (!(k_aux > 0.0)) throw std::invalid_argument("ReverseReadoutParams: k_aux must be > 0");
  if (!(readout_var_x > 0.0) || !(readout_var_p > 0.0) || !(aux_var_x > 0.0) ||
      !(aux_var_p > 0.0)) {
    throw std::invalid_argument("ReverseReadoutParams: variances must be > 0");
  }
  if (readout_var_x * readout_var_p < 0.25 - 1e-9 || aux_var_x * aux_var_p < 0.25 - 1e-9) {
    throw std::invalid_argument("ReverseReadoutParams: variances violate uncertainty");
  }
}

GaussianState reverse_readout(const GaussianState& atoms, const ReverseReadoutParams& params) {
  GaussianState joint = reverse_prepare(atoms, params);
  // Feedback P_L -= g * y with y = -X_aux'/k_aux, averaged over outcomes.
  const double c = params.g / params.k_aux;
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(6, 6);
  s(1, 4) = c;  // P_L += c X_aux
  s(5, 0) = c;  // P_aux += c X_L
  joint = apply_symplectic(joint, SymplecticMap(std::move(s)));
  return restore_phase(partial_trace(joint, {kReadoutMode}), params);
}

ReverseResult reverse_readout_conditional(const GaussianState& atoms,
                                          const ReverseReadoutParams& params,
                                          CounterStream& rng) {
  const GaussianState joint = reverse_prepare(atoms, params);
  HomodyneResult measured = homodyne_measure(joint, kAuxMode, Quadrature::X, rng);
  const double estimate = -measured.outcome / params.k_aux;
  GaussianState light = partial_trace(measured.conditional, {kReadoutMode});
  light = displace(light, kReadoutMode, 0.0, -params.g * estimate);
  return {estimate, restore_phase(light, params)};
}

}  // namespace qmem
