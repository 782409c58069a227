#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/SparseCore>

namespace qmem::micro {

/// Physical inputs for the time-binned propagation of the two-cell memory.
///
/// Light is resolved into `bins` canonical time-bin modes (x_i, p_i). The
/// atoms carry two canonical modes built from the two oppositely oriented
/// cells: the cos family  A = ((J_y1 - J_y2), (J_z1 + J_z2)) / sqrt(2 J_x)
/// and the sin family     B = ((J_y1 + J_y2), (J_z1 - J_z2)) / sqrt(2 J_x).
struct PhysicalParams {
  double a_coupling = 0.0;       // per-atom Faraday coupling
  double j_x = 1.2e12;           // macroscopic spin
  std::function<double(double)> photon_flux = [](double) { return 5e14; };  // photons/s
  double omega = 2.0 * 3.14159265358979323846 * 322e3;                    // rad/s
  double duration = 1e-3;                                                  // s
  std::size_t bins = 10000;

  void validate() const;
  double bin_width() const { return duration / static_cast<double>(bins); }
  double bin_midpoint(std::size_t i) const { return (static_cast<double>(i) + 0.5) * bin_width(); }
};

/// Integrated photon number on the bin grid.
double photon_number(const PhysicalParams& params);

/// sqrt(a^2 J_x N_ph / 2) with N_ph integrated on the bin grid.
double k_theory(const PhysicalParams& params);

/// Copy of `params` with a_coupling chosen so that k_theory equals `k`.
PhysicalParams with_k_theory(PhysicalParams params, double k);

/// Phase-space indices of the binned system, 2 * bins + 4 variables:
/// (x_0, p_0, ..., x_{N-1}, p_{N-1}, X_A, P_A, X_B, P_B).
struct Layout {
  std::size_t bins;
  Eigen::Index x(std::size_t i) const { return static_cast<Eigen::Index>(2 * i); }
  Eigen::Index p(std::size_t i) const { return static_cast<Eigen::Index>(2 * i + 1); }
  Eigen::Index xa() const { return static_cast<Eigen::Index>(2 * bins); }
  Eigen::Index pa() const { return xa() + 1; }
  Eigen::Index xb() const { return xa() + 2; }
  Eigen::Index pb() const { return xa() + 3; }
  Eigen::Index dim() const { return xa() + 4; }
};

/// Linear map on the binned system, stored row by row as sparse vectors.
/// Light rows stay short; the atomic rows collect one entry per bin.
class BinnedMap {
 public:
  explicit BinnedMap(std::size_t bins);  // identity

  const Layout& layout() const { return layout_; }
  const Eigen::SparseVector<double>& row(Eigen::Index r) const {
    return rows_[static_cast<std::size_t>(r)];
  }
  Eigen::SparseVector<double>& row(Eigen::Index r) { return rows_[static_cast<std::size_t>(r)]; }

  double coeff(Eigen::Index r, Eigen::Index c) const { return row(r).coeff(c); }

  Eigen::SparseMatrix<double, Eigen::RowMajor> to_sparse() const;

  /// max |M^T Omega M - Omega|
  double symplectic_defect() const;

 private:
  Layout layout_;
  std::vector<Eigen::SparseVector<double>> rows_;
};

/// Sequential per-bin light/atom kicks in the rotating frame:
///   x_i += kappa_i (cos(W t_i) P_A + sin(W t_i) X_B)       (Faraday readout)
///   X_A += kappa_i cos(W t_i) p_i,  P_B -= kappa_i sin(W t_i) p_i   (back-action)
/// with kappa_i = a sqrt(J_x n(t_i) dt), trigonometric factors at bin
/// midpoints, and each kick using the pre-bin values.
BinnedMap propagate_binned(const PhysicalParams& params);

/// Lock-in mode functions, each normalized to unit norm over the bins.
struct DemodulationWeights {
  Eigen::VectorXd cos_mode;
  Eigen::VectorXd sin_mode;
};

DemodulationWeights lockin_weights(const PhysicalParams& params);

struct EffectiveCouplings {
  double k_eff = 0.0;          // P_A -> X_L(cos) coefficient
  double k_back = 0.0;         // P_L(cos) -> X_A coefficient
  double sin_leakage = 0.0;    // largest cos-light <-> sin-family atom coupling
  double cross_talk = 0.0;     // largest wrong-quadrature / atom-atom coupling
  double p_preservation = 0.0; // max |P_L(cos) out row - in row|
  double mode_overlap = 0.0;   // <cos_mode, sin_mode>

  /// Largest spurious coupling.
  double spurious() const { return sin_leakage > cross_talk ? sin_leakage : cross_talk; }
};

EffectiveCouplings demodulate(const BinnedMap& map, const DemodulationWeights& weights);

struct SweepPoint {
  double omega_t = 0.0;
  double k_eff = 0.0;
  double k_theory = 0.0;
  double leakage = 0.0;  // spurious() / k_eff
};

/// Re-runs propagation + demodulation with omega set so that omega * T
/// takes each requested value. Points are independent; the parallel
/// version distributes them over OpenMP threads.
std::vector<SweepPoint> leakage_sweep(const PhysicalParams& base,
                                      const std::vector<double>& omega_t_values);
std::vector<SweepPoint> leakage_sweep_serial(const PhysicalParams& base,
                                             const std::vector<double>& omega_t_values);

SweepPoint evaluate_point(const PhysicalParams& params);

/// Least-squares slope of log(leakage) against log(omega_t).
double loglog_slope(const std::vector<SweepPoint>& points);

}  // namespace qmem::micro
