#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace qmem {

class CounterStream;

// Canonical units throughout: [X, P] = i, vacuum variance 1/2.
// Phase-space vectors are ordered (X1, P1, X2, P2, ...).
inline constexpr double kVacuumVariance = 0.5;

struct ModeLabel {
  std::string name;
  std::size_t index = 0;
};

enum class Quadrature { X, P };

/// Block-diagonal symplectic form with [[0, 1], [-1, 0]] blocks.
Eigen::MatrixXd symplectic_form(std::size_t n_modes);

/// Mean vector and covariance over a list of named modes. Immutable once
/// built; every operation below returns a new state.
class GaussianState {
 public:
  GaussianState(std::vector<std::string> names, Eigen::VectorXd mean,
                Eigen::MatrixXd cov);

  std::size_t n_modes() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  bool has_mode(std::string_view name) const;
  ModeLabel mode(std::string_view name) const;  // throws on unknown name

  double mean_of(std::string_view name, Quadrature q) const;
  double var_of(std::string_view name, Quadrature q) const;

 private:
  std::vector<std::string> names_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

/// Linear phase-space map v -> matrix * v + displacement.
class SymplecticMap {
 public:
  SymplecticMap(Eigen::MatrixXd matrix, Eigen::VectorXd displacement);
  explicit SymplecticMap(Eigen::MatrixXd matrix);

  static SymplecticMap identity(std::size_t n_modes);

  std::size_t n_modes() const { return static_cast<std::size_t>(matrix_.rows() / 2); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::VectorXd& displacement() const { return displacement_; }

  /// max |S^T Omega S - Omega|
  double symplectic_defect() const;
  bool is_symplectic(double tol = 1e-10) const { return symplectic_defect() <= tol; }

  /// (this after other): v -> this(other(v))
  SymplecticMap after(const SymplecticMap& other) const;

 private:
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd displacement_;
};

GaussianState vacuum_state(const std::vector<std::string>& names);
GaussianState coherent_state(double x, double p, std::string name = "light");

/// Tensor product; the second state's modes are appended after the first's.
GaussianState combine(const GaussianState& a, const GaussianState& b);

double mean_photon_number(const GaussianState& state, std::string_view mode);

GaussianState apply_symplectic(const GaussianState& state, const SymplecticMap& map);

GaussianState displace(const GaussianState& state, std::string_view mode, double dx,
                       double dp);

GaussianState partial_trace(const GaussianState& state, std::span<const std::string> keep);
GaussianState partial_trace(const GaussianState& state,
                            std::initializer_list<std::string> keep);

struct HomodyneResult {
  double outcome = 0.0;
  GaussianState conditional;  // measured mode removed
};

/// Homodyne detection of one quadrature with a prescribed outcome. The
/// remaining modes are conditioned through the Schur complement. A zero
/// measured variance is accepted here (the outcome is then uninformative).
HomodyneResult homodyne_measure(const GaussianState& state, std::string_view mode,
                                Quadrature q, double outcome);

/// Same, with the outcome drawn from the Gaussian marginal.
HomodyneResult homodyne_measure(const GaussianState& state, std::string_view mode,
                                Quadrature q, CounterStream& rng);

/// Symplectic eigenvalues in ascending order (one per mode).
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov);

struct StateCheck {
  double asymmetry = 0.0;            // max |cov - cov^T| / max |cov|
  double min_symplectic_eig = 0.0;
  bool ok = false;
};

StateCheck check_physical(const GaussianState& state, double sym_tol = 1e-12,
                          double eig_tol = 1e-9);

// Embedding helpers for maps acting on one or two modes of a larger state.

/// Quadrature rotation of one mode: X -> cos X + sin P, P -> -sin X + cos P.
SymplecticMap rotation(std::size_t n_modes, std::size_t mode, double theta);

/// Exact quarter turn (X -> P, P -> -X) of one mode.
SymplecticMap quarter_turn(std::size_t n_modes, std::size_t mode);

/// Exact half turn (X -> -X, P -> -P) of one mode.
SymplecticMap half_turn(std::size_t n_modes, std::size_t mode);

}  // namespace qmem
