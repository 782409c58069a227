#include "qmem/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include <Eigen/Eigenvalues>

#include "qmem/random.hpp"

namespace qmem {
namespace {

void require_unique(const std::vector<std::string>& names) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) {
      throw std::invalid_argument("duplicate mode label '" + n + "'");
    }
  }
}

Eigen::Index quad_index(std::size_t mode, Quadrature q) {
  return static_cast<Eigen::Index>(2 * mode + (q == Quadrature::P ? 1 : 0));
}

}  // namespace

Eigen::MatrixXd symplectic_form(std::size_t n_modes) {
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; i += 2) {
    omega(i, i + 1) = 1.0;
    omega(i + 1, i) = -1.0;
  }
  return omega;
}

GaussianState::GaussianState(std::vector<std::string> names, Eigen::VectorXd mean,
                             Eigen::MatrixXd cov)
    : names_(std::move(names)), mean_(std::move(mean)), cov_(std::move(cov)) {
  require_unique(names_);
  const auto dim = static_cast<Eigen::Index>(2 * names_.size());
  if (mean_.size() != dim || cov_.rows() != dim || cov_.cols() != dim) {
    throw std::invalid_argument("GaussianState: mean/cov dimension does not match mode count");
  }
  if (!mean_.allFinite() || !cov_.allFinite()) {
    throw std::invalid_argument("GaussianState: non-finite moments");
  }
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("GaussianState: covariance is not symmetric");
  }
  // Remove round-off asymmetry so downstream products stay symmetric.
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
}

bool GaussianState::has_mode(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

ModeLabel GaussianState::mode(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) {
    throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
  }
  return {*it, static_cast<std::size_t>(it - names_.begin())};
}

double GaussianState::mean_of(std::string_view name, Quadrature q) const {
  return mean_(quad_index(mode(name).index, q));
}

double GaussianState::var_of(std::string_view name, Quadrature q) const {
  const auto i = quad_index(mode(name).index, q);
  return cov_(i, i);
}

SymplecticMap::SymplecticMap(Eigen::MatrixXd matrix, Eigen::VectorXd displacement)
    : matrix_(std::move(matrix)), displacement_(std::move(displacement)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() % 2 != 0) {
    throw std::invalid_argument("SymplecticMap: matrix must be square with even dimension");
  }
  if (displacement_.size() != matrix_.rows()) {
    throw std::invalid_argument("SymplecticMap: displacement dimension mismatch");
  }
}

SymplecticMap::SymplecticMap(Eigen::MatrixXd matrix)
    : SymplecticMap(matrix, Eigen::VectorXd::Zero(matrix.rows())) {}

SymplecticMap SymplecticMap::identity(std::size_t n_modes) {
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  return SymplecticMap(Eigen::MatrixXd::Identity(dim, dim));
}

double SymplecticMap::symplectic_defect() const {
  const Eigen::MatrixXd omega = symplectic_form(n_modes());
  return (matrix_.transpose() * omega * matrix_ - omega).cwiseAbs().maxCoeff();
}

SymplecticMap SymplecticMap::after(const SymplecticMap& other) const {
  if (other.matrix_.rows() != matrix_.rows()) {
    throw std::invalid_argument("SymplecticMap::after: dimension mismatch");
  }
  return SymplecticMap(matrix_ * other.matrix_, matrix_ * other.displacement_ + displacement_);
}

GaussianState vacuum_state(const std::vector<std::string>& names) {
  if (names.empty()) throw std::invalid_argument("vacuum_state: need at least one mode");
  require_unique(names);
  const auto dim = static_cast<Eigen::Index>(2 * names.size());
  return GaussianState(names, Eigen::VectorXd::Zero(dim),
                       kVacuumVariance * Eigen::MatrixXd::Identity(dim, dim));
}

GaussianState coherent_state(double x, double p, std::string name) {
  Eigen::VectorXd mean(2);
  mean << x, p;
  return GaussianState({std::move(name)}, std::move(mean),
                       kVacuumVariance * Eigen::MatrixXd::Identity(2, 2));
}

GaussianState combine(const GaussianState& a, const GaussianState& b) {
  std::vector<std::string> names = a.names();
  names.insert(names.end(), b.names().begin(), b.names().end());
  const auto na = a.mean().size();
  const auto nb = b.mean().size();
  Eigen::VectorXd mean(na + nb);
  mean << a.mean(), b.mean();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(na + nb, na + nb);
  cov.topLeftCorner(na, na) = a.cov();
  cov.bottomRightCorner(nb, nb) = b.cov();
  return GaussianState(std::move(names), std::move(mean), std::move(cov));
}

double mean_photon_number(const GaussianState& state, std::string_view mode) {
  const auto i = quad_index(state.mode(mode).index, Quadrature::X);
  const double x = state.mean()(i);
  const double p = state.mean()(i + 1);
  return 0.5 * (x * x + p * p + state.cov()(i, i) + state.cov()(i + 1, i + 1) - 1.0);
}

GaussianState apply_symplectic(const GaussianState& state, const SymplecticMap& map) {
  if (map.matrix().rows() != state.mean().size()) {
    throw std::invalid_argument("apply_symplectic: dimension mismatch");
  }
  if (!map.is_symplectic()) {
    throw std::invalid_argument("apply_symplectic: matrix is not symplectic");
  }
  const Eigen::MatrixXd& s = map.matrix();
  return GaussianState(state.names(), s * state.mean() + map.displacement(),
                       s * state.cov() * s.transpose());
}

GaussianState displace(const GaussianState& state, std::string_view mode, double dx,
                       double dp) {
  const auto i = quad_index(state.mode(mode).index, Quadrature::X);
  Eigen::VectorXd mean = state.mean();
  mean(i) += dx;
  mean(i + 1) += dp;
  return GaussianState(state.names(), std::move(mean), state.cov());
}

GaussianState partial_trace(const GaussianState& state, std::span<const std::string> keep) {
  std::vector<std::string> names(keep.begin(), keep.end());
  require_unique(names);
  std::vector<Eigen::Index> rows;
  rows.reserve(2 * names.size());
  for (const auto& n : names) {
    const auto i = quad_index(state.mode(n).index, Quadrature::X);
    rows.push_back(i);
    rows.push_back(i + 1);
  }
  const auto dim = static_cast<Eigen::Index>(rows.size());
  Eigen::VectorXd mean(dim);
  Eigen::MatrixXd cov(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    mean(r) = state.mean()(rows[r]);
    for (Eigen::Index c = 0; c < dim; ++c) cov(r, c) = state.cov()(rows[r], rows[c]);
  }
  return GaussianState(std::move(names), std::move(mean), std::move(cov));
}

GaussianState partial_trace(const GaussianState& state,
                            std::initializer_list<std::string> keep) {
  const std::vector<std::string> names(keep);
  return partial_trace(state, std::span<const std::string>(names));
}

HomodyneResult homodyne_measure(const GaussianState& state, std::string_view mode,
                                Quadrature q, double outcome) {
  const ModeLabel label = state.mode(mode);
  const Eigen::Index qi = quad_index(label.index, q);

  std::vector<std::string> names;
  std::vector<Eigen::Index> rest;
  for (std::size_t m = 0; m < state.n_modes(); ++m) {
    if (m == label.index) continue;
    names.push_back(state.names()[m]);
    rest.push_back(static_cast<Eigen::Index>(2 * m));
    rest.push_back(static_cast<Eigen::Index>(2 * m + 1));
  }
  const auto dim = static_cast<Eigen::Index>(rest.size());

  const double mu_q = state.mean()(qi);
  const double var_q = state.cov()(qi, qi);
  if (var_q < 0.0) throw std::invalid_argument("homodyne_measure: negative measured variance");

  Eigen::VectorXd mean(dim);
  Eigen::VectorXd cross(dim);
  Eigen::MatrixXd cov(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    mean(r) = state.mean()(rest[r]);
    cross(r) = state.cov()(rest[r], qi);
    for (Eigen::Index c = 0; c < dim; ++c) cov(r, c) = state.cov()(rest[r], rest[c]);
  }

  // A zero-variance quadrature is uncorrelated with everything else.
  if (var_q > 0.0) {
    mean += cross * ((outcome - mu_q) / var_q);
    cov -= cross * cross.transpose() / var_q;
  }
  return {outcome, GaussianState(std::move(names), std::move(mean), std::move(cov))};
}

HomodyneResult homodyne_measure(const GaussianState& state, std::string_view mode,
                                Quadrature q, CounterStream& rng) {
  const double var_q = state.var_of(mode, q);
  if (!(var_q > 0.0)) {
    throw std::invalid_argument("homodyne_measure: cannot sample a zero-variance quadrature");
  }
  const double outcome = rng.normal(state.mean_of(mode, q), std::sqrt(var_q));
  return homodyne_measure(state, mode, q, outcome);
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
  const auto n = static_cast<std::size_t>(cov.rows() / 2);
  const Eigen::MatrixXd m = symplectic_form(n) * cov;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(cov.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) values.push_back(std::abs(solver.eigenvalues()(i)));
  std::sort(values.begin(), values.end());
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  // Eigenvalues of Omega*cov come in pairs +-i nu.
  for (std::size_t k = 0; k < n; ++k) {
    out(static_cast<Eigen::Index>(k)) = 0.5 * (values[2 * k] + values[2 * k + 1]);
  }
  return out;
}

StateCheck check_physical(const GaussianState& state, double sym_tol, double eig_tol) {
  StateCheck check;
  if (state.n_modes() == 0) {
    check.ok = true;
    check.min_symplectic_eig = kVacuumVariance;
    return check;
  }
  const Eigen::MatrixXd& cov = state.cov();
  const double scale = std::max(1e-300, cov.cwiseAbs().maxCoeff());
  check.asymmetry = (cov - cov.transpose()).cwiseAbs().maxCoeff() / scale;
  check.min_symplectic_eig = symplectic_eigenvalues(cov).minCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
  const bool psd = es.eigenvalues().minCoeff() >= -eig_tol * scale;
  check.ok = check.asymmetry <= sym_tol && psd &&
             check.min_symplectic_eig >= kVacuumVariance - eig_tol;
  return check;
}

SymplecticMap rotation(std::size_t n_modes, std::size_t mode, double theta) {
  if (mode >= n_modes) throw std::invalid_argument("rotation: mode out of range");
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  const auto i = static_cast<Eigen::Index>(2 * mode);
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  s(i, i) = c;
  s(i, i + 1) = sn;
  s(i + 1, i) = -sn;
  s(i + 1, i + 1) = c;
  return SymplecticMap(std::move(s));
}

SymplecticMap quarter_turn(std::size_t n_modes, std::size_t mode) {
  if (mode >= n_modes) throw std::invalid_argument("quarter_turn: mode out of range");
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  const auto i = static_cast<Eigen::Index>(2 * mode);
  s(i, i) = 0.0;
  s(i, i + 1) = 1.0;
  s(i + 1, i) = -1.0;
  s(i + 1, i + 1) = 0.0;
  return SymplecticMap(std::move(s));
}

SymplecticMap half_turn(std::size_t n_modes, std::size_t mode) {
  if (mode >= n_modes) throw std::invalid_argument("half_turn: mode out of range");
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  const auto i = static_cast<Eigen::Index>(2 * mode);
  s(i, i) = -1.0;
  s(i + 1, i + 1) = -1.0;
  return SymplecticMap(std::move(s));
}

}  // namespace qmem
