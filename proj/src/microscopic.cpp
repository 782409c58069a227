#include "qmem/microscopic.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>

namespace qmem::micro {
namespace {

// Largest bin phase advance, in cycles, for the midpoint rule to hold.
constexpr double kMaxCyclesPerBin = 0.1;

Eigen::SparseVector<double> unit_row(Eigen::Index dim, Eigen::Index i) {
  Eigen::SparseVector<double> v(dim);
  v.insert(i) = 1.0;
  return v;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

void PhysicalParams::validate() const {
  if (!std::isfinite(a_coupling)) throw std::invalid_argument("PhysicalParams: a_coupling not finite");
  if (!(j_x >= 0.0)) throw std::invalid_argument("PhysicalParams: J_x must be >= 0");
  if (!photon_flux) throw std::invalid_argument("PhysicalParams: photon_flux is empty");
  if (!(omega >= 0.0) || !(duration > 0.0)) {
    throw std::invalid_argument("PhysicalParams: omega must be >= 0 and duration > 0");
  }
  if (bins < 10) throw std::invalid_argument("PhysicalParams: need at least 10 bins");
  const double cycles_per_bin = omega * duration / (2.0 * std::numbers::pi * static_cast<double>(bins));
  if (cycles_per_bin >= kMaxCyclesPerBin) {
    throw std::invalid_argument("PhysicalParams: too few bins for the Larmor frequency");
  }
}

double photon_number(const PhysicalParams& params) {
  params.validate();
  double total = 0.0;
  for (std::size_t i = 0; i < params.bins; ++i) {
    const double n = params.photon_flux(params.bin_midpoint(i));
    if (n < 0.0) throw std::invalid_argument("PhysicalParams: negative photon flux");
    total += n * params.bin_width();
  }
  return total;
}

double k_theory(const PhysicalParams& params) {
  return std::sqrt(0.5 * params.a_coupling * params.a_coupling * params.j_x * photon_number(params));
}

PhysicalParams with_k_theory(PhysicalParams params, double k) {
  const double n = photon_number(params);
  if (!(n > 0.0) || !(params.j_x > 0.0)) {
    throw std::invalid_argument("with_k_theory: need nonzero photon number and J_x");
  }
  params.a_coupling = std::sqrt(2.0 * k * k / (params.j_x * n));
  return params;
}

BinnedMap::BinnedMap(std::size_t bins) : layout_{bins} {
  const Eigen::Index dim = layout_.dim();
  rows_.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index r = 0; r < dim; ++r) rows_.push_back(unit_row(dim, r));
}

Eigen::SparseMatrix<double, Eigen::RowMajor> BinnedMap::to_sparse() const {
  const Eigen::Index dim = layout_.dim();
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::SparseVector<double>::InnerIterator it(row(r)); it; ++it) {
      triplets.emplace_back(r, it.index(), it.value());
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

double BinnedMap::symplectic_defect() const {
  const Eigen::Index dim = layout_.dim();
  std::vector<Eigen::Triplet<double>> omega_entries;
  for (Eigen::Index i = 0; i < dim; i += 2) {
    omega_entries.emplace_back(i, i + 1, 1.0);
    omega_entries.emplace_back(i + 1, i, -1.0);
  }
  Eigen::SparseMatrix<double> omega(dim, dim);
  omega.setFromTriplets(omega_entries.begin(), omega_entries.end());

  const Eigen::SparseMatrix<double> m = to_sparse();
  const Eigen::SparseMatrix<double> defect =
      Eigen::SparseMatrix<double>(m.transpose() * omega * m) - omega;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < defect.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(defect, k); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

BinnedMap propagate_binned(const PhysicalParams& params) {
  params.validate();
  BinnedMap map(params.bins);
  const Layout& lay = map.layout();
  const double dt = params.bin_width();

  for (std::size_t i = 0; i < params.bins; ++i) {
    const double t = params.bin_midpoint(i);
    const double flux = params.photon_flux(t);
    if (flux < 0.0) throw std::invalid_argument("propagate_binned: negative photon flux");
    const double kappa = params.a_coupling * std::sqrt(params.j_x * flux * dt);
    const double c = kappa * std::cos(params.omega * t);
    const double s = kappa * std::sin(params.omega * t);

    // Pre-bin values for both kicks.
    const Eigen::SparseVector<double> pa = map.row(lay.pa());
    const Eigen::SparseVector<double> xb = map.row(lay.xb());
    const Eigen::SparseVector<double> pi = map.row(lay.p(i));

    map.row(lay.x(i)) = map.row(lay.x(i)) + c * pa + s * xb;
    map.row(lay.xa()) = map.row(lay.xa()) + c * pi;
    map.row(lay.pb()) = map.row(lay.pb()) - s * pi;
  }
  return map;
}

DemodulationWeights lockin_weights(const PhysicalParams& params) {
  params.validate();
  const auto n = static_cast<Eigen::Index>(params.bins);
  DemodulationWeights w{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = params.bin_midpoint(static_cast<std::size_t>(i));
    w.cos_mode(i) = std::cos(params.omega * t);
    w.sin_mode(i) = std::sin(params.omega * t);
  }
  const double cn = w.cos_mode.norm();
  const double sn = w.sin_mode.norm();
  if (!(cn > 0.0) || !(sn > 0.0)) throw std::invalid_argument("lockin_weights: degenerate mode");
  w.cos_mode /= cn;
  w.sin_mode /= sn;
  return w;
}

EffectiveCouplings demodulate(const BinnedMap& map, const DemodulationWeights& weights) {
  const Layout& lay = map.layout();
  const auto n = static_cast<Eigen::Index>(lay.bins);
  if (weights.cos_mode.size() != n || weights.sin_mode.size() != n) {
    throw std::invalid_argument("demodulate: weight length does not match bin count");
  }
  const Eigen::Index dim = lay.dim();

  // Output rows of the demodulated light modes.
  Eigen::VectorXd xc_out = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd xs_out = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd pc_out = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd pc_in = Eigen::VectorXd::Zero(dim);
  // Input-side light mode embeddings on the p_i columns.
  Eigen::VectorXd pc_cols = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd ps_cols = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto bin = static_cast<std::size_t>(i);
    const double wc = weights.cos_mode(i);
    const double ws = weights.sin_mode(i);
    for (Eigen::SparseVector<double>::InnerIterator it(map.row(lay.x(bin))); it; ++it) {
      xc_out(it.index()) += wc * it.value();
      xs_out(it.index()) += ws * it.value();
    }
    for (Eigen::SparseVector<double>::InnerIterator it(map.row(lay.p(bin))); it; ++it) {
      pc_out(it.index()) += wc * it.value();
    }
    pc_in(lay.p(bin)) = wc;
    pc_cols(lay.p(bin)) = wc;
    ps_cols(lay.p(bin)) = ws;
  }

  auto project = [&](Eigen::Index row, const Eigen::VectorXd& cols) {
    double acc = 0.0;
    for (Eigen::SparseVector<double>::InnerIterator it(map.row(row)); it; ++it) {
      acc += it.value() * cols(it.index());
    }
    return acc;
  };

  EffectiveCouplings out;
  out.k_eff = xc_out(lay.pa());
  out.k_back = project(lay.xa(), pc_cols);
  out.sin_leakage = std::max({std::abs(xc_out(lay.xb())), std::abs(xs_out(lay.pa())),
                              std::abs(project(lay.xa(), ps_cols)),
                              std::abs(project(lay.pb(), pc_cols))});

  double cross = std::max(std::abs(xc_out(lay.xa())), std::abs(xc_out(lay.pb())));
  const Eigen::Index atomic[] = {lay.xa(), lay.pa(), lay.xb(), lay.pb()};
  for (Eigen::Index r : atomic) {
    for (Eigen::Index c : atomic) {
      cross = std::max(cross, std::abs(map.coeff(r, c) - (r == c ? 1.0 : 0.0)));
    }
    // The conserved atomic variables must not pick up light.
    if (r == lay.pa() || r == lay.xb()) cross = std::max(cross, std::abs(project(r, pc_cols)));
  }
  out.cross_talk = cross;
  out.p_preservation = max_abs(pc_out - pc_in);
  out.mode_overlap = weights.cos_mode.dot(weights.sin_mode);
  return out;
}

SweepPoint evaluate_point(const PhysicalParams& params) {
  const BinnedMap map = propagate_binned(params);
  const EffectiveCouplings eff = demodulate(map, lockin_weights(params));
  SweepPoint pt;
  pt.omega_t = params.omega * params.duration;
  pt.k_eff = eff.k_eff;
  pt.k_theory = k_theory(params);
  pt.leakage = eff.k_eff != 0.0 ? eff.spurious() / std::abs(eff.k_eff) : 0.0;
  return pt;
}

namespace {

PhysicalParams sweep_params(const PhysicalParams& base, double omega_t) {
  PhysicalParams p = base;
  p.omega = omega_t / base.duration;
  const auto needed = static_cast<std::size_t>(
      std::ceil(omega_t / (2.0 * std::numbers::pi * kMaxCyclesPerBin))) + 1;
  p.bins = std::max(base.bins, needed);
  return p;
}

}  // namespace

std::vector<SweepPoint> leakage_sweep_serial(const PhysicalParams& base,
                                             const std::vector<double>& omega_t_values) {
  std::vector<SweepPoint> out;
  out.reserve(omega_t_values.size());
  for (double wt : omega_t_values) out.push_back(evaluate_point(sweep_params(base, wt)));
  return out;
}

std::vector<SweepPoint> leakage_sweep(const PhysicalParams& base,
                                      const std::vector<double>& omega_t_values) {
  base.validate();
  std::vector<SweepPoint> out(omega_t_values.size());
  std::vector<std::exception_ptr> errors(omega_t_values.size());
  const auto n = static_cast<long>(omega_t_values.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      out[idx] = evaluate_point(sweep_params(base, omega_t_values[idx]));
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double loglog_slope(const std::vector<SweepPoint>& points) {
  if (points.size() < 2) throw std::invalid_argument("loglog_slope: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : points) {
    if (!(p.omega_t > 0.0) || !(p.leakage > 0.0)) {
      throw std::invalid_argument("loglog_slope: nonpositive value on a log axis");
    }
    const double x = std::log(p.omega_t);
    const double y = std::log(p.leakage);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(points.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace qmem::micro
