#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "awdg/flux.hpp"
#include "awdg/operators.hpp"
#include "awdg/problems.hpp"

namespace awdg {

/// E^h = sum_j int 1/2 (v^h)^2 + 1/2 c^2 |grad u^h|^2, exact through the
/// reference mass and stiffness matrices.
template <int Dim>
double discrete_energy(const ModalState& s, const DgOperator<Dim>& op) {
  const auto& ref = op.ref();
  const double jac = op.jacobian();
  const double gs2 = op.grad_scale() * op.grad_scale();
  const double c2 = op.c() * op.c();
  double e = 0.0;
  for (int k = 0; k < s.u.cols(); ++k) {
    const double kinetic = s.v.col(k).dot(ref.mass_v * s.v.col(k));
    const double potential = s.u.col(k).dot(ref.stiff_u * s.u.col(k));
    e += 0.5 * jac * (kinetic + c2 * gs2 * potential);
  }
  return e;
}

/// sum_j int v^h dv/dt + c^2 grad u^h . grad du/dt for a given derivative.
template <int Dim>
double energy_rate_from_derivative(const ModalState& s, const ModalState& ds,
                                   const DgOperator<Dim>& op) {
  const auto& ref = op.ref();
  const double jac = op.jacobian();
  const double gs2 = op.grad_scale() * op.grad_scale();
  const double c2 = op.c() * op.c();
  double r = 0.0;
  for (int k = 0; k < s.u.cols(); ++k) {
    r += jac * (s.v.col(k).dot(ref.mass_v * ds.v.col(k)) +
                c2 * gs2 * s.u.col(k).dot(ref.stiff_u * ds.u.col(k)));
  }
  return r;
}

/// Face contribution to dE^h/dt from the closed-form boundary integrands,
/// integrated with the face quadrature. Uses traces only.
template <int Dim>
double face_energy_rate(const DgOperator<Dim>& op, const ModalState& s, int face_id) {
  const auto& f = op.mesh().faces[face_id];
  const auto& fc = op.face_classes()[face_id];
  const auto& wf = op.ref().face_weights;
  const auto t1 = op.trace_extract(s, f.owner, f.owner_local);
  double r = 0.0;
  if (f.on_boundary()) {
    for (std::size_t p = 0; p < t1.size(); ++p)
      r += wf[p] * boundary_energy_rate(t1[p], fc.kind, fc.wn, op.c(), op.flux().xi);
  } else {
    const auto t2 = op.trace_extract(s, f.neighbor, f.neighbor_local);
    for (std::size_t p = 0; p < t1.size(); ++p)
      r += wf[p] * interior_energy_rate(t1[p], t2[p], fc.kind, op.flux(), op.w(), op.c());
  }
  return r * op.face_jacobian();
}

struct EnergyIdentity {
  double lhs = 0.0;  ///< from the operator's time derivative
  double rhs = 0.0;  ///< sum of face energy rates
  double residual = 0.0;
};

/// Compares dE^h/dt computed from the operator output with the sum of the
/// closed-form face terms. Assumes homogeneous forcing.
template <int Dim>
EnergyIdentity energy_identity_residual(const ModalState& s, const DgOperator<Dim>& op) {
  EnergyIdentity out;
  const ModalState ds = op.apply(s);
  out.lhs = energy_rate_from_derivative(s, ds, op);
  for (int id = 0; id < static_cast<int>(op.mesh().faces.size()); ++id)
    out.rhs += face_energy_rate(op, s, id);
  out.residual = std::abs(out.lhs - out.rhs) / std::max(1.0, std::abs(out.lhs));
  return out;
}

struct L2Errors {
  double u = 0.0;
  double v = 0.0;
  /// sqrt(sum int (v^h - v)^2 + c^2 |grad(u^h - u)|^2); NaN without an exact gradient.
  double energy = 0.0;
};

/// L2 errors of the discrete state against the exact fields at time t, on
/// a tensor Gauss rule with `n_points` per direction.
template <int Dim>
L2Errors l2_error(const ModalState& s, const ProblemSpec<Dim>& spec, double t, const Mesh<Dim>& mesh,
                  const ReferenceElement<Dim>& ref, int n_points) {
  const VolumeRule<Dim> rule(n_points);
  const auto tu = tabulate<Dim>(ref.q, rule.points);
  const auto tv = tabulate<Dim>(ref.s, rule.points);
  const double jac = std::pow(0.5 * mesh.h, Dim);
  const double gs = 2.0 / mesh.h;
  const bool with_grad = static_cast<bool>(spec.exact_grad_u);
  double eu = 0.0, ev = 0.0, eg = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Eigen::VectorXd uh = tu.value * s.u.col(e);
    const Eigen::VectorXd vh = tv.value * s.v.col(e);
    std::array<Eigen::VectorXd, Dim> gh;
    if (with_grad)
      for (int d = 0; d < Dim; ++d) gh[d] = gs * (tu.grad[d] * s.u.col(e));
    for (std::size_t p = 0; p < rule.points.size(); ++p) {
      const auto x = mesh.to_physical(e, rule.points[p]);
      const double du = uh[p] - spec.exact_u(x, t);
      const double dv = vh[p] - spec.exact_v(x, t);
      eu += rule.weights[p] * du * du;
      ev += rule.weights[p] * dv * dv;
      if (with_grad) {
        const auto g = spec.exact_grad_u(x, t);
        for (int d = 0; d < Dim; ++d) {
          const double dg = gh[d][p] - g[d];
          eg += rule.weights[p] * dg * dg;
        }
      }
    }
  }
  L2Errors out;
  out.u = std::sqrt(jac * eu);
  out.v = std::sqrt(jac * ev);
  out.energy = with_grad ? std::sqrt(jac * (ev + spec.c * spec.c * eg)) : std::nan("");
  return out;
}

/// Least-squares slope of log(err) against log(h) over the `window`
/// smallest h.
inline double fit_rate(std::vector<double> hs, std::vector<double> errs, std::size_t window) {
  if (hs.size() != errs.size()) throw std::invalid_argument("fit_rate: size mismatch");
  if (window < 2) throw std::invalid_argument("fit_rate: window must cover at least 2 grids");
  if (window > hs.size()) throw std::invalid_argument("fit_rate: window larger than grid count");
  std::vector<std::size_t> order(hs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return hs[a] < hs[b]; });

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < window; ++k) {
    const auto i = order[k];
    if (!(hs[i] > 0.0)) throw std::invalid_argument("fit_rate: grid spacing must be positive");
    if (!(errs[i] > 0.0)) throw std::invalid_argument("fit_rate: errors must be positive");
    const double x = std::log(hs[i]), y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(window);
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct ConvergenceReport {
  std::vector<int> n;
  std::vector<double> h;
  std::vector<double> errors_u, errors_v, errors_energy;
  double rate_u = 0.0;
  double rate_v = 0.0;
  std::size_t fit_window = 0;
};

inline std::size_t default_fit_window(std::size_t grids) { return std::min<std::size_t>(10, grids); }

inline void fit_report(ConvergenceReport& r, std::size_t window) {
  r.fit_window = window;
  r.rate_u = fit_rate(r.h, r.errors_u, window);
  r.rate_v = fit_rate(r.h, r.errors_v, window);
}

struct SpectralEstimate {
  double radius = 0.0;
  bool converged = false;
};

/// Power-iteration estimate of the largest eigenvalue magnitude of a
/// linear operator. The dominant eigenvalues of the DG operator come in
/// complex pairs, so the estimate is the geometric mean of the per-step
/// growth factors over the second half of the run. Converged means the
/// third- and fourth-quarter means agree to 1%.
template <class ApplyFn>
SpectralEstimate spectral_radius_probe(ApplyFn&& apply, ModalState start, int iters, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (Eigen::Index i = 0; i < start.u.size(); ++i) start.u.data()[i] = nd(rng);
  for (Eigen::Index i = 0; i < start.v.size(); ++i) start.v.data()[i] = nd(rng);

  auto norm_of = [](const ModalState& s) {
    return std::sqrt(s.u.squaredNorm() + s.v.squaredNorm());
  };
  double n0 = norm_of(start);
  start.u /= n0;
  start.v /= n0;

  iters = std::max(iters, 8);
  const int q1 = iters / 2, q2 = (3 * iters) / 4;
  double log_q3 = 0.0, log_q4 = 0.0;
  int n3 = 0, n4 = 0;
  ModalState x = std::move(start);
  for (int k = 0; k < iters; ++k) {
    ModalState y = apply(x);
    const double g = norm_of(y);
    if (g == 0.0) return {0.0, true};
    y.u /= g;
    y.v /= g;
    x = std::move(y);
    if (k >= q2) {
      log_q4 += std::log(g);
      ++n4;
    } else if (k >= q1) {
      log_q3 += std::log(g);
      ++n3;
    }
  }
  const double r3 = std::exp(log_q3 / std::max(1, n3));
  const double r4 = std::exp(log_q4 / std::max(1, n4));
  SpectralEstimate est;
  est.radius = std::exp((log_q3 + log_q4) / std::max(1, n3 + n4));
  est.converged = std::abs(r3 - r4) <= 0.01 * std::max(r3, r4);
  return est;
}

}  // namespace awdg
