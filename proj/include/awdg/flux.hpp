#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "awdg/mesh.hpp"

namespace awdg {

/// One side's data at a face point: v^h, grad u^h, and that side's
/// outward unit normal.
template <int Dim>
struct Trace {
  double v = 0.0;
  Vec<Dim> grad_u{};
  Vec<Dim> n{};
};

template <int Dim>
struct FluxState {
  double v_star = 0.0;
  Vec<Dim> grad_u_star{};
};

enum class FluxPreset { Central, Sommerfeld, Custom };

constexpr std::string_view to_string(FluxPreset p) {
  switch (p) {
    case FluxPreset::Central: return "central";
    case FluxPreset::Sommerfeld: return "sommerfeld";
    case FluxPreset::Custom: return "custom";
  }
  return "?";
}

/// Interior-flux family
///   v*      = sigma v1 + (1 - sigma) v2 - eta [[grad u]]
///   grad u* = -beta [[v]] + (1 - sigma) grad u1 + sigma grad u2
/// plus the splitting speed xi used by the boundary closures.
struct FluxParams {
  FluxPreset preset = FluxPreset::Sommerfeld;
  double sigma = 0.5;
  double beta = 0.0;
  double eta = 0.0;
  double xi = 1.0;

  static FluxParams central(double xi) { return {FluxPreset::Central, 0.5, 0.0, 0.0, xi}; }
  static FluxParams sommerfeld(double xi) {
    return {FluxPreset::Sommerfeld, 0.5, 1.0 / (2.0 * xi), xi / 2.0, xi};
  }
  static FluxParams custom(double sigma, double beta, double eta, double xi) {
    return {FluxPreset::Custom, sigma, beta, eta, xi};
  }

  /// Supersonic interior faces take the one-sided upwind state only for
  /// the Sommerfeld (upwind) preset.
  bool upwind_supersonic() const { return preset == FluxPreset::Sommerfeld; }
};

/// [[grad u]] = grad u1 . n1 + grad u2 . n2
template <int Dim>
double jump_normal_grad(const Trace<Dim>& t1, const Trace<Dim>& t2) {
  return dot<Dim>(t1.grad_u, t1.n) + dot<Dim>(t2.grad_u, t2.n);
}

/// [[v]] = v1 n1 + v2 n2
template <int Dim>
Vec<Dim> jump_v(const Trace<Dim>& t1, const Trace<Dim>& t2) {
  Vec<Dim> j{};
  for (int d = 0; d < Dim; ++d) j[d] = t1.v * t1.n[d] + t2.v * t2.n[d];
  return j;
}

template <int Dim>
FluxState<Dim> interior_flux(const Trace<Dim>& t1, const Trace<Dim>& t2, const FluxParams& p) {
  const double jg = jump_normal_grad(t1, t2);
  const Vec<Dim> jv = jump_v(t1, t2);
  FluxState<Dim> f;
  f.v_star = p.sigma * t1.v + (1.0 - p.sigma) * t2.v - p.eta * jg;
  for (int d = 0; d < Dim; ++d)
    f.grad_u_star[d] = -p.beta * jv[d] + (1.0 - p.sigma) * t1.grad_u[d] + p.sigma * t2.grad_u[d];
  return f;
}

/// One-sided flux for |w.n1| > c: the whole state comes from the upwind
/// element.
template <int Dim>
FluxState<Dim> supersonic_interior_flux(const Trace<Dim>& t1, const Trace<Dim>& t2,
                                        const Vec<Dim>& w, double c) {
  const double wn1 = dot<Dim>(w, t1.n);
  if (wn1 >= c) return {t1.v, t1.grad_u};
  if (wn1 <= -c) return {t2.v, t2.grad_u};
  throw std::logic_error("supersonic_interior_flux called on a subsonic face");
}

/// Dirichlet (u = 0) closure on a subsonic inflow boundary, -c <= w.n < 0.
/// Solves v* = w . grad u*, v* - xi grad u*.n = v - xi grad u.n,
/// (grad u*)_tau = 0.
template <int Dim>
FluxState<Dim> inflow_flux(const Trace<Dim>& t, const Vec<Dim>& w, double xi) {
  const double wn = dot<Dim>(w, t.n);
  const double gn = dot<Dim>(t.grad_u, t.n);
  const double num = xi * gn - t.v;
  const double gsn = num / (xi - wn);
  FluxState<Dim> f;
  f.v_star = wn * gsn;
  for (int d = 0; d < Dim; ++d) f.grad_u_star[d] = gsn * t.n[d];
  return f;
}

/// Radiation closure on a subsonic outflow boundary, 0 <= w.n <= c.
/// Solves v* + xi grad u*.n = 0, v* - xi grad u*.n = v - xi grad u.n,
/// (grad u*)_tau = (grad u)_tau.
template <int Dim>
FluxState<Dim> outflow_flux(const Trace<Dim>& t, double xi) {
  const double gn = dot<Dim>(t.grad_u, t.n);
  const double gsn = (xi * gn - t.v) / (2.0 * xi);
  FluxState<Dim> f;
  f.v_star = (t.v - xi * gn) / 2.0;
  for (int d = 0; d < Dim; ++d) f.grad_u_star[d] = t.grad_u[d] + (gsn - gn) * t.n[d];
  return f;
}

/// Supersonic inflow imposes u = 0 and grad u.n = 0; supersonic outflow
/// imposes nothing.
template <int Dim>
FluxState<Dim> supersonic_boundary_flux(const Trace<Dim>& t, FaceKind kind) {
  if (kind == FaceKind::BoundaryInflowSupersonic) return {};
  if (kind == FaceKind::BoundaryOutflowSupersonic) return {t.v, t.grad_u};
  throw std::logic_error("supersonic_boundary_flux called on a non-supersonic boundary face");
}

/// Flux state at an interior face point; t1 is the owner side.
template <int Dim>
FluxState<Dim> interior_face_flux(const Trace<Dim>& t1, const Trace<Dim>& t2, FaceKind kind,
                                  const FluxParams& p, const Vec<Dim>& w, double c) {
  if (kind == FaceKind::InteriorSupersonic && p.upwind_supersonic())
    return supersonic_interior_flux(t1, t2, w, c);
  return interior_flux(t1, t2, p);
}

template <int Dim>
FluxState<Dim> boundary_face_flux(const Trace<Dim>& t, FaceKind kind, const FluxParams& p,
                                  const Vec<Dim>& w) {
  switch (kind) {
    case FaceKind::BoundaryInflow: return inflow_flux(t, w, p.xi);
    case FaceKind::BoundaryOutflow: return outflow_flux(t, p.xi);
    case FaceKind::BoundaryInflowSupersonic:
    case FaceKind::BoundaryOutflowSupersonic: return supersonic_boundary_flux(t, kind);
    default: throw std::logic_error("boundary_face_flux called on an interior face");
  }
}

/// Pointwise energy-rate density of an interior face, written in closed
/// form from the traces alone (no flux state). Summed over faces this
/// equals dE^h/dt.
template <int Dim>
double interior_energy_rate(const Trace<Dim>& t1, const Trace<Dim>& t2, FaceKind kind,
                            const FluxParams& p, const Vec<Dim>& w, double c) {
  const double c2 = c * c;
  const double wn1 = dot<Dim>(w, t1.n);
  const double wn2 = dot<Dim>(w, t2.n);
  Vec<Dim> dg{};
  for (int d = 0; d < Dim; ++d) dg[d] = t1.grad_u[d] - t2.grad_u[d];
  const double dv = t1.v - t2.v;
  const double dg2 = dot<Dim>(dg, dg);

  if (kind == FaceKind::InteriorSupersonic && p.upwind_supersonic()) {
    if (wn1 >= c)  // state from element 1
      return 0.5 * (c2 * dg2 + dv * dv) * wn2 + c2 * dot<Dim>(dg, t1.n) * dv;
    return 0.5 * (c2 * dg2 + dv * dv) * wn1 + c2 * dot<Dim>(dg, t2.n) * dv;
  }

  const double jg = jump_normal_grad(t1, t2);
  const Vec<Dim> jv = jump_v(t1, t2);
  Vec<Dim> gw{};
  for (int d = 0; d < Dim; ++d) gw[d] = t1.grad_u[d] * wn1 + t2.grad_u[d] * wn2;
  const double rate = -(c2 * p.eta * jg * jg + c2 * p.beta * dot<Dim>(jv, jv) -
                        c2 * p.beta * dot<Dim>(jv, gw) - p.eta * jg * dot<Dim>(jv, w));
  // sigma != 1/2 leaves an advective remainder that the symmetric form lacks.
  return rate + 0.5 * (2.0 * p.sigma - 1.0) * wn1 * (c2 * dg2 - dv * dv);
}

/// Pointwise energy-rate density of a physical boundary face.
template <int Dim>
double boundary_energy_rate(const Trace<Dim>& t, FaceKind kind, double wn, double c, double xi) {
  const double c2 = c * c;
  const double gn = dot<Dim>(t.grad_u, t.n);
  const double g2 = dot<Dim>(t.grad_u, t.grad_u);
  const double gt2 = g2 - gn * gn;
  const double v = t.v;
  switch (kind) {
    case FaceKind::BoundaryInflow:
      return 0.5 * c2 * wn * gt2 + 0.5 * c2 * wn * gn * gn +
             (0.5 * wn + (wn * wn - c2) / (xi - wn)) * v * v +
             (c2 - xi * wn) * wn / (xi - wn) * gn * v;
    case FaceKind::BoundaryOutflow:
      return -0.5 * c2 * gt2 * wn + (c2 / (2.0 * xi) + xi / 2.0) * gn * v * wn -
             0.5 * c2 * xi * gn * gn - c2 / (2.0 * xi) * v * v;
    case FaceKind::BoundaryOutflowSupersonic:
      return -0.5 * (c2 * g2 + v * v) * wn + c2 * v * gn;
    case FaceKind::BoundaryInflowSupersonic:
      return 0.5 * (c2 * g2 + v * v) * wn - c2 * v * gn;
    default: throw std::logic_error("boundary_energy_rate called on an interior face");
  }
}

}  // namespace awdg
