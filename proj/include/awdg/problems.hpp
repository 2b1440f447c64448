#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "awdg/basis.hpp"
#include "awdg/mesh.hpp"
#include "awdg/operators.hpp"

namespace awdg {

enum class ProblemKind { Periodic1D, Periodic2D, Mixed2D, Custom };

constexpr std::string_view to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::Periodic1D: return "periodic1d";
    case ProblemKind::Periodic2D: return "periodic2d";
    case ProblemKind::Mixed2D: return "mixed2d";
    case ProblemKind::Custom: return "custom";
  }
  return "?";
}

template <int Dim>
using ScalarField = std::function<double(const Vec<Dim>&, double)>;
template <int Dim>
using StaticField = std::function<double(const Vec<Dim>&)>;
template <int Dim>
using StaticGrad = std::function<Vec<Dim>(const Vec<Dim>&)>;
template <int Dim>
using StaticHess = std::function<std::array<Vec<Dim>, Dim>(const Vec<Dim>&)>;

/// A manufactured problem: exact (u, v) with v = u_t + w.grad u, and the
/// forcing f = (d_t + w.grad)^2 u - c^2 lap u entering the v-equation.
/// initial_* describe u(., 0) and are what the lifting transform uses.
template <int Dim>
struct ProblemSpec {
  ProblemKind kind = ProblemKind::Custom;
  Vec<Dim> w{};
  double c = 1.0;
  BoundaryMode boundary_mode = BoundaryMode::Periodic;
  ScalarField<Dim> exact_u, exact_v;
  std::function<Vec<Dim>(const Vec<Dim>&, double)> exact_grad_u;
  ScalarField<Dim> forcing;  // empty when homogeneous
  StaticField<Dim> initial_u;
  StaticGrad<Dim> initial_grad_u;
  StaticHess<Dim> initial_hess_u;

  bool lifted = false;
  /// Added back to the solved field when lifted: u = u~ + lift_u, v = v~ + lift_v.
  ScalarField<Dim> lift_u, lift_v;
};

// Traveling wave u = cos(2 c pi t) sin(2 pi (x - w t)).
inline std::array<double, 2> exact_periodic_1d(double x, double t, double w, double c) {
  const double pi = std::numbers::pi;
  const double s = std::sin(2.0 * pi * (x - w * t));
  return {std::cos(2.0 * c * pi * t) * s, -2.0 * c * pi * std::sin(2.0 * c * pi * t) * s};
}

inline std::array<double, 2> exact_periodic_2d(double x, double y, double t, double wx, double wy,
                                               double c) {
  const double pi = std::numbers::pi;
  const double bracket = std::sin(2.0 * pi * (x - wx * t)) + std::sin(2.0 * pi * (y - wy * t));
  return {std::sin(2.0 * c * pi * t) * bracket, 2.0 * c * pi * std::cos(2.0 * c * pi * t) * bracket};
}

namespace detail {
// g(s) = s (1 - s)^2 e^s and its first two derivatives.
inline double mixed_g(double s) { return (s - 2.0 * s * s + s * s * s) * std::exp(s); }
inline double mixed_g1(double s) { return (1.0 - 3.0 * s + s * s + s * s * s) * std::exp(s); }
inline double mixed_g2(double s) { return (-2.0 - s + 4.0 * s * s + s * s * s) * std::exp(s); }
}  // namespace detail

/// u = x(1-x)^2 y(1-y)^2 exp(x+y) sin t and v = u_t + w.grad u.
inline std::array<double, 2> exact_mixed_2d(double x, double y, double t, double wx, double wy) {
  using namespace detail;
  const double gx = mixed_g(x), gy = mixed_g(y);
  const double u = gx * gy * std::sin(t);
  const double v = gx * gy * std::cos(t) + std::sin(t) * (wx * mixed_g1(x) * gy + wy * gx * mixed_g1(y));
  return {u, v};
}

inline double forcing_mixed_2d(double x, double y, double t, double wx, double wy, double c) {
  using namespace detail;
  const double g = mixed_g(x), g1 = mixed_g1(x), g2 = mixed_g2(x);
  const double k = mixed_g(y), k1 = mixed_g1(y), k2 = mixed_g2(y);
  const double st = std::sin(t), ct = std::cos(t);
  const double utt = -g * k * st;
  const double wgrad_ut = ct * (wx * g1 * k + wy * g * k1);
  const double wgrad2_u = st * (wx * wx * g2 * k + 2.0 * wx * wy * g1 * k1 + wy * wy * g * k2);
  const double lap_u = st * (g2 * k + g * k2);
  return utt + 2.0 * wgrad_ut + wgrad2_u - c * c * lap_u;
}

template <int Dim>
ProblemSpec<Dim> make_problem(ProblemKind kind, const Vec<Dim>& w, double c);

template <>
inline ProblemSpec<1> make_problem<1>(ProblemKind kind, const Vec<1>& w, double c) {
  if (kind != ProblemKind::Periodic1D)
    throw std::invalid_argument("make_problem: only periodic1d is available in 1D");
  const double pi = std::numbers::pi;
  ProblemSpec<1> p;
  p.kind = kind;
  p.w = w;
  p.c = c;
  p.boundary_mode = BoundaryMode::Periodic;
  const double wx = w[0];
  p.exact_u = [wx, c](const Vec<1>& x, double t) { return exact_periodic_1d(x[0], t, wx, c)[0]; };
  p.exact_v = [wx, c](const Vec<1>& x, double t) { return exact_periodic_1d(x[0], t, wx, c)[1]; };
  p.exact_grad_u = [wx, c, pi](const Vec<1>& x, double t) {
    return Vec<1>{2.0 * pi * std::cos(2.0 * c * pi * t) * std::cos(2.0 * pi * (x[0] - wx * t))};
  };
  p.initial_u = [pi](const Vec<1>& x) { return std::sin(2.0 * pi * x[0]); };
  p.initial_grad_u = [pi](const Vec<1>& x) { return Vec<1>{2.0 * pi * std::cos(2.0 * pi * x[0])}; };
  p.initial_hess_u = [pi](const Vec<1>& x) {
    return std::array<Vec<1>, 1>{Vec<1>{-4.0 * pi * pi * std::sin(2.0 * pi * x[0])}};
  };
  return p;
}

template <>
inline ProblemSpec<2> make_problem<2>(ProblemKind kind, const Vec<2>& w, double c) {
  ProblemSpec<2> p;
  p.kind = kind;
  p.w = w;
  p.c = c;
  const double wx = w[0], wy = w[1];
  const double pi = std::numbers::pi;
  if (kind == ProblemKind::Periodic2D) {
    p.boundary_mode = BoundaryMode::Periodic;
    p.exact_u = [=](const Vec<2>& x, double t) { return exact_periodic_2d(x[0], x[1], t, wx, wy, c)[0]; };
    p.exact_v = [=](const Vec<2>& x, double t) { return exact_periodic_2d(x[0], x[1], t, wx, wy, c)[1]; };
    p.exact_grad_u = [=](const Vec<2>& x, double t) {
      const double a = 2.0 * pi * std::sin(2.0 * c * pi * t);
      return Vec<2>{a * std::cos(2.0 * pi * (x[0] - wx * t)), a * std::cos(2.0 * pi * (x[1] - wy * t))};
    };
    p.initial_u = [](const Vec<2>&) { return 0.0; };
    p.initial_grad_u = [](const Vec<2>&) { return Vec<2>{0.0, 0.0}; };
    p.initial_hess_u = [](const Vec<2>&) { return std::array<Vec<2>, 2>{}; };
  } else if (kind == ProblemKind::Mixed2D) {
    p.boundary_mode = BoundaryMode::Physical;
    p.exact_u = [=](const Vec<2>& x, double t) { return exact_mixed_2d(x[0], x[1], t, wx, wy)[0]; };
    p.exact_v = [=](const Vec<2>& x, double t) { return exact_mixed_2d(x[0], x[1], t, wx, wy)[1]; };
    p.exact_grad_u = [](const Vec<2>& x, double t) {
      using namespace detail;
      const double st = std::sin(t);
      return Vec<2>{mixed_g1(x[0]) * mixed_g(x[1]) * st, mixed_g(x[0]) * mixed_g1(x[1]) * st};
    };
    p.forcing = [=](const Vec<2>& x, double t) { return forcing_mixed_2d(x[0], x[1], t, wx, wy, c); };
    p.initial_u = [](const Vec<2>&) { return 0.0; };
    p.initial_grad_u = [](const Vec<2>&) { return Vec<2>{0.0, 0.0}; };
    p.initial_hess_u = [](const Vec<2>&) { return std::array<Vec<2>, 2>{}; };
  } else {
    throw std::invalid_argument("make_problem: unsupported 2D problem kind");
  }
  return p;
}

/// Max of |v - (u_t + w.grad u)| over random space-time samples, with all
/// derivatives of u taken by central differences.
template <int Dim>
double consistency_residual(const ProblemSpec<Dim>& p, int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.05, 0.95), ut(0.05, 0.5);
  const double eps = 1e-5;
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    Vec<Dim> x{};
    for (auto& xi : x) xi = ux(rng);
    const double t = ut(rng);
    double adv = (p.exact_u(x, t + eps) - p.exact_u(x, t - eps)) / (2.0 * eps);
    for (int d = 0; d < Dim; ++d) {
      Vec<Dim> xp = x, xm = x;
      xp[d] += eps;
      xm[d] -= eps;
      adv += p.w[d] * (p.exact_u(xp, t) - p.exact_u(xm, t)) / (2.0 * eps);
    }
    worst = std::max(worst, std::abs(p.exact_v(x, t) - adv));
  }
  return worst;
}

/// Substitutes u = u~ + u0(x) exp(-t^2): u~ starts from zero and the
/// lifted term moves into the forcing. Works for any u0 with a gradient
/// and Hessian.
template <int Dim>
ProblemSpec<Dim> lift_initial_data(const ProblemSpec<Dim>& in) {
  if (in.lifted) return in;
  ProblemSpec<Dim> out = in;
  const auto u0 = in.initial_u;
  const auto gu0 = in.initial_grad_u;
  const auto hu0 = in.initial_hess_u;
  const Vec<Dim> w = in.w;
  const double c = in.c;

  auto w_grad = [gu0, w](const Vec<Dim>& x) { return dot<Dim>(w, gu0(x)); };
  // (w.grad)^2 u0 - c^2 lap u0
  auto spatial = [hu0, w, c](const Vec<Dim>& x) {
    const auto H = hu0(x);
    double ww = 0.0, lap = 0.0;
    for (int a = 0; a < Dim; ++a) {
      lap += H[a][a];
      for (int b = 0; b < Dim; ++b) ww += w[a] * w[b] * H[a][b];
    }
    return ww - c * c * lap;
  };

  out.lift_u = [u0](const Vec<Dim>& x, double t) { return u0(x) * std::exp(-t * t); };
  out.lift_v = [u0, w_grad](const Vec<Dim>& x, double t) {
    const double g = std::exp(-t * t);
    return u0(x) * (-2.0 * t * g) + g * w_grad(x);
  };
  const auto eu = in.exact_u, ev = in.exact_v, f = in.forcing;
  const auto lu = out.lift_u, lv = out.lift_v;
  if (in.exact_grad_u) {
    const auto eg = in.exact_grad_u;
    out.exact_grad_u = [eg, gu0](const Vec<Dim>& x, double t) {
      auto g = eg(x, t);
      const auto g0 = gu0(x);
      const double s = std::exp(-t * t);
      for (int d = 0; d < Dim; ++d) g[d] -= s * g0[d];
      return g;
    };
  }
  out.exact_u = [eu, lu](const Vec<Dim>& x, double t) { return eu(x, t) - lu(x, t); };
  out.exact_v = [ev, lv](const Vec<Dim>& x, double t) { return ev(x, t) - lv(x, t); };
  out.forcing = [f, u0, w_grad, spatial](const Vec<Dim>& x, double t) {
    const double g = std::exp(-t * t);
    const double g1 = -2.0 * t * g;
    const double g2 = (4.0 * t * t - 2.0) * g;
    const double lifted = u0(x) * g2 + 2.0 * g1 * w_grad(x) + g * spatial(x);
    return (f ? f(x, t) : 0.0) - lifted;
  };
  out.initial_u = [](const Vec<Dim>&) { return 0.0; };
  out.initial_grad_u = [](const Vec<Dim>&) { return Vec<Dim>{}; };
  out.initial_hess_u = [](const Vec<Dim>&) { return std::array<Vec<Dim>, Dim>{}; };
  out.lifted = true;
  return out;
}

/// Tensor Gauss rule on the reference element.
template <int Dim>
struct VolumeRule {
  std::vector<Vec<Dim>> points;
  std::vector<double> weights;

  explicit VolumeRule(int n) {
    const auto r = gauss_points(n);
    const int total = ipow<Dim>(n);
    points.resize(total);
    weights.resize(total);
    for (int m = 0; m < total; ++m) {
      const auto k = unflatten<Dim>(m, n);
      double wt = 1.0;
      for (int d = 0; d < Dim; ++d) {
        points[m][d] = r.nodes[k[d]];
        wt *= r.weights[k[d]];
      }
      weights[m] = wt;
    }
  }
};

/// Elementwise L2 projection of fn onto tensor degree `degree`; one column
/// per element.
template <int Dim>
Eigen::MatrixXd project_field(const Mesh<Dim>& mesh, int degree, int n_points,
                              const StaticField<Dim>& fn) {
  const VolumeRule<Dim> rule(n_points);
  const auto tab = tabulate<Dim>(degree, rule.points);
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(),
                                            static_cast<Eigen::Index>(rule.weights.size()));
  const Eigen::MatrixXd mass = tab.value.transpose() * w.asDiagonal() * tab.value;
  const Eigen::VectorXd inv_mass = mass.diagonal().cwiseInverse();  // Legendre: diagonal
  Eigen::MatrixXd out(tab.value.cols(), mesh.num_elements());
  Eigen::VectorXd vals(w.size());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (Eigen::Index p = 0; p < w.size(); ++p) vals[p] = fn(mesh.to_physical(e, rule.points[p]));
    out.col(e) = inv_mass.cwiseProduct(tab.value.transpose() * w.cwiseProduct(vals));
  }
  return out;
}

/// L2 projection of the exact (u, v) at time t.
template <int Dim>
ModalState project_initial(const ProblemSpec<Dim>& spec, const Mesh<Dim>& mesh,
                           const ReferenceElement<Dim>& ref, double t = 0.0) {
  const int n_pts = ref.n_quad + 2;
  ModalState s;
  s.u = project_field<Dim>(mesh, ref.q, n_pts, [&](const Vec<Dim>& x) { return spec.exact_u(x, t); });
  s.v = project_field<Dim>(mesh, ref.s, n_pts, [&](const Vec<Dim>& x) { return spec.exact_v(x, t); });
  s.t = t;
  return s;
}

}  // namespace awdg
