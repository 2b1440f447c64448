#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "awdg/vec.hpp"

namespace awdg {

/// P_k(x) by the three-term recurrence (unnormalized, P_k(1) = 1).
inline double legendre_eval(int k, double x) {
  if (k == 0) return 1.0;
  if (k == 1) return x;
  double pm1 = 1.0, p = x;
  for (int j = 1; j < k; ++j) {
    const double pn = ((2.0 * j + 1.0) * x * p - j * pm1) / (j + 1.0);
    pm1 = p;
    p = pn;
  }
  return p;
}

/// P_k'(x) from P'_{j+1} = P'_{j-1} + (2j+1) P_j.
inline double legendre_derivative(int k, double x) {
  if (k == 0) return 0.0;
  double dm1 = 0.0, d = 1.0;  // P_0', P_1'
  double pm1 = 1.0, p = x;    // P_0, P_1
  for (int j = 1; j < k; ++j) {
    const double dn = dm1 + (2.0 * j + 1.0) * p;
    const double pn = ((2.0 * j + 1.0) * x * p - j * pm1) / (j + 1.0);
    dm1 = d;
    d = dn;
    pm1 = p;
    p = pn;
  }
  return d;
}

/// P_k''(x) from differentiating the derivative recurrence once more.
inline double legendre_second_derivative(int k, double x) {
  if (k < 2) return 0.0;
  double sm1 = 0.0, s = 0.0;  // P_0'', P_1''
  for (int j = 1; j < k; ++j) {
    const double sn = sm1 + (2.0 * j + 1.0) * legendre_derivative(j, x);
    sm1 = s;
    s = sn;
  }
  return s;
}

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n points on [-1,1], nodes ascending.
/// Newton iteration on P_n from the Chebyshev initial guess.
inline GaussRule gauss_points(int n) {
  if (n < 1) throw std::invalid_argument("gauss_points: n must be >= 1");
  GaussRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const double dx = legendre_eval(n, x) / legendre_derivative(n, x);
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        converged = true;
        break;
      }
    }
    if (!converged && std::abs(legendre_eval(n, x)) > 1e-13)
      throw std::runtime_error("gauss_points: Newton iteration did not converge");
    const double dp = legendre_derivative(n, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// Multi-index of a tensor-product mode; index 0 runs fastest.
template <int Dim>
std::array<int, Dim> unflatten(int flat, int per_dir) {
  std::array<int, Dim> idx{};
  for (int d = 0; d < Dim; ++d) {
    idx[d] = flat % per_dir;
    flat /= per_dir;
  }
  return idx;
}

template <int Dim>
constexpr int ipow(int base) {
  int r = 1;
  for (int d = 0; d < Dim; ++d) r *= base;
  return r;
}

/// Tables of one tensor-product Legendre space evaluated at a point set.
/// Rows are points, columns are modes. Derivatives are with respect to the
/// reference coordinates.
template <int Dim>
struct BasisTable {
  Eigen::MatrixXd value;
  std::array<Eigen::MatrixXd, Dim> grad;
  std::array<std::array<Eigen::MatrixXd, Dim>, Dim> hess;
};

template <int Dim>
BasisTable<Dim> tabulate(int degree, const std::vector<Vec<Dim>>& points) {
  const int n_modes = ipow<Dim>(degree + 1);
  const auto n_pts = static_cast<Eigen::Index>(points.size());
  BasisTable<Dim> t;
  t.value.resize(n_pts, n_modes);
  for (auto& g : t.grad) g.resize(n_pts, n_modes);
  for (auto& row : t.hess)
    for (auto& h : row) h.resize(n_pts, n_modes);

  for (Eigen::Index p = 0; p < n_pts; ++p) {
    for (int m = 0; m < n_modes; ++m) {
      const auto k = unflatten<Dim>(m, degree + 1);
      Vec<Dim> val{}, d1{}, d2{};
      for (int d = 0; d < Dim; ++d) {
        const double x = points[p][d];
        val[d] = legendre_eval(k[d], x);
        d1[d] = legendre_derivative(k[d], x);
        d2[d] = legendre_second_derivative(k[d], x);
      }
      double v = 1.0;
      for (int d = 0; d < Dim; ++d) v *= val[d];
      t.value(p, m) = v;
      for (int a = 0; a < Dim; ++a) {
        double g = 1.0;
        for (int d = 0; d < Dim; ++d) g *= (d == a) ? d1[d] : val[d];
        t.grad[a](p, m) = g;
        for (int b = 0; b < Dim; ++b) {
          double h = 1.0;
          for (int d = 0; d < Dim; ++d) {
            if (a == b && d == a)
              h *= d2[d];
            else if (d == a || d == b)
              h *= d1[d];
            else
              h *= val[d];
          }
          t.hess[a][b](p, m) = h;
        }
      }
    }
  }
  return t;
}

/// Local face numbering: face 2a is the -x_a side, face 2a+1 the +x_a side.
constexpr int num_faces(int dim) { return 2 * dim; }
constexpr int face_axis(int face) { return face / 2; }
constexpr double face_side(int face) { return (face % 2 == 0) ? -1.0 : 1.0; }

/// Reference element [-1,1]^Dim carrying both approximation spaces: u in
/// tensor degree q, v in tensor degree s. Integrals here are on the
/// reference element; the operator applies the Jacobian scalings.
template <int Dim>
struct ReferenceElement {
  int q = 1;
  int s = 1;
  int n_quad = 3;
  GaussRule rule;

  std::vector<Vec<Dim>> vol_points;
  std::vector<double> vol_weights;
  std::vector<Vec<Dim>> face_points[2 * Dim];
  std::vector<double> face_weights;  // shared by all faces

  BasisTable<Dim> u_vol, v_vol;
  std::array<BasisTable<Dim>, 2 * Dim> u_face, v_face;

  Eigen::MatrixXd mass_v;   // int psi_i psi_j
  Eigen::MatrixXd mass_u;   // int phi_i phi_j
  Eigen::MatrixXd stiff_u;  // int grad phi_i . grad phi_j
  Eigen::VectorXd mean_row; // int phi_j

  int n_u() const { return ipow<Dim>(q + 1); }
  int n_v() const { return ipow<Dim>(s + 1); }
};

namespace detail {

template <int Dim>
void tensor_rule(const GaussRule& r, std::vector<Vec<Dim>>& pts,
                 std::vector<double>& wts) {
  const int n = static_cast<int>(r.nodes.size());
  const int total = ipow<Dim>(n);
  pts.resize(total);
  wts.resize(total);
  for (int m = 0; m < total; ++m) {
    const auto k = unflatten<Dim>(m, n);
    double w = 1.0;
    for (int d = 0; d < Dim; ++d) {
      pts[m][d] = r.nodes[k[d]];
      w *= r.weights[k[d]];
    }
    wts[m] = w;
  }
}

}  // namespace detail

template <int Dim>
ReferenceElement<Dim> build_reference(int q, int s, int n_quad) {
  if (q < 1) throw std::invalid_argument("build_reference: q must be >= 1");
  if (s < 0) throw std::invalid_argument("build_reference: s must be >= 0");
  if (n_quad < q + 1) throw std::invalid_argument("build_reference: n_quad must be >= q+1");

  ReferenceElement<Dim> ref;
  ref.q = q;
  ref.s = s;
  ref.n_quad = n_quad;
  ref.rule = gauss_points(n_quad);
  detail::tensor_rule<Dim>(ref.rule, ref.vol_points, ref.vol_weights);

  // Faces: fix the normal coordinate, tensor rule over the remaining ones.
  {
    GaussRule face_rule = ref.rule;
    std::vector<Vec<(Dim > 1 ? Dim - 1 : 1)>> fpts;
    if constexpr (Dim == 1) {
      ref.face_weights = {1.0};
    } else {
      detail::tensor_rule<Dim - 1>(face_rule, fpts, ref.face_weights);
    }
    for (int f = 0; f < 2 * Dim; ++f) {
      const int axis = face_axis(f);
      auto& out = ref.face_points[f];
      out.resize(ref.face_weights.size());
      for (std::size_t p = 0; p < out.size(); ++p) {
        int t = 0;
        for (int d = 0; d < Dim; ++d) {
          if (d == axis)
            out[p][d] = face_side(f);
          else
            out[p][d] = fpts[p][t++];
        }
      }
    }
  }

  ref.u_vol = tabulate<Dim>(q, ref.vol_points);
  ref.v_vol = tabulate<Dim>(s, ref.vol_points);
  for (int f = 0; f < 2 * Dim; ++f) {
    ref.u_face[f] = tabulate<Dim>(q, ref.face_points[f]);
    ref.v_face[f] = tabulate<Dim>(s, ref.face_points[f]);
  }

  const Eigen::Map<const Eigen::VectorXd> w(ref.vol_weights.data(),
                                            static_cast<Eigen::Index>(ref.vol_weights.size()));
  ref.mass_v = ref.v_vol.value.transpose() * w.asDiagonal() * ref.v_vol.value;
  ref.mass_u = ref.u_vol.value.transpose() * w.asDiagonal() * ref.u_vol.value;
  ref.stiff_u = Eigen::MatrixXd::Zero(ref.n_u(), ref.n_u());
  for (int d = 0; d < Dim; ++d)
    ref.stiff_u += ref.u_vol.grad[d].transpose() * w.asDiagonal() * ref.u_vol.grad[d];
  ref.mean_row = ref.u_vol.value.transpose() * w;
  return ref;
}

}  // namespace awdg
