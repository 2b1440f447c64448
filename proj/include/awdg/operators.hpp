#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "awdg/basis.hpp"
#include "awdg/flux.hpp"
#include "awdg/mesh.hpp"
#include "awdg/parallel.hpp"

namespace awdg {

/// Modal coefficients, one column per element.
struct ModalState {
  Eigen::MatrixXd u;
  Eigen::MatrixXd v;
  double t = 0.0;

  static ModalState zeros(int n_u, int n_v, int n_elem) {
    return {Eigen::MatrixXd::Zero(n_u, n_elem), Eigen::MatrixXd::Zero(n_v, n_elem), 0.0};
  }
  bool all_finite() const { return u.allFinite() && v.allFinite(); }
};

/// Forcing in the v-equation; an empty function means f = 0.
template <int Dim>
using Forcing = std::function<double(const Vec<Dim>&, double)>;

/// Factorized per-element systems, shared by every element of a uniform
/// mesh.
///
/// The u-system takes the gradient-stiffness rows c^2 int grad(phi_k).grad(phi_l)
/// for the non-constant test modes k > 0 and replaces the (identically zero)
/// constant-mode row by the mean row int phi_l.
struct ElementSolvers {
  Eigen::MatrixXd u_system;
  Eigen::PartialPivLU<Eigen::MatrixXd> u_lu;
  Eigen::VectorXd v_mass_inverse;  // diagonal
};

template <int Dim>
ElementSolvers build_element_solvers(const ReferenceElement<Dim>& ref, double h, double c) {
  const double jac = std::pow(0.5 * h, Dim);
  const double gs = 2.0 / h;
  ElementSolvers es;
  es.u_system = (c * c * gs * gs * jac) * ref.stiff_u;
  es.u_system.row(0) = jac * ref.mean_row.transpose();
  es.u_lu.compute(es.u_system);
  const double rcond = es.u_lu.rcond();
  if (!(rcond > 1e-14)) throw std::runtime_error("build_element_solvers: singular u-system");

  const Eigen::VectorXd diag = ref.mass_v.diagonal();
  if ((ref.mass_v - Eigen::MatrixXd(diag.asDiagonal())).cwiseAbs().maxCoeff() > 1e-12 * diag.maxCoeff())
    throw std::runtime_error("build_element_solvers: v mass matrix is not diagonal");
  es.v_mass_inverse = (jac * diag).cwiseInverse();
  return es;
}

/// Semidiscrete DG operator for the first-order system
///   u_t + w.grad u - v = 0,  v_t + w.grad v - c^2 lap u = f
/// on a uniform Cartesian mesh.
template <int Dim>
class DgOperator {
 public:
  DgOperator(const Mesh<Dim>& mesh, const ReferenceElement<Dim>& ref, const FluxParams& flux,
             const Vec<Dim>& w, double c)
      : mesh_(mesh), ref_(ref), flux_(flux), w_(w), c_(c) {
    if (!(c > 0.0)) throw std::invalid_argument("DgOperator: c must be positive");
    if (!(flux.xi > 0.0)) throw std::invalid_argument("DgOperator: xi must be positive");
    jac_ = std::pow(0.5 * mesh.h, Dim);
    face_jac_ = std::pow(0.5 * mesh.h, Dim - 1);
    gscale_ = 2.0 / mesh.h;
    solvers_ = build_element_solvers(ref, mesh.h, c);

    classes_.reserve(mesh.faces.size());
    for (const auto& f : mesh.faces) classes_.push_back(classify_face(f, w, c));

    assemble_volume_matrices();
  }

  const Mesh<Dim>& mesh() const { return mesh_; }
  const ReferenceElement<Dim>& ref() const { return ref_; }
  const FluxParams& flux() const { return flux_; }
  const Vec<Dim>& w() const { return w_; }
  double c() const { return c_; }
  const ElementSolvers& solvers() const { return solvers_; }
  const std::vector<FaceClass>& face_classes() const { return classes_; }
  double jacobian() const { return jac_; }
  double face_jacobian() const { return face_jac_; }
  double grad_scale() const { return gscale_; }

  void set_workers(int n) { workers_ = std::max(1, n); }
  int workers() const { return workers_; }

  ModalState zero_state() const {
    return ModalState::zeros(ref_.n_u(), ref_.n_v(), mesh_.num_elements());
  }

  /// Traces of (v^h, grad u^h) of element e on its local face at the face
  /// quadrature points, with the element's outward normal.
  std::vector<Trace<Dim>> trace_extract(const ModalState& s, int e, int local_face) const {
    const auto& uf = ref_.u_face[local_face];
    const auto& vf = ref_.v_face[local_face];
    const Eigen::VectorXd vals = vf.value * s.v.col(e);
    std::array<Eigen::VectorXd, Dim> grads;
    for (int d = 0; d < Dim; ++d) grads[d] = gscale_ * (uf.grad[d] * s.u.col(e));
    std::vector<Trace<Dim>> out(vals.size());
    for (Eigen::Index p = 0; p < vals.size(); ++p) {
      out[p].v = vals[p];
      for (int d = 0; d < Dim; ++d) out[p].grad_u[d] = grads[d][p];
      out[p].n[face_axis(local_face)] = face_side(local_face);
    }
    return out;
  }

  /// Flux states at the quadrature points of face `id`.
  std::vector<FluxState<Dim>> face_flux(const ModalState& s, int id) const {
    const auto& f = mesh_.faces[id];
    const auto& fc = classes_[id];
    const auto t1 = trace_extract(s, f.owner, f.owner_local);
    std::vector<FluxState<Dim>> out(t1.size());
    if (f.on_boundary()) {
      for (std::size_t p = 0; p < t1.size(); ++p)
        out[p] = boundary_face_flux(t1[p], fc.kind, flux_, w_);
    } else {
      const auto t2 = trace_extract(s, f.neighbor, f.neighbor_local);
      for (std::size_t p = 0; p < t1.size(); ++p)
        out[p] = interior_face_flux(t1[p], t2[p], fc.kind, flux_, w_, c_);
    }
    return out;
  }

  /// Time derivative of the state. Phase 1 evaluates each face's flux once
  /// and stores the face terms for both incident sides; phase 2 assembles
  /// and solves the element systems. Both phases split work over disjoint
  /// index ranges, so the result does not depend on the worker count.
  ModalState apply(const ModalState& s, const Forcing<Dim>& forcing = {}) const {
    const int n_faces = static_cast<int>(mesh_.faces.size());
    const int n_elem = mesh_.num_elements();
    const int npts = static_cast<int>(ref_.face_weights.size());
    constexpr int NF = 2 * Dim;

    // Traces of every element on each of its local faces.
    std::array<Eigen::MatrixXd, NF> tv;
    std::array<std::array<Eigen::MatrixXd, Dim>, NF> tg;
    for (int lf = 0; lf < NF; ++lf) {
      tv[lf].resize(npts, n_elem);
      for (int d = 0; d < Dim; ++d) tg[lf][d].resize(npts, n_elem);
    }
    parallel_blocks(n_elem, kBlock, workers_, [&](int begin, int end) {
      const int len = end - begin;
      for (int lf = 0; lf < NF; ++lf) {
        tv[lf].middleCols(begin, len).noalias() = ref_.v_face[lf].value * s.v.middleCols(begin, len);
        for (int d = 0; d < Dim; ++d)
          tg[lf][d].middleCols(begin, len).noalias() =
              gscale_ * (ref_.u_face[lf].grad[d] * s.u.middleCols(begin, len));
      }
    });

    // Face coefficients per (local face, element), pre-multiplied by the
    // face quadrature weights:
    //   v-equation: a = c^2 grad u*.n - (v* - v) w.n
    //   u-equation: b = c^2 (v* - v) n - c^2 (grad u* - grad u) w.n
    std::array<Eigen::MatrixXd, NF> a;
    std::array<std::array<Eigen::MatrixXd, Dim>, NF> b;
    for (int lf = 0; lf < NF; ++lf) {
      a[lf].resize(npts, n_elem);
      for (int d = 0; d < Dim; ++d) b[lf][d].resize(npts, n_elem);
    }
    parallel_for(n_faces, workers_, [&](int begin, int end) {
      for (int id = begin; id < end; ++id) {
        const auto& f = mesh_.faces[id];
        const auto& fc = classes_[id];
        for (int p = 0; p < npts; ++p) {
          const auto t1 = trace_at(tv, tg, f.owner, f.owner_local, p);
          if (f.on_boundary()) {
            const auto fs = boundary_face_flux(t1, fc.kind, flux_, w_);
            side_coefficients(t1, fs, p, f.owner, f.owner_local, a, b);
          } else {
            const auto t2 = trace_at(tv, tg, f.neighbor, f.neighbor_local, p);
            const auto fs = interior_face_flux(t1, t2, fc.kind, flux_, w_, c_);
            side_coefficients(t1, fs, p, f.owner, f.owner_local, a, b);
            side_coefficients(t2, fs, p, f.neighbor, f.neighbor_local, a, b);
          }
        }
      }
    });

    ModalState out = zero_state();
    out.t = s.t;
    const Eigen::Map<const Eigen::VectorXd> wq(ref_.vol_weights.data(),
                                               static_cast<Eigen::Index>(ref_.vol_weights.size()));
    parallel_blocks(n_elem, kBlock, workers_, [&](int begin, int end) {
      const int len = end - begin;
      const auto u = s.u.middleCols(begin, len);
      const auto v = s.v.middleCols(begin, len);
      Eigen::MatrixXd rhs_v = k_vv_ * v + k_vu_ * u;
      Eigen::MatrixXd rhs_u = k_uu_ * u + k_uv_ * v;
      for (int lf = 0; lf < NF; ++lf) {
        rhs_v.noalias() += face_jac_ * (ref_.v_face[lf].value.transpose() * a[lf].middleCols(begin, len));
        for (int d = 0; d < Dim; ++d)
          rhs_u.noalias() += (face_jac_ * gscale_) *
                             (ref_.u_face[lf].grad[d].transpose() * b[lf][d].middleCols(begin, len));
      }
      if (forcing) {
        Eigen::MatrixXd fvals(wq.size(), len);
        for (int k = 0; k < len; ++k)
          for (Eigen::Index p = 0; p < wq.size(); ++p)
            fvals(p, k) = wq[p] * forcing(mesh_.to_physical(begin + k, ref_.vol_points[p]), s.t);
        rhs_v.noalias() += jac_ * (ref_.v_vol.value.transpose() * fvals);
      }
      // The constant test mode carries the mean constraint, not face terms.
      rhs_u.row(0) = k_uu_.row(0) * u + k_uv_.row(0) * v;
      out.v.middleCols(begin, len) = solvers_.v_mass_inverse.asDiagonal() * rhs_v;
      out.u.middleCols(begin, len) = solvers_.u_lu.solve(rhs_u);
    });
    return out;
  }

 private:
  static constexpr int kBlock = 64;

  template <class TV, class TG>
  Trace<Dim> trace_at(const TV& tv, const TG& tg, int e, int lf, int p) const {
    Trace<Dim> t;
    t.v = tv[lf](p, e);
    for (int d = 0; d < Dim; ++d) t.grad_u[d] = tg[lf][d](p, e);
    t.n[face_axis(lf)] = face_side(lf);
    return t;
  }

  template <class A, class B>
  void side_coefficients(const Trace<Dim>& t, const FluxState<Dim>& fs, int p, int e, int lf, A& a,
                         B& b) const {
    const double c2 = c_ * c_;
    const double wt = ref_.face_weights[p];
    const double wn = dot<Dim>(w_, t.n);
    const double dv = fs.v_star - t.v;
    a[lf](p, e) = wt * (c2 * dot<Dim>(fs.grad_u_star, t.n) - dv * wn);
    for (int d = 0; d < Dim; ++d)
      b[lf][d](p, e) = wt * (c2 * dv * t.n[d] - c2 * (fs.grad_u_star[d] - t.grad_u[d]) * wn);
  }

  void assemble_volume_matrices() {
    const auto& uv = ref_.u_vol;
    const auto& vv = ref_.v_vol;
    const Eigen::Map<const Eigen::VectorXd> wq(ref_.vol_weights.data(),
                                               static_cast<Eigen::Index>(ref_.vol_weights.size()));
    const auto W = wq.asDiagonal();
    const double c2 = c_ * c_;

    Eigen::MatrixXd wgrad_u = Eigen::MatrixXd::Zero(uv.value.rows(), ref_.n_u());
    Eigen::MatrixXd wgrad_v = Eigen::MatrixXd::Zero(vv.value.rows(), ref_.n_v());
    for (int d = 0; d < Dim; ++d) {
      wgrad_u += (w_[d] * gscale_) * uv.grad[d];
      wgrad_v += (w_[d] * gscale_) * vv.grad[d];
    }

    // v-equation: -int psi w.grad v - c^2 int grad u . grad psi
    k_vv_ = -jac_ * (vv.value.transpose() * W * wgrad_v);
    k_vu_ = Eigen::MatrixXd::Zero(ref_.n_v(), ref_.n_u());
    for (int d = 0; d < Dim; ++d)
      k_vu_ -= (c2 * jac_ * gscale_ * gscale_) * (vv.grad[d].transpose() * W * uv.grad[d]);

    // u-equation, k > 0: -c^2 int grad phi . grad(w.grad u) + c^2 int grad phi . grad v.
    // grad(w.grad u) is differentiated exactly through the Hessian table.
    k_uu_ = Eigen::MatrixXd::Zero(ref_.n_u(), ref_.n_u());
    k_uv_ = Eigen::MatrixXd::Zero(ref_.n_u(), ref_.n_v());
    for (int a = 0; a < Dim; ++a) {
      Eigen::MatrixXd grad_wgrad = Eigen::MatrixXd::Zero(uv.value.rows(), ref_.n_u());
      for (int b = 0; b < Dim; ++b) grad_wgrad += (w_[b] * gscale_ * gscale_) * uv.hess[a][b];
      k_uu_ -= (c2 * jac_ * gscale_) * (uv.grad[a].transpose() * W * grad_wgrad);
      k_uv_ += (c2 * jac_ * gscale_ * gscale_) * (uv.grad[a].transpose() * W * vv.grad[a]);
    }
    // k = 0: mean constraint int du/dt = -int w.grad u + int v.
    k_uu_.row(0) = -jac_ * (wq.transpose() * wgrad_u);
    k_uv_.row(0) = jac_ * (wq.transpose() * vv.value);
  }

  Mesh<Dim> mesh_;
  ReferenceElement<Dim> ref_;
  FluxParams flux_;
  Vec<Dim> w_;
  double c_;
  double jac_ = 1.0, face_jac_ = 1.0, gscale_ = 1.0;
  ElementSolvers solvers_;
  std::vector<FaceClass> classes_;
  Eigen::MatrixXd k_vv_, k_vu_, k_uu_, k_uv_;
  int workers_ = 1;
};

}  // namespace awdg
