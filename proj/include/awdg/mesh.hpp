#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "awdg/vec.hpp"

namespace awdg {

enum class BoundaryMode { Periodic, Physical };

enum class FaceKind {
  InteriorSubsonic,
  InteriorSupersonic,
  BoundaryInflow,
  BoundaryOutflow,
  BoundaryInflowSupersonic,
  BoundaryOutflowSupersonic,
};

constexpr std::string_view to_string(FaceKind k) {
  switch (k) {
    case FaceKind::InteriorSubsonic: return "interior-subsonic";
    case FaceKind::InteriorSupersonic: return "interior-supersonic";
    case FaceKind::BoundaryInflow: return "boundary-inflow";
    case FaceKind::BoundaryOutflow: return "boundary-outflow";
    case FaceKind::BoundaryInflowSupersonic: return "boundary-inflow-supersonic";
    case FaceKind::BoundaryOutflowSupersonic: return "boundary-outflow-supersonic";
  }
  return "?";
}

constexpr bool is_boundary(FaceKind k) {
  return k != FaceKind::InteriorSubsonic && k != FaceKind::InteriorSupersonic;
}

struct FaceClass {
  FaceKind kind = FaceKind::InteriorSubsonic;
  double wn = 0.0;  ///< w . n with the owner's outward normal
};

/// A face of the Cartesian grid. The owner is the lower-indexed incident
/// element and `normal` is its outward normal. Boundary faces have
/// neighbor == -1.
template <int Dim>
struct Face {
  int owner = -1;
  int owner_local = -1;
  int neighbor = -1;
  int neighbor_local = -1;
  int axis = 0;
  Vec<Dim> normal{};
  Vec<Dim> center{};

  bool on_boundary() const { return neighbor < 0; }
};

/// Uniform grid of n^Dim elements on the unit interval/square. Element
/// (i, j) has flat index i + n*j.
template <int Dim>
struct Mesh {
  int n = 0;
  double h = 0.0;
  BoundaryMode mode = BoundaryMode::Periodic;
  std::vector<Face<Dim>> faces;
  /// element -> local face -> global face index
  std::vector<std::array<int, 2 * Dim>> element_faces;

  int num_elements() const { return static_cast<int>(element_faces.size()); }

  std::array<int, Dim> element_index(int e) const {
    std::array<int, Dim> idx{};
    for (int d = 0; d < Dim; ++d) {
      idx[d] = e % n;
      e /= n;
    }
    return idx;
  }

  Vec<Dim> element_center(int e) const {
    const auto idx = element_index(e);
    Vec<Dim> x{};
    for (int d = 0; d < Dim; ++d) x[d] = (idx[d] + 0.5) * h;
    return x;
  }

  /// Maps reference coordinates of element e to physical space.
  Vec<Dim> to_physical(int e, const Vec<Dim>& xi) const {
    auto x = element_center(e);
    for (int d = 0; d < Dim; ++d) x[d] += 0.5 * h * xi[d];
    return x;
  }
};

template <int Dim>
Mesh<Dim> build_mesh(int n, BoundaryMode mode) {
  static_assert(Dim == 1 || Dim == 2, "only 1D and 2D meshes are supported");
  if (n < 2) throw std::invalid_argument("build_mesh: n must be >= 2");

  Mesh<Dim> m;
  m.n = n;
  m.h = 1.0 / n;
  m.mode = mode;
  int n_elem = 1;
  for (int d = 0; d < Dim; ++d) n_elem *= n;
  m.element_faces.assign(n_elem, {});
  for (auto& ef : m.element_faces) ef.fill(-1);

  auto flat = [n](std::array<int, Dim> idx) {
    int e = 0, stride = 1;
    for (int d = 0; d < Dim; ++d) {
      e += idx[d] * stride;
      stride *= n;
    }
    return e;
  };

  // Faces normal to `axis` sit at x_axis = k*h, k = 0..n (k = n dropped when
  // periodic). Loop order: axis, then the tangential line, then k.
  const bool periodic = mode == BoundaryMode::Periodic;
  const int n_lines = (Dim == 1) ? 1 : n;
  for (int axis = 0; axis < Dim; ++axis) {
    for (int line = 0; line < n_lines; ++line) {
      const int k_end = periodic ? n : n + 1;
      for (int k = 0; k < k_end; ++k) {
        std::array<int, Dim> left{}, right{};
        for (int d = 0; d < Dim; ++d) left[d] = right[d] = line;
        const bool has_left = periodic || k > 0;
        const bool has_right = periodic || k < n;
        left[axis] = (k - 1 + n) % n;
        right[axis] = k % n;

        Face<Dim> f;
        f.axis = axis;
        for (int d = 0; d < Dim; ++d) f.center[d] = (line + 0.5) / n;
        f.center[axis] = static_cast<double>(k) / n;

        // Left element sees the face as its +axis face, right one as -axis.
        int a = has_left ? flat(left) : -1, a_local = 2 * axis + 1;
        int b = has_right ? flat(right) : -1, b_local = 2 * axis;
        if (a < 0 || (b >= 0 && b < a)) {
          std::swap(a, b);
          std::swap(a_local, b_local);
        }
        f.owner = a;
        f.owner_local = a_local;
        f.neighbor = b;
        f.neighbor_local = b >= 0 ? b_local : -1;
        f.normal[axis] = (a_local % 2 == 0) ? -1.0 : 1.0;

        const int id = static_cast<int>(m.faces.size());
        m.faces.push_back(f);
        m.element_faces[f.owner][f.owner_local] = id;
        if (f.neighbor >= 0) m.element_faces[f.neighbor][f.neighbor_local] = id;
      }
    }
  }
  return m;
}

/// Flow-regime classification of a face for background velocity w and
/// wave speed c. |w.n| == c counts as subsonic; w.n == 0 on a physical
/// boundary counts as outflow.
template <int Dim>
FaceClass classify_face(const Face<Dim>& face, const Vec<Dim>& w, double c) {
  FaceClass fc;
  fc.wn = dot<Dim>(w, face.normal);
  const bool supersonic = std::abs(fc.wn) > c;
  if (!face.on_boundary()) {
    fc.kind = supersonic ? FaceKind::InteriorSupersonic : FaceKind::InteriorSubsonic;
  } else if (fc.wn < 0.0) {
    fc.kind = supersonic ? FaceKind::BoundaryInflowSupersonic : FaceKind::BoundaryInflow;
  } else {
    fc.kind = supersonic ? FaceKind::BoundaryOutflowSupersonic : FaceKind::BoundaryOutflow;
  }
  return fc;
}

}  // namespace awdg
