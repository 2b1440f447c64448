#pragma once

#include <array>
#include <cmath>

namespace awdg {

/// Fixed-size point/vector. An aggregate, so Vec<2>{x, y} works.
template <int Dim>
struct Vec {
  std::array<double, Dim> data{};

  double& operator[](int i) { return data[i]; }
  double operator[](int i) const { return data[i]; }
  auto begin() { return data.begin(); }
  auto end() { return data.end(); }
  auto begin() const { return data.begin(); }
  auto end() const { return data.end(); }
  bool operator==(const Vec&) const = default;
};

template <int Dim>
double dot(const Vec<Dim>& a, const Vec<Dim>& b) {
  double r = 0.0;
  for (int d = 0; d < Dim; ++d) r += a[d] * b[d];
  return r;
}

template <int Dim>
double norm(const Vec<Dim>& a) {
  return std::sqrt(dot<Dim>(a, a));
}

}  // namespace awdg
