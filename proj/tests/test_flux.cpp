#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "awdg/flux.hpp"

using namespace awdg;

namespace {

template <int Dim>
Trace<Dim> random_trace(std::mt19937_64& rng, const Vec<Dim>& n) {
  std::normal_distribution<double> nd;
  Trace<Dim> t;
  t.v = nd(rng);
  for (auto& g : t.grad_u) g = nd(rng);
  t.n = n;
  return t;
}

Trace<1> trace1(double v, double g, double n) { return {v, Vec<1>{g}, Vec<1>{n}}; }

}  // namespace

TEST(InteriorFlux, ContinuousDataIsReproduced) {
  std::mt19937_64 rng(3);
  const Vec<2> n1{0.0, 1.0}, n2{0.0, -1.0};
  for (const auto& p : {FluxParams::central(1.0), FluxParams::sommerfeld(0.7),
                        FluxParams::custom(0.8, 0.3, 0.2, 1.0)}) {
    for (int i = 0; i < 100; ++i) {
      auto t1 = random_trace<2>(rng, n1);
      auto t2 = t1;
      t2.n = n2;
      const auto f = interior_flux(t1, t2, p);
      EXPECT_NEAR(f.v_star, t1.v, 1e-14);
      EXPECT_NEAR(f.grad_u_star[0], t1.grad_u[0], 1e-14);
      EXPECT_NEAR(f.grad_u_star[1], t1.grad_u[1], 1e-14);
    }
  }
}

TEST(InteriorFlux, SommerfeldExample) {
  const auto f = interior_flux(trace1(1.0, 0.0, 1.0), trace1(0.0, 0.0, -1.0), FluxParams::sommerfeld(1.0));
  EXPECT_NEAR(f.v_star, 0.5, 1e-15);
  EXPECT_NEAR(f.grad_u_star[0], -0.5, 1e-15);
}

TEST(InteriorFlux, CentralAverages) {
  const auto f = interior_flux(trace1(1.0, 2.0, 1.0), trace1(3.0, 2.0, -1.0), FluxParams::central(1.0));
  EXPECT_DOUBLE_EQ(f.v_star, 2.0);
  EXPECT_DOUBLE_EQ(f.grad_u_star[0], 2.0);
}

TEST(InteriorFlux, PresetsHaveDocumentedCoefficients) {
  const auto s = FluxParams::sommerfeld(2.0);
  EXPECT_DOUBLE_EQ(s.sigma, 0.5);
  EXPECT_DOUBLE_EQ(s.beta, 0.25);
  EXPECT_DOUBLE_EQ(s.eta, 1.0);
  const auto c = FluxParams::central(2.0);
  EXPECT_DOUBLE_EQ(c.beta, 0.0);
  EXPECT_DOUBLE_EQ(c.eta, 0.0);
}

TEST(SupersonicFlux, TakesUpwindTraceBitwise) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    const auto t1 = random_trace<1>(rng, Vec<1>{1.0});
    const auto t2 = random_trace<1>(rng, Vec<1>{-1.0});
    const auto a = supersonic_interior_flux(t1, t2, Vec<1>{1.0}, 0.5);
    EXPECT_EQ(a.v_star, t1.v);
    EXPECT_EQ(a.grad_u_star[0], t1.grad_u[0]);
    const auto b = supersonic_interior_flux(t1, t2, Vec<1>{-1.0}, 0.5);
    EXPECT_EQ(b.v_star, t2.v);
    EXPECT_EQ(b.grad_u_star[0], t2.grad_u[0]);
  }
}

TEST(SupersonicFlux, ContinuousDataIsSideIndependent) {
  const auto a = supersonic_interior_flux(trace1(0.4, 1.5, 1.0), trace1(0.4, 1.5, -1.0), Vec<1>{2.0}, 1.0);
  const auto b = supersonic_interior_flux(trace1(0.4, 1.5, 1.0), trace1(0.4, 1.5, -1.0), Vec<1>{-2.0}, 1.0);
  EXPECT_EQ(a.v_star, b.v_star);
  EXPECT_EQ(a.grad_u_star[0], b.grad_u_star[0]);
}

TEST(SupersonicFlux, RejectsSubsonicFace) {
  EXPECT_THROW(supersonic_interior_flux(trace1(0, 0, 1), trace1(0, 0, -1), Vec<1>{0.3}, 0.5), std::logic_error);
}

TEST(SupersonicFlux, OnlyUpwindPresetUsesOneSidedState) {
  const auto t1 = trace1(1.0, 0.0, 1.0), t2 = trace1(3.0, 0.0, -1.0);
  const auto up = interior_face_flux(t1, t2, FaceKind::InteriorSupersonic, FluxParams::sommerfeld(0.5),
                                     Vec<1>{1.0}, 0.5);
  EXPECT_EQ(up.v_star, 1.0);
  const auto ce = interior_face_flux(t1, t2, FaceKind::InteriorSupersonic, FluxParams::central(0.5),
                                     Vec<1>{1.0}, 0.5);
  EXPECT_EQ(ce.v_star, 2.0);
}

TEST(BoundaryFlux, InflowExample) {
  // 2D so that the tangential part is visible: n = (-1, 0), w.n = -0.5.
  Trace<2> t{0.0, Vec<2>{-1.0, 0.7}, Vec<2>{-1.0, 0.0}};
  const auto f = inflow_flux(t, Vec<2>{0.5, 0.0}, 1.0);
  EXPECT_NEAR(dot<2>(f.grad_u_star, t.n), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(f.v_star, -1.0 / 3.0, 1e-15);
  EXPECT_NEAR(f.grad_u_star[1], 0.0, 1e-15);
}

TEST(BoundaryFlux, InflowCharacteristicDataGivesZero) {
  const auto f = inflow_flux(trace1(1.5, 1.5, 1.0), Vec<1>{-0.5}, 1.0);
  EXPECT_NEAR(f.v_star, 0.0, 1e-15);
  EXPECT_NEAR(f.grad_u_star[0], 0.0, 1e-15);
}

TEST(BoundaryFlux, OutflowExamples) {
  const auto f = outflow_flux(trace1(1.0, 1.0, 1.0), 1.0);
  EXPECT_NEAR(f.v_star, 0.0, 1e-15);
  EXPECT_NEAR(f.grad_u_star[0], 0.0, 1e-15);
  const auto g = outflow_flux(trace1(-2.0, 2.0, 1.0), 1.0);  // v = -xi grad u.n
  EXPECT_NEAR(g.v_star, -2.0, 1e-15);
  EXPECT_NEAR(g.grad_u_star[0], 2.0, 1e-15);
  const auto z = outflow_flux(trace1(0.0, 0.0, 1.0), 1.0);
  EXPECT_EQ(z.v_star, 0.0);
  EXPECT_EQ(z.grad_u_star[0], 0.0);
}

TEST(BoundaryFlux, ClosuresSolveTheirDefiningSystems) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uc(0.2, 2.0), ux(0.2, 3.0), ua(0.0, 2.0 * 3.14159265358979);
  for (int i = 0; i < 10000; ++i) {
    const double c = uc(rng), xi = ux(rng), a = ua(rng);
    const Vec<2> n{std::cos(a), std::sin(a)};
    const Vec<2> tau{-n[1], n[0]};
    std::uniform_real_distribution<double> us(0.0, 1.0);
    const double wn = c * us(rng), wt = 2.0 * us(rng) - 1.0;
    auto t = random_trace<2>(rng, n);
    const double gn = dot<2>(t.grad_u, n);

    // inflow: w.n = -wn in [-c, 0)
    const double win = -std::max(wn, 1e-3 * c);
    const Vec<2> w_in{win * n[0] + wt * tau[0], win * n[1] + wt * tau[1]};
    const auto fi = inflow_flux(t, w_in, xi);
    const double gsn = dot<2>(fi.grad_u_star, n);
    const double scale = 1.0 + std::abs(t.v) + std::abs(gn);
    EXPECT_NEAR(fi.v_star - win * gsn, 0.0, 1e-13 * scale);
    EXPECT_NEAR(fi.v_star - dot<2>(w_in, fi.grad_u_star), 0.0, 1e-13 * scale);
    EXPECT_NEAR((fi.v_star - xi * gsn) - (t.v - xi * gn), 0.0, 1e-13 * scale * (1 + xi));
    EXPECT_NEAR(dot<2>(fi.grad_u_star, tau), 0.0, 1e-13 * scale);

    // outflow
    const auto fo = outflow_flux(t, xi);
    const double gson = dot<2>(fo.grad_u_star, n);
    EXPECT_NEAR(fo.v_star + xi * gson, 0.0, 1e-13 * scale * (1 + xi));
    EXPECT_NEAR((fo.v_star - xi * gson) - (t.v - xi * gn), 0.0, 1e-13 * scale * (1 + xi));
    EXPECT_NEAR(dot<2>(fo.grad_u_star, tau), dot<2>(t.grad_u, tau), 1e-13 * scale);
  }
}

TEST(BoundaryFlux, SupersonicClosures) {
  const Trace<1> t = trace1(2.0, -0.4, 1.0);
  const auto in = supersonic_boundary_flux(t, FaceKind::BoundaryInflowSupersonic);
  EXPECT_EQ(in.v_star, 0.0);
  EXPECT_EQ(in.grad_u_star[0], 0.0);
  const auto out = supersonic_boundary_flux(t, FaceKind::BoundaryOutflowSupersonic);
  EXPECT_EQ(out.v_star, 2.0);
  EXPECT_EQ(out.grad_u_star[0], -0.4);
  const auto z = supersonic_boundary_flux(trace1(0, 0, 1), FaceKind::BoundaryOutflowSupersonic);
  EXPECT_EQ(z.v_star, 0.0);
  EXPECT_THROW(supersonic_boundary_flux(t, FaceKind::BoundaryInflow), std::logic_error);
}

TEST(EnergyRate, ContinuousTracesGiveZero) {
  std::mt19937_64 rng(13);
  const Vec<2> n1{1.0, 0.0}, n2{-1.0, 0.0};
  for (const auto& p : {FluxParams::central(1.0), FluxParams::sommerfeld(1.0),
                        FluxParams::custom(0.3, 0.2, 0.1, 1.0)}) {
    auto t1 = random_trace<2>(rng, n1);
    auto t2 = t1;
    t2.n = n2;
    EXPECT_NEAR(interior_energy_rate(t1, t2, FaceKind::InteriorSubsonic, p, Vec<2>{0.4, 0.3}, 1.0), 0.0,
                1e-14);
  }
}

TEST(EnergyRate, CentralConserves) {
  std::mt19937_64 rng(17);
  const Vec<2> n1{0.0, 1.0}, n2{0.0, -1.0};
  for (int i = 0; i < 1000; ++i) {
    const auto t1 = random_trace<2>(rng, n1);
    const auto t2 = random_trace<2>(rng, n2);
    EXPECT_EQ(interior_energy_rate(t1, t2, FaceKind::InteriorSubsonic, FluxParams::central(1.0),
                                   Vec<2>{0.5, 0.5}, 1.0),
              0.0);
  }
}

TEST(EnergyRate, SommerfeldDissipatesBelowTheBound) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> uc(0.2, 2.0), ux(0.2, 3.0), us(-1.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double c = uc(rng), xi = ux(rng);
    const double bound = 2.0 * xi * c * c / (c * c + xi * xi);
    const Vec<2> w{bound * us(rng), 3.0 * us(rng)};
    const auto t1 = random_trace<2>(rng, Vec<2>{1.0, 0.0});
    const auto t2 = random_trace<2>(rng, Vec<2>{-1.0, 0.0});
    EXPECT_LE(interior_energy_rate(t1, t2, FaceKind::InteriorSubsonic, FluxParams::sommerfeld(xi), w, c), 1e-12);
  }
}

TEST(EnergyRate, SommerfeldStrictlyNegativeOnJumps) {
  const auto r = interior_energy_rate(trace1(1.0, 0.0, 1.0), trace1(0.0, 0.0, -1.0), FaceKind::InteriorSubsonic,
                                      FluxParams::sommerfeld(1.0), Vec<1>{0.5}, 1.0);
  EXPECT_LT(r, 0.0);
}

TEST(EnergyRate, SupersonicUpwindDissipates) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 10000; ++i) {
    const auto t1 = random_trace<1>(rng, Vec<1>{1.0});
    const auto t2 = random_trace<1>(rng, Vec<1>{-1.0});
    for (double w : {1.0, -1.0})
      EXPECT_LE(interior_energy_rate(t1, t2, FaceKind::InteriorSupersonic, FluxParams::sommerfeld(0.5),
                                     Vec<1>{w}, 0.5),
                1e-12);
  }
}

TEST(EnergyRate, SubsonicBoundaryBracketsDissipate) {
  // With xi = c both closures are dissipative for |w.n| <= c.
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> uc(0.2, 2.0), us(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double c = uc(rng);
    const auto t = random_trace<2>(rng, Vec<2>{0.0, 1.0});
    const double wn = c * us(rng);
    EXPECT_LE(boundary_energy_rate(t, FaceKind::BoundaryOutflow, wn, c, c), 1e-12);
    EXPECT_LE(boundary_energy_rate(t, FaceKind::BoundaryInflow, -std::max(wn, 1e-3), c, c), 1e-12);
  }
}
