#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "awdg/problems.hpp"
#include "awdg/timeint.hpp"

using namespace awdg;

namespace {

ModalState scalar_state(double x) {
  ModalState s;
  s.u = Eigen::MatrixXd::Constant(1, 1, x);
  s.v = Eigen::MatrixXd::Zero(0, 1);
  return s;
}

}  // namespace

TEST(ComputeDt, ShrinksToLandOnT) {
  const double cfl = 0.075 / (2 * std::numbers::pi);
  const auto plan = compute_dt(0.1, {cfl, 0.2, std::nullopt});
  const long expect = static_cast<long>(std::ceil(0.2 / (cfl * 0.1)));
  EXPECT_EQ(plan.steps, expect);
  EXPECT_NEAR(plan.dt, 0.2 / expect, 1e-18);
  EXPECT_LE(plan.dt, cfl * 0.1);
  EXPECT_NEAR(plan.dt, 1.19366e-3, 2e-5);
}

TEST(ComputeDt, ExactDivisionUnchanged) {
  const auto plan = compute_dt(0.1, {0.25, 1.0, std::nullopt});
  EXPECT_EQ(plan.steps, 40);
  EXPECT_DOUBLE_EQ(plan.dt, 0.025);
}

TEST(ComputeDt, OverrideIsSnapped) {
  const auto plan = compute_dt(0.1, {0.25, 1.0, 0.3});
  EXPECT_EQ(plan.steps, 4);
  EXPECT_DOUBLE_EQ(plan.dt, 0.25);
  EXPECT_EQ(compute_dt(0.1, {0.25, 0.0, std::nullopt}).steps, 0);
  EXPECT_THROW(compute_dt(0.0, {0.25, 1.0, std::nullopt}), std::invalid_argument);
}

TEST(ComputeDt, StepsTimesDtIsT) {
  for (double T : {0.2, 0.4, 1.0 / 3.0, 2.7}) {
    for (double h : {0.1, 1.0 / 28, 1.0 / 160}) {
      const auto p = compute_dt(h, {0.0179, T, std::nullopt});
      double t = 0.0;
      for (long k = 1; k <= p.steps; ++k) t = k * p.dt;
      EXPECT_NEAR(t, T, 1e-12);
    }
  }
}

TEST(Rk4, ZeroOperatorLeavesStateUnchanged) {
  const Rhs zero = [](const ModalState& s) {
    ModalState d = s;
    d.u.setZero();
    d.v.setZero();
    return d;
  };
  const auto s = scalar_state(2.5);
  const auto out = rk4_step(s, 0.1, zero);
  EXPECT_EQ(out.u(0, 0), 2.5);
  EXPECT_DOUBLE_EQ(out.t, 0.1);
}

TEST(Rk4, ScalarGrowthFactor) {
  const double lambda = -2.0, dt = 0.05;  // lambda dt = -0.1
  const Rhs f = [&](const ModalState& s) {
    ModalState d = s;
    d.u *= lambda;
    return d;
  };
  const auto out = rk4_step(scalar_state(1.0), dt, f);
  const double z = -0.1;
  EXPECT_NEAR(out.u(0, 0), 1 + z + z * z / 2 + z * z * z / 6 + z * z * z * z / 24, 1e-15);
}

TEST(Rk4, MatchesTaylorPolynomialOfExponential) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> nd;
  Eigen::Matrix3d A;
  for (int i = 0; i < 9; ++i) A.data()[i] = nd(rng);
  Eigen::Vector3d x0(nd(rng), nd(rng), nd(rng));
  const double dt = 0.1;
  const Rhs f = [&](const ModalState& s) {
    ModalState d = s;
    d.u = A * s.u;
    return d;
  };
  ModalState s;
  s.u = x0;
  s.v = Eigen::MatrixXd::Zero(0, 1);
  const auto out = rk4_step(s, dt, f);

  const Eigen::Matrix3d B = dt * A;
  Eigen::Matrix3d taylor = Eigen::Matrix3d::Identity(), term = Eigen::Matrix3d::Identity();
  for (int k = 1; k <= 4; ++k) {
    term = term * B / k;
    taylor += term;
  }
  EXPECT_LT((out.u - taylor * x0).cwiseAbs().maxCoeff(), 1e-14);
  // And within O(dt^5) of the true exponential.
  const Eigen::Matrix3d ex = B.exp();
  EXPECT_LT((out.u - ex * x0).norm(), 1e-4);
}

TEST(Rk4, StageTimesReachForcing) {
  std::vector<double> seen;
  const Rhs f = [&](const ModalState& s) {
    seen.push_back(s.t);
    ModalState d = s;
    d.u.setConstant(1.0);
    return d;
  };
  ModalState s = scalar_state(0.0);
  s.t = 1.0;
  rk4_step(s, 0.2, f);
  ASSERT_EQ(seen.size(), 4u);
  EXPECT_DOUBLE_EQ(seen[0], 1.0);
  EXPECT_DOUBLE_EQ(seen[1], 1.1);
  EXPECT_DOUBLE_EQ(seen[2], 1.1);
  EXPECT_DOUBLE_EQ(seen[3], 1.2);
}

TEST(Evolve, ZeroStepsReturnsInitialState) {
  const Rhs f = [](const ModalState& s) { return s; };
  const auto s0 = scalar_state(3.0);
  int calls = 0;
  const auto out = evolve(s0, {0.1, 0}, f, [&](long, const ModalState&) { ++calls; });
  EXPECT_EQ(out.u(0, 0), 3.0);
  EXPECT_EQ(calls, 1);
}

TEST(Evolve, ZeroDataStaysZero) {
  const auto op = DgOperator<1>(build_mesh<1>(8, BoundaryMode::Periodic), build_reference<1>(2, 2, 4),
                                FluxParams::sommerfeld(1.0), Vec<1>{0.5}, 1.0);
  const auto out = evolve(op.zero_state(), compute_dt(op.mesh().h, {0.02, 0.1, std::nullopt}), make_rhs(op));
  EXPECT_EQ(out.u.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(out.v.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_DOUBLE_EQ(out.t, 0.1);
}

TEST(Evolve, ReportsInstabilityStep) {
  const Rhs f = [](const ModalState& s) {
    ModalState d = s;
    d.u *= 1e200;
    return d;
  };
  try {
    evolve(scalar_state(1.0), {1.0, 10}, f);
    FAIL() << "expected InstabilityError";
  } catch (const InstabilityError& e) {
    EXPECT_GE(e.step, 1);
    EXPECT_LE(e.step, 3);
  }
}

// Halving dt on a fixed, fine mesh cuts the time error by about 16. The
// time error is measured against a run with dt / 8.
TEST(Evolve, FourthOrderInTime) {
  const auto op = DgOperator<1>(build_mesh<1>(10, BoundaryMode::Periodic), build_reference<1>(3, 3, 5),
                                FluxParams::sommerfeld(1.0), Vec<1>{0.5}, 1.0);
  const auto spec = make_problem<1>(ProblemKind::Periodic1D, Vec<1>{0.5}, 1.0);
  const auto s0 = project_initial(spec, op.mesh(), op.ref());
  auto solve = [&](long steps) { return evolve(s0, {0.2 / steps, steps}, make_rhs(op)); };
  const auto ref = solve(320);
  const auto a = solve(20), b = solve(40);
  const double ea = (a.u - ref.u).norm() + (a.v - ref.v).norm();
  const double eb = (b.u - ref.u).norm() + (b.v - ref.v).norm();
  EXPECT_GT(ea / eb, 12.0);
  EXPECT_LT(ea / eb, 20.0);
}

TEST(CflWarning, ScalesWithSpeedAndDegree) {
  EXPECT_GT(cfl_warning_threshold(1.0, 0.0, 2), cfl_warning_threshold(1.0, 0.5, 2));
  EXPECT_NEAR(cfl_warning_threshold(1.0, 0.0, 2) / cfl_warning_threshold(1.0, 0.0, 4), 4.0, 1e-12);
}
