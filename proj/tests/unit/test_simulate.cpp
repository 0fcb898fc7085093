#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include <kcontract/certify.hpp>
#include <kcontract/error.hpp>
#include <kcontract/simulate.hpp>

#include "random.hpp"

namespace kc = kcontract;
using kc::Matrix;
using kc::Nonlinearity;
using kc::Vector;
using kctest::Rng;

namespace {

kc::NetworkSystem hopfield() {
  return kc::NetworkSystem(0.5, Matrix::Ones(10, 10), Nonlinearity::scaled_tanh(0.07, 10));
}

kc::Dynamics linear_dynamics(const Matrix& j) {
  return kc::Dynamics{static_cast<int>(j.rows()), [j](double, const Vector& x) -> Vector { return j * x; },
                      [j](double, const Vector&) -> Matrix { return j; }};
}

kc::Trajectory synthetic(double slope, int samples) {
  kc::Trajectory t;
  for (int i = 0; i < samples; ++i) {
    const double ti = 0.05 * i;
    t.times.push_back(ti);
    t.states.push_back(Vector::Zero(1));
    t.log_volumes.push_back(slope * ti + 0.3);
  }
  return t;
}

}  // namespace

TEST(Integrate, ExponentialDecay) {
  const double alpha = 0.7;
  const kc::Dynamics dyn = linear_dynamics(-alpha * Matrix::Identity(3, 3));
  const Vector x0 = Eigen::Vector3d(1.0, -2.0, 3.5);
  const auto traj = kc::integrate(dyn, x0, 1.0, 1e-3);
  EXPECT_DOUBLE_EQ(traj.times.back(), 1.0);
  const Vector exact = std::exp(-alpha) * x0;
  EXPECT_LE((traj.states.back() - exact).norm(), 1e-8 * exact.norm());
  EXPECT_EQ(traj.times.size(), traj.states.size());
  EXPECT_EQ(traj.times.size(), 1001u);
}

TEST(Integrate, ShortensLastStep) {
  const kc::Dynamics dyn = linear_dynamics(-Matrix::Identity(1, 1));
  const auto traj = kc::integrate(dyn, Vector::Ones(1), 0.25, 0.1);
  ASSERT_EQ(traj.times.size(), 4u);
  EXPECT_DOUBLE_EQ(traj.times.back(), 0.25);
  EXPECT_NEAR(traj.states.back()(0), std::exp(-0.25), 1e-6);
}

TEST(Integrate, HopfieldEquilibria) {
  const kc::Dynamics dyn = kc::make_dynamics(hopfield());
  const auto eq = kc::hopfield_symmetric_equilibria(hopfield());
  kc::IntegrationOptions opts;
  opts.t_end = 60.0;
  opts.record_every = 100;
  const auto up = kc::integrate(dyn, Vector::Constant(10, 3.0), opts);
  EXPECT_EQ(kc::classify_convergence(up, eq, 1e-4), std::optional<std::size_t>(1));
  EXPECT_NEAR(up.states.back()(0), 1.1403, 1e-4);
  const auto origin = kc::integrate(dyn, Vector::Zero(10), opts);
  EXPECT_EQ(origin.states.back(), Vector::Zero(10));
  EXPECT_EQ(kc::classify_convergence(origin, eq, 1e-4), std::optional<std::size_t>(0));
}

TEST(Integrate, Divergence) {
  const kc::Dynamics dyn = linear_dynamics(5.0 * Matrix::Identity(2, 2));
  try {
    kc::integrate(dyn, Vector::Ones(2), 10.0, 1e-3);
    FAIL() << "expected divergence";
  } catch (const kc::DivergenceError& e) {
    EXPECT_EQ(e.code(), kc::Errc::divergence);
    // |x| = sqrt(2) e^{5t} crosses 1e9 near t = 4.08.
    EXPECT_NEAR(e.escape_time(), std::log(1e9 / std::sqrt(2.0)) / 5.0, 2e-3);
  }
}

TEST(Integrate, InvalidArguments) {
  const kc::Dynamics dyn = linear_dynamics(-Matrix::Identity(2, 2));
  EXPECT_THROW(kc::integrate(dyn, Vector::Ones(2), 1.0, 0.0), kc::Error);
  EXPECT_THROW(kc::integrate(dyn, Vector::Ones(2), -1.0, 1e-3), kc::Error);
  EXPECT_THROW(kc::integrate(dyn, Vector::Ones(3), 1.0, 1e-3), kc::Error);
}

TEST(Integrate, RungeKuttaOrder) {
  const kc::Dynamics dyn = kc::make_dynamics(hopfield());
  Rng rng(51);
  const Vector x0 = rng.vector(10, -3.0, 3.0);
  const double t_end = 2.0, dt = 0.1;
  const Vector reference = kc::integrate(dyn, x0, t_end, dt / 16.0).states.back();
  const double coarse = (kc::integrate(dyn, x0, t_end, dt).states.back() - reference).norm();
  const double fine = (kc::integrate(dyn, x0, t_end, dt / 2.0).states.back() - reference).norm();
  const double ratio = coarse / fine;
  EXPECT_GE(ratio, 8.0);
  EXPECT_LE(ratio, 32.0);
}

TEST(Variational, LiouvilleFullOrder) {
  Rng rng(52);
  const Matrix j = rng.matrix(3, 3, -1.0, 1.0);
  const kc::Dynamics dyn = linear_dynamics(j);
  const Matrix x0 = rng.invertible(3);
  const auto q = kc::symmetric_sqrt(rng.spd(3));
  kc::IntegrationOptions opts;
  opts.t_end = 1.5;
  const auto traj = kc::integrate_with_variational(dyn, rng.vector(3), x0, q, opts);
  const double v0 = std::abs(q.q().determinant() * x0.determinant());
  const double expected = v0 * std::exp(j.trace() * 1.5);
  EXPECT_LE(std::abs(std::exp(traj.log_volumes.back()) - expected), 1e-6 * expected);
}

TEST(Variational, ContractionOfMinusIdentity) {
  const kc::Dynamics dyn = linear_dynamics(-Matrix::Identity(4, 4));
  Rng rng(53);
  const Matrix x0 = rng.matrix(4, 2);
  kc::IntegrationOptions opts;
  opts.t_end = 2.0;
  opts.record_every = 10;
  const auto traj = kc::integrate_with_variational(dyn, rng.vector(4), x0, kc::ScalingQ::identity(4), opts);
  EXPECT_EQ(traj.log_volumes.size(), traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    EXPECT_NEAR(traj.log_volumes[i], traj.log_volumes[0] - 2.0 * traj.times[i], 1e-9);
  EXPECT_NEAR(kc::estimate_decay_rate(traj, 0.2), -2.0, 1e-8);
}

TEST(Variational, VolumeEqualsScaledGram) {
  Rng rng(54);
  const kc::Dynamics dyn = kc::make_dynamics(hopfield());
  const Matrix p = rng.spd(10);
  const auto q = kc::symmetric_sqrt(p);
  kc::IntegrationOptions opts;
  opts.t_end = 1.0;
  opts.record_every = 250;
  opts.keep_frames = true;
  const auto traj = kc::integrate_with_variational(dyn, rng.vector(10), rng.matrix(10, 3), q, opts);
  ASSERT_EQ(traj.frames.size(), traj.times.size());
  for (std::size_t i = 0; i < traj.frames.size(); ++i) {
    const Matrix& x = traj.frames[i];
    const double gram = 0.5 * std::log((x.transpose() * p * x).determinant());
    EXPECT_LE(std::abs(std::exp(traj.log_volumes[i] - gram) - 1.0), 1e-8);
  }
}

TEST(Variational, RankCollapseAndBadFrames) {
  const kc::Dynamics dyn = linear_dynamics(-400.0 * Matrix::Identity(2, 2));
  kc::IntegrationOptions opts;
  opts.t_end = 5.0;
  const auto traj = kc::integrate_with_variational(dyn, Vector::Ones(2), Matrix::Identity(2, 2),
                                                   kc::ScalingQ::identity(2), opts);
  EXPECT_TRUE(traj.rank_collapsed);
  EXPECT_LT(traj.times.back(), 5.0);
  Matrix degenerate(2, 2);
  degenerate << 1, 2, 2, 4;
  EXPECT_THROW(kc::integrate_with_variational(dyn, Vector::Ones(2), degenerate, kc::ScalingQ::identity(2), opts),
               kc::Error);
}

TEST(Variational, CertifiedHopfieldDecay) {
  const kc::NetworkSystem net = hopfield();
  const auto s = kc::find_scalar_gamma_p(net, 2);
  const double rate = 0.5 * (s.eta1 + s.eta2);
  const kc::Dynamics dyn = kc::make_dynamics(net);
  const auto q = kc::symmetric_sqrt(s.p * Matrix::Identity(10, 10));
  kc::IntegrationOptions opts;
  opts.t_end = 40.0;
  opts.record_every = 100;
  for (const Vector& x0 : kc::random_initial_conditions(2, 10, -3.0, 3.0, 99)) {
    const auto traj = kc::integrate_with_variational(dyn, x0, Matrix::Identity(10, 2), q, opts);
    EXPECT_LE(kc::estimate_decay_rate(traj, 0.2), -rate + 0.01);
  }
}

TEST(DecayRate, Synthetic) {
  EXPECT_NEAR(kc::estimate_decay_rate(synthetic(-3.0, 100), 0.2), -3.0, 1e-9);
  EXPECT_NEAR(kc::estimate_decay_rate(synthetic(0.0, 100), 0.2), 0.0, 1e-12);
  EXPECT_THROW(kc::estimate_decay_rate(synthetic(-1.0, 11), 0.2), kc::Error);
  auto truncated = synthetic(-2.0, 100);
  for (std::size_t i = 50; i < 100; ++i) truncated.log_volumes[i] = -INFINITY;
  EXPECT_NEAR(kc::estimate_decay_rate(truncated, 0.2), -2.0, 1e-9);
  kc::Trajectory empty;
  empty.times = {0.0, 1.0};
  try {
    kc::estimate_decay_rate(empty, 0.2);
    FAIL();
  } catch (const kc::Error& e) {
    EXPECT_EQ(e.code(), kc::Errc::insufficient_data);
  }
}

TEST(Equilibria, Hopfield) {
  const kc::NetworkSystem net = hopfield();
  const auto eq = kc::hopfield_symmetric_equilibria(net);
  ASSERT_EQ(eq.points.size(), 3u);
  const double c = eq.points[1](0);
  EXPECT_NEAR(c, 1.1403, 1e-3);
  EXPECT_LT(std::abs(0.5 * c - 0.7 * std::tanh(c)), 1e-12);
  EXPECT_EQ(eq.points[2], -eq.points[1]);
  for (const auto& p : eq.points) EXPECT_LE(kc::evaluate_field(net, 0.0, p).norm(), 1e-10);
}

TEST(Equilibria, ContractiveRegimeOnlyOrigin) {
  const kc::NetworkSystem net(0.5, Matrix::Ones(10, 10), Nonlinearity::scaled_tanh(0.04, 10));
  const auto eq = kc::hopfield_symmetric_equilibria(net);
  ASSERT_EQ(eq.points.size(), 1u);
  EXPECT_EQ(eq.points[0], Vector::Zero(10));
}

TEST(Equilibria, WrongStructure) {
  Rng rng(55);
  const kc::NetworkSystem net(0.5, rng.matrix(3, 3), Nonlinearity::scaled_tanh(0.5, 3));
  EXPECT_THROW(kc::hopfield_symmetric_equilibria(net), kc::Error);
}

TEST(Classify, StartAtEquilibriumAndTruncated) {
  const kc::NetworkSystem net = hopfield();
  const auto eq = kc::hopfield_symmetric_equilibria(net);
  const kc::Dynamics dyn = kc::make_dynamics(net);
  const auto at = kc::integrate(dyn, eq.points[2], 1.0, 1e-2);
  EXPECT_EQ(kc::classify_convergence(at, eq, 1e-4), std::optional<std::size_t>(2));
  const auto shortrun = kc::integrate(dyn, Vector::Constant(10, 3.0), 0.1, 1e-2);
  EXPECT_FALSE(kc::classify_convergence(shortrun, eq, 1e-4));
}

TEST(RandomStates, ReproducibleAndInBox) {
  const auto a = kc::random_initial_conditions(20, 4, -3.0, 3.0, 7);
  const auto b = kc::random_initial_conditions(20, 4, -3.0, 3.0, 7);
  const auto c = kc::random_initial_conditions(20, 4, -3.0, 3.0, 8);
  ASSERT_EQ(a.size(), 20u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_GE(a[i].minCoeff(), -3.0);
    EXPECT_LT(a[i].maxCoeff(), 3.0);
  }
  EXPECT_NE(a[0], c[0]);
}

TEST(Csv, HeaderAndRows) {
  const kc::Dynamics dyn = linear_dynamics(-Matrix::Identity(2, 2));
  kc::IntegrationOptions opts;
  opts.t_end = 0.5;
  opts.dt = 0.1;
  const auto traj =
      kc::integrate_with_variational(dyn, Vector::Ones(2), Matrix::Identity(2, 1), kc::ScalingQ::identity(2), opts);
  std::ostringstream os;
  kc::write_trajectory_csv(os, traj);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,x1,x2,logvol");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 6);

  std::ostringstream plain;
  kc::write_trajectory_csv(plain, kc::integrate(dyn, Vector::Ones(2), 0.5, 0.1));
  EXPECT_EQ(plain.str().substr(0, plain.str().find('\n')), "t,x1,x2");
}
