#pragma once

// Fixed-step RK4 integration of trajectories, optionally together with the
// variational equation X' = J(t, x) X for k tangent vectors, and the volume
// |Q^(k) X^(k)|_2 of the parallelotope they span.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "kcontract/measures.hpp"
#include "kcontract/systems.hpp"

namespace kcontract {

inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kDivergenceNorm = 1e9;
inline constexpr double kVolumeFloor = 1e-300;

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  /// Tangent frames X(t); kept only on request.
  std::vector<Matrix> frames;
  /// log |Q^(k) X^(k)(t)|_2, one per time when variational data was tracked.
  std::vector<double> log_volumes;
  int frame_order = 0;
  /// Set when the volume dropped below kVolumeFloor; the run stops there.
  bool rank_collapsed = false;

  bool has_volumes() const noexcept { return !log_volumes.empty(); }
};

struct IntegrationOptions {
  double t_end = 1.0;
  double dt = kDefaultStep;
  /// Record every n-th step (the final state is always recorded).
  int record_every = 1;
  bool keep_frames = false;
};

/// Classical RK4 on x' = f(t, x). Throws DivergenceError once |x|_2 > 1e9.
Trajectory integrate(const Dynamics& sys, const Vector& x0, double t_end, double dt);
Trajectory integrate(const Dynamics& sys, const Vector& x0, const IntegrationOptions& opts);

/// RK4 on (x, X) with X' = J(t, x) X; records log |Q^(k) X^(k)|_2.
Trajectory integrate_with_variational(const Dynamics& sys, const Vector& x0, const Matrix& frame0,
                                      const ScalingQ& q, const IntegrationOptions& opts);

/// Least-squares slope of log volume against time after discarding the first
/// skip_fraction of the time span. Needs at least 10 retained samples.
double estimate_decay_rate(const Trajectory& traj, double skip_fraction = 0.2);

struct EquilibriumSet {
  std::vector<Vector> points;
  double residual_tol = 1e-10;
};

/// Equilibria s * 1 of x' = -alpha x + c 1 1^T g tanh(x): the origin and,
/// when n c g / alpha > 1, the pair +-s* 1 with alpha s* = n c g tanh(s*).
EquilibriumSet hopfield_symmetric_equilibria(const NetworkSystem& net);

/// Index of the equilibrium within tol (Euclidean) of the final state.
std::optional<std::size_t> classify_convergence(const Trajectory& traj, const EquilibriumSet& eq,
                                                double tol);

/// count points uniform in [lo, hi]^n from a seeded mt19937_64. The mapping
/// from generator output to doubles is fixed here, so runs are bit-reproducible.
std::vector<Vector> random_initial_conditions(int count, int n, double lo, double hi,
                                              std::uint64_t seed);

/// Header t,x1,...,xn[,logvol]; one row per recorded sample.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace kcontract
