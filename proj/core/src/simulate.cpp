#include "kcontract/simulate.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "kcontract/error.hpp"

namespace kcontract {

namespace {

struct StepPlan {
  long long steps = 0;
  double last = 0.0;
};

StepPlan plan_steps(double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(Errc::invalid_parameter, "dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end))
    throw Error(Errc::invalid_parameter, "t_end must be positive");
  const double ratio = t_end / dt;
  auto steps = static_cast<long long>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio) steps = static_cast<long long>(std::ceil(ratio));
  steps = std::max(steps, 1LL);
  return StepPlan{steps, t_end - static_cast<double>(steps - 1) * dt};
}

void guard(const Vector& x, double t) {
  const double norm = x.norm();
  if (!std::isfinite(norm) || norm > kDivergenceNorm)
    throw DivergenceError(t, "state norm exceeded " + std::to_string(kDivergenceNorm) + " at t=" +
                                 std::to_string(t));
}

double log_volume(const Matrix& qk, const Matrix& frame, int k) {
  const double v = (qk * multiplicative_compound(frame, k).body).norm();
  return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
}

}  // namespace

Trajectory integrate(const Dynamics& sys, const Vector& x0, double t_end, double dt) {
  IntegrationOptions opts;
  opts.t_end = t_end;
  opts.dt = dt;
  return integrate(sys, x0, opts);
}

Trajectory integrate(const Dynamics& sys, const Vector& x0, const IntegrationOptions& opts) {
  if (x0.size() != sys.dimension) throw Error(Errc::shape, "initial state has wrong length");
  if (opts.record_every < 1) throw Error(Errc::invalid_parameter, "record_every must be >= 1");
  const StepPlan plan = plan_steps(opts.t_end, opts.dt);

  Trajectory traj;
  Vector x = x0;
  guard(x, 0.0);
  traj.times.push_back(0.0);
  traj.states.push_back(x);
  for (long long i = 0; i < plan.steps; ++i) {
    const double t = static_cast<double>(i) * opts.dt;
    const double h = (i == plan.steps - 1) ? plan.last : opts.dt;
    const Vector k1 = sys.field(t, x);
    const Vector k2 = sys.field(t + 0.5 * h, x + 0.5 * h * k1);
    const Vector k3 = sys.field(t + 0.5 * h, x + 0.5 * h * k2);
    const Vector k4 = sys.field(t + h, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t_next = (i == plan.steps - 1) ? opts.t_end : static_cast<double>(i + 1) * opts.dt;
    guard(x, t_next);
    if ((i + 1) % opts.record_every == 0 || i == plan.steps - 1) {
      traj.times.push_back(t_next);
      traj.states.push_back(x);
    }
  }
  return traj;
}

Trajectory integrate_with_variational(const Dynamics& sys, const Vector& x0, const Matrix& frame0,
                                      const ScalingQ& q, const IntegrationOptions& opts) {
  const int n = sys.dimension;
  if (x0.size() != n) throw Error(Errc::shape, "initial state has wrong length");
  if (frame0.rows() != n || frame0.cols() < 1 || frame0.cols() > n)
    throw Error(Errc::shape, "frame must be n x k with 1 <= k <= n");
  if (q.dimension() != n) throw Error(Errc::shape, "scaling dimension mismatch");
  if (opts.record_every < 1) throw Error(Errc::invalid_parameter, "record_every must be >= 1");
  const int k = static_cast<int>(frame0.cols());
  const StepPlan plan = plan_steps(opts.t_end, opts.dt);
  const Matrix qk = multiplicative_compound(q.q(), k).body;
  const double log_floor = std::log(kVolumeFloor);

  Trajectory traj;
  traj.frame_order = k;
  Vector x = x0;
  Matrix frame = frame0;
  guard(x, 0.0);
  const double lv0 = log_volume(qk, frame, k);
  if (!(lv0 >= log_floor)) throw Error(Errc::invalid_parameter, "initial frame is rank deficient");

  auto record = [&](double t, double lv) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.log_volumes.push_back(lv);
    if (opts.keep_frames) traj.frames.push_back(frame);
  };
  record(0.0, lv0);

  for (long long i = 0; i < plan.steps; ++i) {
    const double t = static_cast<double>(i) * opts.dt;
    const double h = (i == plan.steps - 1) ? plan.last : opts.dt;
    const Vector k1 = sys.field(t, x);
    const Matrix m1 = sys.jacobian(t, x) * frame;
    const Vector x2 = x + 0.5 * h * k1;
    const Vector k2 = sys.field(t + 0.5 * h, x2);
    const Matrix m2 = sys.jacobian(t + 0.5 * h, x2) * (frame + 0.5 * h * m1);
    const Vector x3 = x + 0.5 * h * k2;
    const Vector k3 = sys.field(t + 0.5 * h, x3);
    const Matrix m3 = sys.jacobian(t + 0.5 * h, x3) * (frame + 0.5 * h * m2);
    const Vector x4 = x + h * k3;
    const Vector k4 = sys.field(t + h, x4);
    const Matrix m4 = sys.jacobian(t + h, x4) * (frame + h * m3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    frame += (h / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4);

    const double t_next = (i == plan.steps - 1) ? opts.t_end : static_cast<double>(i + 1) * opts.dt;
    guard(x, t_next);
    const bool last = i == plan.steps - 1;
    const bool due = (i + 1) % opts.record_every == 0 || last;
    if (!due) continue;
    const double lv = log_volume(qk, frame, k);
    if (!(lv >= log_floor)) {
      traj.rank_collapsed = true;
      break;
    }
    record(t_next, lv);
  }
  return traj;
}

double estimate_decay_rate(const Trajectory& traj, double skip_fraction) {
  if (!(skip_fraction >= 0.0 && skip_fraction < 1.0))
    throw Error(Errc::invalid_parameter, "skip fraction must lie in [0, 1)");
  if (traj.log_volumes.empty() || traj.log_volumes.size() > traj.times.size())
    throw Error(Errc::insufficient_data, "trajectory carries no volume series");
  const std::size_t count = traj.log_volumes.size();
  const double t0 = traj.times.front();
  const double cutoff = t0 + skip_fraction * (traj.times[count - 1] - t0);

  double sum_t = 0.0, sum_v = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (traj.times[i] < cutoff || !std::isfinite(traj.log_volumes[i])) continue;
    sum_t += traj.times[i];
    sum_v += traj.log_volumes[i];
    ++used;
  }
  if (used < 10)
    throw Error(Errc::insufficient_data,
                "need at least 10 samples after the transient, have " + std::to_string(used));
  const double mean_t = sum_t / static_cast<double>(used);
  const double mean_v = sum_v / static_cast<double>(used);
  double stt = 0.0, stv = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    if (traj.times[i] < cutoff || !std::isfinite(traj.log_volumes[i])) continue;
    const double dt = traj.times[i] - mean_t;
    stt += dt * dt;
    stv += dt * (traj.log_volumes[i] - mean_v);
  }
  if (!(stt > 0.0)) throw Error(Errc::insufficient_data, "retained samples span no time");
  return stv / stt;
}

EquilibriumSet hopfield_symmetric_equilibria(const NetworkSystem& net) {
  const auto* act = std::get_if<ScaledTanh>(&net.activation().family());
  if (act == nullptr) throw Error(Errc::wrong_structure, "activation must be scaled tanh");
  const Matrix& w = net.weights();
  const double c = w(0, 0);
  if ((w.array() - c).abs().maxCoeff() > 1e-12 * std::max(1.0, std::abs(c)))
    throw Error(Errc::wrong_structure, "weights must be c * 1 1^T");

  const int n = net.dimension();
  const double alpha = net.alpha();
  const double drive = n * c * act->gain;

  EquilibriumSet out;
  out.points.push_back(Vector::Zero(n));
  if (drive / alpha > 1.0) {
    // drive * tanh(s) / s - alpha falls from drive - alpha > 0 at 0+ to -alpha.
    auto excess = [&](double s) { return s == 0.0 ? drive - alpha : drive * std::tanh(s) / s - alpha; };
    double lo = 0.0;
    double hi = drive / alpha + 1.0;
    while (hi - lo > 1e-14 * hi) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    out.points.push_back(Vector::Constant(n, root));
    out.points.push_back(Vector::Constant(n, -root));
  }
  return out;
}

std::optional<std::size_t> classify_convergence(const Trajectory& traj, const EquilibriumSet& eq,
                                                double tol) {
  if (traj.states.empty()) return std::nullopt;
  const Vector& last = traj.states.back();
  std::optional<std::size_t> best;
  double best_d = tol;
  for (std::size_t i = 0; i < eq.points.size(); ++i) {
    if (eq.points[i].size() != last.size()) continue;
    const double d = (eq.points[i] - last).norm();
    if (d <= best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

std::vector<Vector> random_initial_conditions(int count, int n, double lo, double hi,
                                              std::uint64_t seed) {
  if (count < 0 || n < 1 || !(hi > lo)) throw Error(Errc::invalid_parameter, "bad sampling box");
  std::mt19937_64 gen(seed);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Vector x(n);
    for (int j = 0; j < n; ++j) {
      const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      x(j) = lo + (hi - lo) * unit;
    }
    out.push_back(std::move(x));
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const bool vol = traj.has_volumes();
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  os << 't';
  for (Eigen::Index j = 0; j < n; ++j) os << ",x" << (j + 1);
  if (vol) os << ",logvol";
  os << '\n';
  const auto old = os.precision(17);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    os << traj.times[i];
    for (Eigen::Index j = 0; j < n; ++j) os << ',' << traj.states[i](j);
    if (vol) os << ',' << traj.log_volumes[i];
    os << '\n';
  }
  os.precision(old);
}

}  // namespace kcontract
