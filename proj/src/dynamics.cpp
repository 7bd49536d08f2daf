#include "rindler/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "rindler/errors.hpp"

namespace rindler {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kMaxFixedPointSweeps = 50;
constexpr double kFixedPointTolerance = 1e-12;

double max_norm(const PhaseState& s) {
  double m = std::max(std::abs(s.R), std::abs(s.P));
  for (double v : s.rel_pos) m = std::max(m, std::abs(v));
  for (double v : s.rel_mom) m = std::max(m, std::abs(v));
  return m;
}

// a + k * b, componentwise.
PhaseState axpy(const PhaseState& a, double k, const PhaseState& b) {
  PhaseState out = a;
  out.R += k * b.R;
  out.P += k * b.P;
  for (std::size_t j = 0; j < out.rel_pos.size(); ++j) {
    out.rel_pos[j] += k * b.rel_pos[j];
    out.rel_mom[j] += k * b.rel_mom[j];
  }
  return out;
}

double max_difference(const PhaseState& a, const PhaseState& b) {
  double m = std::max(std::abs(a.R - b.R), std::abs(a.P - b.P));
  for (std::size_t j = 0; j < a.rel_pos.size(); ++j) {
    m = std::max(m, std::abs(a.rel_pos[j] - b.rel_pos[j]));
    m = std::max(m, std::abs(a.rel_mom[j] - b.rel_mom[j]));
  }
  return m;
}

PhaseState midpoint_of(const PhaseState& a, const PhaseState& b) {
  PhaseState out = a;
  out.R = 0.5 * (a.R + b.R);
  out.P = 0.5 * (a.P + b.P);
  for (std::size_t j = 0; j < a.rel_pos.size(); ++j) {
    out.rel_pos[j] = 0.5 * (a.rel_pos[j] + b.rel_pos[j]);
    out.rel_mom[j] = 0.5 * (a.rel_mom[j] + b.rel_mom[j]);
  }
  return out;
}

void check_finite(const PhaseState& d) {
  if (!std::isfinite(max_norm(d))) throw EvaluationError("Hamiltonian gradient is not finite");
}

PhaseState analytic_gradient(const HamiltonianSpec& spec, const PhaseState& s, double scale) {
  const std::size_t n = s.particle_count();
  const double M = spec.total_mass();
  const double g = spec.g();
  const double c2 = spec.c() * spec.c();
  const double h = scale * internal_hamiltonian(spec, s);
  const double coupling = 1.0 - s.P * s.P / (2.0 * M * M * c2) + g * s.R / c2;

  PhaseState d{0.0, 0.0, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  spec.internal().gradient(s.rel_pos, s.rel_mom, d.rel_pos, d.rel_mom);
  for (std::size_t j = 0; j < n; ++j) {
    d.rel_pos[j] *= coupling * scale;
    d.rel_mom[j] *= coupling * scale;
  }
  d.R = M * g + g * s.P * s.P / (2.0 * M * c2) + g * h / c2;
  d.P = s.P / M - s.P * s.P * s.P / (2.0 * M * M * M * c2) + g * s.R * s.P / (M * c2) -
        s.P * h / (M * M * c2);

  const auto& u = spec.potential();
  if (u.newtonian) d.R += u.newtonian->derivative(s.R);
  if (u.correction) {
    const PhaseState du = u.correction->gradient(s);
    d = axpy(d, 1.0 / c2, du);
  }
  return d;
}

PhaseState numeric_gradient(const HamiltonianSpec& spec, const PhaseState& s, double scale) {
  // Rest energy excluded: it is constant and would only add round-off.
  const EvalOptions options{scale, RestEnergy::excluded};
  PhaseState work = s;
  auto partial = [&](double& coordinate) {
    const double saved = coordinate;
    const double h = std::cbrt(kEps) * std::max(1.0, std::abs(saved));
    coordinate = saved + h;
    const double up = total_hamiltonian_eq1(spec, work, options);
    coordinate = saved - h;
    const double down = total_hamiltonian_eq1(spec, work, options);
    coordinate = saved;
    return (up - down) / (2.0 * h);
  };
  PhaseState d = s;
  d.R = partial(work.R);
  d.P = partial(work.P);
  for (std::size_t j = 0; j < s.particle_count(); ++j) {
    d.rel_pos[j] = partial(work.rel_pos[j]);
    d.rel_mom[j] = partial(work.rel_mom[j]);
  }
  return d;
}

}  // namespace

bool has_analytic_gradient(const HamiltonianSpec& spec) noexcept {
  const auto& u = spec.potential();
  const bool newtonian_ok = !u.newtonian || static_cast<bool>(u.newtonian->derivative);
  const bool correction_ok = !u.correction || static_cast<bool>(u.correction->gradient);
  return static_cast<bool>(spec.internal().gradient) && newtonian_ok && correction_ok;
}

PhaseState hamiltonian_gradient(const HamiltonianSpec& spec, const PhaseState& s,
                                double internal_scale) {
  spec.check_state(s);
  PhaseState d = has_analytic_gradient(spec) ? analytic_gradient(spec, s, internal_scale)
                                             : numeric_gradient(spec, s, internal_scale);
  check_finite(d);
  return d;
}

PhaseState hamilton_rhs(const HamiltonianSpec& spec, const PhaseState& s, double internal_scale) {
  const PhaseState grad = hamiltonian_gradient(spec, s, internal_scale);
  PhaseState rhs = grad;
  rhs.R = grad.P;
  rhs.P = -grad.R;
  for (std::size_t j = 0; j < grad.rel_pos.size(); ++j) {
    rhs.rel_pos[j] = grad.rel_mom[j];
    rhs.rel_mom[j] = -grad.rel_pos[j];
  }
  return rhs;
}

PhaseState midpoint_step(const HamiltonianSpec& spec, const PhaseState& s, double t, double dt,
                         const InternalSchedule& schedule, std::size_t step_index) {
  if (dt == 0.0 || !std::isfinite(dt)) throw PreconditionError("midpoint_step: dt must be nonzero");
  const double scale = schedule ? schedule(t + 0.5 * dt) : 1.0;
  // Explicit Euler warm start.
  PhaseState next = axpy(s, dt, hamilton_rhs(spec, s, scale));
  double previous = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (std::size_t sweep = 0; sweep < kMaxFixedPointSweeps; ++sweep) {
    PhaseState candidate;
    try {
      candidate = axpy(s, dt, hamilton_rhs(spec, midpoint_of(s, next), scale));
    } catch (const EvaluationError&) {
      break;  // iterate diverged
    }
    const double change = max_difference(candidate, next);
    if (!std::isfinite(change)) break;
    const double size = std::max(1.0, max_norm(candidate));
    next = std::move(candidate);
    converged = change <= kFixedPointTolerance * size;
    // Past the tolerance, keep polishing until rounding noise dominates.
    if (converged && (change <= 4.0 * kEps * size || change >= previous)) return next;
    previous = change;
  }
  if (converged) return next;
  throw IntegrationError("implicit midpoint fixed-point iteration did not converge at step " +
                             std::to_string(step_index),
                         step_index);
}

Trajectory integrate(const HamiltonianSpec& spec, const PhaseState& s0, double dt, std::size_t steps,
                     const InternalSchedule& schedule) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("integrate: dt must be positive");
  if (steps < 1) throw PreconditionError("integrate: steps must be >= 1");
  spec.check_state(s0);

  auto energy_at = [&](const PhaseState& s, double t) {
    return total_hamiltonian_eq1(spec, s, EvalOptions{schedule ? schedule(t) : 1.0});
  };

  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.energies.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(s0);
  traj.energies.push_back(energy_at(s0, 0.0));
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    PhaseState next = midpoint_step(spec, traj.states.back(), t, dt, schedule, k);
    const double t_next = static_cast<double>(k + 1) * dt;
    traj.energies.push_back(energy_at(next, t_next));
    traj.times.push_back(t_next);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

EquilibriumResult find_equilibrium(const HamiltonianSpec& spec, std::optional<PhaseState> internal) {
  const std::size_t n = spec.masses().size();
  PhaseState s = internal ? *internal
                          : PhaseState{0.0, 0.0, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  spec.check_state(s);
  s.R = 0.0;
  s.P = 0.0;

  auto residual_of = [&](const PhaseState& state) { return max_norm(hamilton_rhs(spec, state)); };
  auto cm_gradient = [&](double X, double P) {
    PhaseState probe = s;
    probe.R = X;
    probe.P = P;
    const PhaseState g = hamiltonian_gradient(spec, probe);
    return std::pair<double, double>{g.R, g.P};
  };

  EquilibriumResult result;
  const double target = 1e-13 * std::max(1.0, std::abs(spec.total_mass() * spec.g()));
  for (std::size_t it = 0; it < 100; ++it) {
    auto [fx, fp] = cm_gradient(s.R, s.P);
    const double res = std::max(std::abs(fx), std::abs(fp));
    result.residual_history.push_back(res);
    if (res <= target) break;

    // Jacobian of (dH/dX, dH/dP) by central differences.
    const double hx = 1e-6 * std::max(1.0, std::abs(s.R));
    const double hp = 1e-6 * std::max(1.0, std::abs(s.P));
    auto [fx_xp, fp_xp] = cm_gradient(s.R + hx, s.P);
    auto [fx_xm, fp_xm] = cm_gradient(s.R - hx, s.P);
    auto [fx_pp, fp_pp] = cm_gradient(s.R, s.P + hp);
    auto [fx_pm, fp_pm] = cm_gradient(s.R, s.P - hp);
    const double a = (fx_xp - fx_xm) / (2 * hx), b = (fx_pp - fx_pm) / (2 * hp);
    const double c = (fp_xp - fp_xm) / (2 * hx), d = (fp_pp - fp_pm) / (2 * hp);
    const double det = a * d - b * c;
    if (!std::isfinite(det) || det == 0.0) {
      throw SolverError("find_equilibrium: singular Jacobian (no restoring support?)",
                        result.residual_history);
    }
    const double dX = -(d * fx - b * fp) / det;
    const double dP = -(a * fp - c * fx) / det;

    // Backtrack if the full Newton step increases the residual.
    double lambda = 1.0;
    for (int k = 0; k < 30; ++k) {
      auto [nx, np] = cm_gradient(s.R + lambda * dX, s.P + lambda * dP);
      if (std::max(std::abs(nx), std::abs(np)) < res) break;
      lambda *= 0.5;
    }
    s.R += lambda * dX;
    s.P += lambda * dP;
    result.iterations = it + 1;
  }

  result.residual = residual_of(s);
  if (!(result.residual < 1e-10)) {
    throw SolverError("find_equilibrium: Newton iteration did not converge (residual " +
                          std::to_string(result.residual) + ")",
                      result.residual_history);
  }
  if (spec.potential().harmonic_stiffness && !spec.potential().correction) {
    const double alpha = *spec.potential().harmonic_stiffness;
    const double c2 = spec.c() * spec.c();
    const double h0 = internal_hamiltonian(spec, s);
    result.closed_form_X = -(spec.total_mass() * spec.g() + spec.g() * h0 / c2) / alpha;
  }
  result.state = std::move(s);
  return result;
}

InternalSchedule step_schedule(double t_switch, double factor) {
  return [t_switch, factor](double t) { return t < t_switch ? 1.0 : factor; };
}

DriftResult drift_under_internal_change(const HamiltonianSpec& spec, const InternalSchedule& schedule,
                                        const PhaseState& s0, double horizon, double dt,
                                        double change_time) {
  if (!(horizon > change_time) || !(dt > 0.0)) {
    throw PreconditionError("drift_under_internal_change: need horizon > change_time and dt > 0");
  }
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  DriftResult result;
  result.trajectory = integrate(spec, s0, dt, steps, schedule);
  result.initial_X = s0.R;
  result.final_scale = schedule ? schedule(horizon) : 1.0;

  const double window_start = change_time + 0.5 * (horizon - change_time);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < result.trajectory.size(); ++i) {
    if (result.trajectory.times[i] >= window_start) {
      sum += result.trajectory.states[i].R;
      ++count;
    }
  }
  result.averaged_X = count ? sum / static_cast<double>(count) : s0.R;

  if (spec.potential().harmonic_stiffness) {
    const double alpha = *spec.potential().harmonic_stiffness;
    result.predicted_shift = -spec.g() * (result.final_scale - 1.0) * internal_hamiltonian(spec, s0) /
                             (alpha * spec.c() * spec.c());
  }
  return result;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  const std::size_t n = trajectory.states.empty() ? 0 : trajectory.states.front().particle_count();
  out << "t,X,P";
  for (std::size_t j = 0; j < n; ++j) out << ",rho_" << j;
  for (std::size_t j = 0; j < n; ++j) out << ",pi_" << j;
  out << ",H\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const PhaseState& s = trajectory.states[i];
    put(trajectory.times[i]);
    out << ',';
    put(s.R);
    out << ',';
    put(s.P);
    for (double v : s.rel_pos) { out << ','; put(v); }
    for (double v : s.rel_mom) { out << ','; put(v); }
    out << ',';
    put(trajectory.energies[i]);
    out << '\n';
  }
}

}  // namespace rindler
