#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "rindler/hamiltonian.hpp"

namespace rindler {

/// Multiplier s(t) applied to H_rel; empty means s = 1.
using InternalSchedule = std::function<double(double t)>;

/// Hamilton's equations for the expanded Hamiltonian: returns
/// (dH/dP, -dH/dX, dH/dpi_j, -dH/drho_j) packed as a PhaseState.
/// Uses analytic gradients when every model piece provides one,
/// central differences otherwise.
PhaseState hamilton_rhs(const HamiltonianSpec& spec, const PhaseState& s,
                        double internal_scale = 1.0);

/// Gradient (dH/dX, dH/dP, dH/drho_j, dH/dpi_j) of total_hamiltonian_eq1.
PhaseState hamiltonian_gradient(const HamiltonianSpec& spec, const PhaseState& s,
                                double internal_scale = 1.0);

bool has_analytic_gradient(const HamiltonianSpec& spec) noexcept;

struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseState> states;
  std::vector<double> energies;

  std::size_t size() const noexcept { return times.size(); }
};

/// One implicit-midpoint step of signed size dt starting at time t.
/// The fixed-point iteration must reach 1e-12 within 50 sweeps or
/// IntegrationError is thrown.
PhaseState midpoint_step(const HamiltonianSpec& spec, const PhaseState& s, double t, double dt,
                         const InternalSchedule& schedule = {}, std::size_t step_index = 0);

/// Integrates `steps` implicit-midpoint steps of size dt > 0 from t = 0.
/// The trajectory holds steps + 1 samples including the initial state;
/// energies are total_hamiltonian_eq1 with the schedule applied.
Trajectory integrate(const HamiltonianSpec& spec, const PhaseState& s0, double dt, std::size_t steps,
                     const InternalSchedule& schedule = {});

struct EquilibriumResult {
  PhaseState state;
  double residual = 0.0;  ///< max-norm of hamilton_rhs at `state`
  std::optional<double> closed_form_X;
  std::size_t iterations = 0;
  std::vector<double> residual_history;
};

/// Newton iteration on dH/dX = dH/dP = 0 with the internal coordinates held
/// at `internal` (default: rho = pi = 0, the minimum of the built-in
/// internal models). For harmonic support also reports
/// X = -(M g + g H_rel / c^2) / alpha.
EquilibriumResult find_equilibrium(const HamiltonianSpec& spec,
                                   std::optional<PhaseState> internal = std::nullopt);

/// Returns a schedule equal to 1 before t_switch and `factor` afterwards.
InternalSchedule step_schedule(double t_switch, double factor);

struct DriftResult {
  Trajectory trajectory;
  double initial_X = 0.0;
  double averaged_X = 0.0;        ///< mean X over the last half of the post-change window
  double predicted_shift = 0.0;   ///< -g (s_final - 1) H_rel / (alpha c^2), harmonic support only
  double final_scale = 1.0;
};

/// Integrates from the equilibrium s0 with H_rel replaced by schedule(t) H_rel
/// up to `horizon`. `change_time` marks where the schedule changes; the
/// averaging window is the last 50% of [change_time, horizon].
DriftResult drift_under_internal_change(const HamiltonianSpec& spec, const InternalSchedule& schedule,
                                        const PhaseState& s0, double horizon, double dt,
                                        double change_time = 0.0);

/// CSV columns: t, X, P, rho_0.., pi_0.., H.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace rindler
