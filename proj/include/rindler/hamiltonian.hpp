#pragma once

// Composite-system Hamiltonian of a bound N-particle system held in a
// homogeneous gravitational field, truncated at order 1/c^2.
//
// Phase space: centre-of-mass height X (called R) and momentum P, plus one
// relative pair (rho_j, pi_j) per constituent. The relative coordinates obey
// sum_j m_j rho_j = 0 and sum_j pi_j = 0.
//
// Rest-energy convention: the free c.m. energy is sqrt(P^2 c^2 + (M c^2 +
// H_rel)^2), i.e. the rest energy M c^2 is carried explicitly and H_rel is
// measured from it. Clock-rate quantities may drop the M c^2 offset through
// RestEnergy::excluded.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rindler {

using Coordinates = std::span<const double>;

struct PhaseState {
  double R = 0.0;
  double P = 0.0;
  std::vector<double> rel_pos;
  std::vector<double> rel_mom;

  std::size_t particle_count() const noexcept { return rel_pos.size(); }

  /// Builds a state and projects the relative coordinates onto the
  /// constraint surface sum m_j rho_j = 0, sum pi_j = 0.
  static PhaseState constrained(std::span<const double> masses, double R, double P,
                                std::vector<double> rel_pos, std::vector<double> rel_mom);

  /// Point-like system: one constituent, relative coordinates identically 0.
  static PhaseState point(double R, double P) { return {R, P, {0.0}, {0.0}}; }
};

/// Internal (rest-frame) Hamiltonian H_rel(rho, pi).
struct InternalEnergy {
  std::function<double(Coordinates rho, Coordinates pi)> value;
  /// Optional analytic gradient: fills dH_rel/drho_j and dH_rel/dpi_j.
  std::function<void(Coordinates rho, Coordinates pi, std::span<double> d_rho,
                     std::span<double> d_pi)>
      gradient;
  std::string name = "custom";
};

/// Bound constituents about the c.m.: offset + sum_j (pi_j^2/2m_j + m_j w^2 rho_j^2/2).
/// The offset is the internal energy of the ground configuration.
InternalEnergy harmonic_internal(std::vector<double> masses, double omega, double offset = 0.0);

/// H_rel frozen at a constant (internal state not dynamical).
InternalEnergy constant_internal(double energy);

/// Nonrelativistic supporting potential U0(R).
struct NewtonianPotential {
  std::function<double(double R)> value;
  std::function<double(double R)> derivative;  // optional
};

/// 1/c^2 correction U1(R, P, rho, pi); multiplied by 1/c^2 on use.
struct CorrectionPotential {
  std::function<double(const PhaseState&)> value;
  std::function<PhaseState(const PhaseState&)> gradient;  // optional
};

/// Per-constituent potential U(x, p) = V(x) + W(x, p)/c^2.
struct ParticlePotential {
  std::function<double(double x)> position_part;             // V
  std::function<double(double x)> position_derivative;       // V', optional
  std::function<double(double x, double p)> momentum_part;   // W, optional
};

/// Relativistic position correction chi_j(P, rho, pi) in
/// x_j = R + rho_j + chi_j / c^2. Empty means chi_j = 0.
using CorrectionHook =
    std::function<double(std::size_t j, double P, Coordinates rho, Coordinates pi)>;

struct PotentialSpec {
  std::optional<NewtonianPotential> newtonian;
  std::optional<CorrectionPotential> correction;
  std::optional<ParticlePotential> per_particle;
  CorrectionHook chi;
  /// Set by harmonic_support; enables closed-form equilibrium reporting.
  std::optional<double> harmonic_stiffness;
  std::string name = "custom";
};

PotentialSpec no_support();
/// U = alpha X^2 / 2.
PotentialSpec harmonic_support(double alpha);
/// U = slope * X; slope = -M g cancels Newtonian gravity.
PotentialSpec linear_support(double slope);
/// U = coefficient * X^n for integer n >= 1.
PotentialSpec power_law_support(double coefficient, int exponent);
/// Per-particle U(x, p) = V(x) + p^2 W(x) / c^2, with V = k_v x^2/2 and
/// W = w0 constant.
PotentialSpec momentum_squared_support(double position_stiffness, double momentum_weight);

class HamiltonianSpec {
 public:
  /// Validates masses and functions and resolves a per-particle potential
  /// into its U0/U1 split. Throws ConfigError on inconsistent input.
  HamiltonianSpec(std::vector<double> masses, double g, double c, InternalEnergy internal,
                  PotentialSpec potential);

  const std::vector<double>& masses() const noexcept { return masses_; }
  double g() const noexcept { return g_; }
  double c() const noexcept { return c_; }
  double total_mass() const noexcept { return total_mass_; }
  const InternalEnergy& internal() const noexcept { return internal_; }
  const PotentialSpec& potential() const noexcept { return potential_; }

  HamiltonianSpec with_light_speed(double c) const;
  HamiltonianSpec with_gravity(double g) const;

  /// Throws PreconditionError when the state shape does not match the masses.
  void check_state(const PhaseState& s) const;

 private:
  std::vector<double> masses_;
  double g_;
  double c_;
  double total_mass_;
  InternalEnergy internal_;
  PotentialSpec potential_;
};

enum class RestEnergy { included, excluded };

struct EvalOptions {
  /// Multiplier applied to H_rel (used by the drift experiment schedule).
  double internal_scale = 1.0;
  RestEnergy rest_energy = RestEnergy::included;
};

double internal_hamiltonian(const HamiltonianSpec& spec, const PhaseState& s);

/// U_ext = U0(R) + U1(R, P, rho, pi) / c^2.
double external_potential(const HamiltonianSpec& spec, const PhaseState& s);

/// Centre-of-mass part of the expanded Hamiltonian:
/// [M c^2] + P^2/2M - P^4/(8 M^3 c^2) + M g X + g X P^2/(2 M c^2).
double cm_hamiltonian(const HamiltonianSpec& spec, const PhaseState& s,
                      RestEnergy rest = RestEnergy::included);

/// H = H_cm + (1 - P^2/(2 M^2 c^2) + g X / c^2) H_rel + U_ext through 1/c^2.
double total_hamiltonian_eq1(const HamiltonianSpec& spec, const PhaseState& s,
                             const EvalOptions& options = {});

/// sqrt(P^2 c^2 + (M c^2 + H_rel)^2).
double minkowski_cm_hamiltonian(const HamiltonianSpec& spec, const PhaseState& s,
                                double internal_scale = 1.0);

/// Classical Poisson-bracket form: H_mink (1 + g X / c^2) + U_ext.
/// With RestEnergy::excluded the constant M c^2 is removed analytically,
/// so small differences stay resolvable at large c.
double rindler_hamiltonian_bracket(const HamiltonianSpec& spec, const PhaseState& s,
                                   double internal_scale = 1.0,
                                   RestEnergy rest = RestEnergy::included);

struct ExpansionReport {
  std::vector<double> light_speeds;
  std::vector<double> differences;  ///< |expanded - bracket| per light speed
  std::optional<double> fitted_exponent;  ///< empty when all differences vanish
  bool passed = false;
};

/// Sweeps c and fits log|expanded - bracket| (both without the rest energy)
/// against log c. Passes when the
/// differences vanish identically or the fitted exponent is <= -3.8.
/// Throws NumericError when the sweep cannot be fitted.
ExpansionReport check_expansion_consistency(const HamiltonianSpec& spec, const PhaseState& s,
                                            std::vector<double> light_speeds = {10.0, 20.0, 40.0});

/// Coefficient U_j(P, rho, pi) of the Taylor expansion of U_ext in X about 0.
/// The R component of the argument is ignored.
using TaylorCoefficient = std::function<double(const PhaseState&)>;

/// Central finite-difference estimates of U_j for j = 0..order with one
/// Richardson level. Calling a coefficient throws DifferentiationError when
/// the potential is not smooth at X = 0.
std::vector<TaylorCoefficient> taylor_potential_coefficients(const HamiltonianSpec& spec, int order);

struct ClockOptions {
  /// Accept a constant c.m. momentum P != 0 (R must still vanish).
  bool allow_moving = false;
  RestEnergy rest_energy = RestEnergy::excluded;
};

/// Hamiltonian of a clock held by its observer: H_rel + U_0.
/// With allow_moving, H_rel carries the kinematic factor 1 - P^2/(2 M^2 c^2).
double clock_rest_hamiltonian(const HamiltonianSpec& spec, const PhaseState& s,
                              const ClockOptions& options = {});

struct SplitPotential {
  NewtonianPotential newtonian;
  CorrectionPotential correction;
  /// |sum_j V(R + rho_j) - sum_j V(R)|: size of the dropped finite-size term.
  std::function<double(const PhaseState&)> volume_residual;
};

/// Expands a per-particle potential about the c.m.:
///   U0(R) = sum_j V(R)
///   U1    = sum_j [ V'(R) chi_j(P, rho, pi) + W(R, m_j P / M + pi_j) ]
/// Momentum corrections Pi_j are dropped. Throws ConfigError when no
/// per-particle form is present.
SplitPotential split_external_potential(const PotentialSpec& potential,
                                        std::vector<double> masses);

}  // namespace rindler
