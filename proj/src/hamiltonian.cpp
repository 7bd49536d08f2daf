#include "rindler/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "rindler/errors.hpp"

namespace rindler {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double finite_or_throw(double v, const char* what) {
  if (!std::isfinite(v)) throw EvaluationError(std::string(what) + " evaluated to a non-finite value");
  return v;
}

double central_derivative(const std::function<double(double)>& f, double x) {
  const double h = std::cbrt(kEps) * std::max(1.0, std::abs(x));
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

PhaseState PhaseState::constrained(std::span<const double> masses, double R, double P,
                                   std::vector<double> rel_pos, std::vector<double> rel_mom) {
  if (rel_pos.size() != masses.size() || rel_mom.size() != masses.size()) {
    throw PreconditionError("PhaseState: relative coordinates must match the number of masses");
  }
  const double M = std::accumulate(masses.begin(), masses.end(), 0.0);
  double weighted = 0.0;
  double momentum = 0.0;
  for (std::size_t j = 0; j < masses.size(); ++j) {
    weighted += masses[j] * rel_pos[j];
    momentum += rel_mom[j];
  }
  for (std::size_t j = 0; j < masses.size(); ++j) {
    rel_pos[j] -= weighted / M;
    rel_mom[j] -= momentum * masses[j] / M;
  }
  return {R, P, std::move(rel_pos), std::move(rel_mom)};
}

InternalEnergy harmonic_internal(std::vector<double> masses, double omega, double offset) {
  InternalEnergy h;
  const double w2 = omega * omega;
  h.value = [masses, w2, offset](Coordinates rho, Coordinates pi) {
    double e = offset;
    for (std::size_t j = 0; j < masses.size(); ++j) {
      e += 0.5 * pi[j] * pi[j] / masses[j] + 0.5 * masses[j] * w2 * rho[j] * rho[j];
    }
    return e;
  };
  h.gradient = [masses, w2](Coordinates rho, Coordinates pi, std::span<double> d_rho,
                            std::span<double> d_pi) {
    for (std::size_t j = 0; j < masses.size(); ++j) {
      d_rho[j] = masses[j] * w2 * rho[j];
      d_pi[j] = pi[j] / masses[j];
    }
  };
  h.name = "harmonic";
  return h;
}

InternalEnergy constant_internal(double energy) {
  InternalEnergy h;
  h.value = [energy](Coordinates, Coordinates) { return energy; };
  h.gradient = [](Coordinates, Coordinates, std::span<double> d_rho, std::span<double> d_pi) {
    std::fill(d_rho.begin(), d_rho.end(), 0.0);
    std::fill(d_pi.begin(), d_pi.end(), 0.0);
  };
  h.name = "constant";
  return h;
}

PotentialSpec no_support() {
  PotentialSpec u;
  u.newtonian = NewtonianPotential{[](double) { return 0.0; }, [](double) { return 0.0; }};
  u.name = "none";
  return u;
}

PotentialSpec harmonic_support(double alpha) {
  PotentialSpec u;
  u.newtonian = NewtonianPotential{[alpha](double x) { return 0.5 * alpha * x * x; },
                                   [alpha](double x) { return alpha * x; }};
  u.harmonic_stiffness = alpha;
  u.name = "harmonic";
  return u;
}

PotentialSpec linear_support(double slope) {
  PotentialSpec u;
  u.newtonian = NewtonianPotential{[slope](double x) { return slope * x; },
                                   [slope](double) { return slope; }};
  u.name = "linear";
  return u;
}

PotentialSpec power_law_support(double coefficient, int exponent) {
  if (exponent < 1) throw ConfigError("power_law_support: exponent must be >= 1");
  PotentialSpec u;
  u.newtonian = NewtonianPotential{
      [coefficient, exponent](double x) { return coefficient * std::pow(x, exponent); },
      [coefficient, exponent](double x) {
        return coefficient * exponent * std::pow(x, exponent - 1);
      }};
  u.name = "power-law";
  return u;
}

PotentialSpec momentum_squared_support(double position_stiffness, double momentum_weight) {
  PotentialSpec u;
  u.per_particle = ParticlePotential{
      [position_stiffness](double x) { return 0.5 * position_stiffness * x * x; },
      [position_stiffness](double x) { return position_stiffness * x; },
      [momentum_weight](double, double p) { return p * p * momentum_weight; }};
  u.name = "momentum-squared";
  return u;
}

SplitPotential split_external_potential(const PotentialSpec& potential,
                                        std::vector<double> masses) {
  if (!potential.per_particle || !potential.per_particle->position_part) {
    throw ConfigError("split_external_potential: no per-particle potential configured");
  }
  const ParticlePotential particle = *potential.per_particle;
  const CorrectionHook chi = potential.chi;
  const double M = std::accumulate(masses.begin(), masses.end(), 0.0);
  const std::size_t n = masses.size();

  auto v_prime = [particle](double x) {
    if (particle.position_derivative) return particle.position_derivative(x);
    return central_derivative(particle.position_part, x);
  };

  SplitPotential split;
  split.newtonian.value = [particle, n](double R) {
    return static_cast<double>(n) * particle.position_part(R);
  };
  split.newtonian.derivative = [v_prime, n](double R) { return static_cast<double>(n) * v_prime(R); };

  split.correction.value = [particle, chi, masses, M, v_prime](const PhaseState& s) {
    double u1 = 0.0;
    if (chi) {
      const double slope = v_prime(s.R);
      for (std::size_t j = 0; j < masses.size(); ++j) {
        u1 += slope * chi(j, s.P, s.rel_pos, s.rel_mom);
      }
    }
    if (particle.momentum_part) {
      for (std::size_t j = 0; j < masses.size(); ++j) {
        u1 += particle.momentum_part(s.R, masses[j] * s.P / M + s.rel_mom[j]);
      }
    }
    return u1;
  };

  split.volume_residual = [particle](const PhaseState& s) {
    double exact = 0.0;
    double leading = 0.0;
    for (double rho : s.rel_pos) {
      exact += particle.position_part(s.R + rho);
      leading += particle.position_part(s.R);
    }
    return std::abs(exact - leading);
  };
  return split;
}

HamiltonianSpec::HamiltonianSpec(std::vector<double> masses, double g, double c,
                                 InternalEnergy internal, PotentialSpec potential)
    : masses_(std::move(masses)),
      g_(g),
      c_(c),
      total_mass_(0.0),
      internal_(std::move(internal)),
      potential_(std::move(potential)) {
  if (masses_.empty()) throw ConfigError("HamiltonianSpec: at least one mass is required");
  for (double m : masses_) {
    if (!(m > 0.0) || !std::isfinite(m)) throw ConfigError("HamiltonianSpec: masses must be positive");
  }
  total_mass_ = std::accumulate(masses_.begin(), masses_.end(), 0.0);
  if (!std::isfinite(g_)) throw ConfigError("HamiltonianSpec: g must be finite");
  if (!(c_ > 0.0) || !std::isfinite(c_)) throw ConfigError("HamiltonianSpec: c must be positive");
  if (!internal_.value) throw ConfigError("HamiltonianSpec: internal energy function missing");

  if (potential_.per_particle) {
    SplitPotential split = split_external_potential(potential_, masses_);
    if (!potential_.newtonian && !potential_.correction) {
      potential_.newtonian = split.newtonian;
      potential_.correction = split.correction;
    } else {
      // Both forms given: they must describe the same potential.
      for (double R : {-0.5, 0.0, 0.5}) {
        for (double P : {0.0, 0.3}) {
          std::vector<double> pi(masses_.size(), 0.0);
          for (std::size_t j = 0; j < pi.size(); ++j) pi[j] = (j % 2 == 0) ? 0.1 : -0.1;
          PhaseState s = PhaseState::constrained(masses_, R, P, std::vector<double>(masses_.size(), 0.0),
                                                 std::move(pi));
          const double u0_given = potential_.newtonian ? potential_.newtonian->value(R) : 0.0;
          const double u1_given = potential_.correction ? potential_.correction->value(s) : 0.0;
          const double u0_split = split.newtonian.value(R);
          const double u1_split = split.correction.value(s);
          if (std::abs(u0_given - u0_split) > 1e-9 * std::max(1.0, std::abs(u0_split)) ||
              std::abs(u1_given - u1_split) > 1e-9 * std::max(1.0, std::abs(u1_split))) {
            throw ConfigError(
                "HamiltonianSpec: split and per-particle potentials disagree at R=" +
                std::to_string(R) + ", P=" + std::to_string(P));
          }
        }
      }
    }
  }
}

HamiltonianSpec HamiltonianSpec::with_light_speed(double c) const {
  HamiltonianSpec copy = *this;
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("HamiltonianSpec: c must be positive");
  copy.c_ = c;
  return copy;
}

HamiltonianSpec HamiltonianSpec::with_gravity(double g) const {
  HamiltonianSpec copy = *this;
  if (!std::isfinite(g)) throw ConfigError("HamiltonianSpec: g must be finite");
  copy.g_ = g;
  return copy;
}

void HamiltonianSpec::check_state(const PhaseState& s) const {
  if (s.rel_pos.size() != masses_.size() || s.rel_mom.size() != masses_.size()) {
    throw PreconditionError("state has " + std::to_string(s.rel_pos.size()) +
                            " relative coordinates, spec has " + std::to_string(masses_.size()) +
                            " masses");
  }
}

double internal_hamiltonian(const HamiltonianSpec& spec, const PhaseState& s) {
  spec.check_state(s);
  return finite_or_throw(spec.internal().value(s.rel_pos, s.rel_mom), "internal energy");
}

double external_potential(const HamiltonianSpec& spec, const PhaseState& s) {
  const auto& u = spec.potential();
  const double u0 = u.newtonian ? u.newtonian->value(s.R) : 0.0;
  const double u1 = u.correction ? u.correction->value(s) : 0.0;
  return finite_or_throw(u0 + u1 / (spec.c() * spec.c()), "external potential");
}

double cm_hamiltonian(const HamiltonianSpec& spec, const PhaseState& s, RestEnergy rest) {
  const double M = spec.total_mass();
  const double c2 = spec.c() * spec.c();
  const double P2 = s.P * s.P;
  const double rest_energy = rest == RestEnergy::included ? M * c2 : 0.0;
  return rest_energy + P2 / (2.0 * M) - P2 * P2 / (8.0 * M * M * M * c2) + M * spec.g() * s.R +
         spec.g() * s.R * P2 / (2.0 * M * c2);
}

double total_hamiltonian_eq1(const HamiltonianSpec& spec, const PhaseState& s,
                             const EvalOptions& options) {
  const double M = spec.total_mass();
  const double c2 = spec.c() * spec.c();
  const double h_rel = options.internal_scale * internal_hamiltonian(spec, s);
  const double coupling = 1.0 - s.P * s.P / (2.0 * M * M * c2) + spec.g() * s.R / c2;
  const double h = cm_hamiltonian(spec, s, options.rest_energy) + coupling * h_rel +
                   external_potential(spec, s);
  return finite_or_throw(h, "total Hamiltonian");
}

double minkowski_cm_hamiltonian(const HamiltonianSpec& spec, const PhaseState& s,
                                double internal_scale) {
  const double c = spec.c();
  const double rest = spec.total_mass() * c * c + internal_scale * internal_hamiltonian(spec, s);
  return finite_or_throw(std::sqrt(s.P * s.P * c * c + rest * rest), "Minkowski c.m. Hamiltonian");
}

double rindler_hamiltonian_bracket(const HamiltonianSpec& spec, const PhaseState& s,
                                   double internal_scale, RestEnergy rest) {
  const double c2 = spec.c() * spec.c();
  const double lapse = 1.0 + spec.g() * s.R / c2;
  if (rest == RestEnergy::included) {
    const double h = minkowski_cm_hamiltonian(spec, s, internal_scale) * lapse + external_potential(spec, s);
    return finite_or_throw(h, "Rindler Hamiltonian");
  }
  // H_mink - M c^2 = (P^2 c^2 + 2 M c^2 h + h^2) / (H_mink + M c^2)
  const double M = spec.total_mass();
  const double h_rel = internal_scale * internal_hamiltonian(spec, s);
  double excess = h_rel;
  if (s.P != 0.0) {
    excess = (s.P * s.P * c2 + h_rel * (2.0 * M * c2 + h_rel)) /
             (minkowski_cm_hamiltonian(spec, s, internal_scale) + M * c2);
  }
  const double h = excess * lapse + M * spec.g() * s.R + external_potential(spec, s);
  return finite_or_throw(h, "Rindler Hamiltonian");
}

ExpansionReport check_expansion_consistency(const HamiltonianSpec& spec, const PhaseState& s,
                                            std::vector<double> light_speeds) {
  std::sort(light_speeds.begin(), light_speeds.end());
  light_speeds.erase(std::unique(light_speeds.begin(), light_speeds.end()), light_speeds.end());
  if (light_speeds.size() < 2) {
    throw NumericError("check_expansion_consistency: need at least two distinct light speeds");
  }
  ExpansionReport report;
  report.light_speeds = light_speeds;
  for (double c : light_speeds) {
    const HamiltonianSpec at_c = spec.with_light_speed(c);
    EvalOptions opt;
    opt.rest_energy = RestEnergy::excluded;
    report.differences.push_back(std::abs(total_hamiltonian_eq1(at_c, s, opt) -
                                          rindler_hamiltonian_bracket(at_c, s, 1.0, RestEnergy::excluded)));
  }
  const auto zeros = std::count(report.differences.begin(), report.differences.end(), 0.0);
  if (zeros == static_cast<long>(report.differences.size())) {
    report.passed = true;
    return report;
  }
  if (zeros > 0) {
    throw NumericError(
        "check_expansion_consistency: differences vanish at some light speeds only; cannot fit");
  }
  // Least-squares slope of log(difference) against log(c).
  const double n = static_cast<double>(light_speeds.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < light_speeds.size(); ++i) {
    const double x = std::log(light_speeds[i]);
    const double y = std::log(report.differences[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  report.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  report.passed = *report.fitted_exponent <= -4.0 + 0.2;
  return report;
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// j-th difference quotient with nodes (offset + j/2 - i) h, i = 0..j.
// offset = 0 gives the central stencil, +-j/2 the one-sided ones.
double difference_quotient(const std::function<double(double)>& f, int j, double h, double offset,
                           double* magnitude) {
  double sum = 0.0;
  for (int i = 0; i <= j; ++i) {
    const double v = f((offset + 0.5 * j - i) * h);
    if (magnitude) *magnitude = std::max(*magnitude, std::abs(v));
    sum += ((i % 2 == 0) ? 1.0 : -1.0) * binomial(j, i) * v;
  }
  return sum / std::pow(h, j);
}

double taylor_coefficient(const std::function<double(double)>& f, int j) {
  if (j == 0) return f(0.0);
  // Step control h_j = max(1, |X|) eps^(1/(j+2)) with X = 0.
  const double h = std::pow(kEps, 1.0 / (j + 2));
  double magnitude = 0.0;
  const double d1 = difference_quotient(f, j, h, 0.0, &magnitude);
  const double d2 = difference_quotient(f, j, 2.0 * h, 0.0, &magnitude);
  const double d4 = difference_quotient(f, j, 4.0 * h, 0.0, &magnitude);
  const double noise = 64.0 * kEps * std::max(magnitude, kEps) * std::pow(2.0, j) / std::pow(h, j);

  // Smooth functions: central error ~h^2, one-sided mismatch ~h.
  const double e1 = std::abs(d1 - d2);
  const double e2 = std::abs(d2 - d4);
  const double k1 = std::abs(difference_quotient(f, j, h, 0.5 * j, nullptr) -
                             difference_quotient(f, j, h, -0.5 * j, nullptr));
  const double k2 = std::abs(difference_quotient(f, j, 2.0 * h, 0.5 * j, nullptr) -
                             difference_quotient(f, j, 2.0 * h, -0.5 * j, nullptr));
  const bool central_stalls = e1 > 10.0 * noise && e2 < 2.5 * e1;
  const bool sides_disagree = k1 > 10.0 * noise && k2 < 1.4 * k1;
  if (central_stalls || sides_disagree) {
    throw DifferentiationError("taylor_potential_coefficients: potential is not smooth at X = 0 (order " +
                                   std::to_string(j) + ")",
                               std::max(e1, k1));
  }
  return (4.0 * d1 - d2) / 3.0;
}

}  // namespace

std::vector<TaylorCoefficient> taylor_potential_coefficients(const HamiltonianSpec& spec, int order) {
  if (order < 0) throw PreconditionError("taylor_potential_coefficients: order must be >= 0");
  std::vector<TaylorCoefficient> out;
  for (int j = 0; j <= order; ++j) {
    out.push_back([spec, j](const PhaseState& s) {
      PhaseState probe = s;
      auto f = [&spec, &probe](double x) {
        probe.R = x;
        return external_potential(spec, probe);
      };
      return taylor_coefficient(f, j);
    });
  }
  return out;
}

double clock_rest_hamiltonian(const HamiltonianSpec& spec, const PhaseState& s,
                              const ClockOptions& options) {
  if (s.R != 0.0) throw PreconditionError("clock_rest_hamiltonian: clock must sit at R = 0");
  if (s.P != 0.0 && !options.allow_moving) {
    throw PreconditionError("clock_rest_hamiltonian: P != 0 requires allow_moving");
  }
  const double u0 = taylor_potential_coefficients(spec, 0).front()(s);
  double h_rel = internal_hamiltonian(spec, s);
  if (s.P != 0.0) {
    const double M = spec.total_mass();
    h_rel *= 1.0 - s.P * s.P / (2.0 * M * M * spec.c() * spec.c());
  }
  const double rest = options.rest_energy == RestEnergy::included
                          ? spec.total_mass() * spec.c() * spec.c()
                          : 0.0;
  return rest + h_rel + u0;
}

}  // namespace rindler
