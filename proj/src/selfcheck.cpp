#include "rindler/selfcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include "rindler/dynamics.hpp"
#include "rindler/hamiltonian.hpp"
#include "rindler/redshift.hpp"
#include "rindler/visibility.hpp"

namespace rindler {

namespace {

template <class Body>
CheckResult timed(const std::string& name, Body&& body) {
  CheckResult r;
  r.name = name;
  const auto start = std::chrono::steady_clock::now();
  try {
    std::ostringstream detail;
    r.passed = body(detail);
    r.detail = detail.str();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// Relative error with a floor: quantities that pass through zero are
// compared against the natural scale of the problem.
double scaled_error(double value, double reference, double floor) {
  return std::abs(value - reference) / std::max(std::abs(reference), floor);
}

}  // namespace

CheckResult check_shifted_frame_consistency(const ShiftFunction& shift, int samples, unsigned seed) {
  return timed("shifted-frame consistency", [&](std::ostream& detail) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double c = 1.0;
      const double g = 0.5 + 1.5 * unit(rng);
      const double b = 0.5 * unit(rng);
      const FrameSpec frame(g, b, c);
      const double a = frame.horizon_distance();
      const RindlerEvent e{(c / g) * (4.0 * unit(rng) - 2.0), a * (2.9 * unit(rng) - 0.9)};

      const MinkowskiEvent direct = rindler_to_minkowski(e, frame.unshifted());
      const RindlerEvent moved = shift(e, frame);
      const MinkowskiEvent via_shift =
          rindler_to_minkowski(moved, FrameSpec(effective_acceleration(frame), 0.0, c));
      worst = std::max({worst, scaled_error(c * via_shift.t, c * direct.t, a),
                        scaled_error(via_shift.x, direct.x - b, a)});
    }
    detail << "max relative error " << worst << " (limit 1e-12)";
    return worst <= 1e-12;
  });
}

CheckResult check_frame_roundtrip(int samples, unsigned seed) {
  return timed("rindler/minkowski round trip", [&](std::ostream& detail) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double g = 0.5 + 1.5 * unit(rng);
      const FrameSpec frame(g, 0.0, 1.0);
      const double a = frame.horizon_distance();
      const RindlerEvent e{(1.0 / g) * (4.0 * unit(rng) - 2.0), a * (2.9 * unit(rng) - 0.9)};
      const RindlerEvent back = minkowski_to_rindler(rindler_to_minkowski(e, frame), frame);
      worst = std::max({worst, scaled_error(back.t, e.t, 1.0 / g), scaled_error(back.x, e.x, a)});
    }
    detail << "max relative error " << worst << " (limit 1e-12)";
    return worst <= 1e-12;
  });
}

CheckResult check_redshift_law() {
  return timed("redshift first-order law", [](std::ostream& detail) {
    bool ok = true;
    const double g = 1.0, c = 1.0, E = 1.0;
    for (double beta : {1e-1, 1e-2, 1e-3}) {
      const double b = beta * c * c / g;
      const RedshiftResult r = run_redshift_experiment(g, b, E, c);
      const double first_order_gap = std::abs(r.doppler_factor - (1.0 + beta));
      const double exp_gap = std::abs(r.doppler_factor / std::exp(g * r.detector_proper_time / c) - 1.0);
      ok = ok && first_order_gap <= 2.0 * beta * beta && exp_gap <= 1e-10;
      detail << "gb/c2=" << beta << ": |D-(1+gb/c2)|=" << first_order_gap
             << " |D/exp-1|=" << exp_gap << "; ";
    }
    return ok;
  });
}

CheckResult check_expansion_order(int states, unsigned seed) {
  return timed("expanded vs bracket O(c^-4)", [&](std::ostream& detail) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<double> masses{0.6, 0.4};
    double lo = 1e9, hi = -1e9;
    for (int i = 0; i < states; ++i) {
      const HamiltonianSpec spec(masses, 1.0, 10.0, harmonic_internal(masses, 1.0, unit(rng)),
                                 harmonic_support(1.0));
      const double P = (0.5 + 1.5 * unit(rng)) * (unit(rng) < 0.5 ? -1.0 : 1.0);
      const PhaseState s = PhaseState::constrained(
          masses, 2.0 * unit(rng) - 1.0, P, {0.6 * unit(rng) - 0.3, 0.6 * unit(rng) - 0.3},
          {0.6 * unit(rng) - 0.3, 0.6 * unit(rng) - 0.3});
      const ExpansionReport report = check_expansion_consistency(spec, s, {10.0, 20.0, 40.0, 80.0});
      if (!report.fitted_exponent) return false;
      lo = std::min(lo, *report.fitted_exponent);
      hi = std::max(hi, *report.fitted_exponent);
    }
    detail << "fitted exponents in [" << lo << ", " << hi << "] (required -4 +- 0.2)";
    return lo >= -4.2 && hi <= -3.8;
  });
}

CheckResult check_equilibrium_closed_form() {
  return timed("equilibrium closed form", [](std::ostream& detail) {
    const double M = 1.0, g = 1.0, c = 1.0;
    double worst_gap = 0.0, worst_residual = 0.0;
    for (double alpha : {0.5, 1.0, 2.0}) {
      for (double h0 : {0.0, 0.2, 1.0}) {
        const HamiltonianSpec spec({M}, g, c, harmonic_internal({M}, 1.0, h0), harmonic_support(alpha));
        const EquilibriumResult eq = find_equilibrium(spec);
        const double expected = -(M * g + g * h0 / (c * c)) / alpha;
        worst_gap = std::max(worst_gap, std::abs(eq.state.R - expected));
        worst_residual = std::max(worst_residual, eq.residual);
      }
    }
    detail << "max |X - closed form| " << worst_gap << " (limit 10 c^-4), max residual "
           << worst_residual << " (limit 1e-10)";
    return worst_gap <= 10.0 / std::pow(c, 4) && worst_residual < 1e-10;
  });
}

CheckResult check_drift_response() {
  return timed("drift under internal change", [](std::ostream& detail) {
    const double M = 1.0, g = 1.0, alpha = 1.0, h0 = 0.2, c = 10.0;
    const HamiltonianSpec spec({M}, g, c, harmonic_internal({M}, 1.0, h0), harmonic_support(alpha));
    const EquilibriumResult eq = find_equilibrium(spec);

    const DriftResult drift =
        drift_under_internal_change(spec, step_schedule(1.0, 2.0), eq.state, 200.0, 0.01, 1.0);
    const double expected = -g * h0 / (alpha * c * c);
    const double observed = drift.averaged_X - eq.state.R;
    const bool shift_ok = std::abs(observed - expected) <= 0.1 * std::abs(expected);

    const Trajectory still = integrate(spec, eq.state, 0.01, 10000);
    double wander = 0.0;
    for (const auto& s : still.states) wander = std::max(wander, std::abs(s.R - eq.state.R));
    detail << "shift " << observed << " vs " << expected << " (10%), static wander " << wander
           << " (limit 1e-8)";
    return shift_ok && wander < 1e-8;
  });
}

CheckResult check_symplectic_quality() {
  return timed("implicit midpoint quality", [](std::ostream& detail) {
    const double M = 1.0, g = 1.0, alpha = 1.0, c = 2.0;
    const HamiltonianSpec spec({M}, g, c, harmonic_internal({M}, 1.0, 0.2), harmonic_support(alpha));
    const PhaseState start = PhaseState::point(find_equilibrium(spec).state.R + 0.5, 0.0);

    auto energy_errors = [&](double dt) {
      const Trajectory t = integrate(spec, start, dt, 100000);
      const double e0 = t.energies.front();
      double first = 0.0, second = 0.0;
      const std::size_t half = t.size() / 2;
      for (std::size_t i = 0; i < t.size(); ++i) {
        const double err = std::abs(t.energies[i] - e0) / std::abs(e0);
        double& slot = i < half ? first : second;
        slot = std::max(slot, err);
      }
      return std::pair{first, second};
    };
    const auto [coarse_first, coarse_second] = energy_errors(0.05);
    const auto [fine_first, fine_second] = energy_errors(0.025);
    const double coarse = std::max(coarse_first, coarse_second);
    const double fine = std::max(fine_first, fine_second);
    const double ratio = coarse / fine;
    const bool bounded = coarse_second <= 1.5 * coarse_first && fine_second <= 1.5 * fine_first;

    PhaseState s = start;
    for (int k = 0; k < 1000; ++k) s = midpoint_step(spec, s, k * 0.05, 0.05);
    for (int k = 1000; k > 0; --k) s = midpoint_step(spec, s, k * 0.05, -0.05);
    const double back = std::max(std::abs(s.R - start.R), std::abs(s.P - start.P));

    detail << "max rel energy error " << coarse << " (dt=0.05), " << fine << " (dt=0.025), ratio "
           << ratio << " (3..5), non-secular " << (bounded ? "yes" : "no") << ", round trip " << back
           << " (limit 1e-10)";
    return bounded && ratio >= 3.0 && ratio <= 5.0 && back <= 1e-10;
  });
}

CheckResult check_visibility_oracle(int draws, unsigned seed) {
  return timed("visibility vs density-matrix oracle", [&](std::ostream& detail) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> dim(1, 64);
    double worst = 0.0;
    bool inertial_exact = true;
    bool cancellation_exact = true;
    for (int i = 0; i < draws; ++i) {
      const int d = dim(rng);
      std::vector<EnergyLevel> levels(d);
      double total = 0.0;
      for (auto& l : levels) {
        l.energy = 5.0 * unit(rng);
        l.probability = unit(rng);
        total += l.probability;
      }
      for (auto& l : levels) l.probability /= total;
      const InternalSpectrum spectrum(levels);
      InterferometerConfig cfg;
      cfg.g = 2.0 * unit(rng);
      cfg.x_lower = unit(rng);
      cfg.x_upper = cfg.x_lower + 0.1 + 1.9 * unit(rng);
      cfg.duration = 0.1 + 4.9 * unit(rng);
      cfg.counter_coupling = 2.0 * unit(rng);
      worst = std::max(worst, std::abs(visibility(cfg, spectrum) - visibility_oracle(cfg, spectrum)));

      InterferometerConfig inertial = cfg;
      inertial.g = 0.0;
      inertial_exact = inertial_exact && visibility(inertial, spectrum) == 1.0;
      InterferometerConfig cancelled = cfg;
      cancelled.counter_coupling = 1.0;
      cancellation_exact = cancellation_exact && visibility(cancelled, spectrum) == 1.0;
    }

    // Two levels {0, dE} at equal weight: V = |cos(g dx dE T / (2 hbar c^2))|.
    const double pi = std::acos(-1.0);
    InterferometerConfig two;
    two.g = 1.0;
    two.x_lower = 0.0;
    two.x_upper = 1.0;
    two.duration = pi;  // argument = pi/2 with dE = 1
    const double v_zero = visibility(two, InternalSpectrum({{0.0, 0.5}, {1.0, 0.5}}));

    detail << "max |V - oracle| " << worst << " (limit 1e-12), g=0 exact " << inertial_exact
           << ", lambda=1 exact " << cancellation_exact << ", two-level V " << v_zero;
    return worst <= 1e-12 && inertial_exact && cancellation_exact && v_zero <= 1e-15;
  });
}

CheckResult check_clock_at_rest() {
  return timed("clock-at-rest reduction", [](std::ostream& detail) {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    const std::vector<double> masses{1.0, 1.0, 2.0};
    bool ok = true;
    for (int i = 0; i < 100 && ok; ++i) {
      const HamiltonianSpec spec(masses, 1.0, 3.0, harmonic_internal(masses, 1.3, 0.25),
                                 harmonic_support(1.5));
      const PhaseState s = PhaseState::constrained(masses, 0.0, 0.0, {unit(rng), unit(rng), unit(rng)},
                                                   {unit(rng), unit(rng), unit(rng)});
      const double h = total_hamiltonian_eq1(spec, s, EvalOptions{1.0, RestEnergy::excluded});
      const double expected = internal_hamiltonian(spec, s) + external_potential(spec, s);
      const double clock = clock_rest_hamiltonian(spec, s);
      ok = h == expected && clock == internal_hamiltonian(spec, s);
    }
    // A momentum-dependent support gives a non-zero U_ext at the origin.
    const HamiltonianSpec moving(masses, 1.0, 3.0, harmonic_internal(masses, 1.3, 0.25),
                                 momentum_squared_support(1.0, 0.7));
    const PhaseState s = PhaseState::constrained(masses, 0.0, 0.0, {0.1, -0.2, 0.05}, {0.3, 0.1, -0.2});
    const double h = total_hamiltonian_eq1(moving, s, EvalOptions{1.0, RestEnergy::excluded});
    ok = ok && h == internal_hamiltonian(moving, s) + external_potential(moving, s);
    detail << (ok ? "H(0,0,rho,pi) == H_rel + U_ext and clock Hamiltonian == H_rel exactly"
                  : "exact reduction violated");
    return ok;
  });
}

std::vector<CheckResult> run_selfcheck() {
  return {check_shifted_frame_consistency(), check_frame_roundtrip(), check_redshift_law(),
          check_expansion_order(),           check_equilibrium_closed_form(), check_drift_response(),
          check_symplectic_quality(),        check_visibility_oracle(), check_clock_at_rest()};
}

bool print_check_table(std::ostream& out, const std::vector<CheckResult>& results) {
  bool all = true;
  char line[128];
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-4s  %-36s %8.3fs  ", r.passed ? "PASS" : "FAIL",
                  r.name.c_str(), r.seconds);
    out << line << r.detail << '\n';
    all = all && r.passed;
  }
  out << (all ? "all checks passed" : "some checks FAILED") << '\n';
  return all;
}

}  // namespace rindler
