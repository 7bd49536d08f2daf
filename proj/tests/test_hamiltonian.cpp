#include <doctest.h>

#include <cmath>
#include <random>

#include "rindler/errors.hpp"
#include "rindler/hamiltonian.hpp"

using namespace rindler;

namespace {

HamiltonianSpec point_clock(double M, double g, double c, double h_rel, PotentialSpec u = no_support()) {
  return HamiltonianSpec({M}, g, c, constant_internal(h_rel), std::move(u));
}

PotentialSpec newtonian_only(std::function<double(double)> v, std::function<double(double)> dv = {}) {
  PotentialSpec p;
  p.newtonian = NewtonianPotential{std::move(v), std::move(dv)};
  return p;
}

// Long-double reference evaluations of the two Hamiltonian forms for a point clock.
long double expanded_reference(long double M, long double g, long double c, long double H, long double X,
                          long double P, long double U) {
  const long double c2 = c * c;
  return M * c2 + P * P / (2 * M) - P * P * P * P / (8 * M * M * M * c2) + M * g * X +
         g * X * P * P / (2 * M * c2) + (1 - P * P / (2 * M * M * c2) + g * X / c2) * H + U;
}

long double bracket_reference(long double M, long double g, long double c, long double H, long double X,
                              long double P, long double U) {
  const long double rest = M * c * c + H;
  return std::sqrt(P * P * c * c + rest * rest) * (1 + g * X / (c * c)) + U;
}

}  // namespace

TEST_CASE("internal_hamiltonian") {
  SUBCASE("harmonic ground state is the offset") {
    const std::vector<double> m{1.0, 2.0, 0.5};
    const HamiltonianSpec spec(m, 1.0, 1.0, harmonic_internal(m, 1.3), no_support());
    CHECK(internal_hamiltonian(spec, PhaseState::constrained(m, 0, 0, {0, 0, 0}, {0, 0, 0})) == 0.0);
  }
  SUBCASE("two unit masses separated by 0.2") {
    const std::vector<double> m{1.0, 1.0};
    const HamiltonianSpec spec(m, 1.0, 1.0, harmonic_internal(m, 1.0), no_support());
    const PhaseState s = PhaseState::constrained(m, 0.0, 0.0, {0.1, -0.1}, {0.0, 0.0});
    CHECK(internal_hamiltonian(spec, s) == doctest::Approx(0.01).epsilon(1e-15));
  }
  SUBCASE("decoupled subsystems add") {
    const std::vector<double> a{1.0, 3.0}, b{2.0, 0.5}, ab{1.0, 3.0, 2.0, 0.5};
    const HamiltonianSpec sa(a, 1, 1, harmonic_internal(a, 0.7), no_support());
    const HamiltonianSpec sb(b, 1, 1, harmonic_internal(b, 0.7), no_support());
    const HamiltonianSpec sab(ab, 1, 1, harmonic_internal(ab, 0.7), no_support());
    const PhaseState pa{0, 0, {0.3, -0.1}, {0.2, -0.2}};
    const PhaseState pb{0, 0, {0.1, -0.4}, {0.5, -0.5}};
    const PhaseState pab{0, 0, {0.3, -0.1, 0.1, -0.4}, {0.2, -0.2, 0.5, -0.5}};
    CHECK(internal_hamiltonian(sab, pab) ==
          doctest::Approx(internal_hamiltonian(sa, pa) + internal_hamiltonian(sb, pb)).epsilon(1e-15));
  }
  SUBCASE("state shape mismatch") {
    const HamiltonianSpec spec({1.0, 1.0}, 1, 1, constant_internal(0.0), no_support());
    CHECK_THROWS_AS(internal_hamiltonian(spec, PhaseState::point(0, 0)), PreconditionError);
  }
}

TEST_CASE("constrained states satisfy the c.m. constraints") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const std::vector<double> m{0.2 + std::abs(u(rng)), 0.2 + std::abs(u(rng)), 0.2 + std::abs(u(rng))};
    const PhaseState s = PhaseState::constrained(m, u(rng), u(rng), {u(rng), u(rng), u(rng)},
                                                 {u(rng), u(rng), u(rng)});
    double weighted = 0.0, momentum = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      weighted += m[j] * s.rel_pos[j];
      momentum += s.rel_mom[j];
    }
    CHECK(std::abs(weighted) < 1e-15);
    CHECK(std::abs(momentum) < 1e-15);
  }
}

TEST_CASE("total_hamiltonian_eq1") {
  SUBCASE("origin reduces to H_rel + U_ext") {
    const std::vector<double> m{1.0, 2.0};
    PotentialSpec u = newtonian_only([](double x) { return 0.25 + x * x; });
    const HamiltonianSpec spec(m, 1.7, 3.0, harmonic_internal(m, 1.0, 0.4), u);
    const PhaseState s = PhaseState::constrained(m, 0.0, 0.0, {0.2, -0.1}, {0.3, -0.3});
    EvalOptions opt;
    opt.rest_energy = RestEnergy::excluded;
    CHECK(total_hamiltonian_eq1(spec, s, opt) == internal_hamiltonian(spec, s) + external_potential(spec, s));
  }
  SUBCASE("no gravity, at rest, no potential") {
    const HamiltonianSpec spec = point_clock(2.0, 0.0, 3.0, 0.5);
    CHECK(total_hamiltonian_eq1(spec, PhaseState::point(0.7, 0.0)) == 2.0 * 9.0 + 0.5);
  }
  SUBCASE("M=1, g=1, c=1, X=0.3, H_rel=0.2 equals the bracket form at P=0") {
    const HamiltonianSpec spec = point_clock(1.0, 1.0, 1.0, 0.2);
    const PhaseState s = PhaseState::point(0.3, 0.0);
    // H_cm = 1 + 0.3, coupling 1 + 0.3
    CHECK(total_hamiltonian_eq1(spec, s) == doctest::Approx(1.3 + 1.3 * 0.2).epsilon(1e-15));
    CHECK(total_hamiltonian_eq1(spec, s) == doctest::Approx(rindler_hamiltonian_bracket(spec, s)).epsilon(1e-15));
  }
  SUBCASE("matches a long-double reference") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      const double M = 1.0 + std::abs(u(rng)), g = std::abs(u(rng)), c = 5.0 + 10.0 * std::abs(u(rng));
      const double H = std::abs(u(rng)), X = u(rng), P = u(rng);
      const HamiltonianSpec spec = point_clock(M, g, c, H, harmonic_support(1.0));
      const double U = 0.5 * X * X;
      const auto ref = static_cast<double>(expanded_reference(M, g, c, H, X, P, U));
      CHECK(total_hamiltonian_eq1(spec, PhaseState::point(X, P)) == doctest::Approx(ref).epsilon(1e-14));
      const auto bref = static_cast<double>(bracket_reference(M, g, c, H, X, P, U));
      CHECK(rindler_hamiltonian_bracket(spec, PhaseState::point(X, P)) == doctest::Approx(bref).epsilon(1e-14));
    }
  }
  SUBCASE("relabelling constituents leaves H unchanged") {
    const std::vector<double> m{1.0, 2.0, 3.0}, mp{3.0, 1.0, 2.0};
    const HamiltonianSpec a(m, 1.0, 4.0, harmonic_internal(m, 0.9, 0.1), harmonic_support(1.0));
    const HamiltonianSpec b(mp, 1.0, 4.0, harmonic_internal(mp, 0.9, 0.1), harmonic_support(1.0));
    const PhaseState s = PhaseState::constrained(m, 0.2, 0.4, {0.3, 0.1, -0.2}, {0.1, 0.2, -0.4});
    const PhaseState sp{s.R, s.P, {s.rel_pos[2], s.rel_pos[0], s.rel_pos[1]},
                        {s.rel_mom[2], s.rel_mom[0], s.rel_mom[1]}};
    CHECK(total_hamiltonian_eq1(a, s) == doctest::Approx(total_hamiltonian_eq1(b, sp)).epsilon(1e-15));
  }
}

TEST_CASE("minkowski_cm_hamiltonian") {
  CHECK(minkowski_cm_hamiltonian(point_clock(1.3, 1, 2, 0.4), PhaseState::point(5.0, 0.0)) == 1.3 * 4 + 0.4);
  CHECK(minkowski_cm_hamiltonian(point_clock(1, 1, 1, 0.0), PhaseState::point(0.0, 1.0)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  for (double P = -3.0; P <= 3.0; P += 0.25) {
    CHECK(minkowski_cm_hamiltonian(point_clock(1, 1, 2, 0.3), PhaseState::point(0.0, P)) >= 4.0 + 0.3);
  }
}

TEST_CASE("rindler_hamiltonian_bracket") {
  PotentialSpec u = newtonian_only([](double x) { return 0.7 + x; });
  CHECK(rindler_hamiltonian_bracket(point_clock(1, 2, 1, 0.2, u), PhaseState::point(0, 0)) == 1.2 + 0.7);
  CHECK(rindler_hamiltonian_bracket(point_clock(1, 1, 1, 0.2), PhaseState::point(0.5, 0)) ==
        doctest::Approx(1.8).epsilon(1e-15));
}

TEST_CASE("bracket form without the rest energy") {
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double c = 1.0 + 9.0 * std::abs(u(rng));
    const HamiltonianSpec spec = point_clock(1.0 + std::abs(u(rng)), std::abs(u(rng)), c, std::abs(u(rng)),
                                             harmonic_support(1.0));
    const PhaseState s = PhaseState::point(u(rng), i % 10 == 0 ? 0.0 : u(rng));
    const double full = rindler_hamiltonian_bracket(spec, s);
    const double reduced = rindler_hamiltonian_bracket(spec, s, 1.0, RestEnergy::excluded);
    CHECK(reduced + spec.total_mass() * c * c == doctest::Approx(full).epsilon(1e-14));
  }
  const HamiltonianSpec still = point_clock(1.0, 0.0, 50.0, 0.3);
  EvalOptions opt;
  opt.rest_energy = RestEnergy::excluded;
  CHECK(rindler_hamiltonian_bracket(still, PhaseState::point(0.2, 0.0), 1.0, RestEnergy::excluded) ==
        total_hamiltonian_eq1(still, PhaseState::point(0.2, 0.0), opt));
}

TEST_CASE("expansion consistency") {
  SUBCASE("g = 0, P = 0 gives identical values") {
    const HamiltonianSpec spec = point_clock(1.0, 0.0, 10.0, 0.3, harmonic_support(1.0));
    const ExpansionReport r = check_expansion_consistency(spec, PhaseState::point(0.4, 0.0));
    CHECK(r.passed);
    for (double d : r.differences) CHECK(d == 0.0);
  }
  SUBCASE("P = 0 states agree to rounding") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
      const double c = 10.0 + 30.0 * std::abs(u(rng));
      const HamiltonianSpec spec = point_clock(1.0, 1.0, c, std::abs(u(rng)), harmonic_support(1.0));
      const PhaseState s = PhaseState::point(u(rng), 0.0);
      CHECK(std::abs(total_hamiltonian_eq1(spec, s) - rindler_hamiltonian_bracket(spec, s)) <=
            4e-16 * c * c);
    }
  }
  SUBCASE("difference falls by 16 per doubling of c") {
    for (double P : {0.3, 0.8, -1.1}) {
      const HamiltonianSpec spec = point_clock(1.2, 0.9, 10.0, 0.4, harmonic_support(1.0));
      const PhaseState s = PhaseState::point(0.35, P);
      const ExpansionReport r = check_expansion_consistency(spec, s, {10, 20, 40, 80});
      REQUIRE(r.fitted_exponent.has_value());
      CHECK(*r.fitted_exponent == doctest::Approx(-4.0).epsilon(0.05));
      CHECK(r.passed);
      // Independent long-double difference at c = 20 and 40.
      const auto diff = [&](long double c) {
        return std::abs(bracket_reference(1.2L, 0.9L, c, 0.4L, 0.35L, P, 0.0L) -
                        expanded_reference(1.2L, 0.9L, c, 0.4L, 0.35L, P, 0.0L));
      };
      CHECK(static_cast<double>(diff(20) / diff(40)) == doctest::Approx(16.0).epsilon(0.1));
      CHECK(r.differences[1] == doctest::Approx(static_cast<double>(diff(20))).epsilon(1e-3));
    }
  }
  SUBCASE("a single light speed cannot be fitted") {
    CHECK_THROWS_AS(check_expansion_consistency(point_clock(1, 1, 10, 0.1), PhaseState::point(0.1, 0.1), {10}),
                    NumericError);
  }
}

TEST_CASE("taylor_potential_coefficients") {
  SUBCASE("quadratic") {
    const HamiltonianSpec spec = point_clock(1, 1, 1, 0, harmonic_support(1.0));
    const auto u = taylor_potential_coefficients(spec, 3);
    const PhaseState s = PhaseState::point(0, 0);
    CHECK(std::abs(u[0](s)) == 0.0);
    CHECK(std::abs(u[1](s)) < 1e-8);
    CHECK(u[2](s) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(u[3](s)) < 1e-5);
  }
  SUBCASE("counter-gravity linear") {
    const HamiltonianSpec spec = point_clock(2.0, 1.5, 1, 0, linear_support(-3.0));
    const auto u = taylor_potential_coefficients(spec, 2);
    const PhaseState s = PhaseState::point(0, 0);
    CHECK(u[0](s) == 0.0);
    CHECK(u[1](s) == doctest::Approx(-3.0).epsilon(1e-8));
    CHECK(std::abs(u[2](s)) < 1e-6);
  }
  SUBCASE("polynomials to 1e-8 relative") {
    for (int n : {1, 2, 3}) {
      const HamiltonianSpec spec = point_clock(1, 1, 1, 0, power_law_support(0.75, n));
      const auto u = taylor_potential_coefficients(spec, n);
      const double factorial = n == 3 ? 6.0 : static_cast<double>(n);
      CHECK(u[static_cast<std::size_t>(n)](PhaseState::point(0, 0)) ==
            doctest::Approx(0.75 * factorial).epsilon(1e-8));
    }
  }
  SUBCASE("sine") {
    const HamiltonianSpec spec =
        point_clock(1, 1, 1, 0, newtonian_only([](double x) { return std::sin(x); }));
    const auto u = taylor_potential_coefficients(spec, 3);
    const PhaseState s = PhaseState::point(0, 0);
    CHECK(std::abs(u[0](s)) < 1e-6);
    CHECK(u[1](s) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(u[2](s)) < 1e-6);
    CHECK(u[3](s) == doctest::Approx(-1.0).epsilon(1e-6));
  }
  SUBCASE("kink at the origin is rejected") {
    const HamiltonianSpec spec =
        point_clock(1, 1, 1, 0, newtonian_only([](double x) { return std::abs(x); }));
    const auto u = taylor_potential_coefficients(spec, 2);
    CHECK(u[0](PhaseState::point(0, 0)) == 0.0);
    CHECK_THROWS_AS(u[1](PhaseState::point(0, 0)), DifferentiationError);
  }
  SUBCASE("negative order") {
    CHECK_THROWS_AS(taylor_potential_coefficients(point_clock(1, 1, 1, 0), -1), PreconditionError);
  }
}

TEST_CASE("clock_rest_hamiltonian") {
  const std::vector<double> m{1.0, 1.0};
  const PhaseState s = PhaseState::constrained(m, 0.0, 0.0, {0.1, -0.1}, {0.2, -0.2});
  SUBCASE("no support") {
    const HamiltonianSpec spec(m, 1.0, 1.0, harmonic_internal(m, 1.0, 0.3), no_support());
    CHECK(clock_rest_hamiltonian(spec, s) == internal_hamiltonian(spec, s));
  }
  SUBCASE("harmonic support") {
    const HamiltonianSpec spec(m, 1.0, 1.0, harmonic_internal(m, 1.0, 0.3), harmonic_support(2.0));
    CHECK(clock_rest_hamiltonian(spec, s) == internal_hamiltonian(spec, s));
  }
  SUBCASE("constant offset") {
    const HamiltonianSpec spec(m, 1.0, 1.0, harmonic_internal(m, 1.0, 0.3),
                               newtonian_only([](double x) { return 0.125 + x * x; }));
    CHECK(clock_rest_hamiltonian(spec, s) == internal_hamiltonian(spec, s) + 0.125);
  }
  SUBCASE("rest energy on request") {
    const HamiltonianSpec spec(m, 1.0, 3.0, harmonic_internal(m, 1.0, 0.3), no_support());
    ClockOptions opt;
    opt.rest_energy = RestEnergy::included;
    CHECK(clock_rest_hamiltonian(spec, s, opt) == 2.0 * 9.0 + internal_hamiltonian(spec, s));
  }
  SUBCASE("preconditions") {
    const HamiltonianSpec spec(m, 1.0, 2.0, harmonic_internal(m, 1.0, 0.3), no_support());
    PhaseState moved = s;
    moved.R = 0.1;
    CHECK_THROWS_AS(clock_rest_hamiltonian(spec, moved), PreconditionError);
    PhaseState moving = s;
    moving.P = 0.5;
    CHECK_THROWS_AS(clock_rest_hamiltonian(spec, moving), PreconditionError);
    ClockOptions opt;
    opt.allow_moving = true;
    const double h = internal_hamiltonian(spec, moving);
    CHECK(clock_rest_hamiltonian(spec, moving, opt) ==
          doctest::Approx(h * (1.0 - 0.25 / (2.0 * 4.0 * 4.0))).epsilon(1e-15));
  }
}

TEST_CASE("split_external_potential") {
  const std::vector<double> m{1.0, 3.0};
  const double M = 4.0;
  SUBCASE("position-only potential without hooks") {
    PotentialSpec p;
    p.per_particle = ParticlePotential{[](double x) { return std::cos(x); }, {}, {}};
    const SplitPotential split = split_external_potential(p, m);
    for (double R : {-0.4, 0.0, 0.9}) {
      CHECK(split.newtonian.value(R) == doctest::Approx(2.0 * std::cos(R)).epsilon(1e-15));
      CHECK(split.correction.value(PhaseState{R, 0.5, {0.3, -0.1}, {0.2, -0.2}}) == 0.0);
    }
  }
  SUBCASE("momentum-dependent part") {
    const double kv = 1.5, w0 = 0.6;
    const SplitPotential split = split_external_potential(momentum_squared_support(kv, w0), m);
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 20; ++i) {
      const PhaseState s = PhaseState::constrained(m, u(rng), u(rng), {u(rng), u(rng)}, {u(rng), u(rng)});
      double expected = 0.0;
      for (std::size_t j = 0; j < 2; ++j) {
        const double p = m[j] * s.P / M + s.rel_mom[j];
        expected += p * p * w0;
      }
      CHECK(split.correction.value(s) == doctest::Approx(expected).epsilon(1e-14));
      CHECK(split.newtonian.value(s.R) == doctest::Approx(kv * s.R * s.R).epsilon(1e-14));
    }
  }
  SUBCASE("position hook chi_j = kappa pi_j") {
    const double kappa = 0.8;
    PotentialSpec p;
    p.per_particle = ParticlePotential{[](double x) { return std::sin(x) + 0.5 * x * x; },
                                       [](double x) { return std::cos(x) + x; }, {}};
    p.chi = [kappa](std::size_t j, double, Coordinates, Coordinates pi) { return kappa * pi[j]; };
    const SplitPotential split = split_external_potential(p, m);
    const PhaseState s{0.3, 0.2, {0.0, 0.0}, {0.5, 0.25}};
    const double slope = std::cos(0.3) + 0.3;
    CHECK(split.correction.value(s) == doctest::Approx(slope * kappa * 0.75).epsilon(1e-14));
    // Finite-difference cross-check: c^2 (sum_j V(R + chi_j / c^2) - N V(R)).
    const double c2 = 1e6;
    double shifted = 0.0;
    for (double pi : s.rel_mom) {
      const double x = s.R + kappa * pi / c2;
      shifted += std::sin(x) + 0.5 * x * x - (std::sin(s.R) + 0.5 * s.R * s.R);
    }
    CHECK(split.correction.value(s) == doctest::Approx(shifted * c2).epsilon(1e-6));
  }
  SUBCASE("no per-particle form") {
    CHECK_THROWS_AS(split_external_potential(harmonic_support(1.0), m), ConfigError);
  }
}

TEST_CASE("HamiltonianSpec validation") {
  CHECK_THROWS_AS(HamiltonianSpec({}, 1, 1, constant_internal(0), no_support()), ConfigError);
  CHECK_THROWS_AS(HamiltonianSpec({1.0, -1.0}, 1, 1, constant_internal(0), no_support()), ConfigError);
  CHECK_THROWS_AS(HamiltonianSpec({1.0}, 1, 0.0, constant_internal(0), no_support()), ConfigError);
  CHECK_THROWS_AS(point_clock(1, 1, 1, 0).with_light_speed(-2.0), ConfigError);

  const std::vector<double> m{1.0, 1.0};
  PotentialSpec both = momentum_squared_support(1.0, 0.5);
  both.newtonian = NewtonianPotential{[](double R) { return 1.0 * R * R; }, {}};
  both.correction = CorrectionPotential{[&](const PhaseState& s) {
                                          double u1 = 0.0;
                                          for (std::size_t j = 0; j < 2; ++j) {
                                            const double p = 0.5 * s.P + s.rel_mom[j];
                                            u1 += 0.5 * p * p;
                                          }
                                          return u1;
                                        },
                                        {}};
  CHECK_NOTHROW(HamiltonianSpec(m, 1, 1, constant_internal(0), both));
  both.newtonian = NewtonianPotential{[](double R) { return 2.0 * R * R; }, {}};
  CHECK_THROWS_AS(HamiltonianSpec(m, 1, 1, constant_internal(0), both), ConfigError);
}
