#include "rindler/redshift.hpp"

#include <cmath>

#include "rindler/errors.hpp"

namespace rindler {

FourVector photon_four_momentum(double energy, int direction, double c) {
  if (!(energy > 0.0) || !std::isfinite(energy)) throw DomainError("photon energy must be positive");
  if (direction != 1 && direction != -1) throw DomainError("photon direction must be +1 or -1");
  if (!(c > 0.0)) throw DomainError("light speed must be positive");
  const double k = energy / c;
  return {k, direction * k};
}

double measured_energy(const FourVector& p, const FourVector& v) {
  if (!(minkowski_inner(v, v) < 0.0) || !(v.t > 0.0)) {
    throw DomainError("measured_energy: observer four-velocity must be future-directed timelike");
  }
  return -minkowski_inner(p, v);
}

namespace {

// Signed gap between the photon and the detector at inertial time T.
double gap(double T, double g, double b, double c) {
  const double a = c * c / g;
  const double u = g * T / c;
  const double detector = a * u * u / (std::sqrt(1.0 + u * u) + 1.0);
  return (b - c * T) - detector;
}

}  // namespace

RedshiftResult run_redshift_experiment(double g, double b, double emitted_energy, double c) {
  if (!(g > 0.0) || !(b > 0.0) || !(c > 0.0) || !(emitted_energy > 0.0) ||
      !std::isfinite(g * b * c * emitted_energy)) {
    throw DomainError("run_redshift_experiment: g, b, E and c must be positive and finite");
  }
  // Bracket [0, 2b/c]; the gap starts at b > 0 and decreases monotonically.
  double lo = 0.0;
  double hi = 2.0 * b / c;
  int widenings = 0;
  while (gap(hi, g, b, c) > 0.0) {
    if (++widenings > 60) throw ExperimentError("run_redshift_experiment: no absorption event found");
    lo = hi;
    hi *= 2.0;
  }
  // Bisection down to adjacent doubles, then the endpoint with the smaller gap.
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    (gap(mid, g, b, c) > 0.0 ? lo : hi) = mid;
  }
  const double f_lo = gap(lo, g, b, c);
  const double f_hi = gap(hi, g, b, c);
  const double T = std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
  if (!(hi - lo <= 1e-13 * T || std::min(std::abs(f_lo), std::abs(f_hi)) <= 1e-13 * b)) {
    throw ExperimentError("run_redshift_experiment: absorption root did not converge");
  }

  const FrameSpec detector_frame(g, 0.0, c);
  RedshiftResult r;
  r.absorption_event = {T, b - c * T};
  r.detector_proper_time = c / g * std::asinh(g * T / c);
  r.emitted_energy = emitted_energy;
  const FourVector p = photon_four_momentum(emitted_energy, -1, c);
  const FourVector v = observer_four_velocity(detector_frame, r.detector_proper_time);
  r.measured_energy = measured_energy(p, v);
  r.first_order_energy = (1.0 + g * b / (c * c)) * emitted_energy;
  r.doppler_factor = r.measured_energy / emitted_energy;
  return r;
}

double clock_comparison_rate(const FrameSpec& f) noexcept { return proper_time_rate(f); }

}  // namespace rindler
