#include "rindler/frames.hpp"

#include <cmath>
#include <string>

#include "rindler/errors.hpp"

namespace rindler {

namespace {

void require_unshifted(const FrameSpec& f, const char* op) {
  if (f.b() != 0.0) {
    throw PreconditionError(std::string(op) + ": frame must have zero offset");
  }
}

}  // namespace

double minkowski_inner(const FourVector& a, const FourVector& b) noexcept {
  return -a.t * b.t + a.x * b.x;
}

FrameSpec::FrameSpec(double g, double b, double c) : g_(g), b_(b), c_(c) {
  if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("FrameSpec: g must be positive and finite");
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("FrameSpec: c must be positive and finite");
  if (!std::isfinite(b)) throw DomainError("FrameSpec: b must be finite");
  if (!(1.0 + g * b / (c * c) > 0.0)) {
    throw DomainError("FrameSpec: offset places the observer at or below the horizon");
  }
}

MinkowskiEvent rindler_to_minkowski(const RindlerEvent& e, const FrameSpec& f) {
  require_unshifted(f, "rindler_to_minkowski");
  const double a = f.horizon_distance();
  const double lever = e.x + a;
  if (!(lever > 0.0)) throw DomainError("rindler_to_minkowski: event at or below the horizon");
  const double eta = f.g() * e.t / f.c();
  return {lever * std::sinh(eta) / f.c(), lever * std::cosh(eta) - a};
}

RindlerEvent minkowski_to_rindler(const MinkowskiEvent& e, const FrameSpec& f) {
  require_unshifted(f, "minkowski_to_rindler");
  const double a = f.horizon_distance();
  const double lever = e.x + a;
  const double ct = f.c() * e.t;
  if (!(lever > std::abs(ct))) {
    throw DomainError("minkowski_to_rindler: event outside the right Rindler wedge");
  }
  // (lever - ct)(lever + ct) avoids cancellation in lever^2 - ct^2.
  const double radius = std::sqrt((lever - ct) * (lever + ct));
  return {f.c() / f.g() * std::atanh(ct / lever), radius - a};
}

RindlerEvent shift_rindler(const RindlerEvent& e, const FrameSpec& f) {
  return {proper_time_rate(f) * e.t, e.x - f.b()};
}

double effective_acceleration(const FrameSpec& f) noexcept { return f.g() / proper_time_rate(f); }

double proper_time_rate(const FrameSpec& f) noexcept {
  return 1.0 + f.g() * f.b() / (f.c() * f.c());
}

FourVector observer_four_velocity(const FrameSpec& f, double tau) {
  require_unshifted(f, "observer_four_velocity");
  const double eta = f.g() * tau / f.c();
  return {f.c() * std::cosh(eta), f.c() * std::sinh(eta)};
}

}  // namespace rindler
