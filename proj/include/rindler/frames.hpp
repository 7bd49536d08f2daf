#pragma once

// Kinematics of uniformly accelerated (Rindler) observers in 1+1 dimensions.
//
// Conventions: signature (-,+), time components of four-vectors carry a
// factor c so both components have the same units. The synchronization
// epoch of every Rindler frame is fixed at t' = 0, where the Rindler
// observer is instantaneously at rest with respect to the Minkowski frame.

namespace rindler {

/// Physical constants for the SI preset; the library itself is unit-agnostic.
namespace si {
inline constexpr double speed_of_light = 299792458.0;        // m/s
inline constexpr double reduced_planck = 1.054571817e-34;    // J s
inline constexpr double standard_gravity = 9.80665;          // m/s^2
}  // namespace si

struct FourVector {
  double t = 0.0;  ///< time component times c (length or momentum units)
  double x = 0.0;
};

/// Minkowski contraction -a.t*b.t + a.x*b.x.
double minkowski_inner(const FourVector& a, const FourVector& b) noexcept;

/// A stationary observer frame: proper acceleration g of the reference
/// observer, vertical offset b of the clock holder, and light speed c.
class FrameSpec {
 public:
  /// Throws DomainError unless g > 0, c > 0 and 1 + g b / c^2 > 0.
  FrameSpec(double g, double b, double c);

  double g() const noexcept { return g_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  /// Distance c^2/g from the reference observer down to the horizon.
  double horizon_distance() const noexcept { return c_ * c_ / g_; }

  /// The same frame with the offset removed.
  FrameSpec unshifted() const { return FrameSpec(g_, 0.0, c_); }

 private:
  double g_;
  double b_;
  double c_;
};

struct RindlerEvent {
  double t = 0.0;
  double x = 0.0;
};

struct MinkowskiEvent {
  double t = 0.0;
  double x = 0.0;
};

/// Maps Rindler coordinates of the reference observer (b must be 0) to the
/// comoving Minkowski frame. Throws DomainError at or below the horizon.
MinkowskiEvent rindler_to_minkowski(const RindlerEvent& e, const FrameSpec& f);

/// Inverse of rindler_to_minkowski. Throws DomainError outside the right
/// Rindler wedge, including its boundary.
RindlerEvent minkowski_to_rindler(const MinkowskiEvent& e, const FrameSpec& f);

/// Coordinates of the same event for the observer shifted up by f.b():
/// x~' = x' - b, t~' = (1 + g b / c^2) t'.
RindlerEvent shift_rindler(const RindlerEvent& e, const FrameSpec& f);

/// Proper acceleration g / (1 + g b / c^2) of the shifted observer.
double effective_acceleration(const FrameSpec& f) noexcept;

/// Proper-time rate 1 + g b / c^2 of the shifted observer per unit t'.
double proper_time_rate(const FrameSpec& f) noexcept;

/// Four-velocity (c cosh(g tau/c), c sinh(g tau/c)) of the reference
/// observer at proper time tau. Requires f.b() == 0.
FourVector observer_four_velocity(const FrameSpec& f, double tau);

}  // namespace rindler
