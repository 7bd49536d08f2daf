#pragma once

#include "rindler/frames.hpp"

namespace rindler {

/// Null four-momentum (E/c, direction * E/c). direction is +1 (up) or -1
/// (down). Throws DomainError for E <= 0 or direction not +-1.
FourVector photon_four_momentum(double energy, int direction, double c);

/// Energy -eta(p, v) measured by an observer with four-velocity v.
/// v must be future-directed timelike; throws DomainError otherwise.
double measured_energy(const FourVector& p, const FourVector& v);

struct RedshiftResult {
  MinkowskiEvent absorption_event;
  double detector_proper_time = 0.0;
  double emitted_energy = 0.0;
  double measured_energy = 0.0;
  double first_order_energy = 0.0;  ///< (1 + g b / c^2) E_emitted
  double doppler_factor = 0.0;      ///< measured / emitted
};

/// Photon emitted downwards at T = 0 from height b (inertial frame
/// comoving with both clocks at T = 0) and absorbed by the detector
/// accelerating upwards from X = 0. Absorption is located by bracketed
/// bisection down to adjacent doubles. Throws DomainError on bad parameters and
/// ExperimentError when no absorption event is found.
RedshiftResult run_redshift_experiment(double g, double b, double emitted_energy, double c);

/// Ratio of tick rates of two identical static clocks compared by photon
/// exchange: the proper-time rate 1 + g b / c^2 of the upper clock. A clock
/// at rest has no c.m.-height coupling in its own Hamiltonian; the rate
/// difference comes from comparing proper times along different worldlines.
double clock_comparison_rate(const FrameSpec& f) noexcept;

}  // namespace rindler
