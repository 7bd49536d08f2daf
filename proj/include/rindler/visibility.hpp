#pragma once

// Two-path interferometer for a composite clock held at two heights.
// Each branch accumulates the internal phase E_n (1 + (1 - lambda) g x / c^2) T / hbar;
// tracing out the internal levels leaves the path coherence
//   V = | sum_n p_n exp(i (1 - lambda) g dx E_n T / (hbar c^2)) |.
// lambda scales a supporting-potential counter-coupling -lambda g X H_rel / c^2.

#include <cstddef>
#include <vector>

namespace rindler {

struct EnergyLevel {
  double energy = 0.0;
  double probability = 0.0;
};

class InternalSpectrum {
 public:
  /// Throws ConfigError unless the list is non-empty, probabilities are
  /// non-negative and sum to 1 within 1e-12.
  explicit InternalSpectrum(std::vector<EnergyLevel> levels);

  const std::vector<EnergyLevel>& levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }
  /// All energies moved by `delta`; occupations unchanged.
  InternalSpectrum shifted(double delta) const;

 private:
  std::vector<EnergyLevel> levels_;
};

/// d harmonic levels E_n = (n + 1/2) spacing with occupations ~ ratio^n.
InternalSpectrum harmonic_spectrum(std::size_t levels, double spacing, double ratio);

/// Harmonic levels with geometric occupation truncated once the discarded
/// tail drops below 1e-9 (at most max_levels levels), then renormalized.
InternalSpectrum geometric_spectrum(double spacing, double ratio, std::size_t max_levels = 64);

struct InterferometerConfig {
  double x_upper = 1.0;
  double x_lower = 0.0;
  double duration = 1.0;
  double g = 1.0;
  double c = 1.0;
  double hbar = 1.0;
  double counter_coupling = 0.0;  ///< lambda

  /// Throws ConfigError for equal heights, non-positive duration, c or hbar.
  void validate() const;
  double separation() const noexcept { return x_upper - x_lower; }
};

/// Internal phase accumulated by level E on a branch held at height x.
double branch_phase(const InterferometerConfig& config, double energy, double x);

/// Closed-form path visibility in [0, 1].
double visibility(const InterferometerConfig& config, const InternalSpectrum& spectrum);

/// Brute force: evolves (path qubit) x (d-level mixed internal state) with the
/// branch unitaries and reads off 2 |rho_path(upper, lower)|. Requires d <= 64.
double visibility_oracle(const InterferometerConfig& config, const InternalSpectrum& spectrum);

struct FrameDependenceReport {
  double supported = 0.0;  ///< visibility with g as configured
  double free_fall = 0.0;  ///< same experiment described with g = 0
  double difference = 0.0; ///< free_fall - supported
};

FrameDependenceReport frame_dependence_report(const InterferometerConfig& config,
                                              const InternalSpectrum& spectrum);

}  // namespace rindler
