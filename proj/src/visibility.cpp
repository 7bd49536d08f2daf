#include "rindler/visibility.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "rindler/errors.hpp"

namespace rindler {

InternalSpectrum::InternalSpectrum(std::vector<EnergyLevel> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw ConfigError("InternalSpectrum: at least one level is required");
  double total = 0.0;
  for (const auto& level : levels_) {
    if (!(level.probability >= 0.0) || !std::isfinite(level.energy)) {
      throw ConfigError("InternalSpectrum: probabilities must be >= 0 and energies finite");
    }
    total += level.probability;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ConfigError("InternalSpectrum: probabilities sum to " + std::to_string(total));
  }
}

InternalSpectrum InternalSpectrum::shifted(double delta) const {
  std::vector<EnergyLevel> moved = levels_;
  for (auto& level : moved) level.energy += delta;
  return InternalSpectrum(std::move(moved));
}

namespace {

InternalSpectrum normalized_geometric(std::size_t levels, double spacing, double ratio) {
  std::vector<EnergyLevel> out(levels);
  double weight = 1.0;
  double total = 0.0;
  for (std::size_t n = 0; n < levels; ++n) {
    out[n] = {(static_cast<double>(n) + 0.5) * spacing, weight};
    total += weight;
    weight *= ratio;
  }
  for (auto& level : out) level.probability /= total;
  return InternalSpectrum(std::move(out));
}

}  // namespace

InternalSpectrum harmonic_spectrum(std::size_t levels, double spacing, double ratio) {
  if (levels == 0) throw ConfigError("harmonic_spectrum: need at least one level");
  if (!(ratio >= 0.0)) throw ConfigError("harmonic_spectrum: ratio must be >= 0");
  return normalized_geometric(levels, spacing, ratio);
}

InternalSpectrum geometric_spectrum(double spacing, double ratio, std::size_t max_levels) {
  if (!(ratio >= 0.0 && ratio < 1.0)) throw ConfigError("geometric_spectrum: ratio must be in [0, 1)");
  // Tail weight beyond d levels relative to the full series is ratio^d.
  std::size_t d = 1;
  double tail = ratio;
  while (tail >= 1e-9) {
    if (++d > max_levels) {
      throw ConfigError("geometric_spectrum: truncation tail exceeds 1e-9 at " +
                        std::to_string(max_levels) + " levels");
    }
    tail *= ratio;
  }
  return normalized_geometric(d, spacing, ratio);
}

void InterferometerConfig::validate() const {
  if (x_upper == x_lower) throw ConfigError("interferometer: branch heights must differ");
  if (!(duration > 0.0)) throw ConfigError("interferometer: duration must be positive");
  if (!(c > 0.0)) throw ConfigError("interferometer: c must be positive");
  if (!(hbar > 0.0)) throw ConfigError("interferometer: hbar must be positive");
  if (!std::isfinite(g) || !std::isfinite(counter_coupling) || !std::isfinite(x_upper) ||
      !std::isfinite(x_lower)) {
    throw ConfigError("interferometer: parameters must be finite");
  }
}

double branch_phase(const InterferometerConfig& config, double energy, double x) {
  const double coupling = (1.0 - config.counter_coupling) * config.g * x / (config.c * config.c);
  return energy * (1.0 + coupling) * config.duration / config.hbar;
}

double visibility(const InterferometerConfig& config, const InternalSpectrum& spectrum) {
  config.validate();
  const double rate = (1.0 - config.counter_coupling) * config.g * config.separation() *
                      config.duration / (config.hbar * config.c * config.c);
  double re = 0.0;
  double im = 0.0;
  double total = 0.0;
  for (const auto& level : spectrum.levels()) {
    const double theta = rate * level.energy;
    re += level.probability * std::cos(theta);
    im += level.probability * std::sin(theta);
    total += level.probability;
  }
  // Normalizing by the trace makes a phase-free spectrum give exactly 1.
  return std::min(1.0, std::hypot(re, im) / total);
}

double visibility_oracle(const InterferometerConfig& config, const InternalSpectrum& spectrum) {
  config.validate();
  const auto d = static_cast<Eigen::Index>(spectrum.size());
  if (d > 64) throw ConfigError("visibility_oracle: at most 64 internal levels supported");
  using Matrix = Eigen::MatrixXcd;
  using namespace std::complex_literals;

  // Basis index: path * d + level, path 0 = upper, 1 = lower.
  Matrix rho = Matrix::Zero(2 * d, 2 * d);
  for (Eigen::Index a = 0; a < 2; ++a) {
    for (Eigen::Index b = 0; b < 2; ++b) {
      for (Eigen::Index n = 0; n < d; ++n) {
        rho(a * d + n, b * d + n) = 0.5 * spectrum.levels()[n].probability;
      }
    }
  }
  Matrix unitary = Matrix::Zero(2 * d, 2 * d);
  const double heights[2] = {config.x_upper, config.x_lower};
  for (Eigen::Index a = 0; a < 2; ++a) {
    for (Eigen::Index n = 0; n < d; ++n) {
      const double phi = branch_phase(config, spectrum.levels()[n].energy, heights[a]);
      unitary(a * d + n, a * d + n) = std::exp(-1i * phi);
    }
  }
  const Matrix evolved = unitary * rho * unitary.adjoint();

  std::complex<double> path[2][2] = {};
  for (Eigen::Index a = 0; a < 2; ++a) {
    for (Eigen::Index b = 0; b < 2; ++b) {
      for (Eigen::Index n = 0; n < d; ++n) path[a][b] += evolved(a * d + n, b * d + n);
    }
  }
  const double trace = (path[0][0] + path[1][1]).real();
  return 2.0 * std::abs(path[0][1]) / trace;
}

FrameDependenceReport frame_dependence_report(const InterferometerConfig& config,
                                              const InternalSpectrum& spectrum) {
  InterferometerConfig free_fall = config;
  free_fall.g = 0.0;
  FrameDependenceReport r;
  r.supported = visibility(config, spectrum);
  r.free_fall = visibility(free_fall, spectrum);
  r.difference = r.free_fall - r.supported;
  return r;
}

}  // namespace rindler
