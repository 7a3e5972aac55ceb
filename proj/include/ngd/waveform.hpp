#pragma once

#include <cstddef>
#include <vector>

namespace ngd {

/// Uniformly sampled real signal: samples[k] is the value at t_start + k*dt.
struct Waveform {
  double t_start = 0.0;
  double dt = 1.0;
  std::vector<double> samples;

  Waveform() = default;
  Waveform(double t_start, double dt, std::vector<double> samples);

  [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
  [[nodiscard]] double time(std::size_t k) const noexcept { return t_start + static_cast<double>(k) * dt; }
  [[nodiscard]] double t_last() const noexcept { return time(samples.size() - 1); }
  [[nodiscard]] double peak() const noexcept;      // max sample value
  [[nodiscard]] double abs_peak() const noexcept;  // max |sample|

  /// Linear interpolation; zero outside [t_start, t_last].
  [[nodiscard]] double value_at(double t) const noexcept;

  friend bool operator==(const Waveform&, const Waveform&) = default;
};

/// Same t_start and dt within 1e-9 of dt, and the same length.
[[nodiscard]] bool same_grid(const Waveform& a, const Waveform& b) noexcept;

/// Throws SimulationError when the grids differ.
void require_same_grid(const Waveform& a, const Waveform& b);

/// Uniform grid of n samples from t_start, all zero.
[[nodiscard]] Waveform zeros(double t_start, double dt, std::size_t n);

/// Grid covering [t_start, t_end] inclusive of the last whole step.
[[nodiscard]] std::size_t grid_length(double t_start, double t_end, double dt);

/// samples scaled by k.
[[nodiscard]] Waveform scaled(const Waveform& w, double k);

/// Integer-sample delay by k (k may be negative); vacated samples are zero.
[[nodiscard]] Waveform shifted(const Waveform& w, long k);

}  // namespace ngd
