#include "ngd/waveform.hpp"

#include <algorithm>
#include <cmath>

#include "ngd/error.hpp"

namespace ngd {

Waveform::Waveform(double t_start_, double dt_, std::vector<double> samples_)
    : t_start(t_start_), dt(dt_), samples(std::move(samples_)) {
  if (!(dt > 0.0)) throw InvalidArgument("waveform dt must be positive");
  if (samples.empty()) throw InvalidArgument("waveform must have at least one sample");
}

double Waveform::peak() const noexcept { return *std::max_element(samples.begin(), samples.end()); }

double Waveform::abs_peak() const noexcept {
  double m = 0.0;
  for (double x : samples) m = std::max(m, std::abs(x));
  return m;
}

double Waveform::value_at(double t) const noexcept {
  const double u = (t - t_start) / dt;
  if (u < 0.0 || u > static_cast<double>(samples.size() - 1)) return 0.0;
  const auto k = static_cast<std::size_t>(u);
  if (k + 1 >= samples.size()) return samples.back();
  const double f = u - static_cast<double>(k);
  return samples[k] + f * (samples[k + 1] - samples[k]);
}

bool same_grid(const Waveform& a, const Waveform& b) noexcept {
  const double tol = 1e-9 * a.dt;
  return a.size() == b.size() && std::abs(a.dt - b.dt) <= tol && std::abs(a.t_start - b.t_start) <= tol;
}

void require_same_grid(const Waveform& a, const Waveform& b) {
  if (!same_grid(a, b)) throw SimulationError("waveforms are sampled on different grids");
}

Waveform zeros(double t_start, double dt, std::size_t n) {
  return Waveform(t_start, dt, std::vector<double>(n, 0.0));
}

std::size_t grid_length(double t_start, double t_end, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (!(t_end > t_start)) throw InvalidArgument("t_end must exceed the grid start");
  return static_cast<std::size_t>(std::floor((t_end - t_start) / dt + 1e-9)) + 1;
}

Waveform scaled(const Waveform& w, double k) {
  Waveform out = w;
  for (double& x : out.samples) x *= k;
  return out;
}

Waveform shifted(const Waveform& w, long k) {
  Waveform out = zeros(w.t_start, w.dt, w.size());
  const long n = static_cast<long>(w.size());
  for (long i = 0; i < n; ++i) {
    const long j = i - k;
    if (j >= 0 && j < n) out.samples[static_cast<std::size_t>(i)] = w.samples[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace ngd
