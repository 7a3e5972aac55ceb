#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ngd/chain.hpp"
#include "ngd/rational_tf.hpp"
#include "ngd/waveform.hpp"

namespace ngd {

enum class SimMethod { fft, ode };

[[nodiscard]] std::string_view to_string(SimMethod m) noexcept;

struct FftOptions {
  int pad_factor = 8;  // padded length is the next power of two >= pad_factor * n
};

/// Frequency-domain simulation on the input grid.
///
/// The input is read as the piecewise-linear curve through its samples. For a
/// proper tf = D + R(s) each DFT bin is multiplied by
///   D + sum_l sinc^2(w_l dt / 2) R(i w_l),   w_l = w_k + 2 pi l / dt,
/// which makes the result the sampled continuous-time response. Improper
/// transfer functions use tf(i w_k) directly and require an input that has
/// decayed at both ends.
///
/// Throws SimulationError on a pole on the imaginary axis, an improper tf
/// with a non-decaying input, output energy spilling into the padding
/// (> 1e-6 of total), or an imaginary residue above 1e-9 of the peak.
[[nodiscard]] Waveform simulate_fft(const RationalTF& tf, const Waveform& input, FftOptions opts = {});

struct OdeOptions {
  int substeps = 4;
  bool allow_unstable = false;
};

/// Classical RK4 on the controllable canonical realization, step dt/substeps,
/// input linearly interpolated between samples, zero initial state.
/// Throws SimulationError for improper tf, or unstable tf unless allowed.
[[nodiscard]] Waveform simulate_ode(const RationalTF& tf, const Waveform& input, OdeOptions opts = {});

struct TapWaveform {
  std::string name;
  Waveform waveform;
};

/// Waveform at the source, at every named tap, and at the chain end (named
/// "output" when the last stage has no tap). Each tap is simulated from the
/// source through the composite transfer function ahead of it.
[[nodiscard]] std::vector<TapWaveform> run_chain(const ChainSpec& chain, double dt, double t_end, SimMethod method);

/// Default grid for chain runs.
inline constexpr double kDefaultDt = 1e-3;
inline constexpr double kDefaultTEnd = 12.0;

}  // namespace ngd
