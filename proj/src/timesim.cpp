#include "ngd/timesim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "fft.hpp"
#include "ngd/blocks.hpp"
#include "ngd/error.hpp"
#include "ngd/state_space.hpp"

namespace ngd {

namespace {

using cplx = std::complex<double>;

constexpr double kTailDecay = 1e-6;        // improper path: end samples relative to peak
constexpr double kWrapEnergy = 1e-6;       // padding energy relative to total
constexpr double kImagResidue = 1e-9;      // imaginary part relative to peak
constexpr int kLaurentTerms = 18;           // (1/8)^18 ~ 2e-17 once |u| >= 8 max|pole|
constexpr double kLaurentMargin = 8.0;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

double sinc2(double x) {
  if (x == 0.0) return 1.0;
  const double s = std::sin(x) / x;
  return s * s;
}

cplx eval_on_axis(const RationalTF& tf, double omega) {
  try {
    return tf(omega);
  } catch (const PoleError&) {
    throw SimulationError("FFT bin at omega = " + std::to_string(omega) + " rad/s falls on a pole");
  }
}

// zeta[j] = sum_{k>=0} (a + k)^-(q0 + j) for j < zeta.size(), a >= 1, q0 >= 2.
// Direct sum over the first terms, Euler-Maclaurin for the rest.
void hurwitz_zeta(double a, int q0, std::span<double> zeta) {
  constexpr int kDirect = 20;
  static constexpr double kBernoulli[] = {1.0 / 6,  -1.0 / 30,       1.0 / 42, -1.0 / 30,
                                          5.0 / 66, -691.0 / 2730.0, 7.0 / 6,  -3617.0 / 510.0};
  std::fill(zeta.begin(), zeta.end(), 0.0);
  for (int k = 0; k < kDirect; ++k) {
    const double inv = 1.0 / (a + k);
    double x = std::pow(inv, q0);
    for (double& z : zeta) {
      z += x;
      x *= inv;
    }
  }
  const double b = a + kDirect;
  const double inv = 1.0 / b;
  double base = std::pow(inv, q0);  // b^-q
  for (std::size_t j = 0; j < zeta.size(); ++j, base *= inv) {
    const double q = q0 + static_cast<double>(j);
    double sum = base * b / (q - 1.0) + 0.5 * base;
    // B_2m / (2m)! * q (q+1) ... (q+2m-2) * b^(-q-2m+1)
    double rising = q, power = base * inv, fact = 2.0;
    for (int m = 1; m <= 8; ++m) {
      sum += kBernoulli[m - 1] / fact * rising * power;
      rising *= (q + 2 * m - 1) * (q + 2 * m);
      power *= inv * inv;
      fact *= (2.0 * m + 1) * (2.0 * m + 2);
    }
    zeta[j] += sum;
  }
}

// Laurent coefficients of R at infinity: R(s) = sum_j c_j s^-(r+j).
std::vector<double> laurent_at_infinity(const RationalTF& R, int terms) {
  const auto& n = R.num().coeffs();
  const auto& d = R.den().coeffs();
  const int dn = static_cast<int>(n.size()) - 1, dd = static_cast<int>(d.size()) - 1;
  const auto nrev = [&](int j) { return j <= dn ? n[static_cast<std::size_t>(dn - j)] : 0.0; };
  const auto drev = [&](int j) { return j <= dd ? d[static_cast<std::size_t>(dd - j)] : 0.0; };
  std::vector<double> c(static_cast<std::size_t>(terms));
  for (int j = 0; j < terms; ++j) {
    double v = nrev(j);
    for (int i = 1; i <= std::min(j, dd); ++i) v -= drev(i) * c[static_cast<std::size_t>(j - i)];
    c[static_cast<std::size_t>(j)] = v / drev(0);
  }
  return c;
}

// Multiplier for bins 0..N/2 of an N-point grid with spacing dt.
//
// For the strictly proper part R, bin k sums sinc^2(u dt / 2) R(i u) over the
// aliases u = w_k + l P (P = 2 pi / dt). sin^2 is the same for every alias,
// so each term is (2 sin(w_k dt/2) / dt)^2 R(i u) / u^2. The first few
// aliases are summed directly. Beyond them every alias lies well outside the
// poles of R, where R's Laurent series at infinity converges geometrically;
// each power then sums in closed form as a Hurwitz zeta value.
std::vector<cplx> spectral_multiplier(const RationalTF& tf, std::size_t N, double dt) {
  const std::size_t half = N / 2;
  const double dw = 2.0 * std::numbers::pi / (static_cast<double>(N) * dt);
  const double period = 2.0 * std::numbers::pi / dt;
  std::vector<cplx> G(half + 1);

  if (!tf.is_proper()) {
    for (std::size_t k = 0; k <= half; ++k) G[k] = eval_on_axis(tf, dw * static_cast<double>(k));
    return G;
  }

  const auto [d, R] = split_feedthrough(tf);
  if (R.num().is_zero()) {
    std::fill(G.begin(), G.end(), cplx(d, 0.0));
    return G;
  }

  const int r = R.relative_degree();
  const std::vector<double> c = laurent_at_infinity(R, kLaurentTerms);
  double radius = 0.0;
  for (const auto& z : roots(R.den())) radius = std::max(radius, std::abs(z));
  // Direct aliases 1..L; the rest satisfy |u| >= (L + 1/2) P >= margin * radius.
  const int L = std::max(1, static_cast<int>(std::ceil(kLaurentMargin * radius / period)));

  // Phases of (i u)^-(r+j) for u > 0 and u < 0, folded into the coefficients.
  std::vector<cplx> pos(c.size()), neg(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    const int q = r + static_cast<int>(j);
    const double scaled = c[j] * std::pow(period, -(q + 2));
    pos[j] = scaled * std::pow(cplx(0.0, 1.0), -q);
    neg[j] = scaled * std::pow(cplx(0.0, -1.0), -q);
  }

  for (std::size_t k = 0; k <= half; ++k) {
    const double w = dw * static_cast<double>(k);
    G[k] = w == 0.0 ? eval_on_axis(R, 0.0) : sinc2(0.5 * w * dt) * eval_on_axis(R, w);
  }

  std::vector<double> zp(c.size()), zm(c.size());
  for (std::size_t k = 1; k <= half; ++k) {
    const double w = dw * static_cast<double>(k);
    const double sn = std::sin(0.5 * w * dt);
    const double pref = 4.0 * sn * sn / (dt * dt);
    if (pref == 0.0) continue;
    cplx acc{0.0, 0.0};
    for (int l = 1; l <= L; ++l) {
      const double up = w + l * period;
      const double um = w - l * period;
      acc += eval_on_axis(R, up) / (up * up) + eval_on_axis(R, um) / (um * um);
    }
    // sum_{l>L} (w + l P)^-q = P^-q zeta(q, L + 1 + w/P), likewise for l P - w.
    hurwitz_zeta(L + 1 + w / period, r + 2, zp);
    hurwitz_zeta(L + 1 - w / period, r + 2, zm);
    for (std::size_t j = 0; j < c.size(); ++j) acc += pos[j] * zp[j] + neg[j] * zm[j];
    G[k] += pref * acc;
  }

  for (auto& g : G) g += d;
  G[half] = G[half].real();
  return G;
}

}  // namespace

std::string_view to_string(SimMethod m) noexcept { return m == SimMethod::fft ? "fft" : "ode"; }

Waveform simulate_fft(const RationalTF& tf, const Waveform& input, FftOptions opts) {
  if (input.samples.empty() || !(input.dt > 0.0)) throw SimulationError("input waveform is empty");
  if (opts.pad_factor < 8) throw InvalidArgument("FFT pad factor must be at least 8");

  if (poles(tf).classification == Stability::marginal)
    throw SimulationError("transfer function has a pole on the imaginary axis");

  const std::size_t L = input.size();
  const double peak_in = input.abs_peak();
  if (peak_in == 0.0) return zeros(input.t_start, input.dt, L);

  if (!tf.is_proper()) {
    const std::size_t edge = std::max<std::size_t>(1, L / 20);
    const auto decayed = [&](std::size_t from, std::size_t to) {
      for (std::size_t k = from; k < to; ++k)
        if (std::abs(input.samples[k]) > kTailDecay * peak_in) return false;
      return true;
    };
    if (!decayed(0, edge) || !decayed(L - edge, L))
      throw SimulationError(
          "improper transfer function needs an input that has decayed to ~0 at both ends of the grid; "
          "band-limit the source with a low-pass first");
  }

  const std::size_t N = next_pow2(static_cast<std::size_t>(opts.pad_factor) * L);
  std::vector<cplx> buf(N, 0.0);
  std::copy(input.samples.begin(), input.samples.end(), buf.begin());
  detail::fft_inplace(buf, /*inverse=*/false);

  const auto G = spectral_multiplier(tf, N, input.dt);
  const std::size_t half = N / 2;
  for (std::size_t k = 0; k <= half; ++k) buf[k] *= G[k];
  for (std::size_t k = half + 1; k < N; ++k) buf[k] *= std::conj(G[N - k]);
  detail::fft_inplace(buf, /*inverse=*/true);

  const double inv_n = 1.0 / static_cast<double>(N);
  Waveform out = zeros(input.t_start, input.dt, L);
  double peak_out = 0.0;
  double imag_max = 0.0;
  double energy_grid = 0.0;
  double energy_pad = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const cplx v = buf[k] * inv_n;
    imag_max = std::max(imag_max, std::abs(v.imag()));
    if (k < L) {
      out.samples[k] = v.real();
      peak_out = std::max(peak_out, std::abs(v.real()));
      energy_grid += v.real() * v.real();
    } else {
      energy_pad += v.real() * v.real();
    }
  }
  if (imag_max > kImagResidue * peak_out)
    throw SimulationError("imaginary residue " + std::to_string(imag_max) + " exceeds tolerance");
  const double total = energy_grid + energy_pad;
  if (total > 0.0 && energy_pad > kWrapEnergy * total)
    throw SimulationError("response has not settled inside the grid (" + std::to_string(energy_pad / total) +
                          " of the energy falls in the padding); extend t_end");
  return out;
}

Waveform simulate_ode(const RationalTF& tf, const Waveform& input, OdeOptions opts) {
  if (input.samples.empty() || !(input.dt > 0.0)) throw SimulationError("input waveform is empty");
  if (opts.substeps < 1) throw InvalidArgument("substeps must be >= 1");
  if (!tf.is_proper())
    throw SimulationError(
        "ODE simulation needs a proper transfer function; precede the negative-delay stages with a low-pass "
        "of order m >= n");
  if (!opts.allow_unstable && poles(tf).classification == Stability::unstable)
    throw SimulationError("transfer function is unstable; set allow_unstable to integrate it anyway");

  const StateSpace ss = realize(tf);
  const int n = ss.order();
  const std::size_t L = input.size();
  const auto& u = input.samples;
  Waveform out = zeros(input.t_start, input.dt, L);

  if (n == 0) {
    for (std::size_t k = 0; k < L; ++k) out.samples[k] = ss.D * u[k];
    return out;
  }

  const double h = input.dt / opts.substeps;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n);
  const auto f = [&](const Eigen::VectorXd& state, double uval, Eigen::VectorXd& dx) {
    dx.noalias() = ss.A * state;
    dx += ss.B * uval;
  };

  out.samples[0] = ss.D * u[0];
  for (std::size_t k = 0; k + 1 < L; ++k) {
    const double u0 = u[k];
    const double du = u[k + 1] - u[k];
    if (u0 == 0.0 && du == 0.0 && x.isZero(0.0)) {
      out.samples[k + 1] = 0.0;
      continue;
    }
    for (int j = 0; j < opts.substeps; ++j) {
      const double ua = u0 + du * (static_cast<double>(j) / opts.substeps);
      const double um = u0 + du * ((j + 0.5) / opts.substeps);
      const double ub = u0 + du * (static_cast<double>(j + 1) / opts.substeps);
      f(x, ua, k1);
      f(x + 0.5 * h * k1, um, k2);
      f(x + 0.5 * h * k2, um, k3);
      f(x + h * k3, ub, k4);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out.samples[k + 1] = ss.C.dot(x) + ss.D * u[k + 1];
  }
  return out;
}

std::vector<TapWaveform> run_chain(const ChainSpec& chain, double dt, double t_end, SimMethod method) {
  const Waveform src = rect_source(chain.source, dt, t_end);
  std::vector<TapWaveform> taps;
  taps.push_back({source_node_name(chain), src});

  const auto name_taken = [&](const std::string& name) {
    if (chain.source_tap == name) return true;
    return std::any_of(chain.stages.begin(), chain.stages.end(), [&](const Stage& s) { return s.tap == name; });
  };

  for (std::size_t i = 0; i < chain.stages.size(); ++i) {
    const auto& st = chain.stages[i];
    const bool is_last = i + 1 == chain.stages.size();
    if (!st.tap && !is_last) continue;
    std::string name = st.tap ? *st.tap : (name_taken("output") ? "end" : "output");
    const RationalTF tf = composite_through(chain, i);
    if (method == SimMethod::ode && !tf.is_proper())
      throw SimulationError("composite transfer function at '" + name +
                            "' is improper; only the fft method can simulate it");
    Waveform w = method == SimMethod::fft ? simulate_fft(tf, src) : simulate_ode(tf, src);
    taps.push_back({std::move(name), std::move(w)});
  }
  return taps;
}

}  // namespace ngd
