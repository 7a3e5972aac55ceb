// Randomized checks. Every generator draws from the seeded engine in
// test_support.hpp, so a failure reproduces on rerun.
#include "doctest.h"
#include "ngd/analysis.hpp"
#include "ngd/blocks.hpp"
#include "ngd/chain_dsl.hpp"
#include "ngd/timesim.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>

using namespace ngd;
using namespace ngd::testing;

namespace {

constexpr int kCases = 100;

RationalTF random_stage() {
  switch (uniform_int(0, 4)) {
    case 0: return nd(uniform(0.01, 1.0));
    case 1: return bessel2(uniform(0.05, 1.0), uniform(0.5, 2.5));
    case 2: return allpass(uniform(0.01, 1.0));
    case 3: return nd_practical(uniform(0.1, 1.0), uniform(0.0, 0.01), uniform(0.0, 0.01));
    default: return random_stable_tf(3);
  }
}

Waveform pulse(double t_start, double dt, std::size_t n, double center, double width) {
  Waveform w = zeros(t_start, dt, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = (w.time(k) - center) / width;
    w.samples[k] = std::exp(-0.5 * x * x) * (1.0 + 0.3 * x);
  }
  return w;
}

double rel_linf(const Waveform& a, const Waveform& b) { return max_abs_diff(a, b) / std::max(a.abs_peak(), 1e-300); }

BlockCall random_block() {
  BlockCall b;
  switch (uniform_int(0, 6)) {
    case 0: b = {"nd", {{"T", uniform(0.01, 1.0)}}}; break;
    case 1: b = {"ndp", {{"T", uniform(0.1, 1.0)}, {"tau_in", uniform(0.0, 0.01)}, {"tau_fb", uniform(0.0, 0.01)}}}; break;
    case 2: b = {"bessel2", {{"T", uniform(0.05, 1.0)}, {"alpha", uniform(0.5, 2.5)}}}; break;
    case 3: b = {"bessel", {{"m", 2.0 * uniform_int(1, 4)}, {"omega_c", uniform(0.2, 5.0)}}}; break;
    case 4: b = {"allpass", {{"T", uniform(0.01, 1.0)}}}; break;
    case 5: b = {"napass", {{"T", uniform(0.01, 1.0)}}}; break;
    default: b = {"gain", {{"k", uniform(-3.0, 3.0)}}}; break;
  }
  return b;
}

Expr random_expr(int depth) {
  Expr e;
  const int n = uniform_int(1, 3);
  for (int i = 0; i < n; ++i) {
    Term t;
    if (depth > 0 && uniform(0.0, 1.0) < 0.25)
      t.body = std::make_shared<const Expr>(random_expr(depth - 1));
    else
      t.body = random_block();
    t.repeat = uniform(0.0, 1.0) < 0.5 ? 1 : uniform_int(2, 4);
    e.factors.push_back(std::move(t));
  }
  return e;
}

Expr expanded(const Expr& e) {
  Expr out;
  for (const auto& b : flatten(e)) out.factors.push_back(Term{b, 1});
  return out;
}

}  // namespace

TEST_CASE("cascade phase additivity") {
  for (int c = 0; c < kCases; ++c) {
    const int count = uniform_int(2, 4);
    std::vector<RationalTF> stages;
    for (int i = 0; i < count; ++i) stages.push_back(random_stage());
    const RationalTF whole = cascade(std::span<const RationalTF>(stages));
    const double w = uniform(0.01, 20.0);

    double phase_sum = 0.0, delay_sum = 0.0;
    for (const auto& s : stages) {
      phase_sum += unwrapped_phase(s, w);
      delay_sum += group_delay(s, w);
    }
    CHECK(unwrapped_phase(whole, w) == doctest::Approx(phase_sum).epsilon(1e-9));
    CHECK(group_delay(whole, w) == doctest::Approx(delay_sum).epsilon(1e-9));
  }
}

TEST_CASE("numeric group delay converges at second order") {
  int checked = 0;
  for (int c = 0; c < kCases; ++c) {
    const RationalTF tf = random_stable_tf(4);
    const double w = uniform(0.0, 5.0);
    const double exact = group_delay(tf, w);
    const double h = 1e-2;
    const double e1 = std::abs(group_delay_numeric(tf, w, h) - exact);
    const double e2 = std::abs(group_delay_numeric(tf, w, h / 2) - exact);
    // Below ~1e-9 rounding in the phase difference dominates the stencil.
    if (e1 < 1e-9) {
      CHECK(e2 < 1e-8);
      continue;
    }
    CHECK(e2 <= 0.3 * e1 + 1e-9);
    ++checked;
  }
  CHECK(checked >= kCases / 2);
}

TEST_CASE("stability verdict ignores a common scale factor") {
  for (int c = 0; c < kCases; ++c) {
    const RationalTF tf{random_poly(uniform_int(0, 3)), random_poly(uniform_int(1, 5))};
    const double k = uniform(0.0, 1.0) < 0.5 ? -uniform(1e-3, 1e3) : uniform(1e-3, 1e3);
    const RationalTF scaled_tf{k * tf.num(), k * tf.den()};
    CHECK(poles(tf).classification == poles(scaled_tf).classification);
  }
}

TEST_CASE("simulation is linear") {
  const double dt = 0.02;
  for (int c = 0; c < kCases; ++c) {
    const RationalTF tf = random_stable_tf(4);
    const Waveform x = pulse(-10.0, dt, 3000, uniform(-2.0, 2.0), uniform(0.5, 2.0));
    const Waveform y = pulse(-10.0, dt, 3000, uniform(-2.0, 2.0), uniform(0.5, 2.0));
    const double a = uniform(-2.0, 2.0), b = uniform(-2.0, 2.0);
    Waveform mix = zeros(x.t_start, dt, x.size());
    for (std::size_t k = 0; k < x.size(); ++k) mix.samples[k] = a * x.samples[k] + b * y.samples[k];

    const Waveform fx = simulate_ode(tf, x), fy = simulate_ode(tf, y), fm = simulate_ode(tf, mix);
    Waveform combo = zeros(x.t_start, dt, x.size());
    for (std::size_t k = 0; k < x.size(); ++k) combo.samples[k] = a * fx.samples[k] + b * fy.samples[k];
    CHECK(max_abs_diff(fm, combo) <= 1e-10 * std::max(1.0, fm.abs_peak()));
  }
}

TEST_CASE("simulation is time invariant") {
  const double dt = 0.02;
  for (int c = 0; c < kCases; ++c) {
    const RationalTF tf = random_stable_tf(4);
    const double width = uniform(0.5, 1.5);
    const long shift = uniform_int(1, 100);
    const Waveform x = pulse(-20.0, dt, 4000, -2.0, width);
    const Waveform xs = shifted(x, shift);
    const bool use_fft = c % 2 == 0;
    const Waveform y = use_fft ? simulate_fft(tf, x) : simulate_ode(tf, x);
    const Waveform ys = use_fft ? simulate_fft(tf, xs) : simulate_ode(tf, xs);
    CHECK(max_abs_diff(shifted(y, shift), ys) <= 1e-9 * std::max(1.0, y.abs_peak()));
  }
}

TEST_CASE("FFT and ODE paths agree and stay causal") {
  const double dt = 0.02;
  for (int c = 0; c < kCases; ++c) {
    const RationalTF tf = random_stable_tf(5);
    SourceParams p;
    p.T_rec = uniform(0.5, 3.0);
    const Waveform src = rect_source(p, dt, 60.0);
    const Waveform a = simulate_fft(tf, src);
    const Waveform b = simulate_ode(tf, src);
    CHECK(rel_linf(b, a) <= 1e-3);
    CHECK(pre_onset_level(a, 0.0) <= 1e-12);
    CHECK(pre_onset_level(b, 0.0) == 0.0);
  }
}

TEST_CASE("chain text round trip") {
  for (int c = 0; c < kCases; ++c) {
    ChainSpec spec;
    spec.source.T_rec = uniform(0.1, 5.0);
    if (uniform(0.0, 1.0) < 0.3) spec.source.height = uniform(0.1, 3.0);
    if (uniform(0.0, 1.0) < 0.3) spec.source.t0 = uniform(-1.0, 1.0);
    if (uniform(0.0, 1.0) < 0.3) spec.source_tap = "src";
    if (uniform(0.0, 1.0) < 0.3) spec.description = "case " + std::to_string(c);
    const int stages = uniform_int(0, 4);
    for (int i = 0; i < stages; ++i) {
      Stage st;
      st.expr = random_expr(2);
      if (uniform(0.0, 1.0) < 0.5) st.tap = "t" + std::to_string(i);
      spec.stages.push_back(std::move(st));
    }
    const std::string text = to_text(spec);
    const auto r = parse_chain(text);
    INFO(text);
    REQUIRE(r.ok());
    CHECK(*r.value == spec);
  }
}

TEST_CASE("repeat expansion gives the same composite") {
  for (int c = 0; c < kCases; ++c) {
    Expr e = random_expr(1);
    while (flatten(e).size() > 12) e = random_expr(1);
    const auto compact = parse_expr(to_text(e));
    const auto longhand = parse_expr(to_text(expanded(e)));
    REQUIRE(compact.ok());
    REQUIRE(longhand.ok());
    const RationalTF a = to_tf(*compact.value);
    const RationalTF b = to_tf(*longhand.value);
    CHECK(approx_equal(a.num() * b.den(), b.num() * a.den(), 1e-12));
  }
}
