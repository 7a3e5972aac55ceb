// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ngd/analysis.hpp"
#include "ngd/blocks.hpp"
#include "ngd/chain_dsl.hpp"
#include "ngd/error.hpp"
#include "ngd/timesim.hpp"
#include "test_support.hpp"

using namespace ngd;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel_linf(const Waveform& ref, const Waveform& other) {
  return testing::max_abs_diff(ref, other) / ref.abs_peak();
}

ChainSpec load(const std::string& text) {
  auto r = parse_chain(text);
  if (!r.ok()) throw InvalidArgument("acceptance chain failed to parse: " + to_string(r.diagnostics.front()));
  return *r.value;
}

const Waveform& tap(const std::vector<TapWaveform>& taps, const std::string& name) {
  for (const auto& t : taps)
    if (t.name == name) return t.waveform;
  throw InvalidArgument("missing tap " + name);
}

// Simulated chains are kept for the causality and cross-method checks.
struct ChainRun {
  std::string label;
  std::vector<TapWaveform> fft, ode;
  AnalysisReport report;
  double seconds = 0.0;
};

ChainRun run(const std::string& label, const std::string& text, double t_end) {
  const ChainSpec chain = load(text);
  ChainRun r;
  r.label = label;
  const auto t0 = std::chrono::steady_clock::now();
  r.ode = run_chain(chain, 1e-3, t_end, SimMethod::ode);
  r.report = measure_advance(tap(r.ode, "input"), tap(r.ode, "output"));
  r.seconds = seconds_since(t0);
  const auto t1 = std::chrono::steady_clock::now();
  r.fft = run_chain(chain, 1e-3, t_end, SimMethod::fft);
  (void)measure_advance(tap(r.fft, "input"), tap(r.fft, "output"));
  r.seconds = std::max(r.seconds, seconds_since(t1));
  return r;
}

const char* kBenchChain =
    "source rect(width=1.5)\n"
    "stage bessel2(T=0.484, alpha=1.268)^2 as input\n"
    "stage nd(T=0.22)^2 as output\n";

// Property corpora, 100 seeded cases each.
constexpr int kCases = 100;

Outcome properties() {
  using namespace testing;
  int failures = 0;
  std::string first;
  const auto fail = [&](const std::string& what) {
    if (failures++ == 0) first = what;
  };

  for (int c = 0; c < kCases; ++c) {
    std::vector<RationalTF> stages;
    const int count = uniform_int(2, 4);
    for (int i = 0; i < count; ++i)
      stages.push_back(uniform(0.0, 1.0) < 0.5 ? nd(uniform(0.01, 1.0)) : random_stable_tf(3));
    const double w = uniform(0.01, 20.0);
    double sum = 0.0;
    for (const auto& s : stages) sum += unwrapped_phase(s, w);
    const double whole = unwrapped_phase(cascade(std::span<const RationalTF>(stages)), w);
    if (std::abs(whole - sum) > 1e-9 * std::max(1.0, std::abs(sum))) fail("phase additivity");
  }

  for (int c = 0; c < kCases; ++c) {
    const RationalTF tf = random_stable_tf(4);
    const double w = uniform(0.0, 5.0);
    const double exact = group_delay(tf, w);
    const double e1 = std::abs(group_delay_numeric(tf, w, 1e-2) - exact);
    const double e2 = std::abs(group_delay_numeric(tf, w, 5e-3) - exact);
    if (e2 > 0.3 * e1 + 1e-9) fail("group delay convergence");
  }

  for (int c = 0; c < kCases; ++c) {
    const RationalTF tf = random_stable_tf(4);
    SourceParams p;
    p.T_rec = uniform(0.5, 2.0);
    const Waveform x = rect_source(p, 0.02, 40.0);
    const Waveform y = shifted(x, uniform_int(1, 100));
    const double a = uniform(-2.0, 2.0), b = uniform(-2.0, 2.0);
    Waveform mix = x;
    for (std::size_t k = 0; k < x.size(); ++k) mix.samples[k] = a * x.samples[k] + b * y.samples[k];
    const bool use_fft = c % 2 == 0;
    const auto sim = [&](const Waveform& in) { return use_fft ? simulate_fft(tf, in) : simulate_ode(tf, in); };
    const Waveform fx = sim(x), fy = sim(y), fm = sim(mix);
    double worst = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
      worst = std::max(worst, std::abs(fm.samples[k] - a * fx.samples[k] - b * fy.samples[k]));
    if (worst > 1e-10 * std::max(1.0, fm.abs_peak())) fail("linearity");
  }

  for (int c = 0; c < kCases; ++c) {
    const RationalTF tf = random_stable_tf(4);
    SourceParams p;
    p.T_rec = uniform(0.5, 2.0);
    const Waveform x = rect_source(p, 0.02, 40.0);
    const long k = uniform_int(1, 100);
    const bool use_fft = c % 2 == 0;
    const auto sim = [&](const Waveform& in) { return use_fft ? simulate_fft(tf, in) : simulate_ode(tf, in); };
    if (max_abs_diff(shifted(sim(x), k), sim(shifted(x, k))) > 1e-9 * std::max(1.0, sim(x).abs_peak()))
      fail("time invariance");
  }

  for (int c = 0; c < kCases; ++c) {
    std::string text = fmt("source rect(width=%.6g)\n", uniform(0.1, 5.0));
    const int stages = uniform_int(1, 4);
    for (int i = 0; i < stages; ++i)
      text += fmt("stage (nd(T=%.9g) * bessel2(T=%.9g))^%d * gain(k=%.9g) as t%d\n", uniform(0.01, 1.0),
                  uniform(0.05, 1.0), uniform_int(1, 3), uniform(-3.0, 3.0), i);
    const auto first_pass = parse_chain(text);
    if (!first_pass.ok()) {
      fail("round trip parse");
      continue;
    }
    const auto second = parse_chain(to_text(*first_pass.value));
    if (!second.ok() || !(*second.value == *first_pass.value)) fail("round trip");
  }

  for (int c = 0; c < kCases; ++c) {
    const int k = uniform_int(1, 6);
    const std::string block = fmt("ndp(T=%.9g, tau_in=%.9g, tau_fb=%.9g)", uniform(0.1, 1.0), uniform(0.0, 0.01),
                                  uniform(0.0, 0.01));
    std::string longhand = block;
    for (int i = 1; i < k; ++i) longhand += " * " + block;
    const auto a = parse_expr(block + "^" + std::to_string(k));
    const auto b = parse_expr(longhand);
    if (!a.ok() || !b.ok() || !(to_tf(*a.value) == to_tf(*b.value))) fail("repeat expansion");
  }

  if (failures == 0) return {true, "6 suites x 100 cases"};
  return {false, fmt("%d failing cases, first: %s", failures, first.c_str())};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;

  // Shared simulations: criterion 3 (bench chain) and criterion 4 (n = 10 design).
  ChainRun bench, design;
  SweepResult sweep;
  std::vector<OrderRow> orders;
  bool sims_ok = true;
  std::string sim_error;
  try {
    bench = run("bench", kBenchChain, kDefaultTEnd);
    design = run("n10", design_chain_text(design_stage(10, 0.2, 1.0)), 30.0);
    sweep = scaling_sweep({1, 2, 4, 8, 10}, 0.2, 1.0, SourceParams{1.0, 1.0, 0.0});
    orders = bessel_order_study({2, 4, 6, 8, 10}, 1.0, 1.0);
  } catch (const std::exception& e) {
    sims_ok = false;
    sim_error = e.what();
  }
  const auto guarded = [&](std::function<Outcome()> f) {
    return [=]() -> Outcome {
      if (!sims_ok) return {false, "simulation failed: " + sim_error};
      return f();
    };
  };

  criteria.emplace_back("single-stage delay", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const double gd = group_delay(nd(0.22), 0.0);
    return Outcome{std::abs(gd + 0.22) <= 1e-9, fmt("t_d = %.12g s (%.2g s)", gd, seconds_since(t0))};
  });

  criteria.emplace_back("two-stage analytic advance", [] {
    const double gd = group_delay(power(nd(0.22), 2), 0.0);
    return Outcome{std::abs(gd + 0.44) <= 1e-9, fmt("t_d = %.12g s", gd)};
  });

  criteria.emplace_back("bench chain advance", guarded([&] {
    const auto& r = bench.report;
    const bool ok = r.advance >= 0.40 && r.advance <= 0.55 && r.advance_fraction >= 0.20 && bench.seconds < 2.0;
    return Outcome{ok, fmt("advance %.4f s, fwhm_in %.4f s, fraction %.3f, runtime %.2f s", r.advance, r.fwhm_in,
                           r.advance_fraction, bench.seconds)};
  }));

  criteria.emplace_back("n=10 design advance", guarded([&] {
    const auto& r = design.report;
    const bool ok = std::abs(r.advance - 2.0) <= 0.4 && design.seconds < 5.0;
    return Outcome{ok, fmt("advance %.4f s, runtime %.2f s", r.advance, design.seconds)};
  }));

  criteria.emplace_back("square-root scaling", guarded([&] {
    double lo = INFINITY, hi = 0.0;
    for (const auto& row : sweep.rows) {
      lo = std::min(lo, row.distortion);
      hi = std::max(hi, row.distortion);
    }
    const double slope = sweep.exponent.value_or(NAN);
    const bool ok = std::abs(slope - 0.5) <= 0.1 && hi <= 1.5 * lo;
    return Outcome{ok, fmt("slope %.4f, distortion %.4f..%.4f (ratio %.3f)", slope, lo, hi, hi / lo)};
  }));

  criteria.emplace_back("Bessel order study", guarded([&] {
    bool rising = true;
    double lo = INFINITY, hi = 0.0;
    for (std::size_t i = 0; i < orders.size(); ++i) {
      if (i > 0 && !(orders[i].rise_delay_50pct > orders[i - 1].rise_delay_50pct)) rising = false;
      lo = std::min(lo, orders[i].fwhm);
      hi = std::max(hi, orders[i].fwhm);
    }
    const double spread = hi / lo - 1.0;
    return Outcome{rising && spread <= 0.15,
                   fmt("rise delay %s, fwhm %.3f..%.3f s (spread %.0f%%, limit 15%%)",
                       rising ? "increasing" : "NOT increasing", lo, hi, 100.0 * spread)};
  }));

  criteria.emplace_back("causality", guarded([&] {
    double fft_worst = 0.0, ode_worst = 0.0;
    for (const ChainRun* r : {&bench, &design}) {
      for (const auto& t : r->fft) fft_worst = std::max(fft_worst, pre_onset_level(t.waveform, 0.0));
      for (const auto& t : r->ode) ode_worst = std::max(ode_worst, pre_onset_level(t.waveform, 0.0));
    }
    for (const auto& row : sweep.rows) ode_worst = std::max(ode_worst, row.causal_leak);
    for (const auto& row : orders) ode_worst = std::max(ode_worst, row.causal_leak);
    // The sweep and order study above ran on the ODE path; repeat them on the FFT path.
    SweepOptions fft_opts;
    fft_opts.method = SimMethod::fft;
    for (const auto& row : scaling_sweep({1, 2, 4, 8, 10}, 0.2, 1.0, SourceParams{1.0, 1.0, 0.0}, fft_opts).rows)
      fft_worst = std::max(fft_worst, row.causal_leak);
    for (const auto& row : bessel_order_study({2, 4, 6, 8, 10}, 1.0, 1.0, kDefaultDt, SimMethod::fft))
      fft_worst = std::max(fft_worst, row.causal_leak);
    const bool ok = fft_worst <= 1e-12 && ode_worst == 0.0;
    return Outcome{ok, fmt("pre-onset level fft %.2e, ode %.2e", fft_worst, ode_worst)};
  }));

  criteria.emplace_back("stability asymmetry", [] {
    bool ok = true;
    for (double T : {0.01, 0.22, 10.0}) {
      const auto n = poles(neg_allpass(T));
      const auto p = poles(allpass(T));
      ok = ok && n.classification == Stability::unstable && n.poles.size() == 1 &&
           std::abs(n.poles[0] - std::complex<double>(1.0 / T, 0.0)) <= 1e-12 / T &&
           p.classification == Stability::stable;
    }
    return Outcome{ok, "T in {0.01, 0.22, 10} s"};
  });

  criteria.emplace_back("method cross-validation", guarded([&] {
    double worst = 0.0;
    for (const ChainRun* r : {&bench, &design})
      for (std::size_t i = 0; i < r->ode.size(); ++i)
        worst = std::max(worst, rel_linf(r->ode[i].waveform, r->fft[i].waveform));
    return Outcome{worst <= 1e-3, fmt("max relative L-inf %.2e", worst)};
  }));

  criteria.emplace_back("property suites", [] { return properties(); });

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
