#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "ngd/analysis.hpp"
#include "ngd/blocks.hpp"
#include "ngd/chain.hpp"
#include "ngd/chain_dsl.hpp"
#include "ngd/error.hpp"
#include "ngd/rational_tf.hpp"
#include "ngd/timesim.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

std::vector<double> coeffs(const ngd::Polynomial& p) { return {p.coeffs().begin(), p.coeffs().end()}; }

ngd::SimMethod method_from(const std::string& name) {
  if (name == "fft") return ngd::SimMethod::fft;
  if (name == "ode") return ngd::SimMethod::ode;
  throw ngd::InvalidArgument("method must be 'fft' or 'ode', got '" + name + "'");
}

std::string diagnostics_text(const std::vector<ngd::ParseDiagnostic>& diags) {
  std::string s;
  for (const auto& d : diags) s += ngd::to_string(d) + "\n";
  return s;
}

ngd::ChainSpec parse_or_throw(const std::string& text) {
  auto r = ngd::parse_chain(text);
  if (!r.ok()) throw ngd::InvalidArgument(diagnostics_text(r.diagnostics));
  return *r.value;
}

ngd::Waveform waveform_from(py::array_t<double, py::array::c_style | py::array::forcecast> samples, double t_start,
                            double dt) {
  const auto buf = samples.unchecked<1>();
  std::vector<double> v(static_cast<std::size_t>(buf.shape(0)));
  for (py::ssize_t i = 0; i < buf.shape(0); ++i) v[static_cast<std::size_t>(i)] = buf(i);
  return {t_start, dt, std::move(v)};
}

py::dict stability_dict(const ngd::StabilityVerdict& v) {
  return py::dict("poles"_a = v.poles, "classification"_a = std::string(ngd::to_string(v.classification)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Core bindings for the ngdelay package";

  static py::exception<ngd::PoleError> pole_error(m, "PoleError", PyExc_ArithmeticError);
  static py::exception<ngd::SimulationError> sim_error(m, "SimulationError", PyExc_RuntimeError);
  static py::exception<ngd::AnalysisError> analysis_error(m, "AnalysisError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ngd::InvalidArgument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const ngd::PoleError& e) {
      pole_error(e.what());
    } catch (const ngd::SimulationError& e) {
      sim_error(e.what());
    } catch (const ngd::AnalysisError& e) {
      analysis_error(e.what());
    }
  });

  py::class_<ngd::RationalTF>(m, "TransferFunction",
                              "H(s) = num(s) / den(s), coefficients in ascending powers of s")
      .def(py::init([](const std::vector<double>& num, const std::vector<double>& den) {
             return ngd::RationalTF(ngd::Polynomial(num), ngd::Polynomial(den));
           }),
           "num"_a, "den"_a)
      .def_property_readonly("num", [](const ngd::RationalTF& t) { return coeffs(t.num()); })
      .def_property_readonly("den", [](const ngd::RationalTF& t) { return coeffs(t.den()); })
      .def_property_readonly("is_proper", &ngd::RationalTF::is_proper)
      .def_property_readonly("relative_degree", &ngd::RationalTF::relative_degree)
      .def("__call__", &ngd::RationalTF::operator(), "omega"_a, "H(i omega)")
      .def("group_delay", [](const ngd::RationalTF& t, double w) { return ngd::group_delay(t, w); }, "omega"_a)
      .def("poles", [](const ngd::RationalTF& t) { return stability_dict(ngd::poles(t)); })
      .def("__mul__", [](const ngd::RationalTF& a, const ngd::RationalTF& b) { return ngd::cascade({a, b}); })
      .def("__pow__", [](const ngd::RationalTF& a, int n) { return ngd::power(a, n); })
      .def("equivalent", [](const ngd::RationalTF& a, const ngd::RationalTF& b) { return ngd::equivalent(a, b); })
      .def("__repr__", [](const ngd::RationalTF& t) {
        return "TransferFunction(num=" + py::repr(py::cast(coeffs(t.num()))).cast<std::string>() +
               ", den=" + py::repr(py::cast(coeffs(t.den()))).cast<std::string>() + ")";
      });

  m.def("nd", &ngd::nd, "T"_a, "1 + sT");
  m.def("nd_practical", &ngd::nd_practical, "T"_a, "tau_in"_a, "tau_fb"_a);
  m.def("bessel2", &ngd::bessel2, "T_LP"_a, "alpha"_a = ngd::kBesselAlpha);
  m.def("bessel_cascade", &ngd::bessel_cascade, "order_m"_a, "omega_c"_a, "alpha"_a = ngd::kBesselAlpha);
  m.def("allpass", &ngd::allpass, "T"_a);
  m.def("neg_allpass", &ngd::neg_allpass, "T"_a);
  m.def("gain", &ngd::RationalTF::gain, "k"_a);
  m.def("parse_expr", [](const std::string& text) {
    auto r = ngd::parse_expr(text);
    if (!r.ok()) throw ngd::InvalidArgument(diagnostics_text(r.diagnostics));
    return ngd::to_tf(*r.value);
  }, "text"_a, "Transfer function of a chain-language stage expression");

  m.def("design_stage", [](int n, double gamma, double omega_c) {
    const ngd::DesignParams d = ngd::design_stage(n, gamma, omega_c);
    return py::dict("n"_a = d.n, "m"_a = d.m, "gamma"_a = d.gamma, "omega_c"_a = d.omega_c, "T_w"_a = d.T_w,
                    "T"_a = d.T, "T_total"_a = d.T_total, "chain"_a = ngd::design_chain_text(d));
  }, "n"_a, "gamma"_a, "omega_c"_a);

  m.def("check_chain", [](const std::string& text) {
    const ngd::ChainSpec c = parse_or_throw(text);
    py::list out;
    for (const auto& d : ngd::validate_chain(c)) out.append(ngd::to_string(d));
    return out;
  }, "text"_a, "Parse a chain; raises ValueError on syntax errors, returns lint messages");

  m.def("simulate_chain", [](const std::string& text, double dt, double t_end, const std::string& method) {
    const auto taps = ngd::run_chain(parse_or_throw(text), dt, t_end, method_from(method));
    const ngd::Waveform& first = taps.front().waveform;
    std::vector<double> t(first.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = first.time(k);
    py::dict out;
    out["t"] = to_array(t);
    for (const auto& tap : taps) out[py::str(tap.name)] = to_array(tap.waveform.samples);
    return out;
  }, "text"_a, "dt"_a = ngd::kDefaultDt, "t_end"_a = ngd::kDefaultTEnd, "method"_a = "ode",
        "Waveforms at every tap; keys 't' and the tap names");

  m.def("measure_advance", [](py::array_t<double, py::array::c_style | py::array::forcecast> input,
                              py::array_t<double, py::array::c_style | py::array::forcecast> output, double t_start,
                              double dt) {
    const ngd::AnalysisReport r =
        ngd::measure_advance(waveform_from(input, t_start, dt), waveform_from(output, t_start, dt));
    return py::dict("advance"_a = r.advance, "advance_fraction"_a = r.advance_fraction, "fwhm_in"_a = r.fwhm_in,
                    "fwhm_out"_a = r.fwhm_out, "peak_time_in"_a = r.peak_time_in,
                    "peak_time_out"_a = r.peak_time_out, "distortion"_a = r.distortion,
                    "wavefront_out"_a = r.wavefront_out);
  }, "input"_a, "output"_a, "t_start"_a, "dt"_a);

  m.def("scaling_sweep", [](const std::vector<int>& n_values, double gamma, double omega_c, double width,
                            double dt, const std::string& method) {
    ngd::SweepOptions opts;
    opts.dt = dt;
    opts.method = method_from(method);
    const auto res = ngd::scaling_sweep(n_values, gamma, omega_c, ngd::SourceParams{width, 1.0, 0.0}, opts);
    py::list rows;
    for (const auto& r : res.rows)
      rows.append(py::dict("n"_a = r.n, "m"_a = r.m, "T"_a = r.T, "T_total_predicted"_a = r.T_total_predicted,
                           "advance"_a = r.advance_measured, "distortion"_a = r.distortion));
    return py::dict("rows"_a = rows, "exponent"_a = res.exponent);
  }, "n_values"_a, "gamma"_a, "omega_c"_a, "width"_a, "dt"_a = ngd::kDefaultDt, "method"_a = "ode");
}
