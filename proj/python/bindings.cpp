#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dikin/cli.hpp"
#include "dikin/problem_io.hpp"

#include <sstream>

namespace py = pybind11;
using namespace dikin;

namespace {

Matrix stack(const std::vector<Vector>& xs) {
  if (xs.empty()) return Matrix(0, 0);
  Matrix out(static_cast<Index>(xs.size()), xs.front().size());
  for (size_t i = 0; i < xs.size(); ++i) out.row(static_cast<Index>(i)) = xs[i].transpose();
  return out;
}

py::dict report_dict(const CoolingReport& r) {
  py::dict d;
  d["d"] = r.d;
  d["nu"] = r.nu;
  d["nu_bar"] = r.nu_bar;
  d["sigma0_sq"] = r.sigma0_sq;
  d["x_star"] = r.x_star;
  d["skipped_phase2"] = r.skipped_phase2;
  d["phase2_updates"] = r.phase2_updates;
  d["phase3_updates"] = r.phase3_updates;
  d["inner_budget"] = r.inner_budget;
  d["phase4_burn"] = r.phase4_burn;
  d["final_acceptance"] = r.final_stats.acceptance_rate();
  py::list trace;
  for (const auto& t : r.trace) {
    py::dict e;
    e["phase"] = t.phase;
    e["sigma2"] = t.sigma2;
    e["r"] = t.r;
    e["steps"] = t.steps;
    e["acceptance"] = t.acceptance;
    trace.append(e);
  }
  d["trace"] = trace;
  return d;
}

// Samples for a problem given as JSON text; seed/None keeps the file's seed.
py::tuple sample_text(const std::string& text, long n, std::optional<std::uint64_t> seed) {
  ProblemFile f = parse_problem_text(text);
  if (seed) f.sampler.seed = *seed;
  CoolingConfig cfg = cooling_config(f.sampler);
  CoolingReport rep;
  std::vector<Vector> xs;
  {
    py::gil_scoped_release release;
    xs = gcdw_sample(f.spec, n, cfg, build_options(f.sampler), &rep);
  }
  return py::make_tuple(stack(xs), report_dict(rep));
}

py::list certify(const std::string& barrier, int points, std::uint64_t seed) {
  Rng rng(seed);
  py::list out;
  bool found = false;
  for (const auto& e : barrier_catalog(rng)) {
    if (barrier != "all" && e.name != barrier) continue;
    found = true;
    const auto pts =
        random_interior_points(*e.metric, e.x0, points, rng, 10, 0.5, e.point_target());
    auto cs = derivative_certificates(e.name, *e.metric, pts, rng);
    cs.push_back(sc_certificate(e.name, *e.metric, pts, rng));
    cs.push_back(ssc_certificate(e.name, *e.metric, pts, rng));
    for (const auto& c : cs) {
      py::dict d;
      d["barrier"] = c.name;
      d["check"] = c.check;
      d["worst"] = c.worst;
      d["threshold"] = c.threshold;
      d["passed"] = c.passed;
      d["nu"] = e.metric->params().nu;
      d["nu_bar"] = e.metric->params().nu_bar;
      out.append(d);
    }
  }
  if (!found) throw py::value_error("unknown barrier '" + barrier + "'");
  return out;
}

}  // namespace

PYBIND11_MODULE(_dikin, m) {
  m.doc() = "Dikin walk sampling with Gaussian cooling.";

  py::register_exception<Error>(m, "DikinError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("sample_text", &sample_text, py::arg("problem_json"), py::arg("n"),
        py::arg("seed") = py::none(),
        "Draw n samples for a JSON problem; returns (array, report).");
  m.def("certify", &certify, py::arg("barrier") = "all", py::arg("points") = 20,
        py::arg("seed") = 0);

  m.def("leverage_scores", [](const Matrix& M) { return leverage_scores(M).sigma; });
  m.def("lewis_weights",
        [](const Matrix& M, double p) { return lewis_weights(M, p).w; },
        py::arg("M"), py::arg("p"));
  m.def("sigma0_squared", &sigma0_squared);
  m.def("sigma_schedule", [](double nu, Index d) {
    std::vector<std::pair<int, double>> out;
    for (const auto& e : sigma_schedule(nu, d, sigma0_squared(d))) out.emplace_back(e.phase, e.sigma2);
    return out;
  });
  m.def("psd_hessian", [](const Matrix& X) { return psd_hessian(X, SvecCodec(X.rows())); });
  m.def("svec", [](const Matrix& X) { return SvecCodec(X.rows()).svec(X); });

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = run_cli(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  });
}
