#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mcdopt/baselines.hpp"
#include "mcdopt/benchfns.hpp"
#include "mcdopt/harness.hpp"
#include "mcdopt/mcd.hpp"

namespace py = pybind11;
using namespace mcdopt;

namespace {

using PyFn = std::function<double(const std::vector<double>&)>;

FunctionObjective wrap(PyFn f, std::vector<double> lower, std::vector<double> upper,
                       std::optional<double> optimum) {
  return FunctionObjective(Box(std::move(lower), std::move(upper)),
                           [f = std::move(f)](std::span<const double> x) {
                             return f(std::vector<double>(x.begin(), x.end()));
                           },
                           optimum);
}

py::list trace_list(const std::vector<TracePoint>& trace) {
  py::list out;
  for (const auto& t : trace) out.append(py::make_tuple(t.nfe, t.best_value));
  return out;
}

py::dict result_dict(const Candidate& best, std::uint64_t used_nfe, const std::vector<TracePoint>& trace) {
  py::dict d;
  d["x"] = best.position;
  d["f"] = *best.value;
  d["used_nfe"] = used_nfe;
  d["trace"] = trace_list(trace);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Modified coordinate descent, DE and CC baselines, benchmark suite and metrics.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InsufficientBudget>(m, "InsufficientBudget", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());

  m.def(
      "restart_plan",
      [](std::uint64_t dim, std::uint64_t max_iter, std::uint64_t max_nfe) {
        const auto p = mcd::restart_plan(dim, max_iter, max_nfe);
        py::dict d;
        d["r_max"] = p.r_max;
        d["planned_nfe"] = p.planned_nfe();
        d["leftover_nfe"] = p.leftover_nfe();
        return d;
      },
      py::arg("dim"), py::arg("max_iter"), py::arg("max_nfe"));

  m.def(
      "run_mcd",
      [](PyFn f, std::vector<double> lower, std::vector<double> upper, std::uint64_t max_iter,
         std::uint64_t max_nfe, std::uint64_t seed, std::optional<std::vector<std::size_t>> permutation) {
        auto obj = wrap(std::move(f), std::move(lower), std::move(upper), std::nullopt);
        mcd::Options opts;
        opts.max_iter = max_iter;
        opts.max_nfe = max_nfe;
        opts.seed = seed;
        opts.permutation = std::move(permutation);
        const auto r = mcd::run(obj, opts);
        py::dict d = result_dict(r.best, r.used_nfe, r.trace);
        d["final_x"] = r.final_s.position;
        d["final_f"] = *r.final_s.value;
        d["r_max"] = r.plan.r_max;
        return d;
      },
      py::arg("f"), py::arg("lower"), py::arg("upper"), py::arg("max_iter") = 10, py::arg("max_nfe") = 1000,
      py::arg("seed") = 0, py::arg("permutation") = py::none(),
      "Minimize f over the box [lower, upper]. `permutation` fixes the dimension order.");

  m.def(
      "run_de",
      [](PyFn f, std::vector<double> lower, std::vector<double> upper, std::uint64_t max_nfe,
         std::uint64_t seed, std::size_t pop_size, double cr, double f_low, double f_high) {
        auto obj = wrap(std::move(f), std::move(lower), std::move(upper), std::nullopt);
        const auto r = baselines::run_de(obj, {pop_size, cr, f_low, f_high}, max_nfe, seed);
        return result_dict(r.best, r.used_nfe, r.trace);
      },
      py::arg("f"), py::arg("lower"), py::arg("upper"), py::arg("max_nfe"), py::arg("seed") = 0,
      py::arg("pop_size") = 50, py::arg("cr") = 0.9, py::arg("f_low") = 0.2, py::arg("f_high") = 0.8);

  m.def(
      "run_cc",
      [](PyFn f, std::vector<double> lower, std::vector<double> upper, std::uint64_t max_nfe,
         std::uint64_t seed, std::size_t pop_size, double F, double cr, std::size_t num_groups) {
        auto obj = wrap(std::move(f), std::move(lower), std::move(upper), std::nullopt);
        const auto r = baselines::run_cc(obj, {pop_size, F, cr, num_groups}, max_nfe, seed);
        return result_dict(r.best, r.used_nfe, r.trace);
      },
      py::arg("f"), py::arg("lower"), py::arg("upper"), py::arg("max_nfe"), py::arg("seed") = 0,
      py::arg("pop_size") = 50, py::arg("F") = 0.5, py::arg("cr") = 0.9, py::arg("num_groups") = 10);

  m.def("delta_grouping", &baselines::delta_grouping, py::arg("deltas"), py::arg("num_groups"));

  m.def(
      "compute_iar",
      [](double err_baseline, double err_mcd) {
        const auto r = harness::compute_iar(err_baseline, err_mcd);
        return py::make_tuple(r.value, r.zero_denominator);
      },
      py::arg("err_baseline"), py::arg("err_mcd"), "Returns (iar, zero_denominator).");

  m.def(
      "tally_wtl",
      [](const std::vector<double>& mcd_errors, const std::vector<double>& baseline_errors, double eps) {
        const auto w = harness::tally_wtl(mcd_errors, baseline_errors, eps);
        return py::make_tuple(w.wins, w.ties, w.losses);
      },
      py::arg("errors_mcd"), py::arg("errors_baseline"), py::arg("rel_epsilon") = 0.0);

  py::class_<bench::BenchFunction>(m, "BenchFunction")
      .def_property_readonly("name", &bench::BenchFunction::name)
      .def_property_readonly("category", [](const bench::BenchFunction& f) { return bench::to_string(f.category()); })
      .def_property_readonly("dim", &bench::BenchFunction::dim)
      .def_property_readonly("shift", &bench::BenchFunction::shift)
      .def_property_readonly("lower", [](const bench::BenchFunction& f) { return f.box().lower(); })
      .def_property_readonly("upper", [](const bench::BenchFunction& f) { return f.box().upper(); })
      .def("__call__", [](const bench::BenchFunction& f, const std::vector<double>& x) {
        return bench::eval_bench(f, x);
      });

  m.def("suite_names", &bench::suite_names);
  m.def("make_suite", &bench::make_suite, py::arg("dim"), py::arg("seed"));
  m.def("suite_manifest_json", &bench::suite_manifest_json, py::arg("suite"), py::arg("seed"));
}
