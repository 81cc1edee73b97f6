#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>
#include "helmfci/cli/config.hpp"
#include "helmfci/cli/run.hpp"
#include "helmfci/core/error.hpp"
#include "helmfci/fci/outer.hpp"
#include "helmfci/fci/setup.hpp"
#include "helmfci/polysolve/scheme.hpp"
#include "helmfci/spectrum/impedance.hpp"

namespace py = pybind11;
using namespace helmfci;

namespace
{

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

// Fields are (n3, n2, n1) arrays, x fastest, matching the library's storage order.
ComplexVector to_vector(const ComplexArray &a, const Grid3 &g)
{
  if (static_cast<std::size_t>(a.size()) != g.size())
  {
    throw DimensionError("array has " + std::to_string(a.size()) + " entries, grid has " +
                         std::to_string(g.size()));
  }
  return {a.data(), a.data() + a.size()};
}

ComplexArray to_array(const ComplexVector &v, const Grid3 &g)
{
  ComplexArray out({g.n3, g.n2, g.n1});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict scheme_dict(const PolyScheme &s)
{
  py::dict d;
  d["q"] = s.q;
  d["delta"] = s.delta;
  d["z0"] = s.z0;
  d["z"] = s.z;
  d["nu"] = s.nu;
  d["nu_per_matvec"] = s.nu_per_matvec();
  d["predicted_mvs"] = s.predicted_mvs;
  return d;
}

TuneOptions tune_options(int q_max, double target, double delta_step)
{
  TuneOptions o;
  o.q_max = q_max;
  o.target = target;
  o.delta_step = delta_step;
  return o;
}

py::tuple solve(int n1, int n2, int n3, double l_min, const std::string &model, double contrast,
                std::optional<ComplexArray> rhs, double tol, int max_its,
                const std::string &formulation, const std::string &discretization,
                int sponge_width, int inner_its)
{
  const Grid3 g{n1, n2, n3, l_min};
  g.validate();
  WavespeedModel m;
  if (model == "uniform")
  {
    m = WavespeedModel::uniform(g);
  }
  else if (model == "eight_anomaly")
  {
    m = WavespeedModel::eight_anomaly(g, contrast);
  }
  else
  {
    throw ConfigurationError("model must be 'uniform' or 'eight_anomaly', got '" + model + "'");
  }
  ProblemOptions po;
  po.sponge_width = sponge_width;
  if (formulation == "doubled")
  {
    po.formulation = Formulation::Doubled;
  }
  else if (formulation != "single")
  {
    throw ConfigurationError("formulation must be 'single' or 'doubled'");
  }
  if (discretization == "fd7")
  {
    po.discretization = Discretization::Fd7;
  }
  else if (discretization != "spectral")
  {
    throw ConfigurationError("discretization must be 'spectral' or 'fd7'");
  }
  ComplexVector f(g.size(), 0.0);
  if (rhs)
  {
    f = to_vector(*rhs, g);
  }
  else
  {
    f[g.index(n1 / 2, n2 / 2, n3 / 2)] = 1.0;
  }

  OuterResult r;
  {
    py::gil_scoped_release release;
    const auto p = build_problem(m, po);
    OuterOptions oo;
    oo.tol = tol;
    oo.max_its = max_its;
    r = outer_solve(p, f, make_fci_config(p, {}, {}, inner_its), oo);
  }
  py::dict info;
  info["status"] = std::string(to_string(r.status));
  info["its"] = r.stats.its;
  info["mvs"] = r.stats.mvs;
  info["true_residual"] = r.true_residual;
  std::vector<double> history;
  for (const auto &h : r.stats.residual_history)
  {
    history.push_back(h.relative_residual);
  }
  info["residuals"] = history;
  return py::make_tuple(to_array(r.u, g), info);
}

py::tuple run_config(const std::string &config_json, const std::string &output_dir)
{
  auto cfg = cli::parse_run_config(nlohmann::json::parse(config_json));
  if (!output_dir.empty())
  {
    cfg.output_dir = output_dir;
  }
  std::ostringstream log;
  cli::RunOutcome out;
  {
    py::gil_scoped_release release;
    out = cli::run(cfg, log);
  }
  std::vector<std::string> files;
  for (const auto &p : out.files)
  {
    files.push_back(p.string());
  }
  return py::make_tuple(out.exit_code, out.message, files, log.str());
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Contour-integration preconditioned Helmholtz solver";

  static py::exception<IoError> io_error(m, "IoError", PyExc_OSError);
  static py::exception<DivergenceError> divergence_error(m, "DivergenceError", PyExc_RuntimeError);
  py::register_exception_translator(
      [](std::exception_ptr p)
      {
        try
        {
          if (p)
          {
            std::rethrow_exception(p);
          }
        }
        catch (const IoError &e)
        {
          py::set_error(io_error, e.what());
        }
        catch (const DivergenceError &e)
        {
          py::set_error(divergence_error, e.what());
        }
      });

  m.def(
      "tune_scheme",
      [](double b1, double b2, double depth, Complex z, int q_max, double target, double step)
      { return scheme_dict(tune_scheme({b1, b2, depth}, z, tune_options(q_max, target, step))); },
      py::arg("b1"), py::arg("b2"), py::arg("depth"), py::arg("z"), py::arg("q_max") = 5,
      py::arg("target") = 1e-2, py::arg("delta_step") = 0.0,
      "Tuned polynomial scheme with the smallest per-matvec rate for shift z.");
  m.def(
      "tune_all",
      [](double b1, double b2, double depth, Complex z, int q_max, double target, double step)
      {
        py::list rows;
        for (const auto &s : tune_all({b1, b2, depth}, z, tune_options(q_max, target, step)))
        {
          rows.append(scheme_dict(s));
        }
        return rows;
      },
      py::arg("b1"), py::arg("b2"), py::arg("depth"), py::arg("z"), py::arg("q_max") = 5,
      py::arg("target") = 1e-2, py::arg("delta_step") = 0.0, "One tuned scheme per degree q.");
  m.def(
      "richardson_optimal",
      [](double b1, double b2, double depth, Complex z)
      {
        const auto r = richardson_optimal({b1, b2, depth}, z);
        return py::make_tuple(r.p_star, r.rate);
      },
      py::arg("b1"), py::arg("b2"), py::arg("depth"), py::arg("z"),
      "Optimal Richardson step and its rate (p_star, rate).");
  m.def(
      "impedance_roots",
      [](double omega, int count)
      {
        const auto r = impedance_phase_roots(omega, count);
        return py::make_tuple(r.roots, r.branch);
      },
      py::arg("omega"), py::arg("count"));
  m.def("impedance_residual", &impedance_residual, py::arg("omega"), py::arg("z"), py::arg("sign"));
  m.def("tensor_gap_2d", &tensor_gap_2d, py::arg("omega"), py::arg("window") = 0.5);
  m.def("solve", &solve, py::arg("n1"), py::arg("n2"), py::arg("n3"), py::arg("l_min") = 2.25,
        py::arg("model") = "uniform", py::arg("contrast") = 2.0, py::arg("rhs") = py::none(),
        py::arg("tol") = 1e-6, py::arg("max_its") = 100, py::arg("formulation") = "single",
        py::arg("discretization") = "spectral", py::arg("sponge_width") = -1,
        py::arg("inner_its") = 10);
  m.def("_run", &run_config, py::arg("config_json"), py::arg("output_dir") = "");
}
