#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "grekit/config.hpp"
#include "grekit/convex_eta.hpp"
#include "grekit/growth_frag.hpp"
#include "grekit/transport_slab.hpp"
#include "grekit/weighted_ops.hpp"

namespace py = pybind11;
using namespace grekit;

namespace {

nlohmann::json to_cpp_json(const py::object& obj) {
  const auto text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return nlohmann::json::parse(text);
}

Measure measure_or_unit(const std::optional<Eigen::VectorXd>& w, Index n) {
  return w ? Measure(*w) : Measure::uniform(n);
}

PositiveOperator make_operator(const Eigen::MatrixXd& m, const std::optional<Eigen::VectorXd>& mu1,
                               const std::optional<Eigen::VectorXd>& mu2) {
  return PositiveOperator(m, measure_or_unit(mu1, m.cols()), measure_or_unit(mu2, m.rows()));
}

py::dict report_dict(const MarginReport& r) {
  py::dict d;
  d["margins"] = r.margins;
  d["scales"] = r.scales;
  d["min_margin"] = r.min_margin;
  d["argmin_index"] = r.argmin_index;
  d["passed"] = r.passed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Perspective functions, entropy inequalities for positive operators, and GRE runs.";

  py::register_exception<Error>(m, "GrekitError", PyExc_ValueError);

  py::class_<ConvexEta>(m, "ConvexEta")
      .def_static("kl", &ConvexEta::kl)
      .def_static("quad", &ConvexEta::quad)
      .def_static("tv", &ConvexEta::tv)
      .def_static("power", &ConvexEta::power, py::arg("p"))
      .def_static(
          "piecewise_affine",
          [](const std::vector<std::pair<double, double>>& pieces) {
            std::vector<AffinePiece> out;
            for (auto [a, b] : pieces) out.push_back({a, b});
            return ConvexEta::piecewise_affine(std::move(out));
          },
          py::arg("pieces"))
      .def_static("from_json",
                  [](const std::string& text) { return eta_from_json(nlohmann::json::parse(text)); })
      .def("to_json",
           [](const ConvexEta& e) {
             nlohmann::json j;
             to_json(j, e);
             return j.dump();
           })
      .def("__call__", [](const ConvexEta& e, double x) { return e(x).to_double(); })
      .def_property_readonly("recession_slope",
                             [](const ConvexEta& e) { return e.recession_slope().to_double(); })
      .def_property_readonly("name", &ConvexEta::name)
      .def("__repr__", [](const ConvexEta& e) { return "<ConvexEta " + e.name() + ">"; });

  m.def("phi_eta", [](const ConvexEta& e, double u, double v) { return phi_eta(e, u, v).to_double(); },
        py::arg("eta"), py::arg("u"), py::arg("v"));
  m.def("tangent_minorant",
        [](const ConvexEta& e, const std::vector<double>& s) { return tangent_minorant(e, s); },
        py::arg("eta"), py::arg("sample_points"));
  m.def("is_nonnegative", &is_nonnegative, py::arg("eta"));

  m.def(
      "classify_stochasticity",
      [](const Eigen::MatrixXd& mat, std::optional<Eigen::VectorXd> mu1,
         std::optional<Eigen::VectorXd> mu2) {
        return std::string(to_string(make_operator(mat, mu1, mu2).stochasticity()));
      },
      py::arg("matrix"), py::arg("domain_measure") = py::none(),
      py::arg("codomain_measure") = py::none());

  m.def(
      "relative_entropy",
      [](const ConvexEta& e, const Eigen::VectorXd& f, const Eigen::VectorXd& g,
         std::optional<Eigen::VectorXd> mu) {
        return relative_entropy(e, GridFunction(f), GridFunction(g), measure_or_unit(mu, f.size()))
            .to_double();
      },
      py::arg("eta"), py::arg("f"), py::arg("g"), py::arg("measure") = py::none());

  m.def(
      "verify_lr",
      [](const Eigen::MatrixXd& mat, const ConvexEta& e, const Eigen::VectorXd& f,
         const Eigen::VectorXd& g, double tol, std::optional<Eigen::VectorXd> mu1,
         std::optional<Eigen::VectorXd> mu2) {
        return report_dict(verify_lr(make_operator(mat, mu1, mu2), e, GridFunction(f), GridFunction(g), tol));
      },
      py::arg("matrix"), py::arg("eta"), py::arg("f"), py::arg("g"), py::arg("tolerance") = 1e-9,
      py::arg("domain_measure") = py::none(), py::arg("codomain_measure") = py::none());

  m.def(
      "verify_csiszar",
      [](const Eigen::MatrixXd& mat, const ConvexEta& e, const Eigen::VectorXd& f,
         const Eigen::VectorXd& g, double tol, std::optional<Eigen::VectorXd> mu1,
         std::optional<Eigen::VectorXd> mu2) {
        return report_dict(
            verify_csiszar(make_operator(mat, mu1, mu2), e, GridFunction(f), GridFunction(g), tol));
      },
      py::arg("matrix"), py::arg("eta"), py::arg("f"), py::arg("g"), py::arg("tolerance") = 1e-9,
      py::arg("domain_measure") = py::none(), py::arg("codomain_measure") = py::none());

  m.def(
      "power_iterate_gre",
      [](const Eigen::MatrixXd& mat, const ConvexEta& e, const Eigen::VectorXd& f0,
         const Eigen::VectorXd& g0, std::size_t steps, std::optional<Eigen::VectorXd> mu) {
        const auto trace =
            power_iterate_gre(make_operator(mat, mu, mu), e, GridFunction(f0), GridFunction(g0), steps);
        std::vector<double> entropy, mass, margin;
        for (const auto& r : trace.rows) {
          entropy.push_back(r.entropy.to_double());
          mass.push_back(r.mass);
          margin.push_back(r.step_margin);
        }
        py::dict d;
        d["entropy"] = entropy;
        d["mass"] = mass;
        d["step_margin"] = margin;
        return d;
      },
      py::arg("matrix"), py::arg("eta"), py::arg("f0"), py::arg("g0"), py::arg("steps"),
      py::arg("measure") = py::none());

  m.def(
      "build_generator",
      [](const py::object& config) {
        return build_generator(growth_setup_from_json(to_cpp_json(config)).config).matrix;
      },
      py::arg("config"));

  m.def(
      "run_growth",
      [](const py::object& config) {
        const auto s = growth_setup_from_json(to_cpp_json(config));
        const auto trace = run_growth(s.config, s.n0, s.m0);
        std::vector<double> t, entropy, mass, margin;
        for (const auto& r : trace.rows) {
          t.push_back(r.t);
          entropy.push_back(r.entropy.to_double());
          mass.push_back(r.weighted_mass);
          margin.push_back(r.csiszar_margin);
        }
        py::dict d;
        d["t"] = t;
        d["entropy"] = entropy;
        d["weighted_mass"] = mass;
        d["csiszar_margin"] = margin;
        d["dt"] = trace.dt;
        d["conservation_residual"] = trace.conservation_residual();
        d["max_entropy_increase"] = trace.max_scaled_increase();
        d["max_stochasticity_residual"] = trace.max_stochasticity_residual();
        return d;
      },
      py::arg("config"));

  m.def(
      "run_transport",
      [](const py::object& config) {
        const auto s = transport_setup_from_json(to_cpp_json(config));
        const auto trace = run_transport(s.config, s.f0, s.g0);
        std::vector<double> t, mf, mg, entropy, lr;
        for (const auto& r : trace.rows) {
          t.push_back(r.t);
          mf.push_back(r.mass_f);
          mg.push_back(r.mass_g);
          entropy.push_back(r.entropy.to_double());
          lr.push_back(r.lr_min_margin);
        }
        py::dict d;
        d["t"] = t;
        d["mass_f"] = mf;
        d["mass_g"] = mg;
        d["entropy"] = entropy;
        d["lr_min_margin"] = lr;
        d["dt"] = trace.dt;
        d["update"] = std::string(to_string(trace.update_kind));
        d["max_entropy_increase"] = trace.max_scaled_increase();
        d["min_g"] = trace.min_g();
        return d;
      },
      py::arg("config"));
}
