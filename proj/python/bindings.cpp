#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flatsat/certificate_io.hpp"
#include "flatsat/constraint_sets.hpp"
#include "flatsat/errors.hpp"
#include "flatsat/flat_model.hpp"
#include "flatsat/run_config.hpp"
#include "flatsat/saturation.hpp"
#include "flatsat/simulation.hpp"
#include "flatsat/synthesis.hpp"
#include "flatsat/trace_io.hpp"

namespace py = pybind11;
using namespace flatsat;

namespace {

py::dict trace_arrays(const Trace& trace) {
  const auto n = static_cast<Eigen::Index>(trace.rows.size());
  Eigen::VectorXd t(n), lyap(n), lambda(n);
  Eigen::Matrix<double, Eigen::Dynamic, 6, Eigen::RowMajor> xi(n, 6), ref(n, 6);
  Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> v(n, 3), u(n, 3);
  std::vector<bool> saturated(trace.rows.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const TraceRow& r = trace.rows[static_cast<std::size_t>(i)];
    t(i) = r.t;
    xi.row(i) = r.xi.transpose();
    ref.row(i) = r.xi_ref.transpose();
    v.row(i) = r.v.transpose();
    u.row(i) << r.u.thrust, r.u.roll, r.u.pitch;
    lyap(i) = r.lyapunov;
    lambda(i) = r.lambda;
    saturated[static_cast<std::size_t>(i)] = r.saturated;
  }
  py::dict d;
  d["t"] = t;
  d["xi"] = xi;
  d["xi_ref"] = ref;
  d["v"] = v;
  d["u"] = u;
  d["lyapunov"] = lyap;
  d["lambda"] = lambda;
  d["saturated"] = saturated;
  d["violations"] = trace.violations;
  d["aborted"] = trace.aborted;
  d["clean"] = trace.clean();
  return d;
}

}  // namespace

PYBIND11_MODULE(_flatsat, m) {
  m.doc() = "Flat-output input saturation and invariant-ellipsoid synthesis for quadrotors";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SynthesisError>(m, "SynthesisError", PyExc_RuntimeError);

  py::class_<PhysicalInput>(m, "PhysicalInput")
      .def(py::init<>())
      .def(py::init([](double t, double r, double p) { return PhysicalInput{t, r, p}; }),
           py::arg("thrust"), py::arg("roll"), py::arg("pitch"))
      .def_readwrite("thrust", &PhysicalInput::thrust)
      .def_readwrite("roll", &PhysicalInput::roll)
      .def_readwrite("pitch", &PhysicalInput::pitch)
      .def("__repr__", [](const PhysicalInput& u) {
        return "PhysicalInput(thrust=" + std::to_string(u.thrust) + ", roll=" +
               std::to_string(u.roll) + ", pitch=" + std::to_string(u.pitch) + ")";
      });

  py::class_<ConstraintParams>(m, "ConstraintParams")
      .def(py::init<double, double, double, double>(), py::arg("g"), py::arg("t_max"),
           py::arg("phi_max"), py::arg("theta_max"))
      .def_static("reference", &ConstraintParams::reference)
      .def_property_readonly("g", &ConstraintParams::g)
      .def_property_readonly("t_max", &ConstraintParams::t_max)
      .def_property_readonly("phi_max", &ConstraintParams::phi_max)
      .def_property_readonly("theta_max", &ConstraintParams::theta_max)
      .def_property_readonly("eps_max", &ConstraintParams::eps_max);

  m.def("accel", &accel, py::arg("u"), py::arg("psi"), py::arg("g") = kDefaultGravity);
  m.def("to_physical", &to_physical, py::arg("v"), py::arg("psi"), py::arg("g") = kDefaultGravity);
  m.def("flat_dynamics", &flat_dynamics, py::arg("xi"), py::arg("v"));
  m.def("in_u", &in_u, py::arg("u"), py::arg("params"), py::arg("tol") = 0.0);
  m.def("in_vc", &in_vc, py::arg("v"), py::arg("params"), py::arg("tol") = kMembershipTol);
  m.def("epsilon_angle", &epsilon_angle, py::arg("v"), py::arg("g") = kDefaultGravity);
  m.def("max_inscribed_ball", [](const ConstraintParams& p) { return max_inscribed_ball(p).rho; },
        py::arg("params"));

  py::enum_<ActiveConstraint>(m, "ActiveConstraint")
      .value("none", ActiveConstraint::kNone)
      .value("ball", ActiveConstraint::kBall)
      .value("cone", ActiveConstraint::kCone)
      .value("halfspace", ActiveConstraint::kHalfspace);

  py::class_<SaturationResult>(m, "SaturationResult")
      .def_readonly("v_out", &SaturationResult::v_out)
      .def_readonly("lambda_", &SaturationResult::lambda)
      .def_readonly("saturated", &SaturationResult::saturated)
      .def_readonly("active", &SaturationResult::active);

  m.def("candidate_set",
        [](const FlatInput& v, const ConstraintParams& p) {
          const CandidateSet c = candidate_set(v, p);
          return std::vector<double>(c.begin(), c.end());
        },
        py::arg("v"), py::arg("params"));
  m.def("saturate", &saturate, py::arg("v"), py::arg("params"), py::arg("tol") = kMembershipTol);
  m.def("saturate_oracle", &saturate_oracle, py::arg("v"), py::arg("params"),
        py::arg("iters") = 60);

  py::class_<GainMatrix>(m, "GainMatrix")
      .def(py::init([](double p1, double p2, double p3, double alpha) {
             return GainMatrix{p1, p2, p3, alpha};
           }),
           py::arg("p1"), py::arg("p2"), py::arg("p3"), py::arg("alpha"))
      .def_readwrite("p1", &GainMatrix::p1)
      .def_readwrite("p2", &GainMatrix::p2)
      .def_readwrite("p3", &GainMatrix::p3)
      .def_readwrite("alpha", &GainMatrix::alpha)
      .def("dense", &GainMatrix::dense);

  py::class_<Margins>(m, "Margins")
      .def(py::init<>())
      .def_readwrite("lmi", &Margins::lmi)
      .def_readwrite("cert", &Margins::cert)
      .def_readwrite("identity", &Margins::identity)
      .def_readwrite("table", &Margins::table);

  py::class_<EllipsoidCert>(m, "EllipsoidCert")
      .def_readwrite("gain", &EllipsoidCert::gain)
      .def_readwrite("rho", &EllipsoidCert::rho)
      .def_readwrite("eps", &EllipsoidCert::eps)
      .def_readwrite("gamma", &EllipsoidCert::gamma)
      .def_readwrite("tau", &EllipsoidCert::tau);

  m.def("lyapunov_residual", &lyapunov_residual, py::arg("gain"));
  m.def("solve_stabilizing_p", &solve_stabilizing_p, py::arg("alpha"), py::arg("margin") = 1e-6);
  m.def("eps_max",
        [](const GainMatrix& gain, double rho) {
          const EpsMax e = eps_max(gain, rho);
          return py::make_tuple(e.eps, e.tau);
        },
        py::arg("gain"), py::arg("rho"));
  m.def("certificate_for_gain", &certificate_for_gain, py::arg("params"), py::arg("gain"),
        py::arg("gamma") = 1.0);
  m.def("run_procedure_1", &run_procedure_1, py::arg("params"), py::arg("alpha"),
        py::arg("gamma") = 1.0, py::arg("margin") = 1e-6);

  py::class_<VerificationReport>(m, "VerificationReport")
      .def_readonly("seed", &VerificationReport::seed)
      .def_readonly("samples", &VerificationReport::samples)
      .def_readonly("saturated", &VerificationReport::saturated)
      .def_readonly("nagumo_failures", &VerificationReport::nagumo_failures)
      .def_readonly("decay_failures", &VerificationReport::decay_failures)
      .def_readonly("gain_failures", &VerificationReport::gain_failures)
      .def_readonly("worst_nagumo", &VerificationReport::worst_nagumo)
      .def_readonly("worst_decay", &VerificationReport::worst_decay)
      .def_readonly("worst_state", &VerificationReport::worst_state)
      .def_property_readonly("passed", &VerificationReport::passed);
  m.def("verify_cert", &verify_cert, py::arg("cert"), py::arg("params"),
        py::arg("samples") = 10000, py::arg("seed") = 1, py::arg("margins") = Margins{});

  m.def("load_run_config", [](const std::string& path) { return load_run_config(path); });
  py::class_<RunConfig>(m, "RunConfig");

  m.def("simulate",
        [](const std::string& config_yaml, std::optional<FlatState> initial_state) {
          RunConfig config = parse_run_config(config_yaml);
          if (initial_state) config.scenario.initial_state = *initial_state;
          const CertificateDocument doc = synthesize(config);
          const Scenario scenario = make_scenario(config, doc);
          scenario.validate();
          Trace trace;
          {
            py::gil_scoped_release release;
            trace = run(scenario);
          }
          const Metrics mt = metrics(trace, scenario, config.scenario.steady_start);
          py::dict out = trace_arrays(trace);
          out["rms_position_error"] = mt.rms_position_error;
          out["max_position_error"] = mt.max_position_error;
          out["max_level_ratio"] = mt.max_level_ratio;
          out["saturation_duty"] = mt.saturation_duty;
          out["eps"] = doc.cert.eps;
          return out;
        },
        py::arg("config_yaml") = std::string(), py::arg("initial_state") = py::none(),
        "Run one scenario described by a YAML run configuration string.");
}
