#include "stackplace/errors.hpp"
#include "stackplace/estimate.hpp"
#include "stackplace/harness.hpp"
#include "stackplace/spatial.hpp"
#include "stackplace/trace_io.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
namespace sp = stackplace;

PYBIND11_MODULE(_stackplace, m) {
  m.doc() = "Force-torque guided stacking core";

  py::register_exception<sp::DegenerateNormalForce>(m, "DegenerateNormalForce", PyExc_ValueError);
  py::register_exception<sp::ScenarioError>(m, "ScenarioError", PyExc_ValueError);

  py::class_<sp::Wrench>(m, "Wrench")
      .def(py::init<>())
      .def(py::init<const sp::Vec3&, const sp::Vec3&>(), py::arg("torque"), py::arg("force"))
      .def_readwrite("torque", &sp::Wrench::torque)
      .def_readwrite("force", &sp::Wrench::force)
      .def("as_vector", &sp::Wrench::as_vector)
      .def("__repr__", [](const sp::Wrench& w) {
        std::ostringstream s;
        s << "Wrench(torque=[" << w.torque.transpose() << "], force=[" << w.force.transpose()
          << "])";
        return s.str();
      });

  py::class_<sp::RigidTransform>(m, "RigidTransform")
      .def(py::init<>())
      .def(py::init<const sp::Mat3&, const sp::Vec3&>(), py::arg("rotation"),
           py::arg("translation"))
      .def_static("from_axis_angle", &sp::RigidTransform::from_axis_angle, py::arg("axis"),
                  py::arg("angle"), py::arg("translation") = sp::Vec3::Zero())
      .def_static("from_translation", &sp::RigidTransform::from_translation)
      .def_property_readonly("rotation", &sp::RigidTransform::rotation)
      .def_property_readonly("translation", &sp::RigidTransform::translation)
      .def("apply", &sp::RigidTransform::apply)
      .def("adjoint", &sp::RigidTransform::adjoint)
      .def("inverse", [](const sp::RigidTransform& g) { return sp::invert(g); })
      .def("__matmul__", [](const sp::RigidTransform& a, const sp::RigidTransform& b) {
        return sp::compose(a, b);
      });

  m.def("transform_wrench",
        py::overload_cast<const sp::RigidTransform&, const sp::Wrench&>(&sp::transform_wrench),
        py::arg("g_ab"), py::arg("wrench_a"));
  m.def("tangent_projection", &sp::tangent_projection, py::arg("v"), py::arg("n_hat"));
  m.def("recover_contact_offset", &sp::recover_contact_offset, py::arg("normal_force"),
        py::arg("torque"), py::arg("force_floor") = sp::kDefaultForceFloor);
  m.def("flat_direction", &sp::flat_direction, py::arg("n_hat"));
  m.def(
      "estimate_contact",
      [](const sp::Wrench& push, const sp::Vec3& gravity, double floor) {
        const sp::ContactEstimate e = sp::estimate_contact(push, gravity, floor);
        py::dict d;
        d["normal_force"] = e.normal_force;
        d["normal_dir"] = e.normal_dir;
        d["contact_offset_tangent"] = e.contact_offset_tangent;
        d["flat_dir"] = e.flat_dir;
        d["press_magnitude"] = e.press_magnitude;
        return d;
      },
      py::arg("push_at_com"), py::arg("gravity"), py::arg("force_floor") = sp::kDefaultForceFloor);
  m.def("wilson_interval", [](int k, int n) {
    const sp::Interval i = sp::wilson_interval(k, n);
    return py::make_tuple(i.low, i.high);
  });

  m.def(
      "parse_scenario",
      [](const std::string& text) { return sp::serialize_scenario(sp::parse_scenario(text)); },
      py::arg("text"), "Parse scenario JSON and return its canonical serialization.");
  m.def(
      "run_scenario_json",
      [](const std::string& path, std::optional<std::uint64_t> seed, int jobs,
         const std::string& out_dir) {
        sp::RunOptions o;
        o.seed = seed;
        o.jobs = jobs;
        o.out_dir = out_dir;
        py::gil_scoped_release release;
        return sp::run_scenario(path, o).to_json();
      },
      py::arg("path"), py::arg("seed") = py::none(), py::arg("jobs") = 1,
      py::arg("out_dir") = "");
  m.def(
      "plot_data",
      [](const std::string& trace_path) {
        std::ostringstream out;
        sp::emit_contact_plot_data(sp::read_trace(std::filesystem::path(trace_path)), out);
        return out.str();
      },
      py::arg("trace_path"));
}
