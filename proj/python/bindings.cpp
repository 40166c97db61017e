#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "jws/verification.hpp"

namespace py = pybind11;
using namespace jws;

namespace {

py::array_t<std::uint8_t> codes_array(const GridField& g) {
  py::array_t<std::uint8_t> out({static_cast<py::ssize_t>(g.height()), static_cast<py::ssize_t>(g.width())});
  std::copy(g.codes().begin(), g.codes().end(), out.mutable_data());
  return out;
}

GridField grid_from_array(py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> codes, const Region& region,
                          const GridMeta& meta) {
  if (codes.ndim() != 2) throw py::value_error("codes must be a 2-d array (rows, columns)");
  const auto h = static_cast<std::uint32_t>(codes.shape(0)), w = static_cast<std::uint32_t>(codes.shape(1));
  return GridField(region, w, h, std::vector<std::uint8_t>(codes.data(), codes.data() + codes.size()), meta);
}

std::string dump(const VerificationReport& r) { return r.to_json().dump(2); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Julia sets of transcendental entire functions: rasters, spider's-web loops and checks";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<GridFormatError>(m, "GridFormatError", PyExc_ValueError);

  py::class_<FunctionSpec>(m, "FunctionSpec")
      .def_static("sin", &FunctionSpec::sin)
      .def_static("lambda_sin", &FunctionSpec::lambda_sin, py::arg("lam"))
      .def_static("lambda_z_exp", &FunctionSpec::lambda_z_exp, py::arg("lam"))
      .def_static("morosawa_g", &FunctionSpec::morosawa_g, py::arg("a"))
      .def_static("bergweiler_morosawa_cos", &FunctionSpec::bergweiler_morosawa_cos, py::arg("a"))
      .def_static(
          "from_name",
          [](const std::string& name, const std::vector<double>& params) { return FunctionSpec::from_name(name, params); },
          py::arg("name"), py::arg("params") = std::vector<double>{})
      .def_static("catalog_names", &FunctionSpec::catalog_names)
      .def_property_readonly("name", &FunctionSpec::name)
      .def_property_readonly("parameters", &FunctionSpec::parameters)
      .def("singular_values", &FunctionSpec::singular_values)
      .def("__eq__", [](const FunctionSpec& a, const FunctionSpec& b) { return a == b; })
      .def("__repr__", [](const FunctionSpec& f) { return "FunctionSpec(" + f.name() + ")"; });

  m.def(
      "eval",
      [](const FunctionSpec& f, Complex z) -> std::optional<Complex> { return eval(f, z); },
      py::arg("spec"), py::arg("z"), "f(z), or None when |f(z)| exceeds 1e300");
  m.def("chordal_distance", py::overload_cast<Complex, Complex>(&chordal_distance), py::arg("z"), py::arg("w"));
  m.def(
      "chordal_distance_to_infinity", [](Complex z) { return chordal_distance(z, infinity); }, py::arg("z"));

  m.def("log_max_modulus", &log_max_modulus, py::arg("spec"), py::arg("r"), py::arg("n_samples") = 1024);
  m.def("find_escape_radius", &find_escape_radius, py::arg("spec"));

  py::class_<MaxModulusTable>(m, "MaxModulusTable")
      .def_readonly("spec", &MaxModulusTable::spec)
      .def_readonly("radius", &MaxModulusTable::radius)
      .def_readonly("log_levels", &MaxModulusTable::log_levels)
      .def_readonly("saturated_at", &MaxModulusTable::saturated_at)
      .def_property_readonly("depth", &MaxModulusTable::depth);
  m.def("build_table", &build_table, py::arg("spec"), py::arg("radius"), py::arg("depth") = 24);

  py::enum_<Tag>(m, "Tag")
      .value("FastEscaping", Tag::FastEscaping)
      .value("Escaping", Tag::Escaping)
      .value("Undetermined", Tag::Undetermined)
      .value("Attracted", Tag::Attracted);

  py::class_<Label>(m, "Label")
      .def_readonly("tag", &Label::tag)
      .def_readonly("cycle", &Label::cycle)
      .def_property_readonly("code", &Label::code)
      .def("__eq__", [](const Label& a, const Label& b) { return a == b; })
      .def("__repr__", [](const Label& l) { return to_string(l); });

  py::class_<CycleRecord>(m, "CycleRecord")
      .def_readonly("id", &CycleRecord::id)
      .def_readonly("points", &CycleRecord::points)
      .def_readonly("period", &CycleRecord::period)
      .def_readonly("multiplier_modulus", &CycleRecord::multiplier_modulus)
      .def_readonly("parabolic", &CycleRecord::parabolic);

  py::class_<Dynamics>(m, "Dynamics")
      .def_readonly("spec", &Dynamics::spec)
      .def_readonly("table", &Dynamics::table)
      .def_readonly("cycles", &Dynamics::cycles)
      .def(
          "classify", [](const Dynamics& d, Complex z) { return d.classifier()(z); }, py::arg("z"))
      .def(
          "in_A_R", [](const Dynamics& d, Complex z, std::size_t horizon) { return in_A_R(d.spec, z, d.table, horizon); },
          py::arg("z"), py::arg("horizon") = 5);

  m.def(
      "prepare_dynamics",
      [](const FunctionSpec& f, std::size_t depth, std::size_t max_iter) {
        return prepare_dynamics(f, depth, ClassifyParams{max_iter});
      },
      py::arg("spec"), py::arg("depth") = 24, py::arg("max_iter") = 10000);

  m.def(
      "search_lambda_sin",
      [](int grid, double max_multiplier) -> std::optional<Complex> {
        const auto found = search_lambda_sin(grid, max_multiplier);
        return found ? std::optional<Complex>(found->lambda) : std::nullopt;
      },
      py::arg("grid") = 100, py::arg("max_multiplier") = 0.9);

  py::class_<Region>(m, "Region")
      .def(py::init<double, double, double, double>(), py::arg("x_min") = -20.0, py::arg("x_max") = 20.0,
           py::arg("y_min") = -20.0, py::arg("y_max") = 20.0)
      .def_readwrite("x_min", &Region::x_min)
      .def_readwrite("x_max", &Region::x_max)
      .def_readwrite("y_min", &Region::y_min)
      .def_readwrite("y_max", &Region::y_max)
      .def("validate", &Region::validate);

  py::class_<GridMeta>(m, "GridMeta")
      .def(py::init<>())
      .def_readwrite("spec_name", &GridMeta::spec_name)
      .def_readwrite("parameters", &GridMeta::parameters)
      .def_readwrite("horizon", &GridMeta::horizon)
      .def_readwrite("max_iter", &GridMeta::max_iter)
      .def_readwrite("radius", &GridMeta::radius);

  py::class_<GridField>(m, "GridField")
      .def(py::init(&grid_from_array), py::arg("codes"), py::arg("region"), py::arg("meta"))
      .def_property_readonly("region", &GridField::region)
      .def_property_readonly("width", &GridField::width)
      .def_property_readonly("height", &GridField::height)
      .def_property_readonly("meta", &GridField::meta)
      .def_property_readonly("codes", &codes_array, "label codes as a (height, width) uint8 array")
      .def("cell_center", &GridField::cell_center, py::arg("i"), py::arg("j"))
      .def("__eq__", [](const GridField& a, const GridField& b) { return a == b; })
      .def("encode", [](const GridField& g) {
        const auto bytes = encode_grid(g);
        return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
      });

  m.def(
      "render",
      [](const Dynamics& d, const Region& region, std::uint32_t width, std::uint32_t height, unsigned threads,
         bool supersample) {
        py::gil_scoped_release release;
        return render(d, region, width, height, {threads, supersample});
      },
      py::arg("dynamics"), py::arg("region") = Region{}, py::arg("width") = 1024, py::arg("height") = 1024,
      py::arg("threads") = 0, py::arg("supersample") = false);
  m.def("save_grid", &save_grid, py::arg("grid"), py::arg("path"));
  m.def("load_grid", &load_grid, py::arg("path"));
  m.def(
      "decode_grid",
      [](const py::bytes& b) {
        const std::string s = b;
        return decode_grid(std::vector<std::uint8_t>(s.begin(), s.end()));
      },
      py::arg("data"));

  m.def(
      "spiderweb",
      [](const FunctionSpec& f, const Region& region, std::uint32_t resolution, std::size_t min_loops,
         std::size_t buried_samples, unsigned threads) {
        SpiderwebSettings s;
        s.region = region;
        s.resolution = resolution;
        s.min_loops = min_loops;
        s.threads = threads;
        s.buried.sample_count = buried_samples;
        s.buried.threads = threads;
        py::gil_scoped_release release;
        return dump(run_spiderweb_experiment(f, s).report);
      },
      py::arg("spec"), py::arg("region") = Region{}, py::arg("resolution") = 1024, py::arg("min_loops") = 3,
      py::arg("buried_samples") = 200, py::arg("threads") = 0, "spider's-web report as a JSON string");

  m.def(
      "diameter_report", [](const GridField& g, const std::vector<double>& th) { return dump(diameter_report(g, th)); },
      py::arg("grid"), py::arg("thresholds") = std::vector<double>{0.01, 0.05, 0.1, 0.5});

  m.def(
      "verify",
      [](const std::string& claim, std::size_t samples) {
        auto n = [&](std::size_t d) { return samples ? samples : d; };
        py::gil_scoped_release release;
        if (claim == "real-line-trapped") return dump(check_real_line_trapped(n(10000)));
        if (claim == "lemniscate") return dump(check_lemniscate(n(1000)));
        if (claim == "inverse-contraction") return dump(check_inverse_contraction(n(1000)));
        if (claim == "koebe") return dump(check_koebe_bound(n(10000)));
        if (claim == "lambda-sin-search") return dump(check_lambda_sin_search());
        if (claim == "component-congruence") return dump(check_component_congruence());
        throw DomainError("unknown claim '" + claim + "'");
      },
      py::arg("claim"), py::arg("samples") = 0, "run a named experiment and return its JSON report");
}
