#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cartan/driver.hpp"

namespace py = pybind11;

namespace {

// JSON text in, (report JSON text, exit code) out; the Python layer decodes.
std::pair<std::string, int> run_text(const std::string& command, const std::string& instance, std::uint64_t seed,
                                     std::size_t cap, double tol) {
    cartan::RunOptions opt;
    opt.seed = seed;
    opt.cap = cap;
    opt.tol = tol;
    cartan::json input;
    try {
        input = cartan::json::parse(instance);
    } catch (const cartan::json::parse_error& e) {
        throw py::value_error(e.what());
    }
    cartan::RunResult r;
    {
        py::gil_scoped_release release;
        r = cartan::run(command, input, opt);
    }
    return {r.report.dump(), r.exit_code};
}

} // namespace

PYBIND11_MODULE(_cartan, m) {
    m.doc() = "Finite groupoids, inverse semigroups, cocycle actions and regular inclusions";
    m.attr("__version__") = cartan::kVersion;
    m.attr("REPORT_SCHEMA") = cartan::kReportSchema;
    m.def("commands", &cartan::commands);
    m.def("run", &run_text, py::arg("command"), py::arg("instance"), py::arg("seed") = 1,
          py::arg("cap") = cartan::kDefaultCap, py::arg("tol") = cartan::kTol);
    m.def(
        "random_instance",
        [](const std::string& kind, int atoms, const std::string& group, int max_block, bool strongly_normal,
           bool ergodic, std::uint64_t seed) {
            cartan::RandomOptions o{kind, atoms, group, max_block, strongly_normal, ergodic, seed};
            try {
                return cartan::random_instance(o).dump();
            } catch (const cartan::Error& e) {
                throw py::value_error(e.what());
            }
        },
        py::arg("kind"), py::arg("atoms") = 4, py::arg("group") = "z2", py::arg("max_block") = 2,
        py::arg("strongly_normal") = false, py::arg("ergodic") = false, py::arg("seed") = 1);
}
