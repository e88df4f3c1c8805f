// Python bindings for the twistlab pipelines.  Every function mirrors one CLI
// subcommand and returns the same JSON report as a Python dict, so results
// are directly comparable across the two front-ends.

#include <pybind11/pybind11.h>

#include <cstdint>
#include <string>

#include "twistlab/errors.hpp"
#include "twistlab/pipeline.hpp"

namespace py = pybind11;

namespace {

using twistlab::pipeline::Options;

py::object run(const std::string& command, unsigned n, const py::object& kind,
               const py::object& f, const py::object& g, std::uint64_t seed, unsigned budget,
               unsigned threads, long mx) {
  Options o;
  o.n = n;
  if (!kind.is_none()) o.kind = kind.cast<std::string>();
  if (!f.is_none()) o.f = f.cast<std::string>();
  if (!g.is_none()) o.g = g.cast<std::string>();
  o.seed = seed;
  o.budget_exponent = budget;
  o.threads = threads;
  o.mX = mx;
  const std::string dump = twistlab::pipeline::run_command(command, o).dump();
  return py::module_::import("json").attr("loads")(dump);
}

void def_command(py::module_& m, const char* pyname, const char* command, const char* doc) {
  m.def(
      pyname,
      [command](unsigned n, const py::object& kind, const py::object& f, const py::object& g,
                std::uint64_t seed, unsigned budget, unsigned threads, long mx) {
        return run(command, n, kind, f, g, seed, budget, threads, mx);
      },
      doc, py::arg("n") = 1, py::arg("kind") = py::none(), py::arg("f") = py::none(),
      py::arg("g") = py::none(), py::arg("seed") = 0, py::arg("budget") = 20,
      py::arg("threads") = 0, py::arg("mx") = 0);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Exact ranks and Kodaira fiber types of the twisted supersingular "
      "elliptic surfaces attached to y^2 = x^3 - x over GF(3^(2n))(t)";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const twistlab::ValidationError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const twistlab::Error& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });

  def_command(m, "twist", "twist", "Construct a twisted Weierstrass model and its invariants.");
  def_command(m, "rank", "rank", "Mordell-Weil rank from L-function multiplicities.");
  def_command(m, "lfun", "lfun", "L-polynomials of the covers attached to a twist.");
  def_command(m, "fibers", "fibers",
              "Kodaira fiber types: closed form and Tate's algorithm side by side.");
  def_command(m, "surface", "surface",
              "Euler number, b2, fiber inventory and Shioda-Tate bookkeeping.");
  def_command(m, "verify_example", "verify-example",
              "Check the headline rank-2*3^n example end to end (odd n).");

  m.def(
      "run_command",
      [](const std::string& command, unsigned n, const py::object& kind, const py::object& f,
         const py::object& g, std::uint64_t seed, unsigned budget, unsigned threads, long mx) {
        return run(command, n, kind, f, g, seed, budget, threads, mx);
      },
      "Dispatch a command by its CLI name.", py::arg("command"), py::arg("n") = 1,
      py::arg("kind") = py::none(), py::arg("f") = py::none(), py::arg("g") = py::none(),
      py::arg("seed") = 0, py::arg("budget") = 20, py::arg("threads") = 0, py::arg("mx") = 0);
}
