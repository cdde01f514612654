#include "magweyl/errors.hpp"
#include "magweyl/harness.hpp"
#include "magweyl/io.hpp"
#include "magweyl/lie_algebra.hpp"
#include "magweyl/magnetic.hpp"
#include "magweyl/phase_space.hpp"
#include "magweyl/weyl.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstring>

namespace py = pybind11;
using namespace magweyl;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

LieVector to_vec(const std::vector<double>& v) {
  if (v.size() > static_cast<std::size_t>(kMaxDim)) throw ShapeError("vector longer than kMaxDim");
  LieVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

std::vector<double> from_vec(const LieVector& v) { return {v.data(), v.data() + v.size()}; }

CArray to_numpy(const ComplexArray& values, int rank, int n) {
  std::vector<py::ssize_t> shape(static_cast<std::size_t>(rank), n);
  CArray out(shape);
  std::memcpy(out.mutable_data(), values.data(), values.size() * sizeof(Complex));
  return out;
}

ComplexArray from_numpy(const CArray& a, std::size_t expected) {
  if (static_cast<std::size_t>(a.size()) != expected) throw ShapeError("array size does not match the grid");
  return ComplexArray(a.data(), a.data() + a.size());
}

SymbolField symbol_of(const PhaseSpaceGrid& g, const CArray& a) { return {g, from_numpy(a, g.symbol_size())}; }

}  // namespace

PYBIND11_MODULE(_magweyl, m) {
  auto base = py::register_exception<Error>(m, "Error");
#define MAGWEYL_PY_ERROR(Name) py::register_exception<Name>(m, #Name, base.ptr());
  MAGWEYL_PY_ERROR(ShapeError)
  MAGWEYL_PY_ERROR(JacobiViolation)
  MAGWEYL_PY_ERROR(NotNilpotent)
  MAGWEYL_PY_ERROR(ClassTooLarge)
  MAGWEYL_PY_ERROR(AbelianHasNoQuotient)
  MAGWEYL_PY_ERROR(BadGridSpec)
  MAGWEYL_PY_ERROR(DegreeTooHigh)
  MAGWEYL_PY_ERROR(FieldsDiffer)
  MAGWEYL_PY_ERROR(WrongClass)
  MAGWEYL_PY_ERROR(ConfigError)
#undef MAGWEYL_PY_ERROR

  py::class_<NilpotentLieAlgebra>(m, "Algebra")
      .def_static("preset", &algebra_preset, py::arg("name"))
      .def_static("from_json", [](const std::string& text) { return algebra_from_json(text); })
      .def_static(
          "from_structure_constants",
          [](int dim, const std::vector<double>& c) { return NilpotentLieAlgebra::create(dim, c); },
          py::arg("dim"), py::arg("constants"))
      .def("to_json", [](const NilpotentLieAlgebra& a) { return algebra_to_json(a); })
      .def_property_readonly("dim", &NilpotentLieAlgebra::dim)
      .def_property_readonly("nilpotency_index", &NilpotentLieAlgebra::nilpotency_index)
      .def_property_readonly("lcs_dims", &NilpotentLieAlgebra::lcs_dims)
      .def("bracket", [](const NilpotentLieAlgebra& a, const std::vector<double>& x,
                         const std::vector<double>& y) { return from_vec(a.bracket(to_vec(x), to_vec(y))); })
      .def("bch", [](const NilpotentLieAlgebra& a, const std::vector<double>& x,
                     const std::vector<double>& y) { return from_vec(a.bch(to_vec(x), to_vec(y))); })
      .def("psi", [](const NilpotentLieAlgebra& a, const std::vector<double>& v,
                     const std::vector<double>& y) { return from_vec(a.psi_map(to_vec(v), to_vec(y))); })
      .def("psi_inverse", [](const NilpotentLieAlgebra& a, const std::vector<double>& v,
                             const std::vector<double>& z) { return from_vec(a.psi_inverse(to_vec(v), to_vec(z))); });

  py::class_<MagneticPotential>(m, "Potential")
      .def_static("preset", &potential_preset, py::arg("algebra"), py::arg("name"))
      .def_static("from_json", [](const NilpotentLieAlgebra& a, const std::string& text) {
        return potential_from_json(a, text);
      })
      .def("to_json", [](const MagneticPotential& p) { return potential_to_json(p); })
      .def_property_readonly("degree", &MagneticPotential::degree)
      .def("at", [](const MagneticPotential& p, const std::vector<double>& y) {
        return from_vec(p.at(to_vec(y)).coords());
      })
      .def("field", [](const MagneticPotential& p, const std::vector<double>& x, const std::vector<double>& x1,
                       const std::vector<double>& x2) { return p.field(to_vec(x), to_vec(x1), to_vec(x2)); });

  py::class_<PhaseSpaceGrid>(m, "Grid")
      .def(py::init(&make_grid), py::arg("dim"), py::arg("n"), py::arg("half_width"))
      .def_property_readonly("dim", &PhaseSpaceGrid::dim)
      .def_property_readonly("n", &PhaseSpaceGrid::points)
      .def_property_readonly("half_width", &PhaseSpaceGrid::half_width)
      .def_property_readonly("spacing", &PhaseSpaceGrid::spacing)
      .def_property_readonly("dual_spacing", &PhaseSpaceGrid::dual_spacing)
      .def("nodes", [](const PhaseSpaceGrid& g) {
        std::vector<double> x(static_cast<std::size_t>(g.points()));
        for (int j = 0; j < g.points(); ++j) x[static_cast<std::size_t>(j)] = g.x(j);
        return x;
      })
      .def("dual_nodes", [](const PhaseSpaceGrid& g) {
        std::vector<double> xi(static_cast<std::size_t>(g.points()));
        for (int k = 0; k < g.points(); ++k) xi[static_cast<std::size_t>(k)] = g.xi(k);
        return xi;
      })
      .def("__eq__", [](const PhaseSpaceGrid& a, const PhaseSpaceGrid& b) { return a == b; });

  py::class_<WeylContext>(m, "Context")
      .def(py::init([](const NilpotentLieAlgebra& a, const MagneticPotential& p, const PhaseSpaceGrid& g) {
             return WeylContext(a, p, g);
           }),
           py::arg("algebra"), py::arg("potential"), py::arg("grid"))
      .def_property_readonly("grid", &WeylContext::grid)
      .def("kernel_from_symbol",
           [](const WeylContext& ctx, const CArray& a) {
             const auto& g = ctx.grid();
             ComplexArray out;
             {
               py::gil_scoped_release nogil;
               out = kernel_from_symbol(ctx, symbol_of(g, a)).values;
             }
             return to_numpy(out, 2 * g.dim(), g.points());
           })
      .def("symbol_from_kernel",
           [](const WeylContext& ctx, const CArray& k) {
             const auto& g = ctx.grid();
             IntegralKernel kernel{g, from_numpy(k, g.symbol_size())};
             ComplexArray out;
             {
               py::gil_scoped_release nogil;
               out = symbol_from_kernel(ctx, kernel).values;
             }
             return to_numpy(out, 2 * g.dim(), g.points());
           })
      .def("moyal", [](const WeylContext& ctx, const CArray& a, const CArray& b) {
        const auto& g = ctx.grid();
        const SymbolField fa = symbol_of(g, a);
        const SymbolField fb = symbol_of(g, b);
        ComplexArray out;
        {
          py::gil_scoped_release nogil;
          out = moyal_product(ctx, fa, fb).values;
        }
        return to_numpy(out, 2 * g.dim(), g.points());
      });

  m.def("symplectic_fourier", [](const PhaseSpaceGrid& g, const CArray& a) {
    return to_numpy(symplectic_fourier(symbol_of(g, a)).values, 2 * g.dim(), g.points());
  });
  m.def("symbol_norm", [](const PhaseSpaceGrid& g, const CArray& a) { return l2_norm(symbol_of(g, a)); });
  m.def("kernel_norm", [](const PhaseSpaceGrid& g, const CArray& k) {
    return l2_norm(IntegralKernel{g, from_numpy(k, g.symbol_size())});
  });

  m.def("known_suites", &known_suites);
  m.def(
      "run_suites",
      [](const std::string& config_json, const std::vector<std::string>& suites, const std::string& base_dir) {
        const RunConfig cfg = parse_run_config(config_json, base_dir);
        const std::vector<std::string> names = suites.empty() ? (cfg.suites.empty() ? known_suites() : cfg.suites) : suites;
        Report r;
        {
          py::gil_scoped_release nogil;
          r = run_suites(cfg, names);
        }
        return report_json(r);
      },
      py::arg("config_json"), py::arg("suites") = std::vector<std::string>{}, py::arg("base_dir") = ".");
}
