#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "psh/compose.hpp"
#include "psh/errors.hpp"
#include "psh/expr.hpp"
#include "psh/factor.hpp"
#include "psh/reproduce.hpp"

namespace py = pybind11;
using namespace psh;

namespace {

py::dict verdict_dict(const Verdict& v) {
    py::dict d;
    d["outcome"] = to_string(v.outcome);
    d["diagnostics"] = v.diagnostics;
    d["exponent"] = v.exponent;
    d["norm"] = v.norm ? py::object(py::float_(*v.norm)) : py::object(py::none());
    return d;
}

BoundaryDensityPtr make_density(const std::string& exhaustion, const std::string& frame, std::size_t grid) {
    DensityOptions o;
    o.grid = grid;
    return boundary_density(exhaustion_from_name(exhaustion, ConformalFrame::from_name(frame)), o);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hardy spaces over exhaustion functions";

    // translators run newest first, so the base goes in before the subclasses
    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<NonIntegrable>(m, "NonIntegrable", base.ptr());
    py::register_exception<UnknownCase>(m, "UnknownCase", base.ptr());

    py::class_<BoundaryDensity, std::shared_ptr<BoundaryDensity>>(m, "BoundaryDensity")
        .def("beta", &BoundaryDensity::beta, py::arg("t"))
        .def_property_readonly("total_mass", &BoundaryDensity::total_mass)
        .def_property_readonly("boundary_mass", &BoundaryDensity::boundary_mass)
        .def_property_readonly("grid_t", &BoundaryDensity::grid_t)
        .def_property_readonly("grid_beta", &BoundaryDensity::grid_beta)
        .def_property_readonly("tag_exponents", [](const BoundaryDensity& bd) {
            std::vector<std::pair<double, double>> v;
            for (const auto& f : bd.tag_fits()) v.emplace_back(f.location, f.exponent);
            return v;
        });

    m.def(
        "boundary_density",
        [](const std::string& exhaustion, const std::string& frame, std::size_t grid) {
            return std::const_pointer_cast<BoundaryDensity>(make_density(exhaustion, frame, grid));
        },
        py::arg("exhaustion") = "paper-u", py::arg("frame") = "disc", py::arg("grid") = 4096,
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "ma_mass",
        [](const std::string& exhaustion, const std::string& frame) {
            return ma_mass(*exhaustion_from_name(exhaustion, ConformalFrame::from_name(frame)));
        },
        py::arg("exhaustion") = "paper-u", py::arg("frame") = "disc");

    m.def(
        "evaluate",
        [](const std::string& expr, cplx z, double q) { return Expr::parse(expr)(z, q); }, py::arg("expr"),
        py::arg("z"), py::arg("q") = 0.0);

    m.def(
        "norm",
        [](const std::string& expr, double p, const BoundaryDensity& bd) {
            return norm_boundary(hardy_from_expr(expr), p, bd);
        },
        py::arg("f"), py::arg("p"), py::arg("density"), py::call_guard<py::gil_scoped_release>());

    m.def(
        "membership",
        [](const std::string& expr, double p, const BoundaryDensity& bd, double q) {
            Verdict v;
            {
                py::gil_scoped_release nogil;
                v = membership(hardy_from_expr(expr, {}, q), p, bd);
            }
            return verdict_dict(v);
        },
        py::arg("f"), py::arg("p"), py::arg("density"), py::arg("q") = 0.0);

    m.def(
        "factorize",
        [](const std::string& expr, std::vector<cplx> zeros) {
            Factorization fac = factorize(hardy_from_expr(expr), zeros);
            py::dict d;
            d["zeros"] = fac.blaschke.zeros;
            d["reconstruction_residual"] = fac.reconstruction_residual;
            d["singular_sup"] = fac.singular_sup;
            d["singular_at_0"] = fac.singular.interior(0.0);
            d["outer_at_0"] = fac.outer.interior(0.0);
            return d;
        },
        py::arg("f"), py::arg("zeros"));

    m.def("find_zeros", [](const std::string& expr) { return find_zeros(hardy_from_expr(expr)); }, py::arg("f"));

    m.def(
        "compose_check",
        [](const std::string& symbol, const BoundaryDensity& bd, double p) {
            Symbol s = parse_symbol(symbol);
            BoundednessReport r;
            {
                py::gil_scoped_release nogil;
                r = s.kind == SymbolKind::Mobius ? mobius_boundedness(s, bd, p) : general_boundedness(s, bd, p);
            }
            py::dict d;
            d["verdict"] = verdict_dict(r.verdict);
            d["fixed_point"] = r.fixed_point;
            d["ratio_sup"] = r.ratio_sup;
            d["jacobian_sup"] = r.jacobian_sup;
            d["ratio_stable"] = r.ratio_stable;
            d["ratio_near_one"] = r.ratio_near_one;
            d["witness_sound"] = r.witness ? py::object(py::bool_(r.witness->sound())) : py::object(py::none());
            return d;
        },
        py::arg("symbol"), py::arg("density"), py::arg("p") = 1.0);

    m.def("case_ids", &case_ids);

    m.def(
        "run_case",
        [](const std::string& id, std::size_t grid) {
            ReproduceOptions o;
            o.grid = grid;
            CaseResult r;
            {
                py::gil_scoped_release nogil;
                ReproduceContext ctx(o);
                r = run_case(id, ctx);
            }
            py::dict d;
            d["id"] = r.id;
            d["criterion"] = r.criterion;
            d["title"] = r.title;
            d["columns"] = r.columns;
            d["rows"] = r.rows;
            py::list checks;
            for (const auto& c : r.checks) checks.append(py::make_tuple(c.label, c.pass, c.detail));
            d["checks"] = checks;
            d["pass"] = r.pass();
            return d;
        },
        py::arg("case_id"), py::arg("grid") = 4096);
}
