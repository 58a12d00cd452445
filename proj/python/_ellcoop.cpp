#include "ellcoop/coop.hpp"
#include "ellcoop/report.hpp"
#include "ellcoop/scalars.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace py = pybind11;
using namespace ellcoop;

namespace {

RunOptions make_options(unsigned long p, unsigned n, const std::string& kase, int max_degree, std::vector<int> indices,
                        std::vector<int> other, int r_max, unsigned threads, std::size_t slice_limit)
{
    RunOptions o;
    o.p = p;
    o.n = n;
    o.kase = kase;
    o.max_degree = max_degree;
    o.indices = std::move(indices);
    o.other = std::move(other);
    o.r_max = r_max;
    o.threads = threads;
    o.slice_limit = slice_limit;
    return o;
}

Integer to_integer(const std::string& s)
{
    Rational q = parse_rational(s);
    if (q.get_den() != 1)
        throw std::invalid_argument("not an integer: " + s);
    return q.get_num();
}

}  // namespace

PYBIND11_MODULE(_ellcoop, m)
{
    m.doc() = "Koszul, Steenrod and rational-model computations";

    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);


    m.def("command_names", &command_names);
    m.def(
        "run",
        [](const std::string& command, unsigned long p, unsigned n, const std::string& kase, int max_degree,
           std::vector<int> indices, std::vector<int> other, int r_max, unsigned threads, std::size_t slice_limit) {
            RunOptions o = make_options(p, n, kase, max_degree, std::move(indices), std::move(other), r_max, threads,
                                        slice_limit);
            Report r;
            {
                py::gil_scoped_release release;
                r = run_command(command, o);
            }
            return std::make_pair(r.json.dump(), r.ok);
        },
        "Run a command; returns (json text, ok).", py::arg("command"), py::arg("p") = 3, py::arg("n") = 2,
        py::arg("case") = "ell", py::arg("max_degree") = 64, py::arg("indices") = std::vector<int>{},
        py::arg("other") = std::vector<int>{}, py::arg("r_max") = 3, py::arg("threads") = 1,
        py::arg("slice_limit") = std::size_t{200000});
    m.def(
        "tor_table_csv",
        [](unsigned long p, const std::string& kase, int max_degree, unsigned threads, std::size_t slice_limit) {
            RunOptions o = make_options(p, 2, kase, max_degree, {}, {}, 3, threads, slice_limit);
            py::gil_scoped_release release;
            return tor_table_csv(o);
        },
        py::arg("p") = 3, py::arg("case") = "ell", py::arg("max_degree") = 64, py::arg("threads") = 1,
        py::arg("slice_limit") = std::size_t{200000});

    m.def(
        "valuation",
        [](const std::string& q, unsigned long p) -> std::optional<long> {
            Valuation v = valuation(parse_rational(q), p);
            if (v.infinite)
                return std::nullopt;
            return v.value;
        },
        "p-adic valuation of a rational given as text; None for zero.", py::arg("q"), py::arg("p"));
    m.def(
        "normalize_rational", [](const std::string& q) { return to_string(parse_rational(q)); }, py::arg("q"));
    m.def(
        "reduce_mod_p", [](const std::string& q, unsigned long p) { return to_string(reduce_mod_p(parse_rational(q), p)); },
        py::arg("q"), py::arg("p"));
    m.def(
        "power_congruence",
        [](const std::string& z, const std::string& x, const std::string& y, const std::string& t, unsigned long p,
           unsigned k) { return power_congruence(to_integer(z), to_integer(x), to_integer(y), to_integer(t), p, k); },
        py::arg("z"), py::arg("x"), py::arg("y"), py::arg("t"), py::arg("p"), py::arg("k"));
    m.def("unit_power_congruence", &unit_power_congruence, py::arg("p"), py::arg("k"));
}
