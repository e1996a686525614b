#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mobius_lab/analytic.hpp"
#include "mobius_lab/commands.hpp"
#include "mobius_lab/error.hpp"
#include "mobius_lab/identity.hpp"

namespace py = pybind11;
using namespace mobius_lab;

namespace {

template <class T>
py::array_t<T> to_array(std::span<const T> values) {
    py::array_t<T> out(static_cast<py::ssize_t>(values.size()));
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

SeriesOptions options(std::uint64_t segment_len, unsigned workers) {
    SeriesOptions o;
    o.segment_len = segment_len;
    o.workers = workers;
    return o;
}

ZParam to_z(std::complex<double> z) { return {z.real(), z.imag()}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Moebius sums restricted by the smallest prime factor";

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
    error_type.call_once_and_store_result(
        [&]() { return py::exception<Error>(m, "Error", PyExc_RuntimeError); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const std::string msg = std::string(to_string(e.kind())) + ": " + e.what();
            switch (e.kind()) {
                case ErrorKind::Domain:
                case ErrorKind::Precondition:
                case ErrorKind::Config:
                case ErrorKind::Range: PyErr_SetString(PyExc_ValueError, msg.c_str()); break;
                default: py::set_error(error_type.get_stored(), msg.c_str());
            }
        }
    });

    m.attr("INFINITY_SENTINEL") = kInfinitySentinel;

    // sieve
    py::class_<FactorTable>(m, "FactorTable")
        .def_property_readonly("lo", &FactorTable::lo)
        .def_property_readonly("hi", &FactorTable::hi)
        .def_property_readonly("spf", [](const FactorTable& t) { return to_array(t.spf_column()); })
        .def_property_readonly("gpf", [](const FactorTable& t) { return to_array(t.gpf_column()); })
        .def_property_readonly("mu", [](const FactorTable& t) { return to_array(t.mu_column()); })
        .def_property_readonly("omega", [](const FactorTable& t) { return to_array(t.omega_column()); })
        .def("__len__", &FactorTable::size);
    m.def("build_segment", py::overload_cast<std::uint64_t, std::uint64_t>(&build_segment), py::arg("lo"),
          py::arg("hi"), py::call_guard<py::gil_scoped_release>());
    m.def("point_factor", [](std::uint64_t n) {
        const auto p = point_factor(n);
        return py::make_tuple(p.spf, p.gpf, p.mu, p.omega);
    });
    m.def("primes_in", &primes_in, py::arg("lo"), py::arg("hi"));
    m.def("is_prime", &is_prime);

    // prime sets
    py::class_<PrimeSetSpec>(m, "PrimeSetSpec")
        .def_static("parse", &PrimeSetSpec::parse)
        .def_static("all_primes", &PrimeSetSpec::all_primes)
        .def_static("progression", &PrimeSetSpec::progression, py::arg("modulus"), py::arg("residue"))
        .def_static("singleton", &PrimeSetSpec::singleton)
        .def_static("interval_union",
                    [](const std::vector<std::pair<double, double>>& iv) {
                        std::vector<Interval> out;
                        for (auto [lo, hi] : iv) out.push_back({lo, hi});
                        return PrimeSetSpec::interval_union(std::move(out));
                    })
        .def_property_readonly("delta", &PrimeSetSpec::delta)
        .def("contains", [](const PrimeSetSpec& s, std::uint64_t p) { return contains(s, p); })
        .def("describe", &PrimeSetSpec::describe)
        .def("__repr__", [](const PrimeSetSpec& s) { return "PrimeSetSpec('" + s.describe() + "')"; })
        .def(py::self == py::self);
    m.def("epsilon_at", [](const PrimeSetSpec& s, double t) {
        const auto st = epsilon_at(s, t);
        return py::make_tuple(st.theta, st.epsilon);
    });
    m.def("epsilon_star", py::overload_cast<const PrimeSetSpec&, double, double>(&epsilon_star), py::arg("spec"),
          py::arg("y"), py::arg("t_max"));
    m.def("adversarial_set", [](const std::vector<double>& xs) { return adversarial_set(xs); });

    // series
    py::class_<SeriesCheckpoint>(m, "Checkpoint")
        .def_readonly("x", &SeriesCheckpoint::x)
        .def_readonly("value", &SeriesCheckpoint::value)
        .def_readonly("compensation", &SeriesCheckpoint::compensation)
        .def_readonly("terms", &SeriesCheckpoint::terms)
        .def("__repr__", [](const SeriesCheckpoint& c) {
            return "Checkpoint(x=" + std::to_string(c.x) + ", value=" + format_real(c.value) + ")";
        });
    const auto seg = kDefaultSegmentLength;
    m.def(
        "sum_restricted",
        [](std::uint64_t x, const PrimeSetSpec& spec, const std::vector<std::uint64_t>& grid, unsigned workers,
           std::uint64_t segment_len) { return sum_restricted(x, spec, grid, options(segment_len, workers)); },
        py::arg("x"), py::arg("spec"), py::arg("grid") = std::vector<std::uint64_t>{}, py::arg("workers") = 1,
        py::arg("segment_len") = seg, py::call_guard<py::gil_scoped_release>());
    m.def(
        "sum_v1",
        [](std::uint64_t x, const std::vector<std::uint64_t>& grid, unsigned workers) {
            return sum_v1(x, grid, options(kDefaultSegmentLength, workers));
        },
        py::arg("x"), py::arg("grid") = std::vector<std::uint64_t>{}, py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "sum_vp",
        [](std::uint64_t x, std::uint64_t p, const std::vector<std::uint64_t>& grid) { return sum_vp(x, p, grid); },
        py::arg("x"), py::arg("p"), py::arg("grid") = std::vector<std::uint64_t>{},
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "sum_mu_log", [](std::uint64_t x, std::optional<std::uint64_t> p) { return sum_mu_log(x, p); }, py::arg("x"),
        py::arg("p") = py::none());
    m.def(
        "sum_z_weighted",
        [](std::uint64_t x, double y, const PrimeSetSpec& spec, std::complex<double> z) {
            return sum_z_weighted(x, y, spec, to_z(z));
        },
        py::arg("x"), py::arg("y"), py::arg("spec"), py::arg("z") = std::complex<double>(1.0, 0.0));

    // identities
    m.def("g_y_explicit", [](std::uint64_t n, double y, const PrimeSetSpec& s) { return g_y_explicit(n, y, s); });
    m.def("g_y_divisor", &g_y_divisor);
    m.def("mu_omega_divisor_sum", &mu_omega_divisor_sum);
    m.def("check_convolution", [](std::uint64_t n, double y, const PrimeSetSpec& s) {
        const auto c = check_convolution(n, y, s);
        return py::make_tuple(c.lhs, c.rhs);
    });

    // analytic kernels
    m.def("dickman_rho", [](double v) { return dickman_rho(default_context(), v); });
    m.def("rho_hat", [](Complex s) { return rho_hat(default_context(), s); });
    m.def("j_of", [](Complex s) { return j_of(default_context(), s); });
    m.def(
        "exp_minus_zj", [](Complex s, Complex z) { return exp_minus_zj(default_context(), s, z); }, py::arg("s"),
        py::arg("z") = Complex(1.0));
    m.def(
        "main_term",
        [](double x, double y, Complex z, double delta) { return main_term({x, y, to_z(z), delta}); },
        py::arg("x"), py::arg("y"), py::arg("z"), py::arg("delta"));
    m.def("main_term_dz_at_1", &main_term_dz_at_1, py::arg("x"), py::arg("delta"));
    m.def(
        "hankel_main_term",
        [](double x, double y, Complex z, double delta) {
            return hankel_main_term(default_context(), {x, y, to_z(z), delta});
        },
        py::arg("x"), py::arg("y"), py::arg("z"), py::arg("delta"));
    m.def("check_f_approx", [](std::uint64_t p, Complex s, Complex z) {
        return check_f_approx(default_context(), p, s, to_z(z));
    });
    m.def("zeta_one_p", [](std::uint64_t p) {
        const auto z = zeta_one_p(p);
        // exact value as a Fraction-compatible (numerator, denominator) pair
        return py::make_tuple(py::int_(py::str(z.numerator.str())), py::int_(py::str(z.denominator.str())));
    });

    // reports, returned as CSV or JSON text
    m.def(
        "converge",
        [](std::uint64_t x_max, const std::string& set, std::optional<std::string> y, std::optional<Complex> z,
           double checkpoint_ratio, unsigned workers, std::uint64_t segment_len, const std::string& format) {
            RunConfig c;
            c.x_max = x_max;
            c.set_spec = set;
            if (y) c.y = YChoice::parse(*y);
            if (z) c.z = to_z(*z);
            c.checkpoint_ratio = checkpoint_ratio;
            c.workers = workers;
            c.segment_len = segment_len;
            py::gil_scoped_release release;
            return render(cmd_converge(c).table(), parse_output_format(format));
        },
        py::arg("x_max"), py::arg("set") = "all", py::arg("y") = py::none(), py::arg("z") = py::none(),
        py::arg("checkpoint_ratio") = 10.0, py::arg("workers") = 1, py::arg("segment_len") = seg,
        py::arg("format") = "csv");
    m.def(
        "adversarial",
        [](const std::vector<double>& x_seq, std::uint64_t x_eval, const std::string& format) {
            return render(cmd_adversarial(x_seq, x_eval).table(), parse_output_format(format));
        },
        py::arg("x_seq"), py::arg("x_eval"), py::arg("format") = "csv");
    m.def(
        "identity",
        [](std::uint64_t n_max, const std::vector<double>& y_list, const std::vector<std::string>& specs) {
            std::vector<PrimeSetSpec> parsed;
            for (const auto& s : specs) parsed.push_back(PrimeSetSpec::parse(s));
            const auto r = cmd_identity(n_max, y_list, parsed);
            return py::make_tuple(r.passed(), r.table().to_csv());
        },
        py::arg("n_max"), py::arg("y_list"), py::arg("specs") = std::vector<std::string>{"all"});
    m.def(
        "analytic_report",
        [](const std::string& format) {
            const auto r = cmd_analytic(default_context());
            return py::make_tuple(r.passed, render(r.table, parse_output_format(format)));
        },
        py::arg("format") = "csv");
}
