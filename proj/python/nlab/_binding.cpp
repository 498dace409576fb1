#include "nlab/blocks.hpp"
#include "nlab/errors.hpp"
#include "nlab/pairing.hpp"
#include "nlab/periodic.hpp"
#include "nlab/pointclass.hpp"
#include "nlab/rational.hpp"
#include "nlab/reduce.hpp"
#include "nlab/report_json.hpp"
#include "nlab/word.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace nlab;

namespace {

Word parse_word(int base, const std::string& text) { return Word::parse(base, text); }

EventuallyPeriodicWord parse_epw(int base, const std::string& text) {
    return EventuallyPeriodicWord::parse(base, text);
}

DigitStream stream_from_spec(const std::string& spec, int base) {
    if (spec.find(':') != std::string::npos)
        return DigitStream::from_epw(parse_epw(base, spec));
    return DigitStream::from_word(parse_word(base, spec));
}

py::dict tau_report_dict(const TauReport& rep) {
    py::dict d;
    d["i"] = rep.i;
    d["j"] = rep.j;
    d["r_km"] = fraction_string(rep.r_km);
    d["alpha_k_limit"] = fraction_string(rep.alpha_k_limit);
    d["bullet1_max_dev"] = fraction_string(rep.bullet1_max_dev);
    d["bullet1_argmax"] = rep.bullet1_argmax.str();
    d["bullet1_bound"] = fraction_string(rep.bullet1_bound);
    d["bullet3_max_dev"] = fraction_string(rep.bullet3_max_dev);
    d["interpretation"] = rep.interpretation;
    return d;
}

} // namespace

PYBIND11_MODULE(_nlab, m) {
    m.doc() = "Exact digit-frequency analysis, de Bruijn block generation, and the "
              "two stream reductions, over exact rational arithmetic.";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
    py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

    // pairing
    m.def("pair", &pair_nat, py::arg("m"), py::arg("n"));
    m.def("unpair", &unpair_nat, py::arg("p"));
    m.def("triple", &triple_nat, py::arg("k"), py::arg("m"), py::arg("n"));
    m.def("untriple", &untriple_nat, py::arg("t"));

    // words and densities (words travel as serialized strings)
    m.def(
        "density",
        [](const std::string& alpha, const std::string& sigma, int base) {
            return fraction_string(density(parse_word(base, alpha), parse_word(base, sigma)));
        },
        py::arg("alpha"), py::arg("sigma"), py::arg("base") = 2,
        "d_alpha(sigma) as an exact \"num/den\" string");

    py::class_<DensityTracker>(m, "DensityTracker")
        .def(py::init([](const std::string& pattern, int base) {
                 return DensityTracker(parse_word(base, pattern));
             }),
             py::arg("pattern"), py::arg("base") = 2)
        .def("extend", &DensityTracker::extend)
        .def("extend_word",
             [](DensityTracker& t, const std::string& digits) {
                 Word w = parse_word(t.pattern().base(), digits);
                 for (std::size_t i = 0; i < w.size(); ++i) t.extend(w[i]);
             })
        .def_property_readonly("hits", &DensityTracker::hits)
        .def_property_readonly("processed", &DensityTracker::processed)
        .def("density", [](const DensityTracker& t) { return fraction_string(t.density()); });

    // periodic words
    m.def(
        "limit_density",
        [](const std::string& alpha, const std::string& epw, int base) {
            return fraction_string(
                limit_density(parse_word(base, alpha), parse_epw(base, epw)));
        },
        py::arg("alpha"), py::arg("epw"), py::arg("base") = 2,
        "limit of d_alpha over an eventually periodic word \"pre:period\"");
    m.def(
        "modulus",
        [](const std::string& epw, const std::string& alpha, unsigned p, int base) {
            return modulus(parse_epw(base, epw), parse_word(base, alpha), p);
        },
        py::arg("epw"), py::arg("alpha"), py::arg("p"), py::arg("base") = 2);
    m.def(
        "restrict_modulus",
        [](const std::string& epw, unsigned max_len, unsigned max_prec, int base) {
            ModulusTable table = restrict_modulus(parse_epw(base, epw), max_len, max_prec);
            py::dict out;
            std::uint64_t codes = 1;
            for (unsigned len = 1; len <= max_len; ++len) {
                codes *= table.base();
                for (std::uint64_t cd = 0; cd < codes; ++cd)
                    for (unsigned p = 0; p <= max_prec; ++p)
                        out[py::make_tuple(table.code_word(len, cd).str(), p)] =
                            table.entry(len, cd, p);
            }
            return out;
        },
        py::arg("epw"), py::arg("max_word_len"), py::arg("max_precision"), py::arg("base") = 2);
    m.def(
        "max_deviation",
        [](const std::string& sigma, unsigned k, int base) {
            auto dev = max_deviation(parse_word(base, sigma), k);
            return py::make_tuple(fraction_string(dev.value), dev.argmax.str());
        },
        py::arg("sigma"), py::arg("k"), py::arg("base") = 2);

    // blocks
    m.def(
        "good_word", [](int base, unsigned order) { return good_word(base, order).str(); },
        py::arg("base"), py::arg("order"));
    m.def("d2_alpha", [](std::uint64_t n) { return d2_alpha(n).str(); });
    m.def("d2_beta", [](std::uint64_t n) { return d2_beta(n).str(); });
    m.def(
        "general_blocks",
        [](int base, unsigned r, unsigned s, std::uint64_t n) {
            auto blocks = general_blocks(base, r, s, n);
            return py::make_tuple(blocks.alpha.str(), blocks.beta.str());
        },
        py::arg("base"), py::arg("r"), py::arg("s"), py::arg("n"));
    m.def("r_bound",
          [](unsigned k, unsigned m) { return fraction_string(r_bound(k, m)); });

    py::class_<BlockLibrary>(m, "BlockLibrary")
        .def(py::init<>())
        .def("eta", [](BlockLibrary& lib, unsigned order) { return lib.eta(order).str(); })
        .def("absent_word",
             [](BlockLibrary& lib, unsigned k) { return lib.absent_word(k).str(); })
        .def("tau",
             [](BlockLibrary& lib, unsigned k, unsigned m, unsigned n) {
                 return lib.tau(k, m, n).str();
             })
        .def("tau_report", [](BlockLibrary& lib, unsigned k, unsigned m, unsigned n) {
            return tau_report_dict(lib.tau_report(k, m, n));
        });

    // families
    py::class_<Pi03Family>(m, "Family")
        .def_static("from_json", &family_from_json)
        .def_static("all_full", [](int arity) { return Pi03Family::all_full(arity); })
        .def_static("all_empty", [](int arity) { return Pi03Family::all_empty(arity); })
        .def_property_readonly("arity", &Pi03Family::arity)
        .def("to_json", [](const Pi03Family& fam) { return family_to_json(fam); })
        .def("query",
             [](const Pi03Family& fam, const std::vector<std::uint64_t>& index,
                const std::string& sigma) {
                 return fam.query(index, parse_word(fam.base(), sigma));
             })
        .def("ground_truth_member", [](const Pi03Family& fam, const std::string& x) {
            return ground_truth_member(fam, parse_epw(fam.base(), x));
        });
    m.def("monotonize", &monotonize);
    m.def("interleave_intersection", &interleave_intersection);

    // reductions: return (digits, verified, report_json)
    m.def(
        "reduce_d2",
        [](const std::string& l_json, const std::string& f_json, const std::string& x,
           std::uint64_t bits, bool intersect_lf) {
            D2Reducer red(family_from_json(l_json), family_from_json(f_json),
                          stream_from_spec(x, 2), d2_scheme_binary(), Caps{}, intersect_lf);
            red.run(bits);
            const bool ok = verify_d2_run(red.reports(), red.emitted(), red.scheme());
            return py::make_tuple(red.emitted().str(), ok, d2_report_json(red));
        },
        py::arg("l_json"), py::arg("f_json"), py::arg("x"), py::arg("bits"),
        py::arg("intersect_lf") = false);
    m.def(
        "reduce_general",
        [](int base, unsigned r, unsigned s, const std::string& l_json, const std::string& f_json,
           const std::string& x, std::uint64_t bits, bool intersect_lf) {
            D2Reducer red(family_from_json(l_json), family_from_json(f_json),
                          stream_from_spec(x, 2), d2_scheme_general(base, r, s), Caps{},
                          intersect_lf);
            red.run(bits);
            const bool ok = verify_d2_run(red.reports(), red.emitted(), red.scheme());
            return py::make_tuple(red.emitted().str(), ok, d2_report_json(red));
        },
        py::arg("base"), py::arg("r"), py::arg("s"), py::arg("l_json"), py::arg("f_json"),
        py::arg("x"), py::arg("bits"), py::arg("intersect_lf") = false);
    m.def(
        "reduce_domega",
        [](const std::string& family_json, const std::string& x, std::uint64_t stages,
           bool strict_modulus) {
            BlockLibrary lib;
            OmegaReducer red(family_from_json(family_json), stream_from_spec(x, 2), lib, Caps{},
                             strict_modulus ? OmegaMode::Strict : OmegaMode::StableEntries);
            red.run(stages);
            const bool ok = verify_omega_run(red.reports(), red.sigma(), lib);
            return py::make_tuple(red.sigma().str(), ok, omega_report_json(red));
        },
        py::arg("family_json"), py::arg("x"), py::arg("stages"),
        py::arg("strict_modulus") = false);
}
