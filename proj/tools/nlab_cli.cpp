#include "nlab/blocks.hpp"
#include "nlab/errors.hpp"
#include "nlab/pairing.hpp"
#include "nlab/periodic.hpp"
#include "nlab/pointclass.hpp"
#include "nlab/rational.hpp"
#include "nlab/reduce.hpp"
#include "nlab/report_json.hpp"
#include "nlab/serialize.hpp"
#include "nlab/word.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using json = nlohmann::ordered_json;
using namespace nlab;

Caps caps_from_env() {
    Caps caps;
    if (const char* v = std::getenv("NLAB_MAX_WORD_DIGITS")) {
        char* end = nullptr;
        const unsigned long long parsed = std::strtoull(v, &end, 10);
        if (end == v || *end != '\0' || parsed == 0)
            throw ValidationError("NLAB_MAX_WORD_DIGITS must be a positive integer");
        caps.max_word_digits = parsed;
    }
    return caps;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// x inputs: "pre:period" inline, or @path to a file of ASCII digits.
DigitStream parse_x(const std::string& spec, int base) {
    if (!spec.empty() && spec[0] == '@') {
        std::string text = read_file(spec.substr(1));
        while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
        return DigitStream::from_word(Word::parse(base, text));
    }
    if (spec.find(':') == std::string::npos)
        throw ValidationError("x must be \"pre:period\" or @digit-file");
    return DigitStream::from_epw(EventuallyPeriodicWord::parse(base, spec));
}

json wrap_report(const std::string& library_report, std::initializer_list<std::pair<std::string, json>> fields) {
    json j;
    j["tool"] = "nlab";
    for (const auto& [key, value] : fields) j[key] = value;
    json inner = json::parse(library_report);
    for (auto& [key, value] : inner.items()) j[key] = value;
    return j;
}

void write_stream_file(const std::string& path, const Word& w, bool packed) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    if (packed)
        write_packed_bits(out, w);
    else
        write_digits(out, w);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    out << text;
}

std::vector<std::uint64_t> parse_truncations(const std::string& spec) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoull(tok));
    }
    if (out.empty()) throw ValidationError("empty truncation schedule");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1])
            throw ValidationError("truncation schedule must be strictly increasing");
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"exact digit-frequency analysis, block generation, and stream reductions"};
    app.require_subcommand(1);
    Caps caps = caps_from_env();

    // --- debruijn ---------------------------------------------------------
    auto* sc_db = app.add_subcommand("debruijn", "emit a cyclic de Bruijn word");
    int db_base = 2;
    unsigned db_order = 1;
    sc_db->add_option("--base", db_base, "digit base")->default_val(2);
    sc_db->add_option("--order", db_order, "de Bruijn order")->required();
    sc_db->callback([&] { std::cout << good_word(db_base, db_order, caps).str() << "\n"; });

    // --- absent -----------------------------------------------------------
    auto* sc_ab = app.add_subcommand("absent", "least length-k word absent from (eta_{k-1})^inf");
    unsigned ab_k = 1;
    sc_ab->add_option("--k", ab_k, "word length")->required();
    sc_ab->callback([&] {
        BlockLibrary lib(caps);
        std::cout << lib.absent_word(ab_k).str() << "\n";
    });

    // --- d2-blocks --------------------------------------------------------
    auto* sc_d2b = app.add_subcommand("d2-blocks", "alpha_n = (0110)^n^10 and beta_n = (0110)^n^0");
    std::uint64_t d2b_n = 0;
    std::string d2b_which = "both";
    sc_d2b->add_option("--n", d2b_n, "repetition index")->required();
    sc_d2b->add_option("--which", d2b_which, "alpha|beta|both")->default_val("both");
    sc_d2b->callback([&] {
        if (d2b_which == "alpha" || d2b_which == "both")
            std::cout << d2_alpha(d2b_n).str() << "\n";
        if (d2b_which == "beta" || d2b_which == "both") std::cout << d2_beta(d2b_n).str() << "\n";
        if (d2b_which != "alpha" && d2b_which != "beta" && d2b_which != "both")
            throw ValidationError("--which must be alpha, beta, or both");
    });

    // --- general-blocks ---------------------------------------------------
    auto* sc_gb = app.add_subcommand("general-blocks", "base-b blocks good(b,s)^n^good(b,r), ^0");
    int gb_base = 2;
    unsigned gb_r = 1, gb_s = 2;
    std::uint64_t gb_n = 0;
    sc_gb->add_option("--base", gb_base)->required();
    sc_gb->add_option("--r", gb_r)->required();
    sc_gb->add_option("--s", gb_s)->required();
    sc_gb->add_option("--n", gb_n)->required();
    sc_gb->callback([&] {
        auto blocks = general_blocks(gb_base, gb_r, gb_s, gb_n, caps);
        std::cout << blocks.alpha.str() << "\n" << blocks.beta.str() << "\n";
    });

    // --- tau ---------------------------------------------------------------
    auto* sc_tau = app.add_subcommand("tau", "tau_{k,m,n} period with its verification report");
    unsigned tau_k = 1, tau_m = 0, tau_n = 0;
    bool tau_json = false;
    sc_tau->add_option("--k", tau_k)->required();
    sc_tau->add_option("--m", tau_m)->required();
    sc_tau->add_option("--n", tau_n)->required();
    sc_tau->add_flag("--json", tau_json, "emit the JSON report instead of the bare word");
    sc_tau->callback([&] {
        BlockLibrary lib(caps);
        const Word& word = lib.tau(tau_k, tau_m, tau_n);
        const TauReport& rep = lib.tau_report(tau_k, tau_m, tau_n);
        if (!tau_json) {
            std::cout << word.str() << "\n";
            return;
        }
        json j;
        j["k"] = tau_k;
        j["m"] = tau_m;
        j["n"] = tau_n;
        j["i"] = rep.i;
        j["j"] = rep.j;
        j["word"] = word.str();
        j["r_km"] = rat_json(rep.r_km);
        j["alpha_k_limit"] = rat_json(rep.alpha_k_limit);
        j["bullet1"] = {{"max_dev", rat_json(rep.bullet1_max_dev)},
                        {"argmax", rep.bullet1_argmax.str()},
                        {"bound", rat_json(rep.bullet1_bound)}};
        j["bullet3"] = {{"max_dev", rat_json(rep.bullet3_max_dev)},
                        {"bound", "2^-" + std::to_string(triple_nat(tau_k - 1, tau_m, tau_n))}};
        j["interpretation"] = rep.interpretation;
        std::cout << j.dump(2) << "\n";
    });

    // --- analyze ------------------------------------------------------------
    auto* sc_an = app.add_subcommand("analyze", "normality trajectory over truncations, CSV out");
    std::string an_x, an_trunc, an_out, an_pattern;
    unsigned an_k = 1;
    int an_base = 2;
    sc_an->add_option("--x", an_x, "\"pre:period\" or @digit-file")->required();
    sc_an->add_option("--k", an_k, "block length for max deviation")->required();
    sc_an->add_option("--base", an_base)->default_val(2);
    sc_an->add_option("--truncations", an_trunc, "comma-separated strictly increasing lengths")
        ->required();
    sc_an->add_option("--out", an_out, "CSV path (default stdout)");
    sc_an->add_option("--pattern", an_pattern, "also report this pattern's density");
    sc_an->callback([&] {
        auto truncations = parse_truncations(an_trunc);
        DigitStream stream = parse_x(an_x, an_base);
        const bool is_epw = an_x.find(':') != std::string::npos && (an_x.empty() || an_x[0] != '@');
        std::optional<Word> pattern;
        std::optional<Rat> pattern_limit;
        if (!an_pattern.empty()) {
            pattern = Word::parse(an_base, an_pattern);
            if (is_epw)
                pattern_limit = limit_density(*pattern, EventuallyPeriodicWord::parse(an_base, an_x));
        }
        std::ostringstream csv;
        csv << "truncation,max_deviation,max_deviation_decimal,argmax";
        if (pattern) {
            csv << ",pattern,pattern_density,pattern_density_decimal";
            if (pattern_limit) csv << ",pattern_limit";
        }
        csv << "\n";
        Word buf(an_base, {});
        for (std::uint64_t tr : truncations) {
            if (tr > caps.max_word_digits) throw ResourceError("truncation exceeds cap");
            bool insufficient = false;
            while (buf.size() < tr) {
                try {
                    buf.append_digit(stream.at(buf.size()));
                } catch (const ValidationError&) {
                    insufficient = true;
                    break;
                }
            }
            if (insufficient) {
                csv << tr << ",insufficient,insufficient,insufficient";
                if (pattern) {
                    csv << ",insufficient,insufficient,insufficient";
                    if (pattern_limit) csv << "," << fraction_string(*pattern_limit);
                }
                csv << "\n";
                continue;
            }
            Word head = buf.prefix(tr);
            auto dev = max_deviation(head, an_k);
            csv << tr << "," << fraction_string(dev.value) << "," << decimal_string(dev.value)
                << "," << dev.argmax.str();
            if (pattern) {
                Rat d = density(*pattern, head);
                csv << "," << pattern->str() << "," << fraction_string(d) << ","
                    << decimal_string(d);
                if (pattern_limit) csv << "," << fraction_string(*pattern_limit);
            }
            csv << "\n";
        }
        if (an_out.empty())
            std::cout << csv.str();
        else
            write_text_file(an_out, csv.str());
    });

    // --- reduce-d2 / reduce-general ------------------------------------------
    struct ReduceArgs {
        std::string l_path, f_path, x_spec, out_path, report_path;
        std::uint64_t bits = 0;
        bool intersect_lf = false;
        bool packed = false;
    };
    auto add_reduce_options = [](CLI::App* sc, ReduceArgs& args) {
        sc->add_option("--l", args.l_path, "L family document")->required();
        sc->add_option("--f", args.f_path, "F family document")->required();
        sc->add_option("--x", args.x_spec, "\"pre:period\" or @digit-file")->required();
        sc->add_option("--bits", args.bits, "output digit budget")->required();
        sc->add_option("--out", args.out_path, "digit stream output path");
        sc->add_option("--report", args.report_path, "stage report JSON path");
        sc->add_flag("--intersect-lf", args.intersect_lf,
                     "replace F by the interleaved realization of L cap F");
        sc->add_flag("--packed", args.packed, "write the packed bit format (base 2 only)");
    };
    auto run_reduce = [&](const ReduceArgs& args, const D2Scheme& scheme) {
        Pi03Family L = family_from_json(read_file(args.l_path));
        Pi03Family F = family_from_json(read_file(args.f_path));
        DigitStream x = parse_x(args.x_spec, 2);
        D2Reducer red(L, F, std::move(x), scheme, caps, args.intersect_lf);
        red.run(args.bits);
        if (args.out_path.empty()) {
            write_digits(std::cout, red.emitted());
            std::cout << "\n";
        } else {
            write_stream_file(args.out_path, red.emitted(), args.packed);
        }
        if (!args.report_path.empty()) {
            json j = wrap_report(d2_report_json(red), {{"l", args.l_path},
                                                       {"f", args.f_path},
                                                       {"x", args.x_spec},
                                                       {"bits", args.bits},
                                                       {"intersect_lf", args.intersect_lf}});
            write_text_file(args.report_path, j.dump(2) + "\n");
        }
    };

    auto* sc_rd2 = app.add_subcommand("reduce-d2", "Theorem-1 reduction, binary blocks");
    static ReduceArgs rd2_args;
    add_reduce_options(sc_rd2, rd2_args);
    sc_rd2->callback([&] { run_reduce(rd2_args, d2_scheme_binary()); });

    auto* sc_rg = app.add_subcommand("reduce-general", "Theorem-1 reduction, base-b blocks");
    static ReduceArgs rg_args;
    int rg_base = 2;
    unsigned rg_r = 1, rg_s = 2;
    sc_rg->add_option("--base", rg_base)->required();
    sc_rg->add_option("--r", rg_r)->required();
    sc_rg->add_option("--s", rg_s)->required();
    add_reduce_options(sc_rg, rg_args);
    sc_rg->callback([&] { run_reduce(rg_args, d2_scheme_general(rg_base, rg_r, rg_s, caps)); });

    // --- reduce-domega ---------------------------------------------------------
    auto* sc_ro = app.add_subcommand("reduce-domega", "Theorem-2 omega reduction");
    std::string ro_family, ro_x, ro_out, ro_report;
    std::uint64_t ro_stages = 0;
    bool ro_packed = false, ro_strict = false;
    sc_ro->add_option("--family", ro_family, "triple-indexed family document")->required();
    sc_ro->add_option("--x", ro_x, "\"pre:period\" or @digit-file")->required();
    sc_ro->add_option("--stages", ro_stages, "run stages t = 0..stages")->required();
    sc_ro->add_option("--out", ro_out, "digit stream output path");
    sc_ro->add_option("--report", ro_report, "stage report JSON path");
    sc_ro->add_flag("--packed", ro_packed, "write the packed bit format");
    sc_ro->add_flag("--strict-modulus", ro_strict,
                    "enforce the modulus-table equalities on every grid entry (stages whose "
                    "entries are provably unsatisfiable then end in a growth-cap diagnostic)");
    sc_ro->callback([&] {
        Pi03Family fam = family_from_json(read_file(ro_family));
        BlockLibrary lib(caps);
        OmegaReducer red(fam, parse_x(ro_x, 2), lib, caps,
                         ro_strict ? OmegaMode::Strict : OmegaMode::StableEntries);
        red.run(ro_stages);
        if (ro_out.empty()) {
            write_digits(std::cout, red.sigma());
            std::cout << "\n";
        } else {
            write_stream_file(ro_out, red.sigma(), ro_packed);
        }
        if (!ro_report.empty()) {
            json j = wrap_report(omega_report_json(red), {{"family", ro_family},
                                                          {"x", ro_x},
                                                          {"stages_requested", ro_stages},
                                                          {"strict_modulus", ro_strict}});
            write_text_file(ro_report, j.dump(2) + "\n");
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const nlab::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const nlab::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const nlab::InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
