#include "nlab/report_json.hpp"

#include "nlab/rational.hpp"

#include <json.hpp>

namespace nlab {

namespace {

using json = nlohmann::ordered_json;

json rat_json(const Rat& r) { return fraction_string(r); }

} // namespace

std::string d2_report_json(const D2Reducer& red) {
    json j;
    j["scheme"] = red.scheme().name;
    j["interpretation"] = {
        {"i_minus_1", 0},
        {"j_minus_1", 0},
        {"alpha_threshold", red.scheme().alpha_threshold_formula},
        {"beta_threshold", red.scheme().beta_threshold_formula},
        {"alpha_pattern", red.scheme().alpha_pattern.str()},
        {"beta_pattern", red.scheme().beta_pattern.str()},
    };
    j["consumed_x"] = red.consumed_x();
    json stages = json::array();
    for (const auto& rep : red.reports()) {
        json sj;
        sj["p"] = rep.p;
        sj["m"] = rep.m;
        sj["n"] = rep.n;
        sj["case_alpha"] = rep.case_alpha == StageCase::Case1 ? 1 : 2;
        sj["i_p"] = rep.i_p;
        sj["a_p"] = rep.a_p;
        sj["alpha_boundary"] = rep.alpha_boundary;
        sj["alpha_density"] = rat_json(rep.alpha_density);
        if (rep.case_alpha == StageCase::Case2)
            sj["alpha_threshold"] = rat_json(rep.alpha_threshold);
        if (rep.alpha_truncated) sj["alpha_truncated"] = true;
        sj["case_beta"] = rep.case_beta == StageCase::Case1 ? 1 : 2;
        sj["j_p"] = rep.j_p;
        sj["b_p"] = rep.b_p;
        sj["beta_boundary"] = rep.beta_boundary;
        sj["beta_density"] = rat_json(rep.beta_density);
        if (rep.case_beta == StageCase::Case2) sj["beta_threshold"] = rat_json(rep.beta_threshold);
        if (rep.beta_truncated) sj["beta_truncated"] = true;
        sj["consumed_x"] = rep.consumed_x;
        stages.push_back(sj);
    }
    j["stages"] = stages;
    return j.dump(2);
}

std::string omega_report_json(const OmegaReducer& red) {
    json j;
    j["interpretation"] = {
        {"eta_km_reading", "eta_{k+m}"},
        {"stage_index", "triple(k-1, m, n) with documents using 1-based k"},
        {"condition_2a_word", "sigma_{t-1} ^ (eta_t)^i ^ (eta_{t+1})^inf"},
    };
    j["consumed_x"] = red.consumed_x();
    json stages = json::array();
    for (const auto& rep : red.reports()) {
        json sj;
        sj["t"] = rep.t;
        sj["k"] = rep.k;
        sj["m"] = rep.m;
        sj["n"] = rep.n;
        sj["case"] = rep.stage_case == StageCase::Case1 ? 1 : 2;
        sj["next_case"] = rep.next_case == StageCase::Case1 ? 1 : 2;
        sj["block"] = rep.block_kind;
        sj["block_len"] = rep.block_len;
        if (rep.block_kind == "tau") {
            sj["tau_i"] = rep.tau_i;
            sj["tau_j"] = rep.tau_j;
        }
        sj["reps"] = rep.reps;
        sj["sigma_before"] = rep.sigma_before;
        sj["sigma_after"] = rep.sigma_after;
        json conds = json::array();
        for (const auto& cond : rep.densities) {
            conds.push_back({{"id", cond.id},
                             {"max_len", cond.max_len},
                             {"bound", rat_json(cond.bound)},
                             {"max_dev", rat_json(cond.max_dev)},
                             {"argmax", cond.argmax.str()}});
        }
        sj["density_conditions"] = conds;
        if (rep.has_condition5) {
            sj["condition5"] = {{"alpha_k", rep.alpha_k.str()},
                                {"density", rat_json(rep.alpha_k_density)},
                                {"r_km", rat_json(rep.r_km)}};
        }
        sj["modulus_condition"] = rep.modulus_id;
        json grids = json::array();
        for (const auto& grid : rep.modulus_tables) {
            grids.push_back(
                {{"max_len", grid.max_len}, {"max_prec", grid.max_prec}, {"entries", grid.entries}});
        }
        sj["modulus_grids"] = grids;
        if (!rep.modulus_exempt.empty()) {
            json ex = json::array();
            for (const auto& e : rep.modulus_exempt) {
                std::vector<std::uint8_t> digits(e.len);
                std::uint64_t cw = e.code;
                for (unsigned i = e.len; i-- > 0;) {
                    digits[i] = static_cast<std::uint8_t>(cw % 2);
                    cw /= 2;
                }
                ex.push_back({{"alpha", Word(2, std::move(digits)).str()},
                              {"p", e.p},
                              {"mu_t", e.mu_t_value},
                              {"persistent",
                               e.persistent_infinite ? json("inf") : json(e.persistent_value)}});
            }
            sj["modulus_exempt"] = ex;
        }
        sj["consumed_x"] = rep.consumed_x;
        stages.push_back(sj);
    }
    j["stages"] = stages;
    return j.dump(2);
}

} // namespace nlab
