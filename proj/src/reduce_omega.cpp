#include "nlab/reduce.hpp"

#include "nlab/errors.hpp"
#include "nlab/pairing.hpp"

#include <algorithm>

namespace nlab {

GridDeviation density_deviation_grid(const Word& sigma, unsigned max_len) {
    GridDeviation out;
    out.max_dev = Rat(0);
    out.argmax = Word(sigma.base(), {});
    const std::uint64_t S = sigma.size();
    if (S == 0 && max_len > 0)
        throw ValidationError("density grid over the empty word is undefined");
    for (unsigned A = 1; A <= max_len; ++A) {
        if (S < A) throw ValidationError("sigma shorter than grid length");
        const std::uint64_t codes = std::uint64_t(1) << A;
        std::vector<std::uint64_t> counts(codes, 0);
        std::uint64_t msb = codes >> 1;
        std::uint64_t code = 0;
        for (unsigned i = 0; i < A; ++i) code = code * 2 + sigma[i];
        for (std::uint64_t i = 0; i + A < S; ++i) {
            ++counts[code];
            code = (code - sigma[i] * msb) * 2 + sigma[i + A];
        }
        // shared denominator S * 2^A: compare numerators |cnt 2^A - S|
        __int128 best = -1;
        std::uint64_t best_code = 0;
        for (std::uint64_t cd = 0; cd < codes; ++cd) {
            __int128 num = static_cast<__int128>(counts[cd]) * codes - static_cast<__int128>(S);
            if (num < 0) num = -num;
            if (num > best) {
                best = num;
                best_code = cd;
            }
        }
        Rat dev(Int(static_cast<std::int64_t>(best)), Int(S) * codes);
        if (dev > out.max_dev) {
            out.max_dev = dev;
            std::vector<std::uint8_t> digits(A);
            std::uint64_t cw = best_code;
            for (unsigned i = A; i-- > 0;) {
                digits[i] = static_cast<std::uint8_t>(cw % 2);
                cw /= 2;
            }
            out.argmax = Word(2, std::move(digits));
        }
    }
    return out;
}

namespace {

std::vector<std::uint64_t> table_entries(const ModulusTable& table, unsigned max_len,
                                         unsigned max_prec) {
    std::vector<std::uint64_t> out;
    std::uint64_t codes = 1;
    for (unsigned len = 1; len <= max_len; ++len) {
        codes *= 2;
        for (std::uint64_t cd = 0; cd < codes; ++cd)
            for (unsigned p = 0; p <= max_prec; ++p) out.push_back(table.entry(len, cd, p));
    }
    return out;
}

struct StagePlan {
    std::string modulus_id;
    std::vector<std::pair<unsigned, unsigned>> grids; // (max_len, max_prec)
    unsigned grid_len_max = 0, grid_prec_max = 0;

    bool in_any_grid(unsigned len, unsigned p) const {
        for (auto [l, pr] : grids)
            if (len <= l && p <= pr) return true;
        return false;
    }
};

StagePlan modulus_plan(StageCase c, StageCase c_next, std::uint64_t t, unsigned k, unsigned m,
                       unsigned k2, unsigned m2) {
    StagePlan plan;
    const unsigned ut = static_cast<unsigned>(t);
    if (c == StageCase::Case1 && c_next == StageCase::Case1) {
        plan.modulus_id = "2a";
        plan.grids = {{ut, ut}};
    } else if (c == StageCase::Case1) {
        plan.modulus_id = "2b";
        const unsigned p = std::min<unsigned>(ut, k2 + m2);
        const unsigned ks = std::min<unsigned>(ut, k2 - 1);
        plan.grids = {{p, p}, {ks, ut}};
    } else if (c_next == StageCase::Case1) {
        plan.modulus_id = "6a";
        const unsigned p = std::min<unsigned>(k + m, ut + 1);
        const unsigned ks = std::min<unsigned>(k - 1, ut + 1);
        plan.grids = {{p, p}, {ks, ut}};
    } else {
        plan.modulus_id = "6b";
        const unsigned p = std::min<unsigned>(k + m, k2 + m2);
        const unsigned ks = std::min<unsigned>(k - 1, k2 - 1);
        plan.grids = {{p, p}, {ks, ut}};
    }
    for (auto [len, prec] : plan.grids) {
        if (len == 0) continue; // no nonempty words of length <= 0
        plan.grid_len_max = std::max(plan.grid_len_max, len);
        plan.grid_prec_max = std::max(plan.grid_prec_max, prec);
    }
    return plan;
}

/// The i-independent exemption set: grid entries whose equality with mu_t
/// is provably unattainable for every repetition count (see OmegaExemptEntry).
std::vector<OmegaExemptEntry> compute_exemptions(const StagePlan& plan, const ModulusTable& mu_t,
                                                 const Word& sigma_prev, const Word& block,
                                                 const Word& block_next) {
    std::vector<OmegaExemptEntry> out;
    if (plan.grid_len_max == 0) return out;
    EventuallyPeriodicWord y_t(sigma_prev, block);
    EventuallyPeriodicWord next_tail(Word(2, {}), block_next);
    std::uint64_t codes = 1;
    for (unsigned len = 1; len <= plan.grid_len_max; ++len) {
        codes *= 2;
        for (std::uint64_t cd = 0; cd < codes; ++cd) {
            Word alpha = mu_t.code_word(len, cd);
            const Rat target = limit_density(alpha, next_tail);
            if (target == limit_density(alpha, y_t)) continue; // same limits: always satisfiable
            for (unsigned p = 0; p <= plan.grid_prec_max; ++p) {
                if (!plan.in_any_grid(len, p)) continue;
                const ForeignModulus fm = modulus_against(y_t, alpha, p, target);
                if (fm.infinite || fm.value != mu_t.entry(len, cd, p))
                    out.push_back({len, cd, p, mu_t.entry(len, cd, p), fm.infinite, fm.value});
            }
        }
    }
    return out;
}

bool is_exempt(const std::vector<OmegaExemptEntry>& exempt, unsigned len, std::uint64_t code,
               unsigned p) {
    for (const auto& e : exempt)
        if (e.len == len && e.code == code && e.p == p) return true;
    return false;
}

bool tables_equal_except(const ModulusTable& a, const ModulusTable& b, unsigned max_len,
                         unsigned max_prec, const std::vector<OmegaExemptEntry>& exempt) {
    std::uint64_t codes = 1;
    for (unsigned len = 1; len <= max_len; ++len) {
        codes *= 2;
        for (std::uint64_t cd = 0; cd < codes; ++cd)
            for (unsigned p = 0; p <= max_prec; ++p) {
                if (a.entry(len, cd, p) == b.entry(len, cd, p)) continue;
                if (!is_exempt(exempt, len, cd, p)) return false;
            }
    }
    return true;
}

} // namespace

OmegaReducer::OmegaReducer(Pi03Family fam, DigitStream x, BlockLibrary& lib, Caps caps,
                           OmegaMode mode)
    : fam_(monotonize(fam)), x_(std::move(x)), lib_(lib), caps_(caps), mode_(mode),
      x_buf_(Word(x_.base(), {})), sigma_(Word(2, {})) {
    if (fam_.arity() != 3) throw ValidationError("the omega reducer needs a triple-indexed family");
}

const Word& OmegaReducer::x_prefix(std::uint64_t len) {
    while (x_buf_.size() < len) x_buf_.append_digit(x_.at(x_buf_.size()));
    consumed_x_ = std::max(consumed_x_, len);
    return x_buf_;
}

void OmegaReducer::run_stage(std::uint64_t t) {
    const auto [k_int, m64, n64] = untriple_nat(t);
    const auto [k2_int, m2_64, n2_64] = untriple_nat(t + 1);
    const unsigned k = static_cast<unsigned>(k_int) + 1;
    const unsigned m = static_cast<unsigned>(m64), n = static_cast<unsigned>(n64);
    const unsigned k2 = static_cast<unsigned>(k2_int) + 1;
    const unsigned m2 = static_cast<unsigned>(m2_64), n2 = static_cast<unsigned>(n2_64);

    // Lookahead: stage t needs t+1's case before sigma_t can be fixed.
    const std::uint64_t need_x = std::max(pair_nat(m64, n64), pair_nat(m2_64, n2_64));
    const Word& xp = x_prefix(need_x);
    const StageCase c = omega_classify(fam_, xp, t);
    const StageCase c_next = omega_classify(fam_, xp, t + 1);

    OmegaStageReport rep;
    rep.t = t;
    rep.k = k;
    rep.m = m;
    rep.n = n;
    rep.stage_case = c;
    rep.next_case = c_next;
    rep.k_next = k2;
    rep.m_next = m2;
    rep.n_next = n2;

    const Word& block =
        (c == StageCase::Case1) ? lib_.eta(static_cast<unsigned>(t)) : lib_.tau(k, m, n);
    rep.block_kind = (c == StageCase::Case1) ? "eta" : "tau";
    rep.block_len = block.size();
    if (c == StageCase::Case2) {
        const TauReport& tr = lib_.tau_report(k, m, n);
        rep.tau_i = tr.i;
        rep.tau_j = tr.j;
    }
    const Word& block_next = (c_next == StageCase::Case1)
                                 ? lib_.eta(static_cast<unsigned>(t + 1))
                                 : lib_.tau(k2, m2, n2);

    const StagePlan plan = modulus_plan(c, c_next, t, k, m, k2, m2);
    rep.modulus_id = plan.modulus_id;

    // mu_t: modulus of y_t = sigma_{t-1} ^ block^inf, fixed before the
    // repetition search.
    ModulusTable mu_t;
    if (plan.grid_len_max > 0)
        mu_t = restrict_modulus(EventuallyPeriodicWord(sigma_, block), plan.grid_len_max,
                                plan.grid_prec_max);

    // Entries the displayed equality can never satisfy (StableEntries mode);
    // empty in Strict mode, and empty whenever the tails agree in the limit.
    std::vector<OmegaExemptEntry> exempt;
    if (mode_ == OmegaMode::StableEntries)
        exempt = compute_exemptions(plan, mu_t, sigma_, block, block_next);
    rep.modulus_exempt = exempt;

    // Density condition set for this case.
    struct DensitySpec {
        std::string id;
        unsigned max_len;
        Rat bound;
    };
    std::vector<DensitySpec> density_specs;
    if (c == StageCase::Case1) {
        density_specs.push_back(
            {"1", static_cast<unsigned>(t), pow2_neg(static_cast<unsigned>(t))});
    } else {
        density_specs.push_back({"3", k + m, pow2_neg(k + m)});
        density_specs.push_back({"4", k - 1, pow2_neg(static_cast<unsigned>(t))});
    }

    const Word& alpha_k = lib_.absent_word(k);
    const Rat r_km = r_bound(k, m);

    // One candidate check; fills `rep` details when `record` is set.
    auto check = [&](std::uint64_t reps, bool record, std::string& fail_id) -> bool {
        Word cand = sigma_;
        cand.reserve(cand.size() + reps * block.size());
        for (std::uint64_t i = 0; i < reps; ++i) cand.append_word(block);

        if (record) rep.densities.clear();
        for (const auto& spec : density_specs) {
            if (spec.max_len == 0) {
                if (record) rep.densities.push_back({spec.id, 0, spec.bound, Rat(0), Word(2, {})});
                continue;
            }
            GridDeviation dev = density_deviation_grid(cand, spec.max_len);
            if (record)
                rep.densities.push_back(
                    {spec.id, spec.max_len, spec.bound, dev.max_dev, dev.argmax});
            if (!(dev.max_dev < spec.bound)) {
                fail_id = spec.id;
                return false;
            }
        }
        if (c == StageCase::Case2) {
            const Rat d_ak = density(alpha_k, cand);
            if (record) {
                rep.has_condition5 = true;
                rep.alpha_k_density = d_ak;
                rep.r_km = r_km;
                rep.alpha_k = alpha_k;
            }
            if (!(d_ak < r_km)) {
                fail_id = "5";
                return false;
            }
        }
        if (plan.grid_len_max > 0) {
            ModulusTable mu_cand = restrict_modulus(EventuallyPeriodicWord(cand, block_next),
                                                    plan.grid_len_max, plan.grid_prec_max);
            if (record) rep.modulus_tables.clear();
            for (auto [len, prec] : plan.grids) {
                if (len == 0) {
                    if (record) rep.modulus_tables.push_back({0, prec, {}});
                    continue;
                }
                if (!tables_equal_except(mu_cand, mu_t, len, prec, exempt)) {
                    fail_id = plan.modulus_id;
                    return false;
                }
                if (record)
                    rep.modulus_tables.push_back({len, prec, table_entries(mu_cand, len, prec)});
            }
        } else if (record) {
            for (auto [len, prec] : plan.grids) rep.modulus_tables.push_back({len, prec, {}});
        }
        return true;
    };

    // Doubling search, then binary refinement to the least passing count.
    std::string fail_id = "(none checked)";
    std::uint64_t lo = 0, hi = 0;
    for (std::uint64_t i = 1;; i *= 2) {
        if (i > caps_.max_omega_reps)
            throw ResourceError("omega stage " + std::to_string(t) +
                                " growth cap exceeded; failing condition: " + fail_id);
        if (sigma_.size() + i * block.size() > caps_.max_word_digits)
            throw ResourceError("omega stage " + std::to_string(t) +
                                " exceeds the word-length cap; failing condition: " + fail_id);
        if (check(i, false, fail_id)) {
            hi = i;
            break;
        }
        lo = i;
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (check(mid, false, fail_id))
            hi = mid;
        else
            lo = mid;
    }

    rep.reps = hi;
    rep.sigma_before = sigma_.size();
    std::string unused;
    if (!check(hi, true, unused)) throw InternalError("omega stage recheck failed");
    for (std::uint64_t i = 0; i < hi; ++i) sigma_.append_word(block);
    rep.sigma_after = sigma_.size();
    rep.consumed_x = consumed_x_;
    reports_.push_back(std::move(rep));
}

void OmegaReducer::run(std::uint64_t max_stage) {
    // eta_t has length 2^t; refuse stages the cap cannot hold.
    if (max_stage >= 62 || (std::uint64_t(1) << (max_stage + 1)) > caps_.max_word_digits)
        throw ResourceError("max stage exceeds the word-length cap");
    for (std::uint64_t t = reports_.size(); t <= max_stage; ++t) run_stage(t);
}

bool verify_omega_stage(const OmegaStageReport& rep, const Word& emitted, BlockLibrary& lib) {
    if (rep.sigma_after > emitted.size() || rep.sigma_before > rep.sigma_after) return false;
    const Word& block = (rep.stage_case == StageCase::Case1)
                            ? lib.eta(static_cast<unsigned>(rep.t))
                            : lib.tau(rep.k, rep.m, rep.n);
    if (block.size() != rep.block_len) return false;
    if (rep.sigma_after - rep.sigma_before != rep.reps * block.size()) return false;
    const Word sigma_t = emitted.prefix(rep.sigma_after);

    for (const auto& cond : rep.densities) {
        if (cond.max_len == 0) {
            if (cond.max_dev != Rat(0)) return false;
            continue;
        }
        GridDeviation dev = density_deviation_grid(sigma_t, cond.max_len);
        if (dev.max_dev != cond.max_dev) return false;
        if (!(dev.max_dev < cond.bound)) return false;
    }
    if (rep.has_condition5) {
        const Word& alpha_k = lib.absent_word(rep.k);
        if (alpha_k != rep.alpha_k) return false;
        const Rat d = density(alpha_k, sigma_t);
        if (d != rep.alpha_k_density) return false;
        if (!(d < rep.r_km)) return false;
        if (rep.r_km != r_bound(rep.k, rep.m)) return false;
    }

    // Modulus equalities, recomputed table-for-table. Exempt entries must
    // re-derive as genuinely persistent mismatches.
    const Word& block_next = (rep.next_case == StageCase::Case1)
                                 ? lib.eta(static_cast<unsigned>(rep.t + 1))
                                 : lib.tau(rep.k_next, rep.m_next, rep.n_next);
    const StagePlan plan = modulus_plan(rep.stage_case, rep.next_case, rep.t, rep.k, rep.m,
                                        rep.k_next, rep.m_next);
    if (plan.modulus_id != rep.modulus_id) return false;
    if (plan.grid_len_max > 0) {
        const Word sigma_prev = emitted.prefix(rep.sigma_before);
        ModulusTable mu_t = restrict_modulus(EventuallyPeriodicWord(sigma_prev, block),
                                             plan.grid_len_max, plan.grid_prec_max);
        ModulusTable mu_next = restrict_modulus(EventuallyPeriodicWord(sigma_t, block_next),
                                                plan.grid_len_max, plan.grid_prec_max);
        for (const auto& e : rep.modulus_exempt) {
            // stored exemptions must match the recomputed persistent analysis
            Word alpha = mu_t.code_word(e.len, e.code);
            const Rat target =
                limit_density(alpha, EventuallyPeriodicWord(Word(2, {}), block_next));
            const ForeignModulus fm =
                modulus_against(EventuallyPeriodicWord(sigma_prev, block), alpha, e.p, target);
            if (e.mu_t_value != mu_t.entry(e.len, e.code, e.p)) return false;
            if (fm.infinite != e.persistent_infinite) return false;
            if (!fm.infinite && fm.value != e.persistent_value) return false;
            if (!fm.infinite && fm.value == e.mu_t_value) return false; // not a real mismatch
        }
        std::size_t grid_index = 0;
        for (auto [len, prec] : plan.grids) {
            if (grid_index >= rep.modulus_tables.size()) return false;
            const auto& stored = rep.modulus_tables[grid_index++];
            if (stored.max_len != len || stored.max_prec != prec) return false;
            if (len == 0) continue;
            if (!tables_equal_except(mu_next, mu_t, len, prec, rep.modulus_exempt)) return false;
            if (table_entries(mu_next, len, prec) != stored.entries) return false;
        }
    }
    return true;
}

bool verify_omega_run(const std::vector<OmegaStageReport>& reports, const Word& emitted,
                      BlockLibrary& lib) {
    std::uint64_t expected_before = 0;
    for (const auto& rep : reports) {
        if (rep.sigma_before != expected_before) return false;
        if (!verify_omega_stage(rep, emitted, lib)) return false;
        expected_before = rep.sigma_after;
    }
    return true;
}

} // namespace nlab
