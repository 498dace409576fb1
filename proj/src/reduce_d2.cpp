#include "nlab/reduce.hpp"

#include "nlab/errors.hpp"
#include "nlab/pairing.hpp"

#include <algorithm>
#include <map>
#include <memory>

namespace nlab {

DigitStream DigitStream::from_epw(EventuallyPeriodicWord w) {
    DigitStream s;
    s.base_ = w.base();
    s.f_ = [w = std::move(w)](std::uint64_t i) { return w.digit(i); };
    return s;
}

DigitStream DigitStream::from_word(Word w) {
    DigitStream s;
    s.base_ = w.base();
    s.f_ = [w = std::move(w)](std::uint64_t i) {
        if (i >= w.size())
            throw ValidationError("input stream exhausted at index " + std::to_string(i));
        return w[i];
    };
    return s;
}

DigitStream DigitStream::from_function(int base, std::function<std::uint8_t(std::uint64_t)> f) {
    Word::check_base(base);
    DigitStream s;
    s.base_ = base;
    s.f_ = std::move(f);
    return s;
}

std::uint8_t DigitStream::at(std::uint64_t i) const { return f_(i); }

StageCase d2_classify(const Pi03Family& fam, const Word& x_prefix, std::uint64_t p) {
    const auto [m, n] = unpair_nat(p);
    if (x_prefix.size() < p) throw ValidationError("x prefix shorter than stage index");
    const Word at_p = x_prefix.prefix(p);
    if (!fam.query({m, n}, at_p)) return StageCase::Case2;
    if (n >= 1) {
        const Word at_prev = x_prefix.prefix(pair_nat(m, n - 1));
        for (std::uint64_t np = 0; np < n; ++np) {
            if (fam.query({m, np}, at_prev) && !fam.query({m, np}, at_p)) return StageCase::Case2;
        }
    }
    return StageCase::Case1;
}

StageCase omega_classify(const Pi03Family& fam, const Word& x_prefix, std::uint64_t t) {
    const auto [k_int, m, n] = untriple_nat(t);
    const std::uint64_t at = pair_nat(m, n);
    if (x_prefix.size() < at) throw ValidationError("x prefix shorter than stage pairing index");
    const Word at_mn = x_prefix.prefix(at);
    if (!fam.query({k_int, m, n}, at_mn)) return StageCase::Case2;
    if (n >= 1) {
        const Word at_prev = x_prefix.prefix(pair_nat(m, n - 1));
        for (std::uint64_t np = 0; np < n; ++np) {
            if (fam.query({k_int, m, np}, at_prev) && !fam.query({k_int, m, np}, at_mn))
                return StageCase::Case2;
        }
    }
    return StageCase::Case1;
}

// ---------------------------------------------------------------------------

D2Scheme d2_scheme_binary() {
    D2Scheme s;
    s.out_base = 2;
    s.name = "binary";
    s.alpha_pattern = Word::binary("10");
    s.beta_pattern = Word::binary("0");
    s.alpha_block = [](std::uint64_t n) { return d2_alpha(n); };
    s.beta_block = [](std::uint64_t n) { return d2_beta(n); };
    s.alpha_threshold = [](std::uint64_t m) { return Rat(4 * m + 3, 4 * (4 * m + 2)); };
    s.beta_threshold = [](std::uint64_t m) { return Rat(8 * m + 3, 4 * (4 * m + 1)); };
    s.alpha_threshold_formula = "(m+3/4)/(4m+2)";
    s.beta_threshold_formula = "(2m+3/4)/(4m+1)";
    return s;
}

D2Scheme d2_scheme_general(int base, unsigned r, unsigned s_order, const Caps& caps) {
    if (r < 1 || r >= s_order) throw ValidationError("general scheme requires 1 <= r < s");
    D2Scheme s;
    s.out_base = base;
    s.name = "general(b=" + std::to_string(base) + ",r=" + std::to_string(r) +
             ",s=" + std::to_string(s_order) + ")";
    const Word mu = good_word(base, r, caps);
    std::uint64_t br = 1;
    for (unsigned i = 0; i < r; ++i) br *= base;
    const unsigned pat_len = static_cast<unsigned>(std::min<std::uint64_t>(s_order, br));
    s.alpha_pattern = mu.prefix(pat_len);
    s.beta_pattern = Word(base, {0});

    s.alpha_block = [base, r, s_order, caps](std::uint64_t n) {
        return general_blocks(base, r, s_order, n, caps).alpha;
    };
    s.beta_block = [base, r, s_order, caps](std::uint64_t n) {
        return general_blocks(base, r, s_order, n, caps).beta;
    };

    // Threshold: limit - gap/4 = (3 limit + target)/4 with the exact block
    // limit and target b^{-|pattern|}. The gap is always positive: the
    // pattern is a prefix of mu starting 0^r, so it never matches a window
    // crossing a block boundary, and the mu segment hands each period at
    // least one occurrence above the de Bruijn share.
    auto alpha_cache = std::make_shared<std::map<std::uint64_t, Rat>>();
    {
        Word pat = s.alpha_pattern;
        auto block = s.alpha_block;
        const Rat target = pow_neg(base, pat_len);
        s.alpha_threshold = [alpha_cache, pat, block, target](std::uint64_t m) {
            auto it = alpha_cache->find(m);
            if (it == alpha_cache->end()) {
                const Rat limit =
                    limit_density(pat, EventuallyPeriodicWord(Word(pat.base(), {}), block(m)));
                if (limit <= target) throw InternalError("general alpha gap not positive");
                it = alpha_cache->emplace(m, (3 * limit + target) / 4).first;
            }
            return it->second;
        };
    }
    auto beta_cache = std::make_shared<std::map<std::uint64_t, Rat>>();
    {
        Word pat = s.beta_pattern;
        auto block = s.beta_block;
        const Rat target = pow_neg(base, 1);
        s.beta_threshold = [beta_cache, pat, block, target](std::uint64_t m) {
            auto it = beta_cache->find(m);
            if (it == beta_cache->end()) {
                const Rat limit =
                    limit_density(pat, EventuallyPeriodicWord(Word(pat.base(), {}), block(m)));
                if (limit <= target) throw InternalError("general beta gap not positive");
                it = beta_cache->emplace(m, (3 * limit + target) / 4).first;
            }
            return it->second;
        };
    }
    s.alpha_threshold_formula =
        "limit - gap/4, gap = limit_density(mu|`min(s,b^r), alpha_m^inf) - b^{-min(s,b^r)}";
    s.beta_threshold_formula = "limit - gap/4, gap = limit_density(0, beta_m^inf) - 1/b";
    return s;
}

// ---------------------------------------------------------------------------

D2Reducer::D2Reducer(Pi03Family L, Pi03Family F, DigitStream x, D2Scheme scheme, Caps caps,
                     bool intersect_lf)
    : l_(monotonize(L)),
      f_(intersect_lf ? interleave_intersection(L, F) : monotonize(F)),
      x_(std::move(x)),
      scheme_(std::move(scheme)),
      caps_(caps),
      x_buf_(Word(x_.base(), {})),
      emitted_(Word(scheme_.out_base, {})),
      alpha_tracker_(scheme_.alpha_pattern),
      beta_tracker_(scheme_.beta_pattern) {
    if (l_.arity() != 2 || f_.arity() != 2)
        throw ValidationError("the two-index reducer needs double-indexed families");
}

const Word& D2Reducer::x_prefix(std::uint64_t len) {
    while (x_buf_.size() < len) x_buf_.append_digit(x_.at(x_buf_.size()));
    consumed_x_ = std::max(consumed_x_, len);
    return x_buf_;
}

bool D2Reducer::emit_block(const Word& block) {
    for (std::size_t i = 0; i < block.size(); ++i) {
        if (emitted_.size() >= budget_) return false;
        const std::uint8_t d = block[i];
        alpha_tracker_.extend(d);
        beta_tracker_.extend(d);
        emitted_.append_digit(d);
    }
    return true;
}

void D2Reducer::run_stage() {
    const std::uint64_t p = stage_;
    const auto [m, n] = unpair_nat(p);
    D2StageReport rep;
    rep.p = p;
    rep.m = m;
    rep.n = n;

    const Word& xp = x_prefix(p);

    // alpha side: i_p against F
    rep.case_alpha = d2_classify(f_, xp, p);
    rep.i_p = rep.case_alpha == StageCase::Case1 ? i_prev_ + 1 : m;
    const Word alpha_block = scheme_.alpha_block(rep.i_p);
    bool truncated = false;
    if (rep.case_alpha == StageCase::Case1) {
        rep.a_p = 1;
        truncated = !emit_block(alpha_block);
    } else {
        const Rat threshold = scheme_.alpha_threshold(m);
        rep.alpha_threshold = threshold;
        const auto num = numerator(threshold).convert_to<std::int64_t>();
        const auto den = denominator(threshold).convert_to<std::int64_t>();
        std::uint64_t k = 0;
        while (true) {
            if (k >= caps_.max_case2_reps)
                throw ResourceError("Case-2 alpha repetition cap exceeded at stage " +
                                    std::to_string(p));
            if (!emit_block(alpha_block)) {
                truncated = true;
                break;
            }
            ++k;
            if (alpha_tracker_.at_least(num, den)) break;
        }
        rep.a_p = k;
    }
    rep.alpha_truncated = truncated;
    rep.alpha_boundary = emitted_.size();
    if (emitted_.size() > 0) rep.alpha_density = alpha_tracker_.density();

    // beta side: j_p against L
    if (!truncated) {
        rep.case_beta = d2_classify(l_, xp, p);
        rep.j_p = rep.case_beta == StageCase::Case1 ? j_prev_ + 1 : m;
        const Word beta_block = scheme_.beta_block(rep.j_p);
        if (rep.case_beta == StageCase::Case1) {
            rep.b_p = 1;
            truncated = !emit_block(beta_block);
        } else {
            const Rat threshold = scheme_.beta_threshold(m);
            rep.beta_threshold = threshold;
            const auto num = numerator(threshold).convert_to<std::int64_t>();
            const auto den = denominator(threshold).convert_to<std::int64_t>();
            std::uint64_t k = 0;
            while (true) {
                if (k >= caps_.max_case2_reps)
                    throw ResourceError("Case-2 beta repetition cap exceeded at stage " +
                                        std::to_string(p));
                if (!emit_block(beta_block)) {
                    truncated = true;
                    break;
                }
                ++k;
                if (beta_tracker_.at_least(num, den)) break;
            }
            rep.b_p = k;
        }
        rep.beta_truncated = truncated;
        rep.beta_boundary = emitted_.size();
        if (emitted_.size() > 0) rep.beta_density = beta_tracker_.density();
        if (!truncated) {
            i_prev_ = rep.i_p;
            j_prev_ = rep.j_p;
        }
    }

    rep.consumed_x = consumed_x_;
    reports_.push_back(std::move(rep));
    ++stage_;
}

void D2Reducer::run(std::uint64_t budget) {
    if (budget > caps_.max_word_digits)
        throw ResourceError("budget exceeds the word-length cap");
    budget_ = budget;
    while (emitted_.size() < budget_) run_stage();
}

std::uint8_t D2Reducer::next_digit() {
    if (cursor_ < emitted_.size()) return emitted_[cursor_++];
    if (emitted_.size() + 1 > caps_.max_word_digits)
        throw ResourceError("pull exceeds the word-length cap");
    budget_ = caps_.max_word_digits;
    const std::uint64_t want = emitted_.size() + 1;
    while (emitted_.size() < want) run_stage();
    return emitted_[cursor_++];
}

bool verify_d2_stage(const D2StageReport& rep, const Word& emitted, const D2Scheme& scheme) {
    if (rep.alpha_boundary > emitted.size() || rep.beta_boundary > emitted.size()) return false;
    if (rep.alpha_boundary > 0) {
        const Rat d = density(scheme.alpha_pattern, emitted.prefix(rep.alpha_boundary));
        if (d != rep.alpha_density) return false;
        if (rep.case_alpha == StageCase::Case2 && !rep.alpha_truncated && d < rep.alpha_threshold)
            return false;
    }
    if (rep.beta_boundary > 0) {
        const Rat d = density(scheme.beta_pattern, emitted.prefix(rep.beta_boundary));
        if (d != rep.beta_density) return false;
        if (rep.case_beta == StageCase::Case2 && !rep.beta_truncated && d < rep.beta_threshold)
            return false;
    }
    return true;
}

bool verify_d2_run(const std::vector<D2StageReport>& reports, const Word& emitted,
                   const D2Scheme& scheme) {
    struct Mark {
        std::uint64_t pos;
        const D2StageReport* rep;
        bool is_alpha;
    };
    std::vector<Mark> marks;
    for (const auto& rep : reports) {
        if (rep.alpha_boundary > emitted.size() || rep.beta_boundary > emitted.size()) return false;
        if (rep.alpha_boundary > 0) marks.push_back({rep.alpha_boundary, &rep, true});
        if (rep.beta_boundary > 0) marks.push_back({rep.beta_boundary, &rep, false});
    }
    std::stable_sort(marks.begin(), marks.end(),
                     [](const Mark& a, const Mark& b) { return a.pos < b.pos; });
    DensityTracker alpha(scheme.alpha_pattern), beta(scheme.beta_pattern);
    std::size_t mi = 0;
    for (std::uint64_t pos = 0; pos <= emitted.size(); ++pos) {
        while (mi < marks.size() && marks[mi].pos == pos) {
            const auto& mk = marks[mi];
            const auto& rep = *mk.rep;
            if (mk.is_alpha) {
                const Rat d = alpha.density();
                if (d != rep.alpha_density) return false;
                if (rep.case_alpha == StageCase::Case2 && !rep.alpha_truncated &&
                    d < rep.alpha_threshold)
                    return false;
            } else {
                const Rat d = beta.density();
                if (d != rep.beta_density) return false;
                if (rep.case_beta == StageCase::Case2 && !rep.beta_truncated &&
                    d < rep.beta_threshold)
                    return false;
            }
            ++mi;
        }
        if (pos < emitted.size()) {
            alpha.extend(emitted[pos]);
            beta.extend(emitted[pos]);
        }
    }
    return mi == marks.size();
}

} // namespace nlab
