#include "nlab/periodic.hpp"

#include "nlab/errors.hpp"

#include <algorithm>
#include <limits>

namespace nlab {

namespace {

constexpr std::uint64_t kCodeSpaceCap = std::uint64_t(1) << 22;
constexpr unsigned kPrecisionCap = 62;

std::uint64_t checked_pow(std::uint64_t base, unsigned exp, std::uint64_t cap) {
    std::uint64_t v = 1;
    for (unsigned i = 0; i < exp; ++i) {
        v *= base;
        if (v > cap) throw ResourceError("pattern code space exceeds cap");
    }
    return v;
}

} // namespace

EventuallyPeriodicWord::EventuallyPeriodicWord(Word preperiod, Word period)
    : preperiod_(std::move(preperiod)), period_(std::move(period)) {
    if (period_.empty()) throw ValidationError("period must be nonempty");
    if (preperiod_.base() != period_.base())
        throw ValidationError("preperiod/period base mismatch");

    // Primitive root of the period.
    const std::size_t r = period_.size();
    for (std::size_t d = 1; d < r; ++d) {
        if (r % d != 0) continue;
        bool ok = true;
        for (std::size_t i = d; i < r && ok; ++i) ok = period_[i] == period_[i % d];
        if (ok) {
            period_ = period_.prefix(d);
            break;
        }
    }
    // Minimal preperiod: absorb trailing digits into a rotated period.
    while (!preperiod_.empty() &&
           preperiod_[preperiod_.size() - 1] == period_[period_.size() - 1]) {
        std::vector<std::uint8_t> rotated;
        rotated.reserve(period_.size());
        rotated.push_back(period_[period_.size() - 1]);
        for (std::size_t i = 0; i + 1 < period_.size(); ++i) rotated.push_back(period_[i]);
        period_ = Word(period_.base(), std::move(rotated));
        preperiod_ = preperiod_.prefix(preperiod_.size() - 1);
    }
}

EventuallyPeriodicWord EventuallyPeriodicWord::parse(int base, std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw ValidationError("eventually periodic word must be written \"pre:period\"");
    return EventuallyPeriodicWord(Word::parse(base, text.substr(0, colon)),
                                  Word::parse(base, text.substr(colon + 1)));
}

Word EventuallyPeriodicWord::prefix(std::uint64_t n) const {
    std::vector<std::uint8_t> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(digit(i));
    return Word(base(), std::move(out));
}

std::uint64_t period_occurrences(const Word& alpha, const EventuallyPeriodicWord& w) {
    if (alpha.base() != w.base()) throw ValidationError("base mismatch in limit density");
    if (alpha.empty()) throw ValidationError("limit density pattern must be nonempty");
    const std::uint64_t p = w.preperiod().size();
    const std::uint64_t r = w.period().size();
    const std::uint64_t a = alpha.size();
    Word buf = w.prefix(p + r + a);
    std::uint64_t c = 0;
    for (std::uint64_t i = p; i < p + r; ++i) {
        bool match = true;
        for (std::uint64_t j = 0; j < a; ++j) {
            if (buf[i + j] != alpha[j]) { match = false; break; }
        }
        if (match) ++c;
    }
    return c;
}

Rat limit_density(const Word& alpha, const EventuallyPeriodicWord& w) {
    return Rat(period_occurrences(alpha, w), w.period().size());
}

namespace {

/// Last violating prefix lengths for one pattern, one per precision.
///
/// Inputs: preperiod length P, period length R, pattern length A, per-period
/// occurrence count c, sorted occurrence starts over [0, P+R).  A prefix
/// length q "violates" at precision p when |d(q) - c/R| >= 2^{-p} (the empty
/// prefix has d = 0).  Writes -1 when no q violates.
///
/// Positions >= P occur periodically, so count(q) - (c/R) q is periodic in q
/// for q >= P+A; violations beyond the explicitly scanned window reduce to a
/// per-residue closed form.
void last_violations(std::uint64_t P, std::uint64_t R, std::uint64_t A, std::uint64_t c,
                     const std::vector<std::uint32_t>& occ, unsigned maxp,
                     std::int64_t* out) {
    const std::uint64_t q0 = P + A;
    const std::uint64_t q_hi = q0 + R - 1; // explicit region [1, q_hi]
    for (unsigned p = 0; p <= maxp; ++p) out[p] = -1;

    // q = 0: density 0 versus limit c/R.
    for (unsigned p = 0; p <= maxp; ++p) {
        if ((static_cast<__int128>(c) << p) >= static_cast<__int128>(R)) out[p] = 0;
    }

    // Constant-count segments over [1, q_hi]. count(q) gains occurrence i at
    // q = i + A + 1.
    std::size_t idx = 0;
    std::uint64_t count = 0;
    std::uint64_t q = 1;
    while (q <= q_hi) {
        while (idx < occ.size() && occ[idx] + A + 1 <= q) {
            ++count;
            ++idx;
        }
        std::uint64_t seg_end = q_hi;
        if (idx < occ.size()) seg_end = std::min<std::uint64_t>(seg_end, occ[idx] + A);
        // violation at q <=> |count*R - c*q| * 2^p >= R*q
        for (unsigned p = 0; p <= maxp; ++p) {
            const __int128 cr2 = (static_cast<__int128>(count) * R) << p;
            // surplus side: q <= cr2 / (R + c 2^p)
            const __int128 den_pos = static_cast<__int128>(R) + (static_cast<__int128>(c) << p);
            std::uint64_t cand = 0;
            bool has = false;
            __int128 q_pos = cr2 / den_pos;
            if (q_pos >= static_cast<__int128>(q)) {
                cand = static_cast<std::uint64_t>(std::min<__int128>(q_pos, seg_end));
                has = true;
            }
            // deficit side: q (c 2^p - R) >= cr2
            const __int128 d = (static_cast<__int128>(c) << p) - static_cast<__int128>(R);
            if (d > 0) {
                __int128 q_neg = (cr2 + d - 1) / d; // ceil
                if (static_cast<__int128>(seg_end) >= q_neg) {
                    has = true;
                    cand = seg_end;
                }
            } else if (d == 0 && count == 0) {
                has = true;
                cand = seg_end;
            }
            if (has && static_cast<std::int64_t>(cand) > out[p]) out[p] = static_cast<std::int64_t>(cand);
        }
        q = seg_end + 1;
    }

    // Periodic tail: h(q) = count(q) R - c q repeats with period R for q >= q0.
    for (std::uint64_t r = 0; r < R; ++r) {
        const std::uint64_t qa = q0 + r;
        // count(qa) = #occ < qa - A = P + r
        const std::uint64_t cnt =
            static_cast<std::uint64_t>(std::lower_bound(occ.begin(), occ.end(), P + r) - occ.begin());
        const std::int64_t h = static_cast<std::int64_t>(cnt * R) - static_cast<std::int64_t>(c * qa);
        if (h == 0) continue;
        const __int128 habs = h < 0 ? -static_cast<__int128>(h) : static_cast<__int128>(h);
        for (unsigned p = 0; p <= maxp; ++p) {
            const __int128 q_max = (habs << p) / static_cast<__int128>(R);
            if (q_max >= static_cast<__int128>(qa + R)) {
                const std::uint64_t qv =
                    qa + R * static_cast<std::uint64_t>((static_cast<std::uint64_t>(q_max) - qa) / R);
                if (static_cast<std::int64_t>(qv) > out[p]) out[p] = static_cast<std::int64_t>(qv);
            }
        }
    }
}

std::vector<std::uint32_t> occurrence_positions(const Word& buf, const Word& alpha,
                                                std::uint64_t upto) {
    std::vector<std::uint32_t> occ;
    const std::size_t a = alpha.size();
    for (std::uint64_t i = 0; i < upto; ++i) {
        bool match = true;
        for (std::size_t j = 0; j < a; ++j) {
            if (buf[i + j] != alpha[j]) { match = false; break; }
        }
        if (match) occ.push_back(static_cast<std::uint32_t>(i));
    }
    return occ;
}

} // namespace

std::uint64_t modulus(const EventuallyPeriodicWord& w, const Word& alpha, unsigned p) {
    if (alpha.base() != w.base()) throw ValidationError("base mismatch in modulus");
    if (alpha.empty()) throw ValidationError("modulus pattern must be nonempty");
    if (p > kPrecisionCap) throw ResourceError("modulus precision exceeds cap 62");
    const std::uint64_t P = w.preperiod().size();
    const std::uint64_t R = w.period().size();
    const std::uint64_t A = alpha.size();
    Word buf = w.prefix(P + R + A);
    auto occ = occurrence_positions(buf, alpha, P + R);
    const std::uint64_t c =
        static_cast<std::uint64_t>(occ.end() - std::lower_bound(occ.begin(), occ.end(), P));
    std::vector<std::int64_t> last(p + 1);
    last_violations(P, R, A, c, occ, p, last.data());
    return static_cast<std::uint64_t>(last[p] + 1);
}

namespace {

__int128 floor_div(__int128 a, __int128 b) {
    __int128 q = a / b;
    if (a % b != 0 && ((a % b < 0) != (b < 0))) q -= 1;
    return q;
}

__int128 ceil_div(__int128 a, __int128 b) { return -floor_div(-a, b); }

} // namespace

ForeignModulus modulus_against(const EventuallyPeriodicWord& w, const Word& alpha, unsigned p,
                               const Rat& limit) {
    if (alpha.base() != w.base()) throw ValidationError("base mismatch in modulus");
    if (alpha.empty()) throw ValidationError("modulus pattern must be nonempty");
    if (p > kPrecisionCap) throw ResourceError("modulus precision exceeds cap 62");
    if (limit < 0 || limit > 1) throw ValidationError("foreign limit out of [0,1]");
    const std::uint64_t P = w.preperiod().size();
    const std::uint64_t R = w.period().size();
    const std::uint64_t A = alpha.size();
    Word buf = w.prefix(P + R + A);
    auto occ = occurrence_positions(buf, alpha, P + R);
    const std::uint64_t c =
        static_cast<std::uint64_t>(occ.end() - std::lower_bound(occ.begin(), occ.end(), P));

    const std::int64_t num = numerator(limit).convert_to<std::int64_t>();
    const std::int64_t den = denominator(limit).convert_to<std::int64_t>();

    std::int64_t last = -1;
    bool any_inf = false;
    // q = 0: density 0 versus the foreign limit.
    if ((static_cast<__int128>(num) << p) >= static_cast<__int128>(den)) last = 0;

    // Explicit region [1, q0 + R - 1]: violation iff |count*den - num*q| 2^p >= den*q.
    const std::uint64_t q0 = P + A;
    const std::uint64_t q_hi = q0 + R - 1;
    std::size_t idx = 0;
    std::uint64_t count = 0;
    std::vector<std::int64_t> h_at(R, 0); // h(q) = count(q)*den - num*q at q = q0 + r
    for (std::uint64_t q = 1; q <= q_hi; ++q) {
        while (idx < occ.size() && occ[idx] + A + 1 <= q) {
            ++count;
            ++idx;
        }
        const __int128 h = static_cast<__int128>(count) * den - static_cast<__int128>(num) * q;
        const __int128 habs = h < 0 ? -h : h;
        if ((habs << p) >= static_cast<__int128>(den) * q) last = static_cast<std::int64_t>(q);
        if (q >= q0) h_at[q - q0] = static_cast<std::int64_t>(h);
    }

    // Tail: h(q + R) = h(q) + D with drift D = den*c - num*R. Per residue,
    // members are q = qa + jR for j >= 1 with h = h0 + jD; solve the two
    // sign branches of |h0 + jD| 2^p >= den (qa + jR) as linear inequalities.
    const std::int64_t D =
        den * static_cast<std::int64_t>(c) - num * static_cast<std::int64_t>(R);
    for (std::uint64_t r = 0; r < R && !any_inf; ++r) {
        const std::uint64_t qa = q0 + r;
        const std::int64_t h0 = h_at[r];
        for (int sign = +1; sign >= -1; sign -= 2) {
            // region: sign*(h0 + jD) >= 0, j >= 1; inside it the violation is
            // j*coeff >= rhs with
            const __int128 coeff =
                sign * (static_cast<__int128>(D) << p) - static_cast<__int128>(den) * R;
            const __int128 rhs =
                static_cast<__int128>(den) * qa - sign * (static_cast<__int128>(h0) << p);
            const std::int64_t sD = sign * D;
            const std::int64_t sh0 = sign * h0;
            bool region_unbounded = false;
            __int128 j_lo = 1, j_hi = -1;
            if (sD > 0) {
                region_unbounded = true;
                j_lo = sh0 >= 0 ? 1 : std::max<__int128>(1, ceil_div(-sh0, sD));
            } else if (sD == 0) {
                if (sh0 < 0) continue; // empty region
                region_unbounded = true;
            } else {
                if (sh0 < 0) continue; // h0 + jD never on this side for j >= 1
                j_hi = floor_div(sh0, -static_cast<__int128>(sD));
                if (j_hi < 1) continue;
            }
            if (coeff > 0) {
                const __int128 j_first = std::max(j_lo, ceil_div(rhs, coeff));
                if (region_unbounded)
                    any_inf = true;
                else if (j_first <= j_hi)
                    last = std::max<std::int64_t>(
                        last, static_cast<std::int64_t>(qa + R * static_cast<std::uint64_t>(j_hi)));
            } else if (coeff == 0) {
                if (rhs <= 0) {
                    if (region_unbounded)
                        any_inf = true;
                    else
                        last = std::max<std::int64_t>(
                            last,
                            static_cast<std::int64_t>(qa + R * static_cast<std::uint64_t>(j_hi)));
                }
            } else {
                // coeff < 0: violating j <= floor(rhs / coeff)
                __int128 j_last = floor_div(rhs, coeff);
                if (!region_unbounded && j_last > j_hi) j_last = j_hi;
                if (j_last >= j_lo)
                    last = std::max<std::int64_t>(
                        last,
                        static_cast<std::int64_t>(qa + R * static_cast<std::uint64_t>(j_last)));
            }
        }
    }
    if (any_inf) return {true, 0};
    return {false, static_cast<std::uint64_t>(last + 1)};
}

ModulusTable::ModulusTable(int base, unsigned max_word_len, unsigned max_precision)
    : base_(base), max_word_len_(max_word_len), max_precision_(max_precision) {
    values_.resize(max_word_len_);
    std::uint64_t codes = 1;
    for (unsigned len = 1; len <= max_word_len_; ++len) {
        codes *= base_;
        if (codes > kCodeSpaceCap) throw ResourceError("modulus table grid exceeds cap");
        values_[len - 1].assign(codes * (max_precision_ + 1), 0);
    }
}

std::uint64_t& ModulusTable::entry(unsigned len, std::uint64_t code, unsigned p) {
    return values_[len - 1][code * (max_precision_ + 1) + p];
}

std::uint64_t ModulusTable::entry(unsigned len, std::uint64_t code, unsigned p) const {
    return values_[len - 1][code * (max_precision_ + 1) + p];
}

std::uint64_t ModulusTable::at(const Word& alpha, unsigned p) const {
    if (alpha.empty() || alpha.size() > max_word_len_ || p > max_precision_)
        throw ValidationError("modulus table lookup outside grid");
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i) code = code * base_ + alpha[i];
    return entry(static_cast<unsigned>(alpha.size()), code, p);
}

Word ModulusTable::code_word(unsigned len, std::uint64_t code) const {
    std::vector<std::uint8_t> digits(len);
    for (unsigned i = len; i-- > 0;) {
        digits[i] = static_cast<std::uint8_t>(code % base_);
        code /= base_;
    }
    return Word(base_, std::move(digits));
}

bool ModulusTable::restricted_equal(const ModulusTable& other, unsigned len, unsigned prec) const {
    if (len > max_word_len_ || len > other.max_word_len_ || prec > max_precision_ ||
        prec > other.max_precision_)
        throw ValidationError("modulus table comparison outside grid");
    if (base_ != other.base_) return false;
    std::uint64_t codes = 1;
    for (unsigned l = 1; l <= len; ++l) {
        codes *= base_;
        for (std::uint64_t code = 0; code < codes; ++code)
            for (unsigned p = 0; p <= prec; ++p)
                if (entry(l, code, p) != other.entry(l, code, p)) return false;
    }
    return true;
}

ModulusTable restrict_modulus(const EventuallyPeriodicWord& w, unsigned max_word_len,
                              unsigned max_precision) {
    if (max_precision > kPrecisionCap) throw ResourceError("modulus precision exceeds cap 62");
    ModulusTable table(w.base(), max_word_len, max_precision);
    if (max_word_len == 0) return table;
    const std::uint64_t P = w.preperiod().size();
    const std::uint64_t R = w.period().size();
    const int b = w.base();
    Word buf = w.prefix(P + R + max_word_len);

    std::vector<std::int64_t> last(max_precision + 1);
    for (unsigned A = 1; A <= max_word_len; ++A) {
        const std::uint64_t codes = checked_pow(b, A, kCodeSpaceCap);
        // Bucket window-start positions by pattern code in one rolling pass.
        std::vector<std::vector<std::uint32_t>> occ(codes);
        std::uint64_t msb = 1;
        for (unsigned i = 0; i + 1 < A; ++i) msb *= b;
        std::uint64_t code = 0;
        for (std::uint64_t i = 0; i < A; ++i) code = code * b + buf[i];
        for (std::uint64_t i = 0; i < P + R; ++i) {
            occ[code].push_back(static_cast<std::uint32_t>(i));
            if (i + 1 < P + R) code = (code - buf[i] * msb) * b + buf[i + A];
        }
        for (std::uint64_t cd = 0; cd < codes; ++cd) {
            const auto& positions = occ[cd];
            const std::uint64_t c = static_cast<std::uint64_t>(
                positions.end() - std::lower_bound(positions.begin(), positions.end(), P));
            last_violations(P, R, A, c, positions, max_precision, last.data());
            for (unsigned p = 0; p <= max_precision; ++p)
                table.entry(A, cd, p) = static_cast<std::uint64_t>(last[p] + 1);
        }
    }
    return table;
}

MaxDeviationResult max_deviation(const Word& sigma, unsigned k) {
    if (k < 1) throw ValidationError("max_deviation requires k >= 1");
    if (sigma.size() < k) throw ValidationError("sigma shorter than k");
    const int b = sigma.base();
    const std::uint64_t codes = checked_pow(b, k, kCodeSpaceCap);
    const std::uint64_t S = sigma.size();
    std::vector<std::uint64_t> counts(codes, 0);
    std::uint64_t msb = 1;
    for (unsigned i = 0; i + 1 < k; ++i) msb *= b;
    std::uint64_t code = 0;
    for (std::uint64_t i = 0; i < k; ++i) code = code * b + sigma[i];
    // window starts i < S - k, strictly
    for (std::uint64_t i = 0; i + k < S; ++i) {
        ++counts[code];
        code = (code - sigma[i] * msb) * b + sigma[i + k];
    }
    // All deviations share the denominator S * b^k; compare numerators.
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
    std::vector<std::uint8_t> digits(k);
    std::uint64_t cw = best_code;
    for (unsigned i = k; i-- > 0;) {
        digits[i] = static_cast<std::uint8_t>(cw % b);
        cw /= b;
    }
    if ((best >> 63) != 0) throw InternalError("max_deviation numerator overflow");
    Rat value(Int(static_cast<std::int64_t>(best)), Int(S) * codes);
    return {value, Word(b, std::move(digits))};
}

} // namespace nlab
