#include "nlab/blocks.hpp"

#include "nlab/errors.hpp"
#include "nlab/pairing.hpp"

#include <algorithm>
#include <functional>

namespace nlab {

Word good_word(int base, unsigned order, const Caps& caps) {
    Word::check_base(base);
    if (order == 0) return Word(base, {0});
    // Length check before generating.
    std::uint64_t len = 1;
    for (unsigned i = 0; i < order; ++i) {
        len *= base;
        if (len > caps.max_word_digits)
            throw ResourceError("good word of order " + std::to_string(order) + " exceeds cap " +
                                std::to_string(caps.max_word_digits) + " digits");
    }
    // Lyndon-word concatenation (Fredricksen-Maiorana): emits the
    // lexicographically least de Bruijn cycle starting with 0^order.
    std::vector<std::uint8_t> seq;
    seq.reserve(len);
    std::vector<std::uint8_t> a(order + 1, 0);
    std::function<void(unsigned, unsigned)> db = [&](unsigned t, unsigned p) {
        if (t > order) {
            if (order % p == 0)
                for (unsigned j = 1; j <= p; ++j) seq.push_back(a[j]);
        } else {
            a[t] = a[t - p];
            db(t + 1, p);
            for (int j = a[t - p] + 1; j < base; ++j) {
                a[t] = static_cast<std::uint8_t>(j);
                db(t + 1, t);
            }
        }
    };
    db(1, 1);
    return Word(base, std::move(seq));
}

Word d2_alpha(std::uint64_t n) {
    return Word::binary("0110").power(n).concat(Word::binary("10"));
}

Word d2_beta(std::uint64_t n) {
    return Word::binary("0110").power(n).concat(Word::binary("0"));
}

GeneralBlocks general_blocks(int base, unsigned r, unsigned s, std::uint64_t n, const Caps& caps) {
    if (r < 1 || r >= s) throw ValidationError("general blocks require 1 <= r < s");
    Word theta = good_word(base, s, caps);
    Word mu = good_word(base, r, caps);
    if ((n * theta.size() + mu.size()) > caps.max_word_digits)
        throw ResourceError("general block exceeds word-length cap");
    Word theta_n = theta.power(n);
    return {theta_n.concat(mu), theta_n.concat(Word(base, {0}))};
}

Rat r_bound(unsigned k, unsigned m) {
    // 2^{-k} (1 - 2^{-(m+5)})
    Int den = Int(1) << (m + 5);
    return pow2_neg(k) * Rat(den - 1, den);
}

const Word& BlockLibrary::eta(unsigned order) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = etas_.find(order);
    if (it == etas_.end()) it = etas_.emplace(order, good_word(2, order, caps_)).first;
    return it->second;
}

const Word& BlockLibrary::absent_word(unsigned k) {
    if (k < 1) throw ValidationError("absent word requires k >= 1");
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = absents_.find(k);
        if (it != absents_.end()) return it->second;
    }
    const Word& base_eta = eta(k - 1);
    EventuallyPeriodicWord tail(Word(2, {}), base_eta);
    // Mark the length-k factors present in (eta_{k-1})^inf; at most 2^{k-1}
    // of the 2^k candidates occur, so the least absent one exists.
    const std::uint64_t codes = std::uint64_t(1) << k;
    std::vector<bool> present(codes, false);
    const std::uint64_t R = tail.period().size();
    Word buf = tail.prefix(R + k);
    std::uint64_t code = 0;
    for (unsigned i = 0; i < k; ++i) code = code * 2 + buf[i];
    const std::uint64_t msb = std::uint64_t(1) << (k - 1);
    for (std::uint64_t i = 0; i < R; ++i) {
        present[code] = true;
        if (i + 1 < R + 1) code = (code - buf[i] * msb) * 2 + buf[i + k];
    }
    std::uint64_t least = 0;
    while (least < codes && present[least]) ++least;
    if (least == codes) throw InternalError("no absent word found");
    std::vector<std::uint8_t> digits(k);
    std::uint64_t cw = least;
    for (unsigned i = k; i-- > 0;) {
        digits[i] = static_cast<std::uint8_t>(cw % 2);
        cw /= 2;
    }
    std::lock_guard<std::mutex> lock(mutex_);
    return absents_.emplace(k, Word(2, std::move(digits))).first->second;
}

const BlockLibrary::TauEntry& BlockLibrary::tau_entry(unsigned k, unsigned m, unsigned n) {
    if (k < 1) throw ValidationError("tau requires k >= 1");
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = taus_.find({k, m, n});
        if (it != taus_.end()) return it->second;
    }
    const Word& eta_km = eta(k + m); // eta_{k,m} read as eta_{k+m}
    const Word& eta_k1 = eta(k - 1);
    const Word& alpha_k = absent_word(k);
    const Rat r_km = r_bound(k, m);
    const Rat bullet1_bound = pow2_neg(k + m);
    const std::uint64_t stage = triple_nat(k - 1, m, n);
    if (stage > (std::uint64_t(1) << 20))
        throw ResourceError("tau stage index too large for exact bullet-3 tolerance");
    // 2^{-stage} as an exact rational (arbitrary precision; stage can be large).
    const Rat bullet3_bound = Rat(1, Int(1) << static_cast<unsigned>(stage));

    std::string failure;
    for (std::uint64_t i = 4;; i += 4) {
        const std::uint64_t j = i / 4;
        if (i > caps_.max_tau_reps)
            throw ResourceError("tau(" + std::to_string(k) + "," + std::to_string(m) + "," +
                                std::to_string(n) + ") search cap exceeded; last failing bullet: " +
                                failure);
        const std::uint64_t total = i * eta_km.size() + j * eta_k1.size();
        if (total > caps_.max_word_digits)
            throw ResourceError("tau period exceeds word-length cap");
        Word candidate = eta_km.power(i).concat(eta_k1.power(j));
        EventuallyPeriodicWord cyc(Word(2, {}), candidate);

        TauReport report;
        report.i = i;
        report.j = j;
        report.r_km = r_km;
        report.bullet1_bound = bullet1_bound;
        report.bullet3_bound = bullet3_bound;

        // Bullet 1: every |alpha| <= k+m within 2^{-(k+m)} of 2^{-|alpha|}.
        bool ok = true;
        Rat max_dev1(0);
        Word argmax1 = Word::binary("0");
        for (unsigned len = 1; len <= k + m && ok; ++len) {
            const std::uint64_t codes = std::uint64_t(1) << len;
            for (std::uint64_t cd = 0; cd < codes; ++cd) {
                std::vector<std::uint8_t> digits(len);
                std::uint64_t cw = cd;
                for (unsigned b = len; b-- > 0;) {
                    digits[b] = static_cast<std::uint8_t>(cw % 2);
                    cw /= 2;
                }
                Word alpha(2, std::move(digits));
                Rat dev = limit_density(alpha, cyc) - pow2_neg(len);
                if (dev < 0) dev = -dev;
                if (dev > max_dev1) {
                    max_dev1 = dev;
                    argmax1 = alpha;
                }
            }
        }
        report.bullet1_max_dev = max_dev1;
        report.bullet1_argmax = argmax1;
        if (max_dev1 >= bullet1_bound) {
            ok = false;
            failure = "bullet 1 (|alpha| <= k+m grid)";
        }

        // Bullet 2: limit density of alpha_k stays below r_{k,m}.
        if (ok) {
            report.alpha_k_limit = limit_density(alpha_k, cyc);
            if (!(report.alpha_k_limit < r_km)) {
                ok = false;
                failure = "bullet 2 (alpha_k cap)";
            }
        }

        // Bullet 3: every |alpha| <= k-1 within 2^{-triple(k-1,m,n)}.
        if (ok) {
            Rat max_dev3(0);
            for (unsigned len = 1; len + 1 <= k && ok; ++len) {
                const std::uint64_t codes = std::uint64_t(1) << len;
                for (std::uint64_t cd = 0; cd < codes; ++cd) {
                    std::vector<std::uint8_t> digits(len);
                    std::uint64_t cw = cd;
                    for (unsigned b = len; b-- > 0;) {
                        digits[b] = static_cast<std::uint8_t>(cw % 2);
                        cw /= 2;
                    }
                    Rat dev = limit_density(Word(2, std::move(digits)), cyc) - pow2_neg(len);
                    if (dev < 0) dev = -dev;
                    if (dev > max_dev3) max_dev3 = dev;
                }
            }
            report.bullet3_max_dev = max_dev3;
            if (max_dev3 >= bullet3_bound) {
                ok = false;
                failure = "bullet 3 (|alpha| <= k-1 grid)";
            }
        }

        if (ok) {
            std::lock_guard<std::mutex> lock(mutex_);
            auto [it, inserted] =
                taus_.emplace(std::make_tuple(k, m, n), TauEntry{std::move(candidate), std::move(report)});
            (void)inserted;
            return it->second;
        }
    }
}

const Word& BlockLibrary::tau(unsigned k, unsigned m, unsigned n) { return tau_entry(k, m, n).word; }

const TauReport& BlockLibrary::tau_report(unsigned k, unsigned m, unsigned n) {
    return tau_entry(k, m, n).report;
}

} // namespace nlab
