#pragma once

#include "nlab/word.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace nlab {

/// preperiod ^ period^infinity, held in canonical form: the period is
/// primitive and the preperiod is minimal (its last digit, if any, breaks
/// the periodicity). Equality is canonical-form equality.
class EventuallyPeriodicWord {
  public:
    EventuallyPeriodicWord(Word preperiod, Word period);

    /// Parses "pre:period" (":0110" for an empty preperiod).
    static EventuallyPeriodicWord parse(int base, std::string_view text);

    const Word& preperiod() const { return preperiod_; }
    const Word& period() const { return period_; }
    int base() const { return period_.base(); }

    std::uint8_t digit(std::uint64_t i) const {
        if (i < preperiod_.size()) return preperiod_[i];
        return period_[(i - preperiod_.size()) % period_.size()];
    }
    Word prefix(std::uint64_t n) const;

    std::string str() const { return preperiod_.str() + ":" + period_.str(); }

    bool operator==(const EventuallyPeriodicWord& other) const = default;

  private:
    Word preperiod_, period_;
};

/// lim_s d_alpha(w |` s), computed exactly as (occurrences of alpha per
/// period of the periodic tail, counted cyclically) / |period|. The
/// preperiod never affects the limit.
Rat limit_density(const Word& alpha, const EventuallyPeriodicWord& w);

/// Occurrences of alpha per period of the tail (the numerator above, with
/// denominator |period|).
std::uint64_t period_occurrences(const Word& alpha, const EventuallyPeriodicWord& w);

/// The modulus of distribution: least q such that every q' >= q has
/// |d_alpha(w |` q') - limit| < 2^{-p}, strictly. The empty prefix counts
/// with density 0. Exact; precision p is capped at 62.
std::uint64_t modulus(const EventuallyPeriodicWord& w, const Word& alpha, unsigned p);

/// Modulus of w's digit sequence measured against a *foreign* limit: least
/// q with |d_alpha(w |` q') - limit| < 2^{-p} for all q' >= q, or infinite
/// when the deviation stays >= 2^{-p} cofinally (which happens exactly when
/// |own limit - limit| is too large). This is the i -> infinity value of
/// the modulus of sigma^(block)^i^(tail)^inf on the shared prefix, used to
/// decide which stage-condition entries can ever be satisfied.
struct ForeignModulus {
    bool infinite = false;
    std::uint64_t value = 0;
    bool operator==(const ForeignModulus&) const = default;
};
ForeignModulus modulus_against(const EventuallyPeriodicWord& w, const Word& alpha, unsigned p,
                               const Rat& limit);

/// modulus restricted to a finite grid: words of length 1..max_word_len
/// (length-0 excluded; d of the empty pattern is undefined) times
/// precisions 0..max_precision.
class ModulusTable {
  public:
    ModulusTable() = default;
    ModulusTable(int base, unsigned max_word_len, unsigned max_precision);

    int base() const { return base_; }
    unsigned max_word_len() const { return max_word_len_; }
    unsigned max_precision() const { return max_precision_; }

    std::uint64_t at(const Word& alpha, unsigned p) const;
    std::uint64_t& entry(unsigned len, std::uint64_t code, unsigned p);
    std::uint64_t entry(unsigned len, std::uint64_t code, unsigned p) const;

    /// Equality of the sub-grids (length <= len, precision <= prec).
    bool restricted_equal(const ModulusTable& other, unsigned len, unsigned prec) const;

    /// Word for (len, code), most significant digit first.
    Word code_word(unsigned len, std::uint64_t code) const;

  private:
    int base_ = 2;
    unsigned max_word_len_ = 0, max_precision_ = 0;
    std::vector<std::vector<std::uint64_t>> values_; // [len-1][code*(maxp+1)+p]
};

ModulusTable restrict_modulus(const EventuallyPeriodicWord& w, unsigned max_word_len,
                              unsigned max_precision);

struct MaxDeviationResult {
    Rat value;
    Word argmax;
};

/// max over all length-k patterns alpha of |d_alpha(sigma) - base^{-k}|;
/// the finite-stage normality diagnostic.
MaxDeviationResult max_deviation(const Word& sigma, unsigned k);

} // namespace nlab
