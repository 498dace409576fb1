#pragma once

#include "nlab/errors.hpp"
#include "nlab/rational.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nlab {

/// Finite digit string over a fixed base. Immutable value semantics; the
/// universal currency for every block, pattern, and emitted prefix.
///
/// Digits are stored one small integer per position (never packed), so
/// equality and iteration are digit-wise. Bases up to 256 are supported.
class Word {
  public:
    Word() : base_(2) {}

    Word(int base, std::vector<std::uint8_t> digits) : base_(base), digits_(std::move(digits)) {
        check_base(base_);
        for (std::uint8_t d : digits_) {
            if (d >= base_)
                throw ValidationError("word digit " + std::to_string(int(d)) +
                                      " out of range for base " + std::to_string(base_));
        }
    }

    /// Parses the serialized form: plain ASCII digits for base <= 10
    /// ("0110"), comma-separated decimal digits otherwise ("1,0,12,3").
    static Word parse(int base, std::string_view text);

    /// Convenience for base-2 literals in code and tests.
    static Word binary(std::string_view bits) { return parse(2, bits); }

    int base() const { return base_; }
    std::size_t size() const { return digits_.size(); }
    bool empty() const { return digits_.empty(); }
    std::uint8_t operator[](std::size_t i) const { return digits_[i]; }
    const std::vector<std::uint8_t>& digits() const { return digits_; }

    bool operator==(const Word& other) const = default;

    /// sigma ^ tau
    Word concat(const Word& other) const;
    /// alpha^n (n-fold self-concatenation; n = 0 gives the empty word).
    Word power(std::uint64_t n) const;
    /// x |` n (first n digits; n must not exceed the length).
    Word prefix(std::size_t n) const;

    void append_digit(std::uint8_t d) {
        if (d >= base_) throw ValidationError("digit out of range");
        digits_.push_back(d);
    }
    void append_word(const Word& w);
    void reserve(std::size_t n) { digits_.reserve(n); }

    std::string str() const;

    static void check_base(int base) {
        if (base < 2 || base > 256) throw ValidationError("base must be in [2, 256]");
    }

  private:
    int base_;
    std::vector<std::uint8_t> digits_;
};

/// d_alpha(sigma): the number of positions i < |sigma| - |alpha| at which
/// alpha occurs, divided by |sigma|. The bound is strict, so an occurrence
/// ending at the final digit does not count; this follows the source
/// convention exactly and all frozen values in the tests use it.
Rat density(const Word& alpha, const Word& sigma);

/// Occurrence count under the same convention (positions i < |sigma|-|alpha|).
std::uint64_t density_hits(const Word& alpha, const Word& sigma);

/// Streaming form of d_alpha: feed digits one at a time, query the exact
/// density of the processed prefix at any point. O(|pattern|) per digit and
/// O(|pattern|) state, independent of how much has been processed.
class DensityTracker {
  public:
    explicit DensityTracker(Word pattern);

    /// Consumes one digit of sigma.
    void extend(std::uint8_t digit);

    const Word& pattern() const { return pattern_; }
    std::uint64_t processed() const { return processed_; }
    std::uint64_t hits() const { return hits_; }

    /// hits / processed; error on the empty prefix (the defining formula
    /// divides by |sigma|).
    Rat density() const;

    /// Exact comparison density() >= num/den without building rationals.
    bool at_least(std::int64_t num, std::int64_t den) const {
        if (processed_ == 0) throw ValidationError("density of empty prefix is undefined");
        return static_cast<__int128>(hits_) * den >= static_cast<__int128>(num) * processed_;
    }

  private:
    Word pattern_;
    std::uint64_t processed_ = 0;
    std::uint64_t hits_ = 0;
    std::vector<std::uint8_t> ring_; // last |pattern| digits
    std::size_t ring_pos_ = 0;
    bool ring_full_ = false;
};

/// Functional flavour of DensityTracker::extend, matching the operation
/// surface one-to-one.
inline DensityTracker tracker_extend(DensityTracker t, std::uint8_t digit) {
    t.extend(digit);
    return t;
}

} // namespace nlab
