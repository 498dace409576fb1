#pragma once

#include "nlab/periodic.hpp"
#include "nlab/word.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace nlab {

/// Resource limits. Any operation that would materialize a longer word (or
/// search past a repetition cap) fails with ResourceError instead of
/// thrashing.
struct Caps {
    std::uint64_t max_word_digits = std::uint64_t(1) << 22;
    std::uint64_t max_case2_reps = std::uint64_t(1) << 20; // reducer Case-2 searches
    std::uint64_t max_tau_reps = std::uint64_t(1) << 16;   // tau (i,j) search
    std::uint64_t max_omega_reps = std::uint64_t(1) << 20; // omega stage growth
};

/// Cyclic de Bruijn word: length base^order, every length-`order` word
/// occurs exactly once cyclically. Deterministic output: the
/// lexicographically least such word beginning with 0^order (Lyndon-word
/// concatenation). order 0 returns "0" by convention.
Word good_word(int base, unsigned order, const Caps& caps = Caps{});

/// alpha_n = (0110)^n ^ (10)
Word d2_alpha(std::uint64_t n);
/// beta_n = (0110)^n ^ 0
Word d2_beta(std::uint64_t n);

struct GeneralBlocks {
    Word alpha; // good(b,s)^n ^ good(b,r)
    Word beta;  // good(b,s)^n ^ 0
};

/// Base-b block pair for 1 <= r < s.
GeneralBlocks general_blocks(int base, unsigned r, unsigned s, std::uint64_t n,
                             const Caps& caps = Caps{});

/// r_{k,m} = 2^{-k} (1 - 2^{-(m+5)}): the uniform-in-n bound the tau blocks
/// must keep d_{alpha_k} under. Validated by every tau construction.
Rat r_bound(unsigned k, unsigned m);

struct TauReport {
    std::uint64_t i = 0, j = 0;
    Rat r_km;
    Rat alpha_k_limit;          // limit density of the absent word alpha_k
    Rat bullet1_max_dev;        // max over |alpha| <= k+m of |limit - 2^-|alpha||
    Word bullet1_argmax;
    Rat bullet1_bound;          // 2^{-(k+m)}
    Rat bullet3_max_dev;        // max over |alpha| <= k-1
    Rat bullet3_bound;          // 2^{-triple(k-1,m,n)}
    std::string interpretation = "eta_{k,m} read as eta_{k+m}; bullet-3 exponent is the stage index triple(k-1,m,n)";
};

/// Cache of the recurring construction blocks: good words eta_i, absent
/// words alpha_k, tau_{k,m,n} periods with their verification reports.
/// Concurrent readers are fine; construction of a missing entry is
/// serialized; entries are immutable once published.
class BlockLibrary {
  public:
    explicit BlockLibrary(Caps caps = Caps{}) : caps_(caps) {}

    const Caps& caps() const { return caps_; }

    /// eta_i (binary good word of order i; eta_0 = "0").
    const Word& eta(unsigned order);

    /// Lexicographically least length-k word absent from (eta_{k-1})^inf.
    const Word& absent_word(unsigned k);

    /// One period of tau_{k,m,n} = (eta_{k+m})^i ^ (eta_{k-1})^j, smallest
    /// (i, j) on the policy ray i = 4,8,12,..., j = i/4 whose three density
    /// bullets verify exactly. k >= 1.
    const Word& tau(unsigned k, unsigned m, unsigned n);
    const TauReport& tau_report(unsigned k, unsigned m, unsigned n);

  private:
    struct TauEntry {
        Word word;
        TauReport report;
    };
    const TauEntry& tau_entry(unsigned k, unsigned m, unsigned n);

    Caps caps_;
    std::mutex mutex_;
    std::map<unsigned, Word> etas_;
    std::map<unsigned, Word> absents_;
    std::map<std::tuple<unsigned, unsigned, unsigned>, TauEntry> taus_;
};

} // namespace nlab
