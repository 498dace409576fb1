#pragma once

#include "nlab/blocks.hpp"
#include "nlab/pointclass.hpp"
#include "nlab/word.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nlab {

enum class StageCase { Case1, Case2 };

/// Input digit stream with random access; the reducers only ever look at
/// finite prefixes whose length is bounded by the stage pairing index.
class DigitStream {
  public:
    static DigitStream from_epw(EventuallyPeriodicWord w);
    static DigitStream from_word(Word w); // finite; reading past the end is an error
    static DigitStream from_function(int base, std::function<std::uint8_t(std::uint64_t)> f);

    int base() const { return base_; }
    std::uint8_t at(std::uint64_t i) const;

  private:
    int base_ = 2;
    std::function<std::uint8_t(std::uint64_t)> f_;
};

/// Stage-p case for the alpha/beta index recursions: Case 1 is the
/// preservation clause plus a nonempty intersection at (m,n); Case 2 is its
/// displayed negation. For n = 0 the preservation clause is vacuous.
StageCase d2_classify(const Pi03Family& fam, const Word& x_prefix, std::uint64_t p);

/// Same dichotomy for triple-indexed stages t; prefixes are read at the
/// inner pairing index <m,n>, not at t.
StageCase omega_classify(const Pi03Family& fam, const Word& x_prefix, std::uint64_t t);

// ---------------------------------------------------------------------------
// Theorem-1-style reducer (binary and general-base block schemes)

/// Block scheme: which blocks get spliced and which pattern densities the
/// Case-2 searches push past which thresholds. The two instances are the
/// binary scheme ((0110)^n blocks, patterns "10"/"0", thresholds
/// (m+3/4)/(4m+2) and (2m+3/4)/(4m+1)) and the general-base scheme.
struct D2Scheme {
    int out_base = 2;
    std::string name;
    Word alpha_pattern, beta_pattern;
    std::function<Word(std::uint64_t)> alpha_block, beta_block;
    std::function<Rat(std::uint64_t)> alpha_threshold, beta_threshold;
    std::string alpha_threshold_formula, beta_threshold_formula;
};

D2Scheme d2_scheme_binary();
/// Blocks good(b,s)^n^good(b,r) / good(b,s)^n^0; witness patterns are the
/// length-min(s, b^r) prefix of good(b,r) and "0"; thresholds sit at
/// limit - gap/4 with gap = limit - b^{-|pattern|} (both emitted in reports).
D2Scheme d2_scheme_general(int base, unsigned r, unsigned s, const Caps& caps = Caps{});

struct D2StageReport {
    std::uint64_t p = 0, m = 0, n = 0;
    StageCase case_alpha = StageCase::Case1; // i_p side, classified against F
    StageCase case_beta = StageCase::Case1;  // j_p side, classified against L
    std::uint64_t i_p = 0, j_p = 0, a_p = 0, b_p = 0;
    std::uint64_t alpha_boundary = 0, beta_boundary = 0; // emitted lengths
    Rat alpha_density, beta_density;                     // pattern densities there
    Rat alpha_threshold, beta_threshold;                 // Case-2 thresholds
    bool alpha_truncated = false, beta_truncated = false;
    std::uint64_t consumed_x = 0;
};

class D2Reducer {
  public:
    D2Reducer(Pi03Family L, Pi03Family F, DigitStream x, D2Scheme scheme, Caps caps = Caps{},
              bool intersect_lf = false);

    /// Emits digits until exactly `budget` have been produced (ending
    /// mid-stage is not an error; the trailing report is marked truncated).
    void run(std::uint64_t budget);

    /// Pull interface: next output digit, advancing stages as needed.
    std::uint8_t next_digit();

    const Word& emitted() const { return emitted_; }
    const std::vector<D2StageReport>& reports() const { return reports_; }
    std::uint64_t consumed_x() const { return consumed_x_; }
    const D2Scheme& scheme() const { return scheme_; }

  private:
    bool emit_block(const Word& block);      // false when budget hit mid-block
    const Word& x_prefix(std::uint64_t len); // materialized x |` len
    void run_stage();

    Pi03Family l_, f_;
    DigitStream x_;
    D2Scheme scheme_;
    Caps caps_;
    Word x_buf_;
    Word emitted_;
    DensityTracker alpha_tracker_, beta_tracker_;
    std::vector<D2StageReport> reports_;
    std::uint64_t stage_ = 0;
    std::uint64_t i_prev_ = 0, j_prev_ = 0; // i_{-1} = j_{-1} = 0
    std::uint64_t consumed_x_ = 0;
    std::uint64_t budget_ = 0;
    std::uint64_t cursor_ = 0;
    bool exhausted_ = false;
};

/// Recomputes every inequality a report states against the emitted word:
/// boundary densities match and Case-2 boundaries clear their thresholds.
/// Truncated sides are checked for density only.
bool verify_d2_stage(const D2StageReport& report, const Word& emitted, const D2Scheme& scheme);
bool verify_d2_run(const std::vector<D2StageReport>& reports, const Word& emitted,
                   const D2Scheme& scheme);

// ---------------------------------------------------------------------------
// Theorem-2-style omega reducer

struct OmegaDensityCondition {
    std::string id;       // "1", "3", "4"
    unsigned max_len = 0; // grid: words of length 1..max_len
    Rat bound;            // strict
    Rat max_dev;
    Word argmax;
};

struct OmegaGridEquality {
    unsigned max_len = 0, max_prec = 0;
    std::vector<std::uint64_t> entries; // len asc, code asc, p asc
};

/// A grid entry whose displayed equality is unsatisfiable for every
/// repetition count: the entry's value converges (as the stage repetition
/// grows) to the modulus of y_t's digits measured against the successor
/// tail's limit, and that persistent value differs from mu_t's entry.
/// Recorded verbatim; "infinite" marks a limit gap >= 2^{-p}.
struct OmegaExemptEntry {
    unsigned len = 0;
    std::uint64_t code = 0;
    unsigned p = 0;
    std::uint64_t mu_t_value = 0;
    bool persistent_infinite = false;
    std::uint64_t persistent_value = 0;
    bool operator==(const OmegaExemptEntry&) const = default;
};

/// Handling of the modulus-preservation conditions (2a)/(2b)/(6a)/(6b).
/// Strict enforces the displayed table equality on every grid entry and
/// turns unsatisfiable stages into growth-cap diagnostics. StableEntries
/// (default) exempts exactly the provably-unsatisfiable entries, reporting
/// each with its persistent value; on grids where the two tails share
/// their limits (e.g. consecutive Case-1 stages) no entry is ever exempt
/// and the check coincides with the displayed condition.
enum class OmegaMode { Strict, StableEntries };

struct OmegaStageReport {
    std::uint64_t t = 0;
    unsigned k = 1, m = 0, n = 0; // paper's 1-based k
    StageCase stage_case = StageCase::Case1, next_case = StageCase::Case1;
    unsigned k_next = 1, m_next = 0, n_next = 0;
    std::string block_kind; // "eta" or "tau"
    std::uint64_t block_len = 0;
    std::uint64_t tau_i = 0, tau_j = 0; // tau block composition
    std::uint64_t reps = 0;             // chosen i
    std::uint64_t sigma_before = 0, sigma_after = 0;
    std::vector<OmegaDensityCondition> densities;
    bool has_condition5 = false;
    Rat alpha_k_density, r_km; // condition (5)
    Word alpha_k;
    std::string modulus_id; // "2a", "2b", "6a", "6b"
    std::vector<OmegaGridEquality> modulus_tables;
    std::vector<OmegaExemptEntry> modulus_exempt;
    std::uint64_t consumed_x = 0;
};

class OmegaReducer {
  public:
    OmegaReducer(Pi03Family fam, DigitStream x, BlockLibrary& lib, Caps caps = Caps{},
                 OmegaMode mode = OmegaMode::StableEntries);

    /// Runs stages t = 0..max_stage; f(x)'s prefix is sigma_{max_stage}.
    void run(std::uint64_t max_stage);

    const Word& sigma() const { return sigma_; }
    const std::vector<OmegaStageReport>& reports() const { return reports_; }
    std::uint64_t consumed_x() const { return consumed_x_; }

  private:
    const Word& x_prefix(std::uint64_t len);
    void run_stage(std::uint64_t t);

    Pi03Family fam_;
    DigitStream x_;
    BlockLibrary& lib_;
    Caps caps_;
    OmegaMode mode_;
    Word x_buf_;
    Word sigma_;
    std::vector<OmegaStageReport> reports_;
    std::uint64_t consumed_x_ = 0;
};

/// Recomputes a stage's density conditions and modulus-table equalities
/// from the emitted word and the block library.
bool verify_omega_stage(const OmegaStageReport& report, const Word& emitted, BlockLibrary& lib);
bool verify_omega_run(const std::vector<OmegaStageReport>& reports, const Word& emitted,
                      BlockLibrary& lib);

/// Max deviation |d_alpha(sigma) - 2^{-|alpha|}| over all binary alpha with
/// 1 <= |alpha| <= max_len (helper shared by the omega conditions).
struct GridDeviation {
    Rat max_dev;
    Word argmax;
};
GridDeviation density_deviation_grid(const Word& sigma, unsigned max_len);

} // namespace nlab
