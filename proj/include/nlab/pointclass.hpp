#pragma once

#include "nlab/periodic.hpp"
#include "nlab/word.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace nlab {

/// Closed subset of the digit-sequence space, presented so that the
/// prefix-intersection query "[sigma] meets F?" and exact membership of
/// eventually periodic points are both decidable. Prefix-monotone and
/// pruned by construction.
class ClosedSetOracle {
  public:
    enum class Kind { Full, Empty, Coord, Singleton, Cylinders, Union };

    static ClosedSetOracle full();
    static ClosedSetOracle empty();
    /// {x : x(i) = digit}
    static ClosedSetOracle coord(std::uint64_t i, std::uint8_t digit, int base = 2);
    static ClosedSetOracle singleton(EventuallyPeriodicWord point);
    /// Union of the depth-D cylinders [w], w in allowed (allowed nonempty).
    static ClosedSetOracle cylinders(unsigned depth, std::vector<Word> allowed);
    static ClosedSetOracle union_of(std::vector<ClosedSetOracle> members);

    Kind kind() const { return kind_; }

    /// [sigma] intersects the set?
    bool answers(const Word& sigma) const;
    /// Exact membership of an eventually periodic point.
    bool contains(const EventuallyPeriodicWord& x) const;

    // Presentation accessors (document round-tripping).
    std::uint64_t coord_index() const { return coord_index_; }
    std::uint8_t coord_digit() const { return coord_digit_; }
    const EventuallyPeriodicWord* point() const { return point_.get(); }
    unsigned depth() const { return depth_; }
    const std::vector<Word>* allowed() const { return allowed_.get(); }
    const std::vector<ClosedSetOracle>* members() const { return members_.get(); }

  private:
    ClosedSetOracle() = default;
    Kind kind_ = Kind::Empty;
    int base_ = 2;
    std::uint64_t coord_index_ = 0;
    std::uint8_t coord_digit_ = 0;
    std::shared_ptr<EventuallyPeriodicWord> point_;
    unsigned depth_ = 0;
    std::shared_ptr<std::vector<Word>> allowed_;
    std::shared_ptr<std::vector<ClosedSetOracle>> members_;
};

/// Finitely presented doubly or triply indexed family of closed sets
/// F_{m,n} / F_{k,m,n}. Documents use the paper's 1-based k; internally the
/// first index of an arity-3 family is k-1, so stage numbers enumerate all
/// naturals. Indices outside the finite table answer the declared default
/// (full or empty). Immutable once built (set_entry is for construction).
class Pi03Family {
  public:
    using Index = std::vector<std::uint64_t>; // (m,n) or (kInternal,m,n)

    Pi03Family() = default;
    Pi03Family(int arity, int base, bool default_full);

    static Pi03Family all_full(int arity, int base = 2) { return Pi03Family(arity, base, true); }
    static Pi03Family all_empty(int arity, int base = 2) { return Pi03Family(arity, base, false); }

    int arity() const { return arity_; }
    int base() const { return base_; }
    bool default_full() const { return default_full_; }
    bool monotonized() const { return monotonized_; }
    bool interleaved() const { return static_cast<bool>(left_); }
    const std::map<Index, ClosedSetOracle>& entries() const { return entries_; }

    /// Construction: adds/overwrites the oracle at an index.
    void set_entry(const Index& index, ClosedSetOracle oracle);

    bool query(const Index& index, const Word& sigma) const;

  private:
    friend Pi03Family monotonize(const Pi03Family&);
    friend Pi03Family interleave_intersection(const Pi03Family&, const Pi03Family&);
    friend bool ground_truth_member(const Pi03Family&, const EventuallyPeriodicWord&);

    void check_index(const Index& index) const;
    Index row_of(const Index& index) const;

    int arity_ = 2;
    int base_ = 2;
    bool default_full_ = true;
    bool monotonized_ = false;
    std::map<Index, ClosedSetOracle> entries_;
    // After monotonize: union of a whole row, answered for n beyond the
    // stored range.
    std::map<Index, ClosedSetOracle> row_tails_;
    // Interleaved form (G_{2m,n}=L, G_{2m+1,n}=F); table fields unused.
    std::shared_ptr<const Pi03Family> left_, right_;
};

/// Replaces entry (.., n) by the union of entries (.., 0..n); the result is
/// monotone in n and query-equivalent at n = 0. Idempotent.
Pi03Family monotonize(const Pi03Family& fam);

/// Index interleaving G_{2m,n} = L_{m,n}, G_{2m+1,n} = F_{m,n}, realizing
/// the intersection L cap F at the Pi03 level. Both inputs double-indexed.
Pi03Family interleave_intersection(const Pi03Family& L, const Pi03Family& F);

/// Decides x in the presented Pi03 set: cap over rows (m, resp. (k,m)) of
/// cup_n F_{row,n}. Rows beyond the finite table take the default.
bool ground_truth_member(const Pi03Family& fam, const EventuallyPeriodicWord& x);

/// x in F_k = cap_m cup_n F_{k,m,n} for one 1-based k of an arity-3 family.
bool ground_truth_member_k(const Pi03Family& fam, unsigned k, const EventuallyPeriodicWord& x);

/// Family document ingestion/emission (schema in the README).
Pi03Family family_from_json(const std::string& document);
std::string family_to_json(const Pi03Family& fam);

} // namespace nlab
