#include "nlab/pointclass.hpp"

#include "nlab/errors.hpp"

#include <json.hpp>

#include <algorithm>

namespace nlab {

ClosedSetOracle ClosedSetOracle::full() {
    ClosedSetOracle o;
    o.kind_ = Kind::Full;
    return o;
}

ClosedSetOracle ClosedSetOracle::empty() {
    ClosedSetOracle o;
    o.kind_ = Kind::Empty;
    return o;
}

ClosedSetOracle ClosedSetOracle::coord(std::uint64_t i, std::uint8_t digit, int base) {
    Word::check_base(base);
    if (digit >= base) throw ValidationError("coord digit out of range for base");
    ClosedSetOracle o;
    o.kind_ = Kind::Coord;
    o.base_ = base;
    o.coord_index_ = i;
    o.coord_digit_ = digit;
    return o;
}

ClosedSetOracle ClosedSetOracle::singleton(EventuallyPeriodicWord point) {
    ClosedSetOracle o;
    o.kind_ = Kind::Singleton;
    o.base_ = point.base();
    o.point_ = std::make_shared<EventuallyPeriodicWord>(std::move(point));
    return o;
}

ClosedSetOracle ClosedSetOracle::cylinders(unsigned depth, std::vector<Word> allowed) {
    if (allowed.empty())
        throw ValidationError("cylinder presentation with empty allowed set; use type \"empty\"");
    ClosedSetOracle o;
    o.kind_ = Kind::Cylinders;
    o.base_ = allowed.front().base();
    o.depth_ = depth;
    for (const Word& w : allowed) {
        if (w.size() != depth) throw ValidationError("cylinder word length differs from depth");
        if (w.base() != o.base_) throw ValidationError("cylinder word base mismatch");
    }
    std::sort(allowed.begin(), allowed.end(),
              [](const Word& a, const Word& b) { return a.digits() < b.digits(); });
    o.allowed_ = std::make_shared<std::vector<Word>>(std::move(allowed));
    return o;
}

ClosedSetOracle ClosedSetOracle::union_of(std::vector<ClosedSetOracle> members) {
    ClosedSetOracle o;
    o.kind_ = Kind::Union;
    o.members_ = std::make_shared<std::vector<ClosedSetOracle>>(std::move(members));
    return o;
}

bool ClosedSetOracle::answers(const Word& sigma) const {
    switch (kind_) {
        case Kind::Full: return true;
        case Kind::Empty: return false;
        case Kind::Coord:
            if (sigma.size() <= coord_index_) return true;
            return sigma[coord_index_] == coord_digit_;
        case Kind::Singleton: {
            for (std::size_t i = 0; i < sigma.size(); ++i)
                if (sigma[i] != point_->digit(i)) return false;
            return true;
        }
        case Kind::Cylinders: {
            if (sigma.size() >= depth_) {
                Word head = sigma.prefix(depth_);
                for (const Word& w : *allowed_)
                    if (w == head) return true;
                return false;
            }
            for (const Word& w : *allowed_) {
                bool extends = true;
                for (std::size_t i = 0; i < sigma.size(); ++i)
                    if (w[i] != sigma[i]) { extends = false; break; }
                if (extends) return true;
            }
            return false;
        }
        case Kind::Union: {
            for (const auto& m : *members_)
                if (m.answers(sigma)) return true;
            return false;
        }
    }
    throw InternalError("unreachable oracle kind");
}

bool ClosedSetOracle::contains(const EventuallyPeriodicWord& x) const {
    switch (kind_) {
        case Kind::Full: return true;
        case Kind::Empty: return false;
        case Kind::Coord: return x.digit(coord_index_) == coord_digit_;
        case Kind::Singleton: return x == *point_;
        case Kind::Cylinders: {
            Word head = x.prefix(depth_);
            for (const Word& w : *allowed_)
                if (w == head) return true;
            return false;
        }
        case Kind::Union: {
            for (const auto& m : *members_)
                if (m.contains(x)) return true;
            return false;
        }
    }
    throw InternalError("unreachable oracle kind");
}

Pi03Family::Pi03Family(int arity, int base, bool default_full)
    : arity_(arity), base_(base), default_full_(default_full) {
    if (arity != 2 && arity != 3) throw ValidationError("family arity must be 2 or 3");
    Word::check_base(base);
    // A constant family is trivially monotone.
    monotonized_ = true;
}

void Pi03Family::check_index(const Index& index) const {
    if (static_cast<int>(index.size()) != arity_)
        throw ValidationError("family index arity mismatch");
}

Pi03Family::Index Pi03Family::row_of(const Index& index) const {
    return Index(index.begin(), index.end() - 1);
}

void Pi03Family::set_entry(const Index& index, ClosedSetOracle oracle) {
    check_index(index);
    if (left_) throw ValidationError("cannot add entries to an interleaved family");
    entries_.insert_or_assign(index, std::move(oracle));
    monotonized_ = false;
    row_tails_.clear();
}

bool Pi03Family::query(const Index& index, const Word& sigma) const {
    check_index(index);
    if (sigma.base() != base_) throw ValidationError("query word base mismatch");
    if (left_) {
        Index sub(index);
        const std::uint64_t m = index[index.size() - 2];
        sub[index.size() - 2] = m / 2;
        return (m % 2 == 0) ? left_->query(sub, sigma) : right_->query(sub, sigma);
    }
    auto it = entries_.find(index);
    if (it != entries_.end()) return it->second.answers(sigma);
    const Index row = row_of(index);
    if (!row_tails_.empty()) {
        // Monotonized rows are densely stored up to their largest n, so a
        // miss within a tailed row means n is past the stored range.
        auto rt = row_tails_.find(row);
        if (rt != row_tails_.end()) return rt->second.answers(sigma);
    }
    // A row with stored entries is exactly its stored presentation: missing
    // (row, n) answer empty. Whole rows outside the table take the default.
    Index lo(row);
    lo.push_back(0);
    auto probe = entries_.lower_bound(lo);
    if (probe != entries_.end() && Index(probe->first.begin(), probe->first.end() - 1) == row)
        return false;
    return default_full_;
}

Pi03Family monotonize(const Pi03Family& fam) {
    if (fam.left_) {
        Pi03Family out = fam;
        out.left_ = std::make_shared<Pi03Family>(monotonize(*fam.left_));
        out.right_ = std::make_shared<Pi03Family>(monotonize(*fam.right_));
        out.monotonized_ = true;
        return out;
    }
    if (fam.monotonized_) return fam;
    Pi03Family out(fam.arity_, fam.base_, fam.default_full_);
    // Group entries by row; within a row accumulate unions over n' <= n.
    std::map<Pi03Family::Index, std::map<std::uint64_t, ClosedSetOracle>> rows;
    for (const auto& [index, oracle] : fam.entries_)
        rows[Pi03Family::Index(index.begin(), index.end() - 1)].emplace(index.back(), oracle);
    for (const auto& [row, by_n] : rows) {
        std::vector<ClosedSetOracle> acc;
        bool saturated_full = false;
        const std::uint64_t max_n = by_n.rbegin()->first;
        for (std::uint64_t n = 0; n <= max_n; ++n) {
            auto it = by_n.find(n);
            // Gaps within a presented row are empty sets and add nothing.
            if (it != by_n.end()) {
                if (it->second.kind() == ClosedSetOracle::Kind::Full)
                    saturated_full = true;
                else if (it->second.kind() != ClosedSetOracle::Kind::Empty && !saturated_full)
                    acc.push_back(it->second);
            }
            Pi03Family::Index index(row);
            index.push_back(n);
            if (saturated_full)
                out.entries_.insert_or_assign(index, ClosedSetOracle::full());
            else if (acc.empty())
                out.entries_.insert_or_assign(index, ClosedSetOracle::empty());
            else if (acc.size() == 1)
                out.entries_.insert_or_assign(index, acc.front());
            else
                out.entries_.insert_or_assign(index, ClosedSetOracle::union_of(acc));
        }
        // n beyond the stored range: the whole-row union.
        if (saturated_full)
            out.row_tails_.insert_or_assign(row, ClosedSetOracle::full());
        else if (acc.empty())
            out.row_tails_.insert_or_assign(row, ClosedSetOracle::empty());
        else
            out.row_tails_.insert_or_assign(row, ClosedSetOracle::union_of(acc));
    }
    out.monotonized_ = true;
    return out;
}

Pi03Family interleave_intersection(const Pi03Family& L, const Pi03Family& F) {
    if (L.arity() != 2 || F.arity() != 2)
        throw ValidationError("interleave_intersection requires double-indexed families");
    if (L.base() != F.base()) throw ValidationError("family base mismatch");
    Pi03Family out(2, L.base(), true);
    out.left_ = std::make_shared<Pi03Family>(monotonize(L));
    out.right_ = std::make_shared<Pi03Family>(monotonize(F));
    out.monotonized_ = true;
    return out;
}

namespace {

bool row_union_contains(const Pi03Family& fam, const Pi03Family::Index& row,
                        const std::map<Pi03Family::Index, ClosedSetOracle>& entries,
                        const EventuallyPeriodicWord& x) {
    (void)fam;
    // A presented row is exactly the union of its stored entries.
    Pi03Family::Index lo(row);
    lo.push_back(0);
    for (auto it = entries.lower_bound(lo); it != entries.end(); ++it) {
        if (Pi03Family::Index(it->first.begin(), it->first.end() - 1) != row) break;
        if (it->second.contains(x)) return true;
    }
    return false;
}

} // namespace

bool ground_truth_member(const Pi03Family& fam, const EventuallyPeriodicWord& x) {
    if (fam.interleaved()) {
        return ground_truth_member(*fam.left_, x) && ground_truth_member(*fam.right_, x);
    }
    // cap over rows: every row's union must contain x. Rows absent from the
    // table are unions over the default: full => true, empty => false.
    std::map<Pi03Family::Index, bool> row_seen;
    for (const auto& [index, oracle] : fam.entries_) {
        (void)oracle;
        Pi03Family::Index row(index.begin(), index.end() - 1);
        if (row_seen.emplace(row, true).second) {
            if (!row_union_contains(fam, row, fam.entries_, x)) return false;
        }
    }
    // Infinitely many rows beyond the table.
    return fam.default_full();
}

bool ground_truth_member_k(const Pi03Family& fam, unsigned k, const EventuallyPeriodicWord& x) {
    if (fam.arity() != 3) throw ValidationError("per-k membership needs an arity-3 family");
    if (k < 1) throw ValidationError("k is 1-based");
    const std::uint64_t k_internal = k - 1;
    std::map<Pi03Family::Index, bool> row_seen;
    for (const auto& [index, oracle] : fam.entries()) {
        (void)oracle;
        if (index[0] != k_internal) continue;
        Pi03Family::Index row(index.begin(), index.end() - 1);
        if (row_seen.emplace(row, true).second) {
            if (!row_union_contains(fam, row, fam.entries(), x)) return false;
        }
    }
    return fam.default_full();
}

// ---------------------------------------------------------------------------
// JSON documents

namespace {

using json = nlohmann::ordered_json;

ClosedSetOracle oracle_from_json(const json& j, int base) {
    if (!j.contains("type") || !j["type"].is_string())
        throw ValidationError("family entry missing \"type\"");
    const std::string type = j["type"];
    if (type == "full") return ClosedSetOracle::full();
    if (type == "empty") return ClosedSetOracle::empty();
    if (type == "coord") {
        if (!j.contains("i") || !j.contains("digit"))
            throw ValidationError("coord entry needs \"i\" and \"digit\"");
        std::int64_t digit = j["digit"];
        if (digit < 0 || digit >= base) throw ValidationError("coord digit out of base range");
        return ClosedSetOracle::coord(j["i"], static_cast<std::uint8_t>(digit), base);
    }
    if (type == "singleton") {
        if (!j.contains("point")) throw ValidationError("singleton entry needs \"point\"");
        return ClosedSetOracle::singleton(EventuallyPeriodicWord::parse(base, std::string(j["point"])));
    }
    if (type == "cylinders") {
        if (!j.contains("depth") || !j.contains("allowed"))
            throw ValidationError("cylinders entry needs \"depth\" and \"allowed\"");
        std::vector<Word> allowed;
        for (const auto& w : j["allowed"]) allowed.push_back(Word::parse(base, std::string(w)));
        return ClosedSetOracle::cylinders(j["depth"], std::move(allowed));
    }
    if (type == "union") {
        if (!j.contains("members")) throw ValidationError("union entry needs \"members\"");
        std::vector<ClosedSetOracle> members;
        for (const auto& mj : j["members"]) members.push_back(oracle_from_json(mj, base));
        return ClosedSetOracle::union_of(std::move(members));
    }
    throw ValidationError("unknown oracle type \"" + type + "\"");
}

json oracle_to_json(const ClosedSetOracle& o) {
    json j;
    switch (o.kind()) {
        case ClosedSetOracle::Kind::Full: j["type"] = "full"; break;
        case ClosedSetOracle::Kind::Empty: j["type"] = "empty"; break;
        case ClosedSetOracle::Kind::Coord:
            j["type"] = "coord";
            j["i"] = o.coord_index();
            j["digit"] = o.coord_digit();
            break;
        case ClosedSetOracle::Kind::Singleton:
            j["type"] = "singleton";
            j["point"] = o.point()->str();
            break;
        case ClosedSetOracle::Kind::Cylinders: {
            j["type"] = "cylinders";
            j["depth"] = o.depth();
            json words = json::array();
            for (const Word& w : *o.allowed()) words.push_back(w.str());
            j["allowed"] = words;
            break;
        }
        case ClosedSetOracle::Kind::Union: {
            j["type"] = "union";
            json members = json::array();
            for (const auto& m : *o.members()) members.push_back(oracle_to_json(m));
            j["members"] = members;
            break;
        }
    }
    return j;
}

} // namespace

Pi03Family family_from_json(const std::string& document) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("family document is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("family document must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "arity" && key != "base" && key != "default" && key != "monotonize" &&
            key != "entries")
            throw ValidationError("unknown family document key \"" + key + "\"");
    }
    if (!j.contains("arity") || !j["arity"].is_number_integer())
        throw ValidationError("family document needs integer \"arity\"");
    const int arity = j["arity"];
    const int base = j.value("base", 2);
    if (!j.contains("default") || !j["default"].is_string())
        throw ValidationError("family document must declare \"default\": \"full\" or \"empty\"");
    const std::string def = j["default"];
    if (def != "full" && def != "empty")
        throw ValidationError("family default must be \"full\" or \"empty\"");

    Pi03Family fam(arity, base, def == "full");
    if (j.contains("entries")) {
        if (!j["entries"].is_array()) throw ValidationError("\"entries\" must be an array");
        for (const auto& ej : j["entries"]) {
            Pi03Family::Index index;
            if (arity == 3) {
                if (!ej.contains("k")) throw ValidationError("arity-3 entry needs \"k\"");
                const std::int64_t k = ej["k"];
                if (k < 1) throw ValidationError("entry k must be >= 1 (documents use 1-based k)");
                index.push_back(static_cast<std::uint64_t>(k - 1));
            }
            if (!ej.contains("m") || !ej.contains("n"))
                throw ValidationError("entry needs \"m\" and \"n\"");
            const std::int64_t m = ej["m"], n = ej["n"];
            if (m < 0 || n < 0) throw ValidationError("entry indices must be nonnegative");
            index.push_back(static_cast<std::uint64_t>(m));
            index.push_back(static_cast<std::uint64_t>(n));
            fam.set_entry(index, oracle_from_json(ej, base));
        }
    }
    if (j.value("monotonize", false)) fam = monotonize(fam);
    return fam;
}

std::string family_to_json(const Pi03Family& fam) {
    if (fam.interleaved())
        throw ValidationError("interleaved families have no document form");
    json j;
    j["arity"] = fam.arity();
    j["base"] = fam.base();
    j["default"] = fam.default_full() ? "full" : "empty";
    j["monotonize"] = false;
    json entries = json::array();
    for (const auto& [index, oracle] : fam.entries()) {
        json ej = oracle_to_json(oracle);
        json with_index;
        if (fam.arity() == 3) with_index["k"] = index[0] + 1;
        with_index["m"] = index[index.size() - 2];
        with_index["n"] = index[index.size() - 1];
        for (auto& [key, value] : ej.items()) with_index[key] = value;
        entries.push_back(with_index);
    }
    j["entries"] = entries;
    return j.dump(2);
}

} // namespace nlab
