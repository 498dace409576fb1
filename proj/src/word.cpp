#include "nlab/word.hpp"

#include <algorithm>
#include <charconv>

namespace nlab {

Word Word::parse(int base, std::string_view text) {
    check_base(base);
    std::vector<std::uint8_t> digits;
    if (base <= 10) {
        digits.reserve(text.size());
        for (char c : text) {
            if (c < '0' || c > '9') throw ValidationError(std::string("bad digit character '") + c + "'");
            digits.push_back(static_cast<std::uint8_t>(c - '0'));
        }
    } else if (!text.empty()) {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t comma = text.find(',', pos);
            std::string_view tok = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
            int value = -1;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
            if (ec != std::errc() || p != tok.data() + tok.size() || value < 0 || value > 255)
                throw ValidationError("bad digit token '" + std::string(tok) + "'");
            digits.push_back(static_cast<std::uint8_t>(value));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
    }
    return Word(base, std::move(digits));
}

Word Word::concat(const Word& other) const {
    if (base_ != other.base_) throw ValidationError("base mismatch in concatenation");
    std::vector<std::uint8_t> out;
    out.reserve(size() + other.size());
    out.insert(out.end(), digits_.begin(), digits_.end());
    out.insert(out.end(), other.digits_.begin(), other.digits_.end());
    Word w;
    w.base_ = base_;
    w.digits_ = std::move(out);
    return w;
}

Word Word::power(std::uint64_t n) const {
    Word w;
    w.base_ = base_;
    w.digits_.reserve(size() * n);
    for (std::uint64_t i = 0; i < n; ++i)
        w.digits_.insert(w.digits_.end(), digits_.begin(), digits_.end());
    return w;
}

Word Word::prefix(std::size_t n) const {
    if (n > size()) throw ValidationError("prefix length exceeds word length");
    Word w;
    w.base_ = base_;
    w.digits_.assign(digits_.begin(), digits_.begin() + n);
    return w;
}

void Word::append_word(const Word& w) {
    if (base_ != w.base_) throw ValidationError("base mismatch in append");
    digits_.insert(digits_.end(), w.digits_.begin(), w.digits_.end());
}

std::string Word::str() const {
    std::string out;
    if (base_ <= 10) {
        out.reserve(size());
        for (std::uint8_t d : digits_) out.push_back(static_cast<char>('0' + d));
    } else {
        for (std::size_t i = 0; i < size(); ++i) {
            if (i) out.push_back(',');
            out += std::to_string(int(digits_[i]));
        }
    }
    return out;
}

std::uint64_t density_hits(const Word& alpha, const Word& sigma) {
    if (alpha.base() != sigma.base()) throw ValidationError("base mismatch in density");
    if (alpha.empty()) throw ValidationError("density pattern must be nonempty");
    const std::size_t a = alpha.size(), s = sigma.size();
    if (s < a) throw ValidationError("density requires |alpha| <= |sigma|");
    std::uint64_t hits = 0;
    // positions i < s - a, strictly
    for (std::size_t i = 0; i + a < s; ++i) {
        bool match = true;
        for (std::size_t j = 0; j < a; ++j) {
            if (sigma[i + j] != alpha[j]) { match = false; break; }
        }
        if (match) ++hits;
    }
    return hits;
}

Rat density(const Word& alpha, const Word& sigma) {
    if (sigma.empty()) throw ValidationError("density of the empty word is undefined");
    return Rat(density_hits(alpha, sigma), sigma.size());
}

DensityTracker::DensityTracker(Word pattern) : pattern_(std::move(pattern)) {
    if (pattern_.empty()) throw ValidationError("tracker pattern must be nonempty");
    ring_.assign(pattern_.size(), 0);
}

void DensityTracker::extend(std::uint8_t digit) {
    if (digit >= pattern_.base()) throw ValidationError("tracker digit out of range");
    const std::size_t a = pattern_.size();
    // A position becomes countable one digit after the occurrence ends, so
    // the window to test is the last |pattern| digits *before* this one.
    if (ring_full_) {
        bool match = true;
        for (std::size_t j = 0; j < a; ++j) {
            if (ring_[(ring_pos_ + j) % a] != pattern_[j]) { match = false; break; }
        }
        if (match) ++hits_;
    }
    ring_[ring_pos_] = digit;
    ring_pos_ = (ring_pos_ + 1) % a;
    if (!ring_full_ && ring_pos_ == 0) ring_full_ = true;
    ++processed_;
}

Rat DensityTracker::density() const {
    if (processed_ == 0) throw ValidationError("density of empty prefix is undefined");
    return Rat(hits_, processed_);
}

} // namespace nlab
