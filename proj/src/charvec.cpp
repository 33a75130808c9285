#include "cevkit/charvec.hpp"

#include <cmath>
#include <numeric>

#include "cevkit/unicode.hpp"

namespace cevkit {

std::int64_t CharVector::total() const {
    std::int64_t sum = 0;
    for (const auto& [token, n] : counts_) sum += n;
    return sum;
}

std::int64_t CharVector::at(std::string_view token) const {
    auto it = counts_.find(std::string(token));
    return it == counts_.end() ? 0 : it->second;
}

void CharVector::add(std::string_view token, std::int64_t n) {
    if (n == 0) return;
    auto [it, inserted] = counts_.try_emplace(std::string(token), 0);
    it->second += n;
    if (it->second <= 0) counts_.erase(it);
}

CharVector& CharVector::operator+=(const CharVector& other) {
    if (unit_ != other.unit_) throw Error("CharVector unit mismatch in addition");
    for (const auto& [token, n] : other.counts_) add(token, n);
    return *this;
}

CharDistribution::CharDistribution(Probs probs, CountUnit unit)
    : probs_(std::move(probs)), unit_(unit) {
    double sum = 0.0;
    for (const auto& [token, p] : probs_) {
        if (p <= 0.0 || p > 1.0) throw Error("distribution probability out of (0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw Error("distribution does not sum to 1");
}

double CharDistribution::at(std::string_view token) const {
    auto it = probs_.find(std::string(token));
    return it == probs_.end() ? 0.0 : it->second;
}

namespace {

// Curly quotes, dash variants, ellipsis, no-break space.
void unify_punctuation_cp(char32_t c, std::u32string& out) {
    switch (c) {
        case 0x2018:  // left single quote
        case 0x2019:  // right single quote
        case 0x201A:  // low single quote
        case 0x02BC:  // modifier apostrophe
            out.push_back(U'\'');
            return;
        case 0x201C:  // left double quote
        case 0x201D:  // right double quote
        case 0x201E:  // low double quote
            out.push_back(U'"');
            return;
        case 0x2012:  // figure dash
        case 0x2013:  // en dash
        case 0x2014:  // em dash
        case 0x2015:  // horizontal bar
        case 0x2212:  // minus sign
            out.push_back(U'-');
            return;
        case 0x2026:  // ellipsis
            out.append(U"...");
            return;
        case 0x00A0:  // no-break space
            out.push_back(U' ');
            return;
        default:
            out.push_back(c);
    }
}

}  // namespace

std::string normalize_text(std::string_view raw, const NormalizationPolicy& policy) {
    std::u32string cps = unicode::decode_utf8(raw);
    if (policy.unicode_form == UnicodeForm::composed_canonical) {
        cps = unicode::compose_canonical(cps);
    }
    if (policy.unify_punctuation) {
        std::u32string unified;
        unified.reserve(cps.size());
        for (char32_t c : cps) unify_punctuation_cp(c, unified);
        cps = std::move(unified);
    }
    if (policy.lowercase) {
        for (char32_t& c : cps) c = unicode::to_lower(c);
    }
    if (policy.collapse_whitespace) {
        std::u32string collapsed;
        collapsed.reserve(cps.size());
        bool in_run = false;
        for (char32_t c : cps) {
            if (unicode::is_space(c)) {
                in_run = true;
            } else {
                if (in_run && !collapsed.empty()) collapsed.push_back(U' ');
                in_run = false;
                collapsed.push_back(c);
            }
        }
        cps = std::move(collapsed);
    }
    return unicode::encode_utf8(cps);
}

CharVector char_vector(std::string_view text, CountUnit unit, bool count_spaces) {
    CharVector v(unit);
    const std::u32string cps = unicode::decode_utf8(text);
    if (unit == CountUnit::character) {
        for (char32_t c : cps) {
            if (c == U' ' && !count_spaces) continue;
            v.add(unicode::encode_utf8(c));
        }
    } else {
        std::u32string word;
        auto flush = [&] {
            if (!word.empty()) {
                v.add(unicode::encode_utf8(word));
                word.clear();
            }
        };
        for (char32_t c : cps) {
            if (c == U' ') {
                flush();
            } else {
                word.push_back(c);
            }
        }
        flush();
    }
    return v;
}

std::int64_t l1_distance(const CharVector& a, const CharVector& b) {
    if (a.unit() != b.unit()) throw Error("l1_distance: incomparable vectors (unit mismatch)");
    std::int64_t sum = 0;
    auto ia = a.counts().begin();
    auto ib = b.counts().begin();
    while (ia != a.counts().end() || ib != b.counts().end()) {
        if (ib == b.counts().end() || (ia != a.counts().end() && ia->first < ib->first)) {
            sum += ia->second;
            ++ia;
        } else if (ia == a.counts().end() || ib->first < ia->first) {
            sum += ib->second;
            ++ib;
        } else {
            sum += std::abs(ia->second - ib->second);
            ++ia;
            ++ib;
        }
    }
    return sum;
}

CharDistribution to_distribution(const CharVector& v) {
    const std::int64_t total = v.total();
    if (total <= 0) throw Error("empty distribution");
    CharDistribution::Probs probs;
    for (const auto& [token, n] : v.counts()) {
        probs[token] = static_cast<double>(n) / static_cast<double>(total);
    }
    return CharDistribution(std::move(probs), v.unit());
}

}  // namespace cevkit
