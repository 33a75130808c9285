#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "cevkit/error.hpp"

namespace cevkit {

enum class CountUnit { character, word };

enum class UnicodeForm { composed_canonical, none };

/// Text normalization applied before any counting. Applying the
/// policy twice equals applying it once.
struct NormalizationPolicy {
    bool lowercase = true;
    bool unify_punctuation = true;
    bool collapse_whitespace = true;
    UnicodeForm unicode_form = UnicodeForm::composed_canonical;
    bool count_spaces = false;
};

/// Bag of tokens (single characters or whitespace-delimited words)
/// with strictly positive counts. Immutable in practice: build once,
/// query from any thread.
class CharVector {
  public:
    using Counts = std::map<std::string, std::int64_t>;

    CharVector() = default;
    explicit CharVector(CountUnit unit) : unit_(unit) {}

    CountUnit unit() const { return unit_; }
    const Counts& counts() const { return counts_; }
    bool empty() const { return counts_.empty(); }

    std::int64_t total() const;
    std::int64_t at(std::string_view token) const;

    void add(std::string_view token, std::int64_t n = 1);

    CharVector& operator+=(const CharVector& other);
    friend CharVector operator+(CharVector a, const CharVector& b) {
        a += b;
        return a;
    }
    friend bool operator==(const CharVector&, const CharVector&) = default;

  private:
    Counts counts_;
    CountUnit unit_ = CountUnit::character;
};

/// Normalized CharVector: probabilities in (0,1] summing to 1.
class CharDistribution {
  public:
    using Probs = std::map<std::string, double>;

    CharDistribution() = default;
    CharDistribution(Probs probs, CountUnit unit);

    CountUnit unit() const { return unit_; }
    const Probs& probs() const { return probs_; }
    double at(std::string_view token) const;

  private:
    Probs probs_;
    CountUnit unit_ = CountUnit::character;
};

// Normalization order: canonical composition, punctuation
// unification, lowercasing, whitespace collapsing. The punctuation
// table maps curly quotes, dash variants and the ellipsis to straight
// ASCII equivalents.
std::string normalize_text(std::string_view raw, const NormalizationPolicy& policy = {});

// Counts tokens of already-normalized text. Spaces are skipped in
// character mode unless count_spaces is set; word mode splits on
// single spaces.
CharVector char_vector(std::string_view text, CountUnit unit, bool count_spaces = false);

// Ê = Σ |a[t] - b[t]| over the union of keys. Throws on unit mismatch.
std::int64_t l1_distance(const CharVector& a, const CharVector& b);

// Throws on an empty vector; callers pick the empty-vs-empty convention.
CharDistribution to_distribution(const CharVector& v);

}  // namespace cevkit
