#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cevkit/charvec.hpp"
#include "cevkit/geometry.hpp"

namespace cevkit {

struct SpacerInputs {
    CharVector g;  // ground truth, page level
    CharVector p;  // prediction, page level
    // Micro mode: per-prediction (gt, pred) pairs whose sums must equal
    // the page-level aggregates.
    std::optional<std::vector<std::pair<CharVector, CharVector>>> per_prediction;
};

/// Pluggable divergence over character distributions.
struct DivergenceMeasure {
    std::string name;
    bool is_true_metric = false;
    bool is_bounded_unit = false;
    std::function<double(const CharDistribution&, const CharDistribution&)> evaluate;
};

struct EditCounts {
    std::int64_t substitutions = 0;
    std::int64_t deletions = 0;
    std::int64_t insertions = 0;
    std::int64_t gt_length = 0;
    std::int64_t distance() const { return substitutions + deletions + insertions; }
    friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

struct F1Result {
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

// SpACER = (D + Ê) / (2C), C = |g|, D = max(0, |g| - |p|), Ê = L1(g, p).
double spacer_macro(const CharVector& g, const CharVector& p);

// Micro variant: deletions summed per prediction pair; Ê and C stay
// page-level.
double spacer_micro(const SpacerInputs& inputs);

// SpACD = (D + Ê) / 2. The literal one-sided D by default; the
// symmetric flag swaps in D = ||g| - |p|| which makes it a true metric.
double spacd(const CharVector& g, const CharVector& p, bool symmetric = false);

// -Σ p log2 p, in bits.
double shannon_entropy(const CharDistribution& d);

// Jensen-Shannon distance: sqrt(H(M) - (H(S)+H(Q))/2), M = (S+Q)/2,
// base-2 logs, range [0,1]. Union support; absent keys are probability 0.
double cdd_jsd(const CharDistribution& s, const CharDistribution& q);

// Levenshtein with unit costs; backtrace ties broken substitution >
// deletion > insertion. Operates on Unicode scalars. Throws on empty gt.
std::pair<double, EditCounts> cer(std::string_view gt, std::string_view pred);

// Greedy one-to-one matching by descending IoU.
F1Result detection_f1(const std::vector<Region>& gt_regions,
                      const std::vector<Region>& pred_regions, double iou_threshold);

// Pearson correlation of fractional ranks (average ranks on ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

DivergenceMeasure jsd_measure();

}  // namespace cevkit
