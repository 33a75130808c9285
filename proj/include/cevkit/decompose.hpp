#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cevkit/charvec.hpp"
#include "cevkit/geometry.hpp"
#include "cevkit/metrics.hpp"

namespace cevkit {

/// The Q/R/S*/S character vectors for one page.
struct VectorSet {
    CharVector q;                    // ground truth
    CharVector r;                    // GT characters through the predicted parsing
    std::optional<CharVector> s_star;  // OCR on GT regions
    std::optional<CharVector> s;       // OCR on predicted regions
    bool has_predictions = false;
};

enum class MeasureKind { spacer, spacd, cdd_jsd, custom };

/// Four-way error decomposition. Components are present only when
/// their input vectors exist; they are not additive.
struct DecompositionReport {
    std::optional<double> d_pars;
    std::optional<double> d_ocr;
    std::optional<double> d_int;
    std::optional<double> d_total;
    std::string metric_name;
    bool non_additive = true;
};

struct CoteComponents {
    double coverage = 0.0;
    double overlap = 0.0;
    double trespass = 0.0;
    double excess = 0.0;
    double score = 0.0;  // coverage - overlap - trespass
};

enum class DominantSource { parsing, ocr, indeterminate };

struct TriageVerdict {
    DominantSource dominant = DominantSource::indeterminate;
    std::optional<double> ratio;  // d_ocr / d_total; absent when d_total == 0
    bool cote_gate_passed = true;
};

struct BuildOptions {
    NormalizationPolicy policy;
    CountUnit unit = CountUnit::character;
    InferenceConfig inference;
};

// Q from GT texts; R by assigning inferred GT character positions to
// predicted regions; S*/S from the OCR text maps when supplied.
VectorSet build_vectors(const PageLayout& page,
                        const std::optional<std::map<std::string, std::string>>& ocr_on_gt,
                        const std::optional<std::map<std::string, std::string>>& ocr_on_pred,
                        const BuildOptions& options = {});

// d_pars = d(R||Q), d_ocr = d(S*||Q), d_int = d(S||R), d_total = d(S||Q).
// Argument order is (prediction, reference); SpACER's denominator uses
// the reference total. Empty-vs-empty scores 0; a non-empty prediction
// against an empty reference scores 1 for cdd_jsd and +inf for
// spacer (undefined denominator).
DecompositionReport decompose(const VectorSet& v, MeasureKind kind,
                              const DivergenceMeasure* custom = nullptr);

struct CoteOptions {
    int grid_resolution = 256;  // sampling grid cells along the longer page side
};

// Area-based COTe approximation on a deterministic sampling grid.
// Semantic units are semantic_class groups, else individual regions.
CoteComponents cote_approx(const std::vector<Region>& gt_regions,
                           const std::vector<Region>& pred_regions, double page_width,
                           double page_height, const CoteOptions& options = {});

// dominant = ocr iff d_ocr/d_total >= ratio_threshold; COTe below
// cote_threshold forces parsing regardless of the ratio.
TriageVerdict triage(const DecompositionReport& report,
                     const std::optional<CoteComponents>& cote,
                     double ratio_threshold = 0.5, double cote_threshold = 0.5);

}  // namespace cevkit
