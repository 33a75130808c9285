#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cevkit/decompose.hpp"
#include "cevkit/geometry.hpp"

namespace cevkit::simulate {

enum class Alignment { left, centered, justified };

struct LayoutSpec {
    double page_width = 280.0;   // mm
    double page_height = 430.0;  // mm
    int columns = 1;             // 1..3
    Alignment alignment = Alignment::left;
    double char_width = 2.0;   // base glyph advance; per-glyph factors apply
    double line_height = 5.0;
    double margin = 15.0;
    double gutter = 8.0;
    // Word generator: lengths uniform in [min,max], letters drawn from
    // an English-frequency table.
    int min_word_len = 1;
    int max_word_len = 10;
    int min_paragraph_lines = 3;
    int max_paragraph_lines = 8;
};

struct OracleChar {
    std::int64_t id = 0;
    char32_t ch = 0;
    Point position;  // exact glyph center
};

/// A generated abstract page: regions at word/line/paragraph
/// granularity plus exact per-character positions.
struct SyntheticPage {
    PageLayout layout;  // gt_regions holds all three granularities
    std::vector<OracleChar> chars;
    // Ordered non-space oracle ids per region, at every granularity.
    std::map<std::string, std::vector<std::int64_t>> region_char_ids;
};

std::vector<Region> regions_at(const PageLayout& layout, Granularity granularity);

SyntheticPage generate_page(const LayoutSpec& spec, std::uint64_t seed);

struct GranularitySample {
    std::string page_id;
    Granularity granularity = Granularity::word;
    double width_frac = 0.0;
    double height_frac = 0.0;
    int repeat = 0;
    double error = 0.0;  // symmetric membership difference / |truth|
    bool skipped = false;  // crop held no ground-truth characters
};

struct GranularitySummary {
    Granularity granularity = Granularity::word;
    double width_frac = 0.0;
    double height_frac = 0.0;
    double mean_error = 0.0;
    double median_error = 0.0;
    std::size_t n_samples = 0;
    std::size_t n_skipped = 0;
};

struct GranularityReport {
    std::vector<GranularitySample> samples;
    std::vector<GranularitySummary> summaries;
};

GranularityReport run_granularity_experiment(const std::vector<SyntheticPage>& pages,
                                             const std::vector<double>& width_fracs,
                                             const std::vector<double>& height_fracs,
                                             int repeats, std::uint64_t seed,
                                             const InferenceConfig& inference = {});

struct ConfusionModel {
    std::string label;
    std::map<char32_t, std::map<char32_t, double>> substitution;
    double insertion_rate = 0.0;
    double deletion_rate = 0.0;
    double symbol_noise_rate = 0.0;
    std::u32string noise_symbols = U"#$%&@*";
    // Injected-magnitude estimate used for construction labels.
    double expected_error_rate() const;
};

// Uniform substitution of any letter into a random other letter.
ConfusionModel uniform_confusion(double substitution_rate, double deletion_rate = 0.0,
                                 double insertion_rate = 0.0,
                                 double symbol_noise_rate = 0.0);

std::string corrupt_ocr(const std::string& text, const ConfusionModel& model,
                        std::uint64_t seed);

enum class PerturbationKind {
    drop_regions,
    merge_columns,
    jitter,
    degenerate_full_page,
    crop_random
};

struct ParsePerturbation {
    PerturbationKind kind = PerturbationKind::drop_regions;
    double drop_probability = 0.0;  // drop_regions
    double sigma = 0.0;             // jitter
    int crop_count = 5;             // crop_random
    double crop_frac = 0.3;         // crop_random: crop side as page fraction
    std::string label;              // for reports
};

std::vector<Region> perturb_parsing(const std::vector<Region>& regions,
                                    const ParsePerturbation& p, double page_width,
                                    double page_height, std::uint64_t seed);

struct CorpusCell {
    std::string page_id;
    std::string parse_label;
    std::string ocr_label;
    VectorSet vectors;
    CoteComponents cote;
    double injected_parse_magnitude = 0.0;
    double injected_ocr_magnitude = 0.0;
    DominantSource true_dominant = DominantSource::parsing;
    bool degenerate = false;
};

// The stock perturbation grid: identity, light/heavy drops, jitter,
// random crops, plus the structure-destroying merge and full-page
// kinds (flagged degenerate).
std::vector<ParsePerturbation> default_parse_grid();
// clean, light, medium, heavy corruption levels.
std::vector<ConfusionModel> default_ocr_grid();

// Cells for one page; seeds derive from (seed, page_index, cell
// indices) so any fan-out schedule yields identical results.
std::vector<CorpusCell> corpus_cells_for_page(const SyntheticPage& page,
                                              std::size_t page_index,
                                              const std::vector<ParsePerturbation>& parse_grid,
                                              const std::vector<ConfusionModel>& ocr_grid,
                                              std::uint64_t seed);

SyntheticPage corpus_page(const LayoutSpec& spec, std::size_t page_index,
                          std::uint64_t seed);

// Desk-scale labeled corpus: every (page, parse, ocr) grid cell with a
// construction-known dominant error source. Structure-destroying
// perturbations (degenerate_full_page, merge_columns) are labeled
// parsing and flagged degenerate.
std::vector<CorpusCell> simulate_pipeline_corpus(
    int n_pages, const std::vector<ParsePerturbation>& parse_grid,
    const std::vector<ConfusionModel>& ocr_grid, std::uint64_t seed,
    const LayoutSpec& spec = {});

}  // namespace cevkit::simulate
