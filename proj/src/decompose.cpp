#include "cevkit/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "cevkit/unicode.hpp"

namespace cevkit {

namespace {

CharVector vector_of_texts(const std::vector<std::string>& texts, CountUnit unit,
                           bool count_spaces) {
    CharVector v(unit);
    for (const std::string& t : texts) v += char_vector(t, unit, count_spaces);
    return v;
}

// Word-unit R: a word is assigned to every prediction containing its
// middle character's inferred position.
void assign_words(const Region& region, const std::vector<Region>& predictions,
                  const InferenceConfig& inference, CharVector& out) {
    const std::vector<CharToken> tokens = infer_char_positions(region, inference);
    std::u32string word;
    std::vector<Point> positions;
    auto flush = [&] {
        if (word.empty()) return;
        const Point center = positions[positions.size() / 2];
        const std::string key = unicode::encode_utf8(word);
        for (const Region& pred : predictions) {
            if (point_in_geometry(center, pred.geometry)) out.add(key);
        }
        word.clear();
        positions.clear();
    };
    for (const CharToken& t : tokens) {
        if (t.token == U' ') {
            flush();
        } else {
            word.push_back(t.token);
            positions.push_back(t.position);
        }
    }
    flush();
}

}  // namespace

VectorSet build_vectors(const PageLayout& page,
                        const std::optional<std::map<std::string, std::string>>& ocr_on_gt,
                        const std::optional<std::map<std::string, std::string>>& ocr_on_pred,
                        const BuildOptions& options) {
    const bool count_spaces = options.policy.count_spaces;
    VectorSet set;
    set.has_predictions = !page.pred_regions.empty();
    set.q = CharVector(options.unit);
    set.r = CharVector(options.unit);

    std::set<std::string> gt_ids;
    std::vector<Region> normalized_gt;
    normalized_gt.reserve(page.gt_regions.size());
    for (const Region& region : page.gt_regions) {
        gt_ids.insert(region.id);
        Region copy = region;
        copy.text = normalize_text(region.text, options.policy);
        normalized_gt.push_back(std::move(copy));
        set.q += char_vector(normalized_gt.back().text, options.unit, count_spaces);
    }

    if (set.has_predictions) {
        if (options.unit == CountUnit::character) {
            std::vector<CharToken> tokens;
            for (const Region& region : normalized_gt) {
                if (region.text.empty()) continue;
                auto rt = infer_char_positions(region, options.inference);
                tokens.insert(tokens.end(), rt.begin(), rt.end());
            }
            set.r = assign_characters(tokens, page.pred_regions, count_spaces).aggregate;
        } else {
            set.r = CharVector(CountUnit::word);
            for (const Region& region : normalized_gt) {
                if (region.text.empty()) continue;
                assign_words(region, page.pred_regions, options.inference, set.r);
            }
        }
    }

    if (ocr_on_gt) {
        std::vector<std::string> texts;
        for (const auto& [id, text] : *ocr_on_gt) {
            if (!gt_ids.count(id)) {
                throw InputError("ocr_on_gt references unknown region id '" + id + "'");
            }
            texts.push_back(normalize_text(text, options.policy));
        }
        set.s_star = vector_of_texts(texts, options.unit, count_spaces);
    }
    if (ocr_on_pred) {
        if (!set.has_predictions) {
            throw InputError("ocr_on_pred supplied but page has no pred_regions");
        }
        std::set<std::string> pred_ids;
        for (const Region& r : page.pred_regions) pred_ids.insert(r.id);
        std::vector<std::string> texts;
        for (const auto& [id, text] : *ocr_on_pred) {
            if (!pred_ids.count(id)) {
                throw InputError("ocr_on_pred references unknown region id '" + id + "'");
            }
            texts.push_back(normalize_text(text, options.policy));
        }
        set.s = vector_of_texts(texts, options.unit, count_spaces);
    }
    return set;
}

namespace {

// d(prediction || reference) under the chosen measure.
double score_pair(const CharVector& prediction, const CharVector& reference,
                  MeasureKind kind, const DivergenceMeasure* custom) {
    const bool pred_empty = prediction.empty();
    const bool ref_empty = reference.empty();
    if (pred_empty && ref_empty) return 0.0;
    switch (kind) {
        case MeasureKind::spacer:
            if (ref_empty) return std::numeric_limits<double>::infinity();
            return spacer_macro(reference, prediction);
        case MeasureKind::spacd:
            return spacd(reference, prediction);
        case MeasureKind::cdd_jsd:
            if (pred_empty || ref_empty) return 1.0;  // total loss convention
            return cdd_jsd(to_distribution(prediction), to_distribution(reference));
        case MeasureKind::custom:
            if (!custom) throw Error("decompose: custom measure missing");
            if (pred_empty || ref_empty) return 1.0;
            return custom->evaluate(to_distribution(prediction), to_distribution(reference));
    }
    throw Error("decompose: unknown measure");
}

std::string measure_name(MeasureKind kind, const DivergenceMeasure* custom) {
    switch (kind) {
        case MeasureKind::spacer: return "spacer";
        case MeasureKind::spacd: return "spacd";
        case MeasureKind::cdd_jsd: return "cdd_jsd";
        case MeasureKind::custom: return custom ? custom->name : "custom";
    }
    return "unknown";
}

}  // namespace

DecompositionReport decompose(const VectorSet& v, MeasureKind kind,
                              const DivergenceMeasure* custom) {
    if (v.q.empty()) throw Error("decompose: empty ground truth vector Q");
    DecompositionReport report;
    report.metric_name = measure_name(kind, custom);
    if (v.has_predictions) {
        report.d_pars = score_pair(v.r, v.q, kind, custom);
    }
    if (v.s_star) {
        report.d_ocr = score_pair(*v.s_star, v.q, kind, custom);
    }
    if (v.s) {
        report.d_total = score_pair(*v.s, v.q, kind, custom);
        if (v.has_predictions) {
            report.d_int = score_pair(*v.s, v.r, kind, custom);
        }
    }
    return report;
}

CoteComponents cote_approx(const std::vector<Region>& gt_regions,
                           const std::vector<Region>& pred_regions, double page_width,
                           double page_height, const CoteOptions& options) {
    double gt_area = 0.0;
    for (const Region& r : gt_regions) gt_area += geometry_area(r.geometry);
    if (gt_area <= 0.0) throw Error("cote_approx: zero total GT area");
    if (page_width <= 0.0 || page_height <= 0.0) throw Error("cote_approx: empty page");

    // Deterministic sampling grid, proportional to the page aspect.
    const double longer = std::max(page_width, page_height);
    const int nx = std::max(1, static_cast<int>(std::lround(
                                    options.grid_resolution * page_width / longer)));
    const int ny = std::max(1, static_cast<int>(std::lround(
                                    options.grid_resolution * page_height / longer)));
    const double cw = page_width / nx;
    const double ch = page_height / ny;
    const std::size_t n_cells = static_cast<std::size_t>(nx) * ny;

    // Per-cell: GT coverage flag, semantic unit ids, prediction count.
    std::vector<std::vector<int>> cell_units(n_cells);
    std::vector<std::uint16_t> pred_count(n_cells, 0);

    // Semantic unit = semantic_class group, else the region itself.
    std::map<std::string, int> unit_ids;
    auto unit_of = [&](const Region& r) {
        const std::string key =
            r.semantic_class ? "class:" + *r.semantic_class : "region:" + r.id;
        auto [it, inserted] = unit_ids.try_emplace(key, static_cast<int>(unit_ids.size()));
        return it->second;
    };

    auto for_each_covered_cell = [&](const RegionGeometry& g, auto&& fn) {
        const Box bb = bounding_box(g);
        const int x0 = std::clamp(static_cast<int>(bb.x0 / cw), 0, nx - 1);
        const int x1 = std::clamp(static_cast<int>(bb.x1 / cw), 0, nx - 1);
        const int y0 = std::clamp(static_cast<int>(bb.y0 / ch), 0, ny - 1);
        const int y1 = std::clamp(static_cast<int>(bb.y1 / ch), 0, ny - 1);
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const Point center{(x + 0.5) * cw, (y + 0.5) * ch};
                if (point_in_geometry(center, g)) {
                    fn(static_cast<std::size_t>(y) * nx + x);
                }
            }
        }
    };

    for (const Region& r : gt_regions) {
        const int unit = unit_of(r);
        for_each_covered_cell(r.geometry, [&](std::size_t cell) {
            auto& units = cell_units[cell];
            if (std::find(units.begin(), units.end(), unit) == units.end()) {
                units.push_back(unit);
            }
        });
    }

    double trespass_num = 0.0;
    double trespass_den = 0.0;
    for (const Region& p : pred_regions) {
        std::set<int> touched_units;
        std::size_t gt_cells_covered = 0;
        for_each_covered_cell(p.geometry, [&](std::size_t cell) {
            ++pred_count[cell];
            if (!cell_units[cell].empty()) {
                ++gt_cells_covered;
                for (int u : cell_units[cell]) touched_units.insert(u);
            }
        });
        trespass_den += static_cast<double>(gt_cells_covered);
        if (touched_units.size() >= 2) {
            trespass_num += static_cast<double>(gt_cells_covered);
        }
    }

    std::size_t gt_cells = 0, covered_once = 0, covered_twice = 0, excess_cells = 0;
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        const bool in_gt = !cell_units[cell].empty();
        if (in_gt) {
            ++gt_cells;
            if (pred_count[cell] >= 1) ++covered_once;
            if (pred_count[cell] >= 2) ++covered_twice;
        } else if (pred_count[cell] >= 1) {
            ++excess_cells;
        }
    }

    CoteComponents cote;
    if (gt_cells > 0) {
        cote.coverage = static_cast<double>(covered_once) / static_cast<double>(gt_cells);
        cote.overlap = static_cast<double>(covered_twice) / static_cast<double>(gt_cells);
    }
    cote.trespass = trespass_den > 0.0 ? trespass_num / trespass_den : 0.0;
    cote.excess = static_cast<double>(excess_cells) / static_cast<double>(n_cells);
    cote.score = cote.coverage - cote.overlap - cote.trespass;
    return cote;
}

TriageVerdict triage(const DecompositionReport& report,
                     const std::optional<CoteComponents>& cote, double ratio_threshold,
                     double cote_threshold) {
    if (!report.d_ocr || !report.d_total) {
        throw Error("triage: d_ocr and d_total required");
    }
    TriageVerdict verdict;
    if (cote && cote->score < cote_threshold) {
        // Degenerate-parse guard: a failed COTe gate overrides the ratio,
        // including the d_total == 0 case (bag metrics are permutation
        // blind, so a structure-destroying parse can still score zero).
        verdict.cote_gate_passed = false;
        verdict.dominant = DominantSource::parsing;
        if (*report.d_total != 0.0) verdict.ratio = *report.d_ocr / *report.d_total;
        return verdict;
    }
    if (*report.d_total == 0.0) {
        verdict.dominant = DominantSource::indeterminate;
        return verdict;
    }
    verdict.ratio = *report.d_ocr / *report.d_total;
    verdict.dominant = *verdict.ratio >= ratio_threshold ? DominantSource::ocr
                                                         : DominantSource::parsing;
    return verdict;
}

}  // namespace cevkit
