#include "cevkit/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "cevkit/metrics.hpp"
#include "cevkit/unicode.hpp"

namespace cevkit::simulate {

namespace {

// splitmix64; used to derive independent sub-seeds so results are
// schedule-independent.
std::uint64_t mix(std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Hand-rolled draws: stdlib distributions are implementation-defined.
double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_int(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n;  // slight modulo bias is irrelevant here
}

double gauss(std::mt19937_64& rng, double sigma) {
    if (sigma == 0.0) return 0.0;
    const double u1 = std::max(u01(rng), 1e-300);
    const double u2 = u01(rng);
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

// Approximate English letter frequencies (per mille).
constexpr std::array<int, 26> kLetterFreq = {
    82, 15, 28, 43, 127, 22, 20, 61, 70, 2, 8, 40, 24,
    67, 75, 19, 1,  60,  63, 91, 28, 10, 24, 2, 20, 1};

char32_t sample_letter(std::mt19937_64& rng) {
    static const int total = std::accumulate(kLetterFreq.begin(), kLetterFreq.end(), 0);
    int r = static_cast<int>(uniform_int(rng, static_cast<std::uint64_t>(total)));
    for (int i = 0; i < 26; ++i) {
        r -= kLetterFreq[i];
        if (r < 0) return static_cast<char32_t>(U'a' + i);
    }
    return U'z';
}

// Per-glyph advance factor in [0.8, 1.2]; a fixed abstract "font".
double glyph_factor(char32_t c) {
    const std::uint64_t h = mix(static_cast<std::uint64_t>(c), 7);
    return 0.8 + 0.4 * static_cast<double>(h % 1024) / 1023.0;
}

struct LaidWord {
    std::u32string text;
    std::vector<double> char_x;  // glyph centers
    double x_start = 0.0;
    double x_end = 0.0;
};

struct LaidLine {
    std::vector<LaidWord> words;
    double y = 0.0;  // glyph-center line
    bool paragraph_final = false;
};

}  // namespace

std::vector<Region> regions_at(const PageLayout& layout, Granularity granularity) {
    std::vector<Region> out;
    for (const Region& r : layout.gt_regions) {
        if (r.granularity == granularity) out.push_back(r);
    }
    return out;
}

SyntheticPage generate_page(const LayoutSpec& spec, std::uint64_t seed) {
    if (spec.columns < 1 || spec.columns > 3) throw InputError("generate_page: columns must be 1..3");
    const double content_w =
        spec.page_width - 2.0 * spec.margin - (spec.columns - 1) * spec.gutter;
    const double col_w = content_w / spec.columns;
    const double usable_h = spec.page_height - 2.0 * spec.margin;
    const int lines_per_col = static_cast<int>(usable_h / spec.line_height);
    if (col_w < spec.char_width * (spec.max_word_len + 1) || lines_per_col < 1) {
        throw InputError("generate_page: spec cannot fit one line");
    }

    std::mt19937_64 rng(mix(seed));
    const double glyph_h = 0.7 * spec.line_height;

    SyntheticPage page;
    page.layout.page_id = "synth-" + std::to_string(seed);
    page.layout.width = spec.page_width;
    page.layout.height = spec.page_height;

    std::int64_t next_char_id = 0;
    int word_id = 0, line_id = 0, para_id = 0;

    for (int col = 0; col < spec.columns; ++col) {
        const double col_x0 = spec.margin + col * (col_w + spec.gutter);
        const double col_x1 = col_x0 + col_w;

        // Lay out lines for this column.
        std::vector<LaidLine> lines;
        int para_lines_left =
            spec.min_paragraph_lines +
            static_cast<int>(uniform_int(
                rng, static_cast<std::uint64_t>(spec.max_paragraph_lines -
                                                spec.min_paragraph_lines + 1)));
        for (int li = 0; li < lines_per_col; ++li) {
            LaidLine line;
            line.y = spec.margin + (li + 0.5) * spec.line_height;
            double cursor = col_x0;
            while (true) {
                const int len =
                    spec.min_word_len +
                    static_cast<int>(uniform_int(
                        rng, static_cast<std::uint64_t>(spec.max_word_len -
                                                        spec.min_word_len + 1)));
                std::u32string word;
                double width = 0.0;
                for (int k = 0; k < len; ++k) {
                    const char32_t c = sample_letter(rng);
                    word.push_back(c);
                    width += spec.char_width * glyph_factor(c);
                }
                const double space = line.words.empty() ? 0.0 : spec.char_width;
                if (cursor + space + width > col_x1) break;
                cursor += space;
                LaidWord lw;
                lw.text = std::move(word);
                lw.x_start = cursor;
                double x = cursor;
                for (char32_t c : lw.text) {
                    const double adv = spec.char_width * glyph_factor(c);
                    lw.char_x.push_back(x + adv / 2.0);
                    x += adv;
                }
                lw.x_end = x;
                cursor = x;
                line.words.push_back(std::move(lw));
            }
            if (line.words.empty()) continue;
            if (--para_lines_left == 0) {
                line.paragraph_final = true;
                para_lines_left =
                    spec.min_paragraph_lines +
                    static_cast<int>(uniform_int(
                        rng, static_cast<std::uint64_t>(spec.max_paragraph_lines -
                                                        spec.min_paragraph_lines + 1)));
            }
            lines.push_back(std::move(line));
        }
        if (!lines.empty()) lines.back().paragraph_final = true;

        // Alignment: shift (centered) or stretch gaps (justified).
        for (LaidLine& line : lines) {
            const double slack = col_x1 - line.words.back().x_end;
            if (slack <= 0.0) continue;
            if (spec.alignment == Alignment::centered) {
                const double shift = slack / 2.0;
                for (LaidWord& w : line.words) {
                    w.x_start += shift;
                    w.x_end += shift;
                    for (double& x : w.char_x) x += shift;
                }
            } else if (spec.alignment == Alignment::justified && !line.paragraph_final &&
                       line.words.size() > 1) {
                const double per_gap =
                    slack / static_cast<double>(line.words.size() - 1);
                for (std::size_t wi = 1; wi < line.words.size(); ++wi) {
                    const double shift = per_gap * static_cast<double>(wi);
                    LaidWord& w = line.words[wi];
                    w.x_start += shift;
                    w.x_end += shift;
                    for (double& x : w.char_x) x += shift;
                }
            }
        }

        // Emit regions and oracle characters.
        std::vector<std::string> para_line_texts;
        std::vector<std::int64_t> para_ids;
        Box para_box{1e30, 1e30, -1e30, -1e30};
        auto flush_paragraph = [&] {
            if (para_line_texts.empty()) return;
            Region region;
            region.id = "p" + std::to_string(para_id++);
            region.geometry = para_box;
            region.granularity = Granularity::paragraph;
            std::string text;
            for (const std::string& t : para_line_texts) {
                if (!text.empty()) text += ' ';
                text += t;
            }
            region.text = std::move(text);
            region.semantic_class = region.id;  // each paragraph its own unit
            page.region_char_ids[region.id] = para_ids;
            page.layout.gt_regions.push_back(std::move(region));
            para_line_texts.clear();
            para_ids.clear();
            para_box = Box{1e30, 1e30, -1e30, -1e30};
        };

        for (const LaidLine& line : lines) {
            const double y0 = line.y - glyph_h / 2.0;
            const double y1 = line.y + glyph_h / 2.0;
            std::string line_text;
            std::vector<std::int64_t> line_ids;
            for (const LaidWord& w : line.words) {
                Region wr;
                wr.id = "w" + std::to_string(word_id++);
                wr.geometry = Box{w.x_start, y0, w.x_end, y1};
                wr.text = unicode::encode_utf8(w.text);
                wr.granularity = Granularity::word;
                std::vector<std::int64_t> ids;
                for (std::size_t k = 0; k < w.text.size(); ++k) {
                    page.chars.push_back(
                        {next_char_id, w.text[k], {w.char_x[k], line.y}});
                    ids.push_back(next_char_id);
                    ++next_char_id;
                }
                if (!line_text.empty()) line_text += ' ';
                line_text += wr.text;
                line_ids.insert(line_ids.end(), ids.begin(), ids.end());
                page.region_char_ids[wr.id] = std::move(ids);
                page.layout.gt_regions.push_back(std::move(wr));
            }
            Region lr;
            lr.id = "l" + std::to_string(line_id++);
            lr.geometry = Box{line.words.front().x_start, y0, line.words.back().x_end, y1};
            lr.text = line_text;
            lr.granularity = Granularity::line;
            lr.order_hint = OrderHint{col, line_id};
            page.region_char_ids[lr.id] = line_ids;
            page.layout.gt_regions.push_back(std::move(lr));

            const Box lb = std::get<Box>(page.layout.gt_regions.back().geometry);
            para_box.x0 = std::min(para_box.x0, lb.x0);
            para_box.y0 = std::min(para_box.y0, lb.y0);
            para_box.x1 = std::max(para_box.x1, lb.x1);
            para_box.y1 = std::max(para_box.y1, lb.y1);
            para_line_texts.push_back(line_text);
            para_ids.insert(para_ids.end(), line_ids.begin(), line_ids.end());
            if (line.paragraph_final) flush_paragraph();
        }
        flush_paragraph();
    }
    return page;
}

GranularityReport run_granularity_experiment(const std::vector<SyntheticPage>& pages,
                                             const std::vector<double>& width_fracs,
                                             const std::vector<double>& height_fracs,
                                             int repeats, std::uint64_t seed,
                                             const InferenceConfig& inference) {
    for (double f : width_fracs) {
        if (f <= 0.0 || f > 1.0) throw InputError("width_fracs must be in (0,1]");
    }
    for (double f : height_fracs) {
        if (f <= 0.0 || f > 1.0) throw InputError("height_fracs must be in (0,1]");
    }
    constexpr std::array<Granularity, 3> kGrans = {Granularity::word, Granularity::line,
                                                   Granularity::paragraph};
    GranularityReport report;

    for (std::size_t pi = 0; pi < pages.size(); ++pi) {
        const SyntheticPage& page = pages[pi];
        const std::size_t n_chars = page.chars.size();

        // Inferred position per oracle id at each granularity. The
        // kth non-space inferred token of a region corresponds to the
        // kth oracle id recorded for that region.
        std::array<std::vector<Point>, 3> inferred;
        for (std::size_t gi = 0; gi < kGrans.size(); ++gi) {
            inferred[gi].assign(n_chars, Point{});
            for (const Region& region : page.layout.gt_regions) {
                if (region.granularity != kGrans[gi]) continue;
                const auto& ids = page.region_char_ids.at(region.id);
                const auto tokens = infer_char_positions(region, inference);
                std::size_t k = 0;
                for (const CharToken& t : tokens) {
                    if (t.token == U' ') continue;
                    if (k >= ids.size()) throw Error("oracle/inferred count mismatch");
                    inferred[gi][static_cast<std::size_t>(ids[k])] = t.position;
                    ++k;
                }
                if (k != ids.size()) throw Error("oracle/inferred count mismatch");
            }
        }

        std::mt19937_64 rng(mix(seed, pi));
        for (double wf : width_fracs) {
            for (double hf : height_fracs) {
                for (int rep = 0; rep < repeats; ++rep) {
                    const double cw = wf * page.layout.width;
                    const double ch = hf * page.layout.height;
                    const double x0 = u01(rng) * (page.layout.width - cw);
                    const double y0 = u01(rng) * (page.layout.height - ch);
                    const Box crop{x0, y0, x0 + cw, y0 + ch};
                    auto in_crop = [&](const Point& p) {
                        return p.x >= crop.x0 && p.x <= crop.x1 && p.y >= crop.y0 &&
                               p.y <= crop.y1;
                    };
                    std::size_t truth_n = 0;
                    std::array<std::size_t, 3> mismatches{0, 0, 0};
                    for (std::size_t ci = 0; ci < n_chars; ++ci) {
                        const bool truth = in_crop(page.chars[ci].position);
                        if (truth) ++truth_n;
                        for (std::size_t gi = 0; gi < kGrans.size(); ++gi) {
                            if (in_crop(inferred[gi][ci]) != truth) ++mismatches[gi];
                        }
                    }
                    for (std::size_t gi = 0; gi < kGrans.size(); ++gi) {
                        GranularitySample s;
                        s.page_id = page.layout.page_id;
                        s.granularity = kGrans[gi];
                        s.width_frac = wf;
                        s.height_frac = hf;
                        s.repeat = rep;
                        if (truth_n == 0) {
                            s.skipped = true;
                        } else {
                            s.error = static_cast<double>(mismatches[gi]) /
                                      static_cast<double>(truth_n);
                        }
                        report.samples.push_back(std::move(s));
                    }
                }
            }
        }
    }

    // Aggregate per (granularity, width_frac, height_frac).
    for (Granularity g : kGrans) {
        for (double wf : width_fracs) {
            for (double hf : height_fracs) {
                std::vector<double> errors;
                std::size_t skipped = 0;
                for (const GranularitySample& s : report.samples) {
                    if (s.granularity != g || s.width_frac != wf || s.height_frac != hf)
                        continue;
                    if (s.skipped) {
                        ++skipped;
                    } else {
                        errors.push_back(s.error);
                    }
                }
                GranularitySummary sum;
                sum.granularity = g;
                sum.width_frac = wf;
                sum.height_frac = hf;
                sum.n_samples = errors.size();
                sum.n_skipped = skipped;
                if (!errors.empty()) {
                    sum.mean_error = std::accumulate(errors.begin(), errors.end(), 0.0) /
                                     static_cast<double>(errors.size());
                    std::sort(errors.begin(), errors.end());
                    const std::size_t mid = errors.size() / 2;
                    sum.median_error = errors.size() % 2 == 1
                                           ? errors[mid]
                                           : (errors[mid - 1] + errors[mid]) / 2.0;
                }
                report.summaries.push_back(sum);
            }
        }
    }
    return report;
}

double ConfusionModel::expected_error_rate() const {
    double sub_mass = 0.0;
    for (const auto& [from, row] : substitution) {
        for (const auto& [to, p] : row) sub_mass += p;
    }
    const double avg_sub = substitution.empty()
                               ? 0.0
                               : sub_mass / static_cast<double>(substitution.size());
    return avg_sub + deletion_rate + insertion_rate + symbol_noise_rate;
}

ConfusionModel uniform_confusion(double substitution_rate, double deletion_rate,
                                 double insertion_rate, double symbol_noise_rate) {
    ConfusionModel model;
    if (substitution_rate > 0.0) {
        // Cyclic shift a->b, b->c, ...: no reciprocal swaps.
        for (int i = 0; i < 26; ++i) {
            const auto from = static_cast<char32_t>(U'a' + i);
            const auto to = static_cast<char32_t>(U'a' + (i + 1) % 26);
            model.substitution[from][to] = substitution_rate;
        }
    }
    model.deletion_rate = deletion_rate;
    model.insertion_rate = insertion_rate;
    model.symbol_noise_rate = symbol_noise_rate;
    return model;
}

std::string corrupt_ocr(const std::string& text, const ConfusionModel& model,
                        std::uint64_t seed) {
    std::mt19937_64 rng(mix(seed, 0x0C2));
    const std::u32string cps = unicode::decode_utf8(text);
    std::u32string out;
    out.reserve(cps.size());
    auto maybe_insert = [&] {
        if (model.insertion_rate > 0.0 && u01(rng) < model.insertion_rate) {
            out.push_back(sample_letter(rng));
        }
        if (model.symbol_noise_rate > 0.0 && u01(rng) < model.symbol_noise_rate &&
            !model.noise_symbols.empty()) {
            out.push_back(model.noise_symbols[uniform_int(
                rng, model.noise_symbols.size())]);
        }
    };
    for (char32_t c : cps) {
        maybe_insert();
        if (model.deletion_rate > 0.0 && u01(rng) < model.deletion_rate) continue;
        auto row = model.substitution.find(c);
        if (row != model.substitution.end()) {
            double u = u01(rng);
            bool substituted = false;
            for (const auto& [to, p] : row->second) {
                if (u < p) {
                    out.push_back(to);
                    substituted = true;
                    break;
                }
                u -= p;
            }
            if (substituted) continue;
        }
        out.push_back(c);
    }
    maybe_insert();
    return unicode::encode_utf8(out);
}

std::vector<Region> perturb_parsing(const std::vector<Region>& regions,
                                    const ParsePerturbation& p, double page_width,
                                    double page_height, std::uint64_t seed) {
    std::mt19937_64 rng(mix(seed, 0x9A5));
    std::vector<Region> out;
    int next = 0;
    auto make_pred = [&](const RegionGeometry& g) {
        Region r;
        r.id = "pred" + std::to_string(next++);
        r.geometry = g;
        r.granularity = Granularity::word;
        return r;
    };

    switch (p.kind) {
        case PerturbationKind::drop_regions: {
            for (const Region& r : regions) {
                if (p.drop_probability > 0.0 && u01(rng) < p.drop_probability) continue;
                out.push_back(make_pred(r.geometry));
            }
            break;
        }
        case PerturbationKind::merge_columns: {
            // Cluster regions into y-bands and span each band's full
            // x extent, erasing column boundaries.
            std::vector<Region> sorted = regions;
            std::vector<double> heights;
            for (const Region& r : sorted) heights.push_back(bounding_box(r.geometry).height());
            std::sort(heights.begin(), heights.end());
            const double band_h = heights.empty() ? 1.0 : heights[heights.size() / 2];
            std::stable_sort(sorted.begin(), sorted.end(), [](const Region& a, const Region& b) {
                return bounding_box(a.geometry).center().y < bounding_box(b.geometry).center().y;
            });
            std::size_t i = 0;
            while (i < sorted.size()) {
                Box band = bounding_box(sorted[i].geometry);
                const double band_y = band.center().y;
                std::size_t j = i + 1;
                while (j < sorted.size() &&
                       std::abs(bounding_box(sorted[j].geometry).center().y - band_y) <
                           band_h / 2.0) {
                    const Box bb = bounding_box(sorted[j].geometry);
                    band.x0 = std::min(band.x0, bb.x0);
                    band.y0 = std::min(band.y0, bb.y0);
                    band.x1 = std::max(band.x1, bb.x1);
                    band.y1 = std::max(band.y1, bb.y1);
                    ++j;
                }
                out.push_back(make_pred(band));
                i = j;
            }
            break;
        }
        case PerturbationKind::jitter: {
            for (const Region& r : regions) {
                Box b = bounding_box(r.geometry);
                const double dx = gauss(rng, p.sigma);
                const double dy = gauss(rng, p.sigma);
                out.push_back(make_pred(Box{b.x0 + dx, b.y0 + dy, b.x1 + dx, b.y1 + dy}));
            }
            break;
        }
        case PerturbationKind::degenerate_full_page: {
            out.push_back(make_pred(Box{0.0, 0.0, page_width, page_height}));
            break;
        }
        case PerturbationKind::crop_random: {
            const double cw = p.crop_frac * page_width;
            const double ch = p.crop_frac * page_height;
            for (int k = 0; k < p.crop_count; ++k) {
                const double x0 = u01(rng) * (page_width - cw);
                const double y0 = u01(rng) * (page_height - ch);
                out.push_back(make_pred(Box{x0, y0, x0 + cw, y0 + ch}));
            }
            break;
        }
    }
    return out;
}

std::vector<ParsePerturbation> default_parse_grid() {
    std::vector<ParsePerturbation> grid;
    ParsePerturbation p;
    p.kind = PerturbationKind::drop_regions;
    p.drop_probability = 0.0;
    p.label = "identity";
    grid.push_back(p);
    p.drop_probability = 0.02;
    p.label = "drop-light";
    grid.push_back(p);
    p.drop_probability = 0.35;
    p.label = "drop-heavy";
    grid.push_back(p);
    p = ParsePerturbation{};
    p.kind = PerturbationKind::jitter;
    p.sigma = 2.5;
    p.label = "jitter";
    grid.push_back(p);
    p = ParsePerturbation{};
    p.kind = PerturbationKind::crop_random;
    p.crop_count = 6;
    p.crop_frac = 0.45;
    p.label = "crop";
    grid.push_back(p);
    p = ParsePerturbation{};
    p.kind = PerturbationKind::merge_columns;
    p.label = "merge";
    grid.push_back(p);
    p = ParsePerturbation{};
    p.kind = PerturbationKind::degenerate_full_page;
    p.label = "fullpage";
    grid.push_back(p);
    return grid;
}

std::vector<ConfusionModel> default_ocr_grid() {
    std::vector<ConfusionModel> grid;
    ConfusionModel clean;
    clean.label = "clean";
    grid.push_back(clean);
    ConfusionModel light = uniform_confusion(0.01);
    light.label = "light";
    grid.push_back(light);
    // Deletion and symbol noise dominate over substitutions: bag-of-
    // character measures see those faithfully, while substitutions can
    // partially cancel at the page level.
    ConfusionModel medium = uniform_confusion(0.02, 0.015, 0.0, 0.02);
    medium.label = "medium";
    grid.push_back(medium);
    ConfusionModel heavy = uniform_confusion(0.06, 0.04, 0.01, 0.015);
    heavy.label = "heavy";
    grid.push_back(heavy);
    return grid;
}

SyntheticPage corpus_page(const LayoutSpec& spec, std::size_t page_index,
                          std::uint64_t seed) {
    LayoutSpec s = spec;
    s.columns = 1 + static_cast<int>(page_index % 3);
    return generate_page(s, mix(seed, static_cast<std::uint64_t>(page_index)));
}

std::vector<CorpusCell> corpus_cells_for_page(const SyntheticPage& page,
                                              std::size_t page_index,
                                              const std::vector<ParsePerturbation>& parse_grid,
                                              const std::vector<ConfusionModel>& ocr_grid,
                                              std::uint64_t seed) {
    std::vector<CorpusCell> cells;
    {
        const std::vector<Region> gt_words = regions_at(page.layout, Granularity::word);
        std::vector<CharToken> oracle_tokens;
        oracle_tokens.reserve(page.chars.size());
        for (const OracleChar& c : page.chars) {
            oracle_tokens.push_back({c.ch, c.position, "", static_cast<int>(c.id)});
        }
        CharVector q_oracle(CountUnit::character);
        for (const OracleChar& c : page.chars) q_oracle.add(unicode::encode_utf8(c.ch));

        for (std::size_t pi = 0; pi < parse_grid.size(); ++pi) {
            const ParsePerturbation& parse = parse_grid[pi];
            for (std::size_t oi = 0; oi < ocr_grid.size(); ++oi) {
                const ConfusionModel& ocr = ocr_grid[oi];
                const std::uint64_t cell_index =
                    (page_index * parse_grid.size() + pi) * ocr_grid.size() + oi;
                const std::uint64_t cell_seed = mix(seed, 0x1000 + cell_index);

                CorpusCell cell;
                cell.page_id = page.layout.page_id;
                cell.parse_label = parse.label;
                cell.ocr_label = ocr.label;
                cell.degenerate = parse.kind == PerturbationKind::degenerate_full_page ||
                                  parse.kind == PerturbationKind::merge_columns;

                PageLayout layout;
                layout.page_id = page.layout.page_id;
                layout.width = page.layout.width;
                layout.height = page.layout.height;
                layout.gt_regions = gt_words;
                layout.pred_regions = perturb_parsing(gt_words, parse, layout.width,
                                                      layout.height, cell_seed);

                // OCR on GT regions.
                std::map<std::string, std::string> ocr_on_gt;
                std::uint64_t k = 0;
                for (const Region& r : gt_words) {
                    ocr_on_gt[r.id] = corrupt_ocr(r.text, ocr, mix(cell_seed, ++k));
                }

                // OCR on predictions: the oracle characters each
                // prediction truly contains, in reading order, then
                // corrupted.
                const AssignmentTable oracle_assign =
                    assign_characters(oracle_tokens, layout.pred_regions);
                std::map<std::string, std::u32string> pred_texts;
                for (const Region& r : layout.pred_regions) pred_texts[r.id];
                for (std::size_t ti = 0; ti < oracle_tokens.size(); ++ti) {
                    for (const std::string& pid : oracle_assign.token_hits[ti]) {
                        pred_texts[pid].push_back(oracle_tokens[ti].token);
                    }
                }
                std::map<std::string, std::string> ocr_on_pred;
                for (const auto& [pid, text] : pred_texts) {
                    ocr_on_pred[pid] =
                        corrupt_ocr(unicode::encode_utf8(text), ocr, mix(cell_seed, ++k));
                }

                cell.vectors = build_vectors(layout, ocr_on_gt, ocr_on_pred);
                cell.cote = cote_approx(gt_words, layout.pred_regions, layout.width,
                                        layout.height, CoteOptions{128});

                cell.injected_parse_magnitude =
                    spacer_macro(q_oracle, oracle_assign.aggregate);
                cell.injected_ocr_magnitude = ocr.expected_error_rate();
                if (cell.degenerate) {
                    cell.true_dominant = DominantSource::parsing;
                } else if (cell.injected_parse_magnitude < 1e-12 &&
                           cell.injected_ocr_magnitude < 1e-12) {
                    cell.true_dominant = DominantSource::indeterminate;
                } else {
                    cell.true_dominant =
                        cell.injected_parse_magnitude >= cell.injected_ocr_magnitude
                            ? DominantSource::parsing
                            : DominantSource::ocr;
                }
                cells.push_back(std::move(cell));
            }
        }
    }
    return cells;
}

std::vector<CorpusCell> simulate_pipeline_corpus(
    int n_pages, const std::vector<ParsePerturbation>& parse_grid,
    const std::vector<ConfusionModel>& ocr_grid, std::uint64_t seed,
    const LayoutSpec& spec) {
    if (n_pages < 1 || parse_grid.empty() || ocr_grid.empty()) {
        throw InputError("simulate_pipeline_corpus: empty grid");
    }
    std::vector<CorpusCell> cells;
    for (std::size_t i = 0; i < static_cast<std::size_t>(n_pages); ++i) {
        const SyntheticPage page = corpus_page(spec, i, seed);
        auto page_cells = corpus_cells_for_page(page, i, parse_grid, ocr_grid, seed);
        cells.insert(cells.end(), std::make_move_iterator(page_cells.begin()),
                     std::make_move_iterator(page_cells.end()));
    }
    return cells;
}

}  // namespace cevkit::simulate
