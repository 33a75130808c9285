// Acceptance suite: one pass/fail line per criterion. Exits nonzero if
// any criterion fails. argv[1] must be the path to the cevkit CLI
// binary (used by the determinism criterion).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "cevkit/decompose.hpp"
#include "cevkit/io.hpp"
#include "cevkit/metrics.hpp"
#include "cevkit/simulate.hpp"

using namespace cevkit;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s — %s\n", criterion, pass ? "PASS" : "FAIL",
                detail.c_str());
    if (!pass) ++g_failures;
}

CharVector bag(const std::string& s) { return char_vector(s, CountUnit::character); }

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// --- criterion 1: SpACER <= CER theorem -----------------------------------

void criterion1() {
    std::mt19937_64 rng(101);
    auto random_string = [&](std::size_t min_len, std::size_t max_len) {
        std::string s;
        const std::size_t len = min_len + rng() % (max_len - min_len + 1);
        for (std::size_t i = 0; i < len; ++i) {
            s += static_cast<char>('a' + rng() % 10);
        }
        return s;
    };
    bool ok = true;
    std::string why = "spacer_macro <= cer on 10,000 pairs; equality on deletion and "
                      "substitution subsets";
    for (int i = 0; i < 10000 && ok; ++i) {
        const std::string gt = random_string(1, 500);
        const int mode = i % 3;
        std::string pred;
        if (mode == 0) {
            pred = random_string(0, 500);
        } else if (mode == 1) {
            // Pure deletions: pred is a strict-or-equal subsequence.
            for (char c : gt) {
                if (rng() % 4 != 0) pred += c;
            }
        } else {
            // Non-reciprocal substitutions: swapped-in symbols come from a
            // disjoint alphabet, so no swap can be undone elsewhere.
            pred = gt;
            for (char& c : pred) {
                if (rng() % 4 == 0) c = static_cast<char>('A' + rng() % 10);
            }
        }
        const double rate = cer(gt, pred).first;
        const double sp = spacer_macro(bag(gt), bag(pred));
        if (!(sp <= rate)) {
            ok = false;
            why = "inequality violated: gt=" + gt + " pred=" + pred;
        }
        if (mode != 0 && sp != rate) {
            ok = false;
            why = "equality violated on subset: gt=" + gt + " pred=" + pred;
        }
    }
    report(1, ok, why);
}

// --- criterion 2: JSD metric axioms ----------------------------------------

void criterion2() {
    std::mt19937_64 rng(202);
    auto random_dist = [&](int key_offset) {
        CharDistribution::Probs probs;
        const int keys = 1 + static_cast<int>(rng() % 6);
        double sum = 0.0;
        for (int i = 0; i < keys; ++i) {
            const double w = 1.0 + static_cast<double>(rng() % 1000);
            probs[std::string(1, static_cast<char>('a' + key_offset + i))] += w;
            sum += w;
        }
        for (auto& [k, v] : probs) v /= sum;
        return CharDistribution(std::move(probs), CountUnit::character);
    };
    bool ok = true;
    std::string why =
        "symmetry exact, range [0,1]±1e-12, triangle ±1e-9, d(x,x)=0, disjoint=1 on "
        "5,000 triples";
    for (int i = 0; i < 5000 && ok; ++i) {
        const CharDistribution x = random_dist(0);
        const CharDistribution y = random_dist(0);
        const CharDistribution z = random_dist(0);
        const double dxy = cdd_jsd(x, y);
        if (dxy != cdd_jsd(y, x)) { ok = false; why = "symmetry violated"; }
        if (dxy < -1e-12 || dxy > 1.0 + 1e-12) { ok = false; why = "range violated"; }
        if (dxy > cdd_jsd(x, z) + cdd_jsd(z, y) + 1e-9) {
            ok = false;
            why = "triangle inequality violated";
        }
        if (cdd_jsd(x, x) != 0.0) { ok = false; why = "d(x,x) != 0"; }
        const double disjoint = cdd_jsd(random_dist(0), random_dist(10));
        if (std::abs(disjoint - 1.0) > 1e-12) {
            ok = false;
            why = "disjoint supports did not score 1.0";
        }
    }
    report(2, ok, why);
}

// --- criterion 3: decomposition zero identities ----------------------------

void criterion3() {
    PageLayout page;
    page.page_id = "fixture";
    page.width = 100;
    page.height = 20;
    page.gt_regions = {
        Region{"w1", Box{0, 5, 30, 15}, "abc", Granularity::word, {}, {}},
        Region{"w2", Box{40, 5, 60, 15}, "def", Granularity::word, {}, {}}};
    bool ok = true;
    std::string why = "perfect parsing: d_pars=0, d_total=d_ocr; perfect OCR: d_ocr=0, "
                      "d_int=0; exact, all measures";

    // Perfect parsing, corrupted OCR identical on both sides.
    PageLayout parsed = page;
    parsed.pred_regions = page.gt_regions;
    for (Region& r : parsed.pred_regions) r.id = "p_" + r.id;
    std::map<std::string, std::string> noisy_gt{{"w1", "aXc"}, {"w2", "def"}};
    std::map<std::string, std::string> noisy_pred{{"p_w1", "aXc"}, {"p_w2", "def"}};
    const VectorSet noisy = build_vectors(parsed, noisy_gt, noisy_pred);

    // Perfect OCR on both sides, imperfect parsing (first word only).
    PageLayout cropped = page;
    cropped.pred_regions = {Region{"p1", Box{0, 5, 30, 15}, "", Granularity::word, {}, {}}};
    std::map<std::string, std::string> clean_gt{{"w1", "abc"}, {"w2", "def"}};
    std::map<std::string, std::string> clean_pred{{"p1", "abc"}};
    const VectorSet clean = build_vectors(cropped, clean_gt, clean_pred);

    for (MeasureKind kind : {MeasureKind::spacer, MeasureKind::spacd, MeasureKind::cdd_jsd}) {
        const DecompositionReport a = decompose(noisy, kind);
        if (*a.d_pars != 0.0 || *a.d_total != *a.d_ocr) {
            ok = false;
            why = "perfect-parsing identity violated";
        }
        const DecompositionReport b = decompose(clean, kind);
        if (*b.d_ocr != 0.0 || *b.d_int != 0.0) {
            ok = false;
            why = "perfect-OCR identity violated";
        }
    }
    report(3, ok, why);
}

// --- criterion 4: spatial-granularity reproduction -------------------------

void criterion4() {
    std::vector<simulate::SyntheticPage> pages;
    for (std::size_t i = 0; i < 20; ++i) {
        pages.push_back(simulate::corpus_page(simulate::LayoutSpec{}, i, 404));
    }
    const std::vector<double> fracs{0.1, 0.2, 0.3, 0.4, 0.5};
    const simulate::GranularityReport rep =
        simulate::run_granularity_experiment(pages, fracs, fracs, 10, 404);

    auto median_at = [&](Granularity g, double w, double h) {
        for (const auto& s : rep.summaries) {
            if (s.granularity == g && s.width_frac == w && s.height_frac == h) {
                return s.median_error;
            }
        }
        return -1.0;
    };
    auto pooled_median = [&](Granularity g, double w) {
        std::vector<double> errs;
        for (const auto& s : rep.samples) {
            if (s.granularity == g && s.width_frac == w && !s.skipped) {
                errs.push_back(s.error);
            }
        }
        return median_of(std::move(errs));
    };

    bool ordering = true, paragraph_high = true, word_low = true;
    for (double w : fracs) {
        for (double h : fracs) {
            const double mw = median_at(Granularity::word, w, h);
            const double ml = median_at(Granularity::line, w, h);
            const double mp = median_at(Granularity::paragraph, w, h);
            if (!(mw < ml && ml < mp)) ordering = false;
            if (w >= 0.2 && mw >= 0.05) word_low = false;
        }
    }
    std::vector<double> paragraph_errs;
    for (const auto& s : rep.samples) {
        if (s.granularity == Granularity::paragraph && !s.skipped) {
            paragraph_errs.push_back(s.error);
        }
    }
    paragraph_high = median_of(std::move(paragraph_errs)) > 0.5;

    const double word_ratio =
        pooled_median(Granularity::word, 0.2) / pooled_median(Granularity::word, 0.1);
    const double line_ratio =
        pooled_median(Granularity::line, 0.2) / pooled_median(Granularity::line, 0.1);
    const bool halves = word_ratio >= 0.35 && word_ratio <= 0.65 && line_ratio >= 0.35 &&
                        line_ratio <= 0.65;

    std::ostringstream why;
    why << "word<line<paragraph at every size: " << (ordering ? "yes" : "no")
        << "; paragraph median " << (paragraph_high ? ">" : "<=") << " 0.5"
        << "; word median < 0.05 at width >= 0.2: " << (word_low ? "yes" : "no")
        << "; 0.1->0.2 ratios word=" << word_ratio << " line=" << line_ratio;
    report(4, ordering && paragraph_high && word_low && halves, why.str());
}

// --- criterion 5: degenerate-parse detection --------------------------------

void criterion5() {
    simulate::LayoutSpec spec;
    spec.columns = 3;
    const simulate::SyntheticPage page = simulate::generate_page(spec, 505);
    const std::vector<Region> words =
        simulate::regions_at(page.layout, Granularity::word);

    PageLayout layout;
    layout.page_id = page.layout.page_id;
    layout.width = page.layout.width;
    layout.height = page.layout.height;
    layout.gt_regions = words;
    simulate::ParsePerturbation full;
    full.kind = simulate::PerturbationKind::degenerate_full_page;
    layout.pred_regions =
        simulate::perturb_parsing(words, full, layout.width, layout.height, 1);

    // Clean OCR on both sides.
    std::map<std::string, std::string> ocr_gt;
    std::string everything;
    for (const Region& w : words) {
        ocr_gt[w.id] = w.text;
        if (!everything.empty()) everything += ' ';
        everything += w.text;
    }
    std::map<std::string, std::string> ocr_pred{
        {layout.pred_regions[0].id, everything}};

    const VectorSet v = build_vectors(layout, ocr_gt, ocr_pred);
    const DecompositionReport rep = decompose(v, MeasureKind::spacer);
    const CoteComponents cote =
        cote_approx(words, layout.pred_regions, layout.width, layout.height);
    const TriageVerdict verdict = triage(rep, cote);

    const bool ok = *rep.d_pars <= 0.05 && cote.trespass >= 0.5 &&
                    verdict.dominant == DominantSource::parsing;
    std::ostringstream why;
    why << "full-page prediction on 3 columns: d_pars=" << *rep.d_pars
        << " trespass=" << cote.trespass << " verdict="
        << (verdict.dominant == DominantSource::parsing ? "parsing" : "not-parsing");
    report(5, ok, why.str());
}

// --- criterion 6: triage classifier F1 --------------------------------------

struct F1Counter {
    int tp = 0, fp = 0, fn = 0;
    void add(DominantSource truth, DominantSource pred) {
        if (truth == DominantSource::indeterminate) return;
        const bool t = truth == DominantSource::ocr;
        const bool p = pred == DominantSource::ocr;
        if (t && p) ++tp;
        else if (!t && p) ++fp;
        else if (t && !p) ++fn;
    }
    double f1() const {
        const double prec = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        const double rec = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
        return prec + rec > 0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
    }
};

void criterion6() {
    const auto parse_grid = simulate::default_parse_grid();
    const auto ocr_grid = simulate::default_ocr_grid();
    const std::size_t n_pages = 45;
    std::vector<std::vector<simulate::CorpusCell>> per_page(n_pages);

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < hw; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n_pages) break;
                const simulate::SyntheticPage page =
                    simulate::corpus_page(simulate::LayoutSpec{}, i, 606);
                per_page[i] =
                    simulate::corpus_cells_for_page(page, i, parse_grid, ocr_grid, 606);
            }
        });
    }
    for (std::thread& t : pool) t.join();

    F1Counter plain, gated;
    std::size_t non_degenerate = 0, total = 0;
    for (const auto& cells : per_page) {
        for (const simulate::CorpusCell& cell : cells) {
            ++total;
            const DecompositionReport rep = decompose(cell.vectors, MeasureKind::spacer);
            gated.add(cell.true_dominant, triage(rep, cell.cote).dominant);
            if (!cell.degenerate) {
                ++non_degenerate;
                plain.add(cell.true_dominant, triage(rep, std::nullopt).dominant);
            }
        }
    }
    const bool ok = non_degenerate >= 900 && plain.f1() >= 0.85 && gated.f1() >= 0.88;
    std::ostringstream why;
    why << "ratio-threshold F1=" << plain.f1() << " on " << non_degenerate
        << " non-degenerate cells (>=0.85); gated F1=" << gated.f1() << " on " << total
        << " cells incl. degenerate (>=0.88)";
    report(6, ok, why.str());
}

// --- criterion 7: oracle equivalence -----------------------------------------

bool winding_contains(const Point& p, const Polygon& poly) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % n];
        const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if (std::abs(cross) < 1e-12 && p.x >= std::min(a.x, b.x) - 1e-12 &&
            p.x <= std::max(a.x, b.x) + 1e-12 && p.y >= std::min(a.y, b.y) - 1e-12 &&
            p.y <= std::max(a.y, b.y) + 1e-12) {
            return true;
        }
    }
    int winding = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % n];
        if (a.y <= p.y) {
            if (b.y > p.y && (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) > 0) {
                ++winding;
            }
        } else if (b.y <= p.y &&
                   (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) < 0) {
            --winding;
        }
    }
    return winding != 0;
}

std::int64_t levenshtein_oracle(const std::string& a, const std::string& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::vector<std::int64_t>> dp(n + 1, std::vector<std::int64_t>(m + 1));
    for (std::size_t i = 0; i <= n; ++i) dp[i][0] = static_cast<std::int64_t>(i);
    for (std::size_t j = 0; j <= m; ++j) dp[0][j] = static_cast<std::int64_t>(j);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            dp[i][j] = std::min({dp[i - 1][j] + 1, dp[i][j - 1] + 1,
                                 dp[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        }
    }
    return dp[n][m];
}

void criterion7() {
    std::mt19937_64 rng(707);
    bool ok = true;
    std::string why = "assignment vs brute force on 1,000 pages; containment vs winding "
                      "oracle on 10,000 samples; cer vs DP oracle on 1,000 pairs";

    // assign_characters vs brute force.
    for (int page = 0; page < 1000 && ok; ++page) {
        std::vector<CharToken> tokens;
        const int n_tokens = static_cast<int>(rng() % 40);
        for (int j = 0; j < n_tokens; ++j) {
            tokens.push_back(CharToken{static_cast<char32_t>('a' + rng() % 6),
                                       {static_cast<double>(rng() % 100),
                                        static_cast<double>(rng() % 100)},
                                       "src",
                                       j});
        }
        std::vector<Region> preds;
        const int n_preds = static_cast<int>(rng() % 8);
        for (int j = 0; j < n_preds; ++j) {
            const double x = static_cast<double>(rng() % 90);
            const double y = static_cast<double>(rng() % 90);
            preds.push_back(Region{"p" + std::to_string(j),
                                   Box{x, y, x + 1 + static_cast<double>(rng() % 50),
                                       y + 1 + static_cast<double>(rng() % 50)},
                                   "", Granularity::word, {}, {}});
        }
        const AssignmentTable table = assign_characters(tokens, preds);
        CharVector brute;
        for (const CharToken& t : tokens) {
            for (const Region& p : preds) {
                if (point_in_geometry(t.position, p.geometry)) {
                    std::string key;
                    key += static_cast<char>(t.token);
                    brute.add(key);
                }
            }
        }
        if (!(brute == table.aggregate)) {
            ok = false;
            why = "assignment disagrees with brute-force containment";
        }
    }

    // point_in_geometry vs winding oracle.
    int checked = 0;
    while (checked < 10000 && ok) {
        const int n = 3 + static_cast<int>(rng() % 7);
        std::vector<double> angles;
        for (int i = 0; i < n; ++i) {
            angles.push_back(6.2831853071795864769 * static_cast<double>(rng() % 10000) /
                             10000.0);
        }
        std::sort(angles.begin(), angles.end());
        Polygon poly;
        for (double a : angles) {
            const double r = 1.0 + static_cast<double>(rng() % 90) / 10.0;
            poly.vertices.push_back({10.0 + r * std::cos(a), 10.0 + r * std::sin(a)});
        }
        if (!validate_polygon_simple(poly) || geometry_area(poly) < 1e-9) continue;
        for (int j = 0; j < 20 && ok; ++j) {
            const Point p{static_cast<double>(rng() % 220) / 10.0,
                          static_cast<double>(rng() % 220) / 10.0};
            if (point_in_geometry(p, poly) != winding_contains(p, poly)) {
                ok = false;
                why = "containment disagrees with winding-number oracle";
            }
            ++checked;
        }
    }

    // cer vs an independent quadratic DP oracle.
    for (int i = 0; i < 1000 && ok; ++i) {
        std::string a, b;
        for (unsigned j = 0; j < 1 + rng() % 60; ++j) a += static_cast<char>('a' + rng() % 9);
        for (unsigned j = 0; j < rng() % 60; ++j) b += static_cast<char>('a' + rng() % 9);
        const auto [rate, counts] = cer(a, b);
        const std::int64_t oracle = levenshtein_oracle(a, b);
        if (counts.distance() != oracle ||
            rate != static_cast<double>(oracle) / static_cast<double>(a.size())) {
            ok = false;
            why = "cer disagrees with DP oracle on " + a + " vs " + b;
        }
    }
    report(7, ok, why);
}

// --- criterion 8: format round trips -----------------------------------------

void criterion8() {
    std::mt19937_64 rng(808);
    bool ok = true;
    std::string why = "500 PageDocument + 500 ReportDocument JSON round trips; ALTO -> "
                      "JSON -> load preserves regions exactly";

    for (int i = 0; i < 500 && ok; ++i) {
        io::PageDocument doc;
        doc.layout.page_id = "p" + std::to_string(i);
        doc.layout.width = 100 + static_cast<double>(rng() % 200);
        doc.layout.height = 100 + static_cast<double>(rng() % 200);
        const int n = 1 + static_cast<int>(rng() % 5);
        for (int j = 0; j < n; ++j) {
            Region r;
            r.id = "r" + std::to_string(j);
            const double x = static_cast<double>(rng() % 50);
            const double y = static_cast<double>(rng() % 50);
            if (rng() % 2 == 0) {
                r.geometry = Box{x, y, x + 5, y + 5};
            } else {
                r.geometry = Polygon{{{x, y}, {x + 6, y}, {x + 3, y + 5}}};
            }
            r.text = std::string(1 + rng() % 6, static_cast<char>('a' + rng() % 26));
            r.granularity = static_cast<Granularity>(rng() % 3);
            if (rng() % 2 == 0) {
                r.order_hint = OrderHint{static_cast<int>(rng() % 3),
                                         static_cast<int>(rng() % 9)};
            }
            doc.layout.gt_regions.push_back(r);
        }
        const std::string once = io::write_page_json(doc);
        if (io::write_page_json(io::load_page_json(once)) != once) {
            ok = false;
            why = "PageDocument round trip not identical";
        }
    }

    for (int i = 0; i < 500 && ok; ++i) {
        io::ReportDocument rep;
        const int rows = static_cast<int>(rng() % 4);
        for (int j = 0; j < rows; ++j) {
            io::PageReportRow row;
            row.page_id = "pg" + std::to_string(j);
            row.decomposition.metric_name = "spacer";
            row.decomposition.d_total = static_cast<double>(rng() % 1000) / 997.0;
            if (rng() % 2 == 0) {
                row.decomposition.d_pars = static_cast<double>(rng() % 1000) / 991.0;
            }
            if (rng() % 2 == 0) row.extra["cer"] = static_cast<double>(rng() % 7) / 7.0;
            rep.rows.push_back(row);
        }
        rep.aggregates = io::compute_aggregates(rep.rows);
        const std::string once = io::write_report(rep, io::ReportFormat::json);
        if (io::write_report(io::read_report_json(once), io::ReportFormat::json) != once) {
            ok = false;
            why = "ReportDocument round trip not identical";
        }
    }

    if (ok) {
        const char* alto = R"(<alto><Layout><Page WIDTH="300" HEIGHT="200"><PrintSpace>
  <TextBlock ID="b" HPOS="5" VPOS="5" WIDTH="200" HEIGHT="100">
   <TextLine ID="l" HPOS="5" VPOS="5" WIDTH="200" HEIGHT="20">
    <String ID="s1" CONTENT="alpha" HPOS="5" VPOS="5" WIDTH="60" HEIGHT="20"/>
    <String ID="s2" CONTENT="beta" HPOS="70" VPOS="5" WIDTH="60" HEIGHT="20"/>
   </TextLine></TextBlock>
 </PrintSpace></Page></Layout></alto>)";
        io::PageDocument doc;
        doc.layout = io::load_alto(alto);
        const io::PageDocument back = io::load_page_json(io::write_page_json(doc));
        if (back.layout.gt_regions.size() != doc.layout.gt_regions.size()) {
            ok = false;
            why = "ALTO round trip changed the region count";
        } else {
            for (std::size_t i = 0; i < doc.layout.gt_regions.size(); ++i) {
                if (back.layout.gt_regions[i].granularity !=
                        doc.layout.gt_regions[i].granularity ||
                    !(bounding_box(back.layout.gt_regions[i].geometry) ==
                      bounding_box(doc.layout.gt_regions[i].geometry))) {
                    ok = false;
                    why = "ALTO round trip changed granularity or coordinates";
                }
            }
        }
    }
    report(8, ok, why);
}

// --- criterion 9: CLI determinism --------------------------------------------

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void criterion9(const std::string& cli) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "cevkit-acceptance";
    fs::create_directories(dir);
    bool ok = true;
    std::string why = "simulate-granularity and simulate-pipeline byte-identical across "
                      "reruns and --jobs 1 vs --jobs 4";

    auto run = [&](const std::string& args, const fs::path& out) {
        const std::string cmd =
            "\"" + cli + "\" " + args + " --out \"" + out.string() + "\"";
        return std::system(cmd.c_str()) == 0;
    };
    const std::string gran = "simulate-granularity --pages 4 --repeats 3 --seed 7";
    const std::string pipe = "simulate-pipeline --pages 4 --seed 7";
    if (!run(gran + " --jobs 1", dir / "g1.csv") ||
        !run(gran + " --jobs 1", dir / "g2.csv") ||
        !run(gran + " --jobs 4", dir / "g3.csv") ||
        !run(pipe + " --jobs 1", dir / "p1.csv") ||
        !run(pipe + " --jobs 1", dir / "p2.csv") ||
        !run(pipe + " --jobs 4", dir / "p3.csv")) {
        ok = false;
        why = "CLI invocation failed";
    } else {
        const std::string g = slurp(dir / "g1.csv");
        const std::string p = slurp(dir / "p1.csv");
        if (g.empty() || p.empty() || g != slurp(dir / "g2.csv") ||
            g != slurp(dir / "g3.csv") || p != slurp(dir / "p2.csv") ||
            p != slurp(dir / "p3.csv")) {
            ok = false;
            why = "CSV output differed across runs or parallelism degrees";
        }
    }
    report(9, ok, why);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-cevkit-cli>\n";
        return 2;
    }
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9(argv[1]);
    return g_failures == 0 ? 0 : 1;
}
