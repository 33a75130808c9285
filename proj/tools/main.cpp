// cevkit: batch CLI for page scoring, error decomposition, triage and
// desk-scale simulation.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "cevkit/decompose.hpp"
#include "cevkit/io.hpp"
#include "cevkit/metrics.hpp"
#include "cevkit/simulate.hpp"

namespace {

using namespace cevkit;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

int log_level() {
    // 0=error 1=warn 2=info 3=debug
    const char* env = std::getenv("CEVKIT_LOG");
    if (!env) return 1;
    const std::string v = env;
    if (v == "error") return 0;
    if (v == "warn") return 1;
    if (v == "info") return 2;
    if (v == "debug") return 3;
    return 1;
}

void log_warn(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[warn] " << msg << "\n";
}

void log_info(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[info] " << msg << "\n";
}

struct CommonOpts {
    std::string out;
    std::string format = "csv";
    std::string unit = "character";
    std::string measure = "spacer";
    double ratio_threshold = 0.5;
    double cote_threshold = 0.5;
    std::uint64_t seed = 1;
    int jobs = 0;  // 0: logical core count
    bool policy_no_lowercase = false;
    bool policy_no_unify_punctuation = false;
    bool policy_no_collapse_whitespace = false;
    bool policy_count_spaces = false;
    std::string policy_unicode_form = "composed";

    NormalizationPolicy policy() const {
        NormalizationPolicy p;
        p.lowercase = !policy_no_lowercase;
        p.unify_punctuation = !policy_no_unify_punctuation;
        p.collapse_whitespace = !policy_no_collapse_whitespace;
        p.count_spaces = policy_count_spaces;
        p.unicode_form = policy_unicode_form == "none" ? UnicodeForm::none
                                                       : UnicodeForm::composed_canonical;
        return p;
    }
    CountUnit count_unit() const {
        return unit == "word" ? CountUnit::word : CountUnit::character;
    }
    MeasureKind measure_kind() const {
        if (measure == "spacd") return MeasureKind::spacd;
        if (measure == "cdd-jsd" || measure == "cdd_jsd") return MeasureKind::cdd_jsd;
        return MeasureKind::spacer;
    }
    int effective_jobs() const {
        if (jobs > 0) return jobs;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? static_cast<int>(hw) : 1;
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--out", opts.out, "Output file (default: stdout)");
    cmd->add_option("--format", opts.format, "Report format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--unit", opts.unit, "Count unit: character|word")
        ->check(CLI::IsMember({"character", "word"}));
    cmd->add_option("--measure", opts.measure, "Divergence: spacer|spacd|cdd-jsd")
        ->check(CLI::IsMember({"spacer", "spacd", "cdd-jsd"}));
    cmd->add_option("--ratio-threshold", opts.ratio_threshold, "Triage d_ocr/d_total cutoff");
    cmd->add_option("--cote-threshold", opts.cote_threshold, "Triage COTe gate cutoff");
    cmd->add_option("--seed", opts.seed, "Master random seed");
    cmd->add_option("--jobs", opts.jobs, "Parallel workers (0 = logical cores)");
    cmd->add_flag("--policy-no-lowercase", opts.policy_no_lowercase);
    cmd->add_flag("--policy-no-unify-punctuation", opts.policy_no_unify_punctuation);
    cmd->add_flag("--policy-no-collapse-whitespace", opts.policy_no_collapse_whitespace);
    cmd->add_flag("--policy-count-spaces", opts.policy_count_spaces);
    cmd->add_option("--policy-unicode-form", opts.policy_unicode_form,
                    "Unicode form: composed|none")
        ->check(CLI::IsMember({"composed", "none"}));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const CommonOpts& opts, const std::string& bytes) {
    if (opts.out.empty()) {
        std::cout << bytes;
        return;
    }
    std::ofstream out(opts.out, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + opts.out);
    out << bytes;
}

// Fan-out over indices; results collected in input order.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                fn(i);
            }
        });
    }
    for (std::thread& t : pool) t.join();
}

std::string reading_order_text(const std::vector<Region>& regions,
                               const std::map<std::string, std::string>* texts,
                               const NormalizationPolicy& policy) {
    std::vector<const Region*> ordered;
    ordered.reserve(regions.size());
    for (const Region& r : regions) ordered.push_back(&r);
    const bool all_hinted = std::all_of(ordered.begin(), ordered.end(), [](const Region* r) {
        return r->order_hint.has_value();
    });
    if (all_hinted) {
        std::stable_sort(ordered.begin(), ordered.end(), [](const Region* a, const Region* b) {
            if (a->order_hint->column != b->order_hint->column) {
                return a->order_hint->column < b->order_hint->column;
            }
            return a->order_hint->index < b->order_hint->index;
        });
    }
    std::string joined;
    for (const Region* r : ordered) {
        std::string text = r->text;
        if (texts) {
            auto it = texts->find(r->id);
            text = it != texts->end() ? it->second : std::string();
        }
        if (text.empty()) continue;
        if (!joined.empty()) joined += ' ';
        joined += text;
    }
    return normalize_text(joined, policy);
}

struct PageOutcome {
    io::PageReportRow row;
    std::vector<std::string> errors;
};

int run_report_command(const std::vector<std::string>& inputs, const CommonOpts& opts,
                       bool with_decomposition) {
    std::vector<PageOutcome> outcomes(inputs.size());
    const BuildOptions build{opts.policy(), opts.count_unit(), {}};

    parallel_for(inputs.size(), opts.effective_jobs(), [&](std::size_t i) {
        PageOutcome& outcome = outcomes[i];
        try {
            const io::PageDocument doc = io::load_page_json(read_file(inputs[i]));
            for (const std::string& w : doc.warnings) log_warn(inputs[i] + ": " + w);
            io::PageReportRow row;
            row.page_id = doc.layout.page_id;
            const VectorSet vectors =
                build_vectors(doc.layout, doc.ocr_on_gt, doc.ocr_on_pred, build);
            row.decomposition = decompose(vectors, opts.measure_kind());

            if (with_decomposition) {
                if (!doc.layout.pred_regions.empty()) {
                    row.cote = cote_approx(doc.layout.gt_regions, doc.layout.pred_regions,
                                           doc.layout.width, doc.layout.height);
                }
                if (row.decomposition.d_ocr && row.decomposition.d_total) {
                    row.triage = triage(row.decomposition, row.cote, opts.ratio_threshold,
                                        opts.cote_threshold);
                } else {
                    log_warn(inputs[i] + ": triage skipped (d_ocr or d_total unavailable)");
                }
            } else {
                // Scalar scores: prediction-side vector vs Q.
                const CharVector* pred = vectors.s ? &*vectors.s
                                        : vectors.s_star ? &*vectors.s_star
                                                         : nullptr;
                if (pred && !vectors.q.empty()) {
                    row.extra["spacer"] = spacer_macro(vectors.q, *pred);
                    if (!pred->empty()) {
                        row.extra["cdd_jsd"] =
                            cdd_jsd(to_distribution(*pred), to_distribution(vectors.q));
                    }
                }
                const std::string gt_text =
                    reading_order_text(doc.layout.gt_regions, nullptr, opts.policy());
                std::string pred_text;
                if (doc.ocr_on_pred) {
                    pred_text = reading_order_text(doc.layout.pred_regions,
                                                   &*doc.ocr_on_pred, opts.policy());
                } else if (doc.ocr_on_gt) {
                    pred_text = reading_order_text(doc.layout.gt_regions, &*doc.ocr_on_gt,
                                                   opts.policy());
                }
                if (!gt_text.empty() && (doc.ocr_on_pred || doc.ocr_on_gt)) {
                    row.extra["cer"] = cer(gt_text, pred_text).first;
                }
            }
            outcome.row = std::move(row);
        } catch (const std::exception& e) {
            outcome.errors.push_back(inputs[i] + ": " + e.what());
        }
    });

    io::ReportDocument report;
    bool any_error = false;
    for (const PageOutcome& outcome : outcomes) {
        if (!outcome.errors.empty()) {
            any_error = true;
            for (const std::string& e : outcome.errors) std::cerr << "error: " << e << "\n";
            continue;
        }
        report.rows.push_back(outcome.row);
    }
    report.aggregates = io::compute_aggregates(report.rows);
    write_output(opts, io::write_report(report, opts.format == "json"
                                                    ? io::ReportFormat::json
                                                    : io::ReportFormat::csv));
    return any_error ? kExitInput : kExitOk;
}

std::vector<double> parse_fracs(const std::string& csv) {
    std::vector<double> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

std::string granularity_str(Granularity g) {
    switch (g) {
        case Granularity::word: return "word";
        case Granularity::line: return "line";
        case Granularity::paragraph: return "paragraph";
        case Granularity::page: return "page";
    }
    return "word";
}

std::string dominant_str(DominantSource d) {
    switch (d) {
        case DominantSource::parsing: return "parsing";
        case DominantSource::ocr: return "ocr";
        case DominantSource::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

int run_simulate_granularity(const CommonOpts& opts, int n_pages,
                             const std::string& width_fracs,
                             const std::string& height_fracs, int repeats, bool summary) {
    const std::vector<double> wfs = parse_fracs(width_fracs);
    const std::vector<double> hfs = parse_fracs(height_fracs);
    if (wfs.empty() || hfs.empty() || n_pages < 1 || repeats < 1) {
        throw InputError("simulate-granularity: invalid configuration");
    }
    std::vector<simulate::SyntheticPage> pages(static_cast<std::size_t>(n_pages));
    parallel_for(pages.size(), opts.effective_jobs(), [&](std::size_t i) {
        pages[i] = simulate::corpus_page(simulate::LayoutSpec{}, i, opts.seed);
    });
    log_info("generated " + std::to_string(pages.size()) + " synthetic pages");
    const simulate::GranularityReport report =
        simulate::run_granularity_experiment(pages, wfs, hfs, repeats, opts.seed);

    std::ostringstream out;
    if (summary) {
        out << "granularity,width_frac,height_frac,mean_error,median_error,n_samples,"
               "n_skipped\n";
        for (const auto& s : report.summaries) {
            out << granularity_str(s.granularity) << ',' << io::format_double(s.width_frac)
                << ',' << io::format_double(s.height_frac) << ','
                << io::format_double(s.mean_error) << ','
                << io::format_double(s.median_error) << ',' << s.n_samples << ','
                << s.n_skipped << '\n';
        }
    } else {
        out << "page_id,granularity,width_frac,height_frac,repeat,error,skipped\n";
        for (const auto& s : report.samples) {
            out << s.page_id << ',' << granularity_str(s.granularity) << ','
                << io::format_double(s.width_frac) << ','
                << io::format_double(s.height_frac) << ',' << s.repeat << ','
                << io::format_double(s.error) << ',' << (s.skipped ? "true" : "false")
                << '\n';
        }
    }
    write_output(opts, out.str());
    return kExitOk;
}

int run_simulate_pipeline(const CommonOpts& opts, int n_pages) {
    if (n_pages < 1) throw InputError("simulate-pipeline: pages must be >= 1");
    const auto parse_grid = simulate::default_parse_grid();
    const auto ocr_grid = simulate::default_ocr_grid();
    std::vector<std::vector<simulate::CorpusCell>> per_page(
        static_cast<std::size_t>(n_pages));
    parallel_for(per_page.size(), opts.effective_jobs(), [&](std::size_t i) {
        const simulate::SyntheticPage page =
            simulate::corpus_page(simulate::LayoutSpec{}, i, opts.seed);
        per_page[i] =
            simulate::corpus_cells_for_page(page, i, parse_grid, ocr_grid, opts.seed);
    });

    std::ostringstream out;
    out << "page_id,parse,ocr,degenerate,true_dominant,parse_magnitude,ocr_magnitude,"
           "d_pars,d_ocr,d_int,d_total,coverage,overlap,trespass,excess,cote_score,"
           "ratio,plain_verdict,gated_verdict\n";
    for (const auto& cells : per_page) {
        for (const simulate::CorpusCell& cell : cells) {
            const DecompositionReport rep = decompose(cell.vectors, opts.measure_kind());
            const TriageVerdict plain =
                triage(rep, std::nullopt, opts.ratio_threshold, opts.cote_threshold);
            const TriageVerdict gated =
                triage(rep, cell.cote, opts.ratio_threshold, opts.cote_threshold);
            out << cell.page_id << ',' << cell.parse_label << ',' << cell.ocr_label << ','
                << (cell.degenerate ? "true" : "false") << ','
                << dominant_str(cell.true_dominant) << ','
                << io::format_double(cell.injected_parse_magnitude) << ','
                << io::format_double(cell.injected_ocr_magnitude) << ','
                << io::format_double(rep.d_pars.value_or(0.0)) << ','
                << io::format_double(rep.d_ocr.value_or(0.0)) << ','
                << io::format_double(rep.d_int.value_or(0.0)) << ','
                << io::format_double(rep.d_total.value_or(0.0)) << ','
                << io::format_double(cell.cote.coverage) << ','
                << io::format_double(cell.cote.overlap) << ','
                << io::format_double(cell.cote.trespass) << ','
                << io::format_double(cell.cote.excess) << ','
                << io::format_double(cell.cote.score) << ',';
            if (plain.ratio) out << io::format_double(*plain.ratio);
            out << ',' << dominant_str(plain.dominant) << ',' << dominant_str(gated.dominant)
                << '\n';
        }
    }
    write_output(opts, out.str());
    return kExitOk;
}

int run_convert(const std::vector<std::string>& inputs, const CommonOpts& opts) {
    if (inputs.size() != 1) throw InputError("convert: exactly one ALTO input expected");
    io::PageDocument doc;
    doc.layout = io::load_alto(read_file(inputs[0]));
    write_output(opts, io::write_page_json(doc));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cevkit: bag-of-characters page-level OCR evaluation"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::vector<std::string> inputs;
    int n_pages = 20;
    std::string width_fracs = "0.1,0.2,0.3,0.4,0.5";
    std::string height_fracs = "0.1,0.2,0.3,0.4,0.5";
    int repeats = 10;
    bool summary = false;

    CLI::App* score = app.add_subcommand("score", "Per-page SpACER/CDD/CER scores");
    score->add_option("inputs", inputs, "Page JSON files")->required();
    add_common(score, opts);

    CLI::App* decompose_cmd =
        app.add_subcommand("decompose", "Four-way error decomposition + COTe + triage");
    decompose_cmd->add_option("inputs", inputs, "Page JSON files")->required();
    add_common(decompose_cmd, opts);

    CLI::App* triage_cmd =
        app.add_subcommand("triage", "Dominant error source per page");
    triage_cmd->add_option("inputs", inputs, "Page JSON files")->required();
    add_common(triage_cmd, opts);

    CLI::App* sim_gran = app.add_subcommand(
        "simulate-granularity", "Random-crop positional-uncertainty experiment");
    sim_gran->add_option("--pages", n_pages, "Synthetic page count");
    sim_gran->add_option("--width-fracs", width_fracs, "Crop width fractions (csv)");
    sim_gran->add_option("--height-fracs", height_fracs, "Crop height fractions (csv)");
    sim_gran->add_option("--repeats", repeats, "Crops per size combination");
    sim_gran->add_flag("--summary", summary, "Emit per-combination summary instead of samples");
    add_common(sim_gran, opts);

    CLI::App* sim_pipe = app.add_subcommand(
        "simulate-pipeline", "Labeled parse/OCR perturbation corpus for triage validation");
    sim_pipe->add_option("--pages", n_pages, "Synthetic page count")->default_val(45);
    add_common(sim_pipe, opts);

    CLI::App* convert = app.add_subcommand("convert", "ALTO XML -> page JSON");
    convert->add_option("inputs", inputs, "ALTO file")->required();
    add_common(convert, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInput;
    }

    try {
        if (score->parsed()) return run_report_command(inputs, opts, false);
        if (decompose_cmd->parsed() || triage_cmd->parsed()) {
            return run_report_command(inputs, opts, true);
        }
        if (sim_gran->parsed()) {
            return run_simulate_granularity(opts, n_pages, width_fracs, height_fracs,
                                            repeats, summary);
        }
        if (sim_pipe->parsed()) return run_simulate_pipeline(opts, n_pages);
        if (convert->parsed()) return run_convert(inputs, opts);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}
