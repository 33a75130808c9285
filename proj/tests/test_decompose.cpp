#include <map>

#include "doctest.h"

#include "cevkit/decompose.hpp"

using namespace cevkit;

namespace {

Region word(const std::string& id, Box box, const std::string& text) {
    return Region{id, box, text, Granularity::word, {}, {}};
}

PageLayout two_word_page() {
    PageLayout page;
    page.page_id = "fixture";
    page.width = 100;
    page.height = 20;
    page.gt_regions = {word("w1", Box{0, 5, 30, 15}, "abc"),
                       word("w2", Box{40, 5, 60, 15}, "de")};
    return page;
}

std::map<std::string, std::string> texts_of(const PageLayout& page) {
    std::map<std::string, std::string> m;
    for (const Region& r : page.gt_regions) m[r.id] = r.text;
    return m;
}

}  // namespace

TEST_SUITE("decompose") {

TEST_CASE("build_vectors perfect pipeline") {
    PageLayout page = two_word_page();
    page.pred_regions = page.gt_regions;
    for (Region& r : page.pred_regions) r.id = "p_" + r.id;
    const auto texts = texts_of(page);
    std::map<std::string, std::string> ocr_on_pred;
    ocr_on_pred["p_w1"] = "abc";
    ocr_on_pred["p_w2"] = "de";

    const VectorSet v = build_vectors(page, texts, ocr_on_pred);
    CHECK(v.q == v.r);
    CHECK(v.q == *v.s_star);
    CHECK(v.q == *v.s);
    CHECK(v.has_predictions);
}

TEST_CASE("build_vectors without predictions or OCR") {
    const PageLayout page = two_word_page();
    const VectorSet v = build_vectors(page, std::nullopt, std::nullopt);
    CHECK(v.q.total() == 5);
    CHECK(v.r.empty());
    CHECK_FALSE(v.s_star.has_value());
    CHECK_FALSE(v.s.has_value());
}

TEST_CASE("build_vectors single substitution moves S by L1 of 2") {
    PageLayout page = two_word_page();
    page.pred_regions = page.gt_regions;
    for (Region& r : page.pred_regions) r.id = "p_" + r.id;
    std::map<std::string, std::string> ocr_on_pred;
    ocr_on_pred["p_w1"] = "abX";
    ocr_on_pred["p_w2"] = "de";
    const VectorSet v = build_vectors(page, std::nullopt, ocr_on_pred);
    CHECK(l1_distance(v.q, *v.s) == 2);
}

TEST_CASE("build_vectors rejects unknown OCR region ids") {
    const PageLayout page = two_word_page();
    std::map<std::string, std::string> bad;
    bad["nope"] = "x";
    CHECK_THROWS_AS((void)build_vectors(page, bad, std::nullopt), InputError);
}

TEST_CASE("decompose zero identities for all measures") {
    PageLayout page = two_word_page();
    page.pred_regions = page.gt_regions;
    for (Region& r : page.pred_regions) r.id = "p_" + r.id;
    std::map<std::string, std::string> ocr;
    ocr["p_w1"] = "abc";
    ocr["p_w2"] = "de";
    const VectorSet v = build_vectors(page, texts_of(page), ocr);

    for (MeasureKind kind : {MeasureKind::spacer, MeasureKind::spacd, MeasureKind::cdd_jsd}) {
        const DecompositionReport rep = decompose(v, kind);
        CHECK(*rep.d_pars == 0.0);
        CHECK(*rep.d_ocr == 0.0);
        CHECK(*rep.d_int == 0.0);
        CHECK(*rep.d_total == 0.0);
        CHECK(rep.non_additive);
    }
}

TEST_CASE("perfect parsing ties d_total to d_ocr") {
    PageLayout page = two_word_page();
    page.pred_regions = page.gt_regions;
    for (Region& r : page.pred_regions) r.id = "p_" + r.id;
    // Same corrupted text on both sides so S == S*.
    std::map<std::string, std::string> ocr_gt, ocr_pred;
    ocr_gt["w1"] = "aXc";
    ocr_gt["w2"] = "de";
    ocr_pred["p_w1"] = "aXc";
    ocr_pred["p_w2"] = "de";
    const VectorSet v = build_vectors(page, ocr_gt, ocr_pred);
    for (MeasureKind kind : {MeasureKind::spacer, MeasureKind::spacd, MeasureKind::cdd_jsd}) {
        const DecompositionReport rep = decompose(v, kind);
        CHECK(*rep.d_pars == 0.0);
        CHECK(*rep.d_total == *rep.d_ocr);
        CHECK(*rep.d_total > 0.0);
    }
}

TEST_CASE("perfect OCR zeroes d_int") {
    PageLayout page = two_word_page();
    // Prediction drops the second word: R != Q but S == R when the
    // OCR on predictions returns exactly what the regions contain.
    page.pred_regions = {word("p1", Box{0, 5, 30, 15}, "")};
    std::map<std::string, std::string> ocr_pred;
    ocr_pred["p1"] = "abc";
    const VectorSet v = build_vectors(page, std::nullopt, ocr_pred);
    for (MeasureKind kind : {MeasureKind::spacer, MeasureKind::spacd, MeasureKind::cdd_jsd}) {
        const DecompositionReport rep = decompose(v, kind);
        CHECK(*rep.d_int == 0.0);
        CHECK(*rep.d_pars > 0.0);
    }
}

TEST_CASE("decompose rejects empty Q and supports custom measures") {
    VectorSet v;
    CHECK_THROWS_AS((void)decompose(v, MeasureKind::spacer), Error);

    VectorSet ok;
    ok.q.add("a", 2);
    ok.r = ok.q;
    ok.has_predictions = true;
    const DivergenceMeasure jsd = jsd_measure();
    const DecompositionReport rep = decompose(ok, MeasureKind::custom, &jsd);
    CHECK(*rep.d_pars == 0.0);
    CHECK(rep.metric_name == jsd.name);
}

TEST_CASE("cote_approx invariants") {
    const std::vector<Region> gt = {word("g1", Box{10, 10, 40, 20}, "x"),
                                    word("g2", Box{60, 10, 90, 20}, "y"),
                                    word("g3", Box{10, 40, 40, 50}, "z")};

    SUBCASE("identical disjoint predictions are perfect") {
        const CoteComponents c = cote_approx(gt, gt, 100, 60);
        CHECK(c.coverage == doctest::Approx(1.0));
        CHECK(c.overlap == doctest::Approx(0.0));
        CHECK(c.trespass == doctest::Approx(0.0));
        CHECK(c.excess == doctest::Approx(0.0));
        CHECK(c.score == doctest::Approx(1.0));
    }
    SUBCASE("no predictions score zero") {
        const CoteComponents c = cote_approx(gt, {}, 100, 60);
        CHECK(c.coverage == 0.0);
        CHECK(c.score == 0.0);
    }
    SUBCASE("full-page prediction trespasses") {
        const std::vector<Region> pred = {word("full", Box{0, 0, 100, 60}, "")};
        const CoteComponents c = cote_approx(gt, pred, 100, 60);
        CHECK(c.coverage == doctest::Approx(1.0));
        CHECK(c.trespass == doctest::Approx(1.0));
        CHECK(c.score <= 0.1);
    }
    SUBCASE("zero GT area is an error") {
        CHECK_THROWS_AS((void)cote_approx({}, gt, 100, 60), Error);
    }
}

TEST_CASE("triage rules") {
    DecompositionReport rep;
    rep.d_ocr = 0.8;
    rep.d_total = 1.0;

    SUBCASE("high ratio, healthy COTe: ocr") {
        CoteComponents cote;
        cote.score = 0.9;
        const TriageVerdict v = triage(rep, cote);
        CHECK(v.dominant == DominantSource::ocr);
        CHECK(*v.ratio == doctest::Approx(0.8));
        CHECK(v.cote_gate_passed);
    }
    SUBCASE("high ratio, failed COTe gate: parsing") {
        CoteComponents cote;
        cote.score = 0.2;
        const TriageVerdict v = triage(rep, cote);
        CHECK(v.dominant == DominantSource::parsing);
        CHECK_FALSE(v.cote_gate_passed);
    }
    SUBCASE("low ratio, no COTe: parsing") {
        rep.d_ocr = 0.1;
        const TriageVerdict v = triage(rep, std::nullopt);
        CHECK(v.dominant == DominantSource::parsing);
    }
    SUBCASE("zero total: indeterminate unless the gate fails") {
        rep.d_ocr = 0.0;
        rep.d_total = 0.0;
        CHECK(triage(rep, std::nullopt).dominant == DominantSource::indeterminate);
        CoteComponents bad;
        bad.score = 0.0;
        CHECK(triage(rep, bad).dominant == DominantSource::parsing);
    }
    SUBCASE("missing components are an error") {
        DecompositionReport empty;
        CHECK_THROWS_AS((void)triage(empty, std::nullopt), Error);
    }
}

}  // TEST_SUITE
