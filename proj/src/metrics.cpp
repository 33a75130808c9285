#include "cevkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cevkit/unicode.hpp"

namespace cevkit {

double spacer_macro(const CharVector& g, const CharVector& p) {
    const std::int64_t c = g.total();
    if (c <= 0) throw Error("spacer: undefined: empty ground truth");
    const std::int64_t e_hat = l1_distance(g, p);
    const std::int64_t d = std::max<std::int64_t>(0, c - p.total());
    return static_cast<double>(d + e_hat) / static_cast<double>(2 * c);
}

double spacer_micro(const SpacerInputs& inputs) {
    if (!inputs.per_prediction) throw Error("spacer_micro: per-prediction pairs missing");
    CharVector g_sum(inputs.g.unit());
    CharVector p_sum(inputs.p.unit());
    std::int64_t d_sum = 0;
    for (const auto& [gj, pj] : *inputs.per_prediction) {
        d_sum += std::max<std::int64_t>(0, gj.total() - pj.total());
        g_sum += gj;
        p_sum += pj;
    }
    if (g_sum != inputs.g || p_sum != inputs.p) {
        throw Error("spacer_micro: per-prediction pairs do not sum to page aggregates");
    }
    const std::int64_t c = inputs.g.total();
    if (c <= 0) throw Error("spacer: undefined: empty ground truth");
    const std::int64_t e_hat = l1_distance(inputs.g, inputs.p);
    return static_cast<double>(d_sum + e_hat) / static_cast<double>(2 * c);
}

double spacd(const CharVector& g, const CharVector& p, bool symmetric) {
    const std::int64_t e_hat = l1_distance(g, p);
    const std::int64_t diff = g.total() - p.total();
    const std::int64_t d =
        symmetric ? std::abs(diff) : std::max<std::int64_t>(0, diff);
    return static_cast<double>(d + e_hat) / 2.0;
}

double shannon_entropy(const CharDistribution& d) {
    double h = 0.0;
    for (const auto& [token, p] : d.probs()) {
        h -= p * std::log2(p);
    }
    return std::max(0.0, h);
}

double cdd_jsd(const CharDistribution& s, const CharDistribution& q) {
    if (s.unit() != q.unit()) throw Error("cdd_jsd: unit mismatch");
    if (s.probs().empty() || q.probs().empty()) throw Error("cdd_jsd: empty distribution");
    // Merge over the union support; 0 log 0 := 0.
    double h_m = 0.0;
    auto is = s.probs().begin();
    auto iq = q.probs().begin();
    while (is != s.probs().end() || iq != q.probs().end()) {
        double ps = 0.0, pq = 0.0;
        if (iq == q.probs().end() ||
            (is != s.probs().end() && is->first < iq->first)) {
            ps = (is++)->second;
        } else if (is == s.probs().end() || iq->first < is->first) {
            pq = (iq++)->second;
        } else {
            ps = (is++)->second;
            pq = (iq++)->second;
        }
        const double m = 0.5 * (ps + pq);
        if (m > 0.0) h_m -= m * std::log2(m);
    }
    const double div = h_m - 0.5 * (shannon_entropy(s) + shannon_entropy(q));
    return std::sqrt(std::clamp(div, 0.0, 1.0));
}

std::pair<double, EditCounts> cer(std::string_view gt, std::string_view pred) {
    const std::u32string a = unicode::decode_utf8(gt);
    const std::u32string b = unicode::decode_utf8(pred);
    if (a.empty()) throw Error("undefined CER: empty ground truth");

    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<std::int32_t> dp((n + 1) * (m + 1));
    auto at = [&](std::size_t i, std::size_t j) -> std::int32_t& {
        return dp[i * (m + 1) + j];
    };
    for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<std::int32_t>(i);
    for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<std::int32_t>(j);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            const std::int32_t sub = at(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1);
            const std::int32_t del = at(i - 1, j) + 1;
            const std::int32_t ins = at(i, j - 1) + 1;
            at(i, j) = std::min({sub, del, ins});
        }
    }

    // Backtrace; ties broken substitution > deletion > insertion.
    EditCounts counts;
    counts.gt_length = static_cast<std::int64_t>(n);
    std::size_t i = n, j = m;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0 &&
            at(i, j) == at(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1)) {
            if (a[i - 1] != b[j - 1]) ++counts.substitutions;
            --i;
            --j;
        } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
            ++counts.deletions;
            --i;
        } else {
            ++counts.insertions;
            --j;
        }
    }
    const double rate =
        static_cast<double>(counts.distance()) / static_cast<double>(n);
    return {rate, counts};
}

F1Result detection_f1(const std::vector<Region>& gt_regions,
                      const std::vector<Region>& pred_regions, double iou_threshold) {
    if (iou_threshold <= 0.0 || iou_threshold > 1.0) {
        throw Error("detection_f1: iou_threshold must be in (0,1]");
    }
    struct Candidate {
        double iou;
        std::size_t gt;
        std::size_t pred;
    };
    std::vector<Candidate> candidates;
    for (std::size_t gi = 0; gi < gt_regions.size(); ++gi) {
        for (std::size_t pi = 0; pi < pred_regions.size(); ++pi) {
            const double v = iou(gt_regions[gi].geometry, pred_regions[pi].geometry);
            if (v >= iou_threshold) candidates.push_back({v, gi, pi});
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.iou > b.iou; });
    std::vector<bool> gt_used(gt_regions.size(), false);
    std::vector<bool> pred_used(pred_regions.size(), false);
    std::size_t tp = 0;
    for (const Candidate& c : candidates) {
        if (gt_used[c.gt] || pred_used[c.pred]) continue;
        gt_used[c.gt] = true;
        pred_used[c.pred] = true;
        ++tp;
    }
    const std::size_t fp = pred_regions.size() - tp;
    const std::size_t fn = gt_regions.size() - tp;
    F1Result r;
    r.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    r.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    r.f1 = (r.precision + r.recall) > 0.0
               ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
    return r;
}

namespace {

std::vector<double> fractional_ranks(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw Error("spearman: length mismatch");
    if (x.size() < 2) throw Error("spearman: need at least 2 points");
    const std::vector<double> rx = fractional_ranks(x);
    const std::vector<double> ry = fractional_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw Error("spearman: constant series");
    return sxy / std::sqrt(sxx * syy);
}

DivergenceMeasure jsd_measure() {
    return DivergenceMeasure{
        "cdd_jsd", true, true,
        [](const CharDistribution& a, const CharDistribution& b) { return cdd_jsd(a, b); }};
}

}  // namespace cevkit
