#include "cevkit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "json.hpp"

namespace cevkit::io {

using nlohmann::json;

namespace {

std::string granularity_name(Granularity g) {
    switch (g) {
        case Granularity::word: return "word";
        case Granularity::line: return "line";
        case Granularity::paragraph: return "paragraph";
        case Granularity::page: return "page";
    }
    return "word";
}

Granularity granularity_from(const std::string& s, const std::string& path) {
    if (s == "word") return Granularity::word;
    if (s == "line") return Granularity::line;
    if (s == "paragraph") return Granularity::paragraph;
    if (s == "page") return Granularity::page;
    throw InputError(path + ": unknown granularity '" + s + "'");
}

json geometry_to_json(const RegionGeometry& g) {
    json out;
    if (const Box* b = std::get_if<Box>(&g)) {
        out["type"] = "box";
        out["coords"] = {b->x0, b->y0, b->x1, b->y1};
    } else {
        const auto& poly = std::get<Polygon>(g);
        out["type"] = "polygon";
        json coords = json::array();
        for (const Point& p : poly.vertices) {
            coords.push_back(p.x);
            coords.push_back(p.y);
        }
        out["coords"] = std::move(coords);
    }
    return out;
}

RegionGeometry geometry_from_json(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("type") || !j.contains("coords")) {
        throw InputError(path + ": geometry requires 'type' and 'coords'");
    }
    const std::string type = j.at("type").get<std::string>();
    const json& coords = j.at("coords");
    if (!coords.is_array()) throw InputError(path + ".coords: expected array");
    std::vector<double> v;
    for (const auto& c : coords) {
        if (!c.is_number()) throw InputError(path + ".coords: expected numbers");
        v.push_back(c.get<double>());
    }
    if (type == "box") {
        if (v.size() != 4) throw InputError(path + ".coords: box requires 4 numbers");
        Box b{v[0], v[1], v[2], v[3]};
        if (!(b.x0 < b.x1) || !(b.y0 < b.y1)) {
            throw InputError(path + ".coords: box requires x0<x1 and y0<y1");
        }
        return b;
    }
    if (type == "polygon") {
        if (v.size() < 6 || v.size() % 2 != 0) {
            throw InputError(path + ".coords: polygon requires 2n >= 6 numbers");
        }
        Polygon poly;
        for (std::size_t i = 0; i < v.size(); i += 2) {
            poly.vertices.push_back({v[i], v[i + 1]});
        }
        if (!validate_polygon_simple(poly)) {
            throw InputError(path + ".coords: polygon is self-intersecting");
        }
        return poly;
    }
    throw InputError(path + ".type: unknown geometry type '" + type + "'");
}

json region_to_json(const Region& r) {
    json out;
    out["id"] = r.id;
    out["geometry"] = geometry_to_json(r.geometry);
    out["text"] = r.text;
    out["granularity"] = granularity_name(r.granularity);
    if (r.semantic_class) out["semantic_class"] = *r.semantic_class;
    if (r.order_hint) {
        out["order_hint"] = {{"column", r.order_hint->column}, {"index", r.order_hint->index}};
    }
    return out;
}

Region region_from_json(const json& j, const std::string& path,
                        std::vector<std::string>& warnings) {
    if (!j.is_object()) throw InputError(path + ": expected object");
    Region r;
    if (!j.contains("id") || !j.at("id").is_string()) {
        throw InputError(path + ".id: required string");
    }
    r.id = j.at("id").get<std::string>();
    if (!j.contains("geometry")) throw InputError(path + ".geometry: required");
    r.geometry = geometry_from_json(j.at("geometry"), path + ".geometry");
    if (j.contains("text")) r.text = j.at("text").get<std::string>();
    if (j.contains("granularity")) {
        r.granularity =
            granularity_from(j.at("granularity").get<std::string>(), path + ".granularity");
    }
    if (j.contains("semantic_class")) {
        r.semantic_class = j.at("semantic_class").get<std::string>();
    }
    if (j.contains("order_hint")) {
        const json& h = j.at("order_hint");
        if (!h.is_object() || !h.contains("column") || !h.contains("index")) {
            throw InputError(path + ".order_hint: requires column and index");
        }
        r.order_hint = OrderHint{h.at("column").get<int>(), h.at("index").get<int>()};
    }
    static const std::vector<std::string> known = {"id",             "geometry",
                                                   "text",           "granularity",
                                                   "semantic_class", "order_hint"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            warnings.push_back(path + ": ignoring unknown field '" + key + "'");
        }
    }
    return r;
}

void check_unique_ids(const std::vector<Region>& regions, const std::string& path) {
    std::map<std::string, int> seen;
    for (const Region& r : regions) {
        if (++seen[r.id] > 1) {
            throw InputError(path + ": duplicate region id '" + r.id + "'");
        }
    }
}

}  // namespace

PageDocument load_page_json(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InputError("$: expected object");
    if (!j.contains("schema_version") ||
        j.at("schema_version").get<std::string>() != kPageSchemaVersion) {
        throw InputError("schema_version: expected '" + std::string(kPageSchemaVersion) + "'");
    }
    PageDocument doc;
    if (!j.contains("page") || !j.at("page").is_object()) {
        throw InputError("page: required object");
    }
    const json& page = j.at("page");
    if (!page.contains("id")) throw InputError("page.id: required");
    doc.layout.page_id = page.at("id").get<std::string>();
    if (!page.contains("width") || !page.contains("height")) {
        throw InputError("page: width and height required");
    }
    doc.layout.width = page.at("width").get<double>();
    doc.layout.height = page.at("height").get<double>();
    if (page.contains("unit")) doc.unit = page.at("unit").get<std::string>();

    if (j.contains("gt_regions")) {
        const json& arr = j.at("gt_regions");
        if (!arr.is_array()) throw InputError("gt_regions: expected array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            doc.layout.gt_regions.push_back(region_from_json(
                arr[i], "gt_regions[" + std::to_string(i) + "]", doc.warnings));
        }
        check_unique_ids(doc.layout.gt_regions, "gt_regions");
    }
    if (j.contains("pred_regions")) {
        const json& arr = j.at("pred_regions");
        if (!arr.is_array()) throw InputError("pred_regions: expected array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            doc.layout.pred_regions.push_back(region_from_json(
                arr[i], "pred_regions[" + std::to_string(i) + "]", doc.warnings));
        }
        check_unique_ids(doc.layout.pred_regions, "pred_regions");
    }
    for (const char* key : {"ocr_on_gt", "ocr_on_pred"}) {
        if (!j.contains(key)) continue;
        const json& m = j.at(key);
        if (!m.is_object()) throw InputError(std::string(key) + ": expected object");
        std::map<std::string, std::string> out;
        for (const auto& [id, text] : m.items()) {
            if (!text.is_string()) {
                throw InputError(std::string(key) + "." + id + ": expected string");
            }
            out[id] = text.get<std::string>();
        }
        if (std::string(key) == "ocr_on_gt") {
            doc.ocr_on_gt = std::move(out);
        } else {
            doc.ocr_on_pred = std::move(out);
        }
    }
    static const std::vector<std::string> known = {"schema_version", "page",
                                                   "gt_regions",     "pred_regions",
                                                   "ocr_on_gt",      "ocr_on_pred"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            doc.warnings.push_back("$: ignoring unknown field '" + key + "'");
        }
    }
    // Soft geometry-bounds validation.
    for (const auto* regions : {&doc.layout.gt_regions, &doc.layout.pred_regions}) {
        for (const Region& r : *regions) {
            const Box bb = bounding_box(r.geometry);
            if (bb.x0 < 0 || bb.y0 < 0 || bb.x1 > doc.layout.width ||
                bb.y1 > doc.layout.height) {
                doc.warnings.push_back("region '" + r.id + "' extends outside the page");
            }
        }
    }
    return doc;
}

std::string write_page_json(const PageDocument& doc) {
    json j;
    j["schema_version"] = kPageSchemaVersion;
    j["page"] = {{"id", doc.layout.page_id},
                 {"width", doc.layout.width},
                 {"height", doc.layout.height},
                 {"unit", doc.unit}};
    json gt = json::array();
    for (const Region& r : doc.layout.gt_regions) gt.push_back(region_to_json(r));
    j["gt_regions"] = std::move(gt);
    if (!doc.layout.pred_regions.empty()) {
        json pred = json::array();
        for (const Region& r : doc.layout.pred_regions) pred.push_back(region_to_json(r));
        j["pred_regions"] = std::move(pred);
    }
    if (doc.ocr_on_gt) j["ocr_on_gt"] = *doc.ocr_on_gt;
    if (doc.ocr_on_pred) j["ocr_on_pred"] = *doc.ocr_on_pred;
    return j.dump(2);
}

namespace {

const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> cols = {
        "d_pars",   "d_ocr",   "d_int",    "d_total", "coverage", "overlap",
        "trespass", "excess",  "cote_score", "ratio"};
    return cols;
}

std::optional<double> row_value(const PageReportRow& row, const std::string& col) {
    if (col == "d_pars") return row.decomposition.d_pars;
    if (col == "d_ocr") return row.decomposition.d_ocr;
    if (col == "d_int") return row.decomposition.d_int;
    if (col == "d_total") return row.decomposition.d_total;
    if (row.cote) {
        if (col == "coverage") return row.cote->coverage;
        if (col == "overlap") return row.cote->overlap;
        if (col == "trespass") return row.cote->trespass;
        if (col == "excess") return row.cote->excess;
        if (col == "cote_score") return row.cote->score;
    }
    if (col == "ratio" && row.triage) return row.triage->ratio;
    auto it = row.extra.find(col);
    if (it != row.extra.end()) return it->second;
    return std::nullopt;
}

std::string dominant_name(DominantSource d) {
    switch (d) {
        case DominantSource::parsing: return "parsing";
        case DominantSource::ocr: return "ocr";
        case DominantSource::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

DominantSource dominant_from(const std::string& s) {
    if (s == "parsing") return DominantSource::parsing;
    if (s == "ocr") return DominantSource::ocr;
    return DominantSource::indeterminate;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::map<std::string, Aggregate> compute_aggregates(const std::vector<PageReportRow>& rows) {
    std::map<std::string, Aggregate> out;
    std::vector<std::string> cols = report_columns();
    for (const PageReportRow& row : rows) {
        for (const auto& [key, value] : row.extra) {
            if (std::find(cols.begin(), cols.end(), key) == cols.end()) cols.push_back(key);
        }
    }
    for (const std::string& col : cols) {
        std::vector<double> values;
        for (const PageReportRow& row : rows) {
            const auto v = row_value(row, col);
            if (v && std::isfinite(*v)) values.push_back(*v);
        }
        if (values.empty()) continue;
        Aggregate agg;
        agg.n = values.size();
        agg.mean = std::accumulate(values.begin(), values.end(), 0.0) /
                   static_cast<double>(values.size());
        std::sort(values.begin(), values.end());
        const std::size_t mid = values.size() / 2;
        agg.median = values.size() % 2 == 1 ? values[mid]
                                            : (values[mid - 1] + values[mid]) / 2.0;
        out[col] = agg;
    }
    return out;
}

namespace {

json row_to_json(const PageReportRow& row) {
    json j;
    j["page_id"] = row.page_id;
    j["metric"] = row.decomposition.metric_name;
    j["non_additive"] = row.decomposition.non_additive;
    if (row.decomposition.d_pars) j["d_pars"] = *row.decomposition.d_pars;
    if (row.decomposition.d_ocr) j["d_ocr"] = *row.decomposition.d_ocr;
    if (row.decomposition.d_int) j["d_int"] = *row.decomposition.d_int;
    if (row.decomposition.d_total) j["d_total"] = *row.decomposition.d_total;
    if (row.cote) {
        j["cote"] = {{"coverage", row.cote->coverage},
                     {"overlap", row.cote->overlap},
                     {"trespass", row.cote->trespass},
                     {"excess", row.cote->excess},
                     {"score", row.cote->score}};
    }
    if (row.triage) {
        json t;
        t["dominant"] = dominant_name(row.triage->dominant);
        if (row.triage->ratio) t["ratio"] = *row.triage->ratio;
        t["cote_gate_passed"] = row.triage->cote_gate_passed;
        j["triage"] = std::move(t);
    }
    if (!row.extra.empty()) j["extra"] = row.extra;
    return j;
}

PageReportRow row_from_json(const json& j) {
    PageReportRow row;
    row.page_id = j.at("page_id").get<std::string>();
    row.decomposition.metric_name = j.value("metric", "");
    row.decomposition.non_additive = j.value("non_additive", true);
    if (j.contains("d_pars")) row.decomposition.d_pars = j.at("d_pars").get<double>();
    if (j.contains("d_ocr")) row.decomposition.d_ocr = j.at("d_ocr").get<double>();
    if (j.contains("d_int")) row.decomposition.d_int = j.at("d_int").get<double>();
    if (j.contains("d_total")) row.decomposition.d_total = j.at("d_total").get<double>();
    if (j.contains("cote")) {
        const json& c = j.at("cote");
        CoteComponents cote;
        cote.coverage = c.at("coverage").get<double>();
        cote.overlap = c.at("overlap").get<double>();
        cote.trespass = c.at("trespass").get<double>();
        cote.excess = c.at("excess").get<double>();
        cote.score = c.at("score").get<double>();
        row.cote = cote;
    }
    if (j.contains("triage")) {
        const json& t = j.at("triage");
        TriageVerdict v;
        v.dominant = dominant_from(t.at("dominant").get<std::string>());
        if (t.contains("ratio")) v.ratio = t.at("ratio").get<double>();
        v.cote_gate_passed = t.value("cote_gate_passed", true);
        row.triage = v;
    }
    if (j.contains("extra")) {
        row.extra = j.at("extra").get<std::map<std::string, double>>();
    }
    return row;
}

}  // namespace

std::string write_report(const ReportDocument& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        json j;
        j["schema_version"] = kReportSchemaVersion;
        json rows = json::array();
        for (const PageReportRow& row : report.rows) rows.push_back(row_to_json(row));
        j["rows"] = std::move(rows);
        json aggs = json::object();
        for (const auto& [col, agg] : report.aggregates) {
            aggs[col] = {{"mean", agg.mean}, {"median", agg.median}, {"n", agg.n}};
        }
        j["aggregates"] = std::move(aggs);
        return j.dump(2);
    }

    // CSV: fixed documented column order; extra metric columns sorted
    // by name after the fixed set.
    std::vector<std::string> cols = report_columns();
    {
        std::vector<std::string> extra_cols;
        for (const PageReportRow& row : report.rows) {
            for (const auto& [key, value] : row.extra) {
                if (std::find(cols.begin(), cols.end(), key) == cols.end() &&
                    std::find(extra_cols.begin(), extra_cols.end(), key) ==
                        extra_cols.end()) {
                    extra_cols.push_back(key);
                }
            }
        }
        std::sort(extra_cols.begin(), extra_cols.end());
        cols.insert(cols.end(), extra_cols.begin(), extra_cols.end());
    }
    std::ostringstream out;
    out << "page_id,metric";
    for (const std::string& col : cols) out << ',' << col;
    out << ",dominant,cote_gate_passed\n";
    for (const PageReportRow& row : report.rows) {
        out << row.page_id << ',' << row.decomposition.metric_name;
        for (const std::string& col : cols) {
            out << ',';
            const auto v = row_value(row, col);
            if (v) out << format_double(*v);
        }
        out << ',';
        if (row.triage) out << dominant_name(row.triage->dominant);
        out << ',';
        if (row.triage) out << (row.triage->cote_gate_passed ? "true" : "false");
        out << '\n';
    }
    if (report.rows.empty()) return out.str();  // header-only CSV
    for (const char* which : {"mean", "median"}) {
        out << which << ',';
        for (const std::string& col : cols) {
            out << ',';
            auto it = report.aggregates.find(col);
            if (it != report.aggregates.end()) {
                out << format_double(std::string(which) == "mean" ? it->second.mean
                                                                  : it->second.median);
            }
        }
        out << ",,\n";
    }
    return out.str();
}

ReportDocument read_report_json(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.contains("schema_version") ||
        j.at("schema_version").get<std::string>() != kReportSchemaVersion) {
        throw InputError("schema_version: expected '" +
                         std::string(kReportSchemaVersion) + "'");
    }
    ReportDocument doc;
    for (const json& row : j.at("rows")) doc.rows.push_back(row_from_json(row));
    if (j.contains("aggregates")) {
        for (const auto& [col, a] : j.at("aggregates").items()) {
            Aggregate agg;
            agg.mean = a.at("mean").get<double>();
            agg.median = a.at("median").get<double>();
            agg.n = a.at("n").get<std::size_t>();
            doc.aggregates[col] = agg;
        }
    }
    return doc;
}

namespace {

using boost::property_tree::ptree;

std::string local_name(const std::string& tag) {
    const auto pos = tag.rfind(':');
    return pos == std::string::npos ? tag : tag.substr(pos + 1);
}

const ptree* find_child(const ptree& node, const std::string& name) {
    for (const auto& [tag, child] : node) {
        if (local_name(tag) == name) return &child;
    }
    return nullptr;
}

std::string attr(const ptree& node, const std::string& name, const std::string& fallback = "") {
    const ptree* attrs = find_child(node, "<xmlattr>");
    if (!attrs) return fallback;
    for (const auto& [tag, child] : *attrs) {
        if (tag == name) return child.get_value<std::string>();
    }
    return fallback;
}

std::optional<Box> alto_box(const ptree& node) {
    const std::string h = attr(node, "HPOS");
    const std::string v = attr(node, "VPOS");
    const std::string w = attr(node, "WIDTH");
    const std::string ht = attr(node, "HEIGHT");
    if (h.empty() || v.empty() || w.empty() || ht.empty()) return std::nullopt;
    try {
        const double x = std::stod(h);
        const double y = std::stod(v);
        return Box{x, y, x + std::stod(w), y + std::stod(ht)};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// Accepts "x1,y1 x2,y2", flat space-separated and flat comma-separated
// coordinate lists.
std::optional<Polygon> alto_polygon(const ptree& node) {
    const ptree* shape = find_child(node, "Shape");
    if (!shape) return std::nullopt;
    const ptree* poly = find_child(*shape, "Polygon");
    if (!poly) return std::nullopt;
    std::string points = attr(*poly, "POINTS");
    if (points.empty()) return std::nullopt;
    for (char& c : points) {
        if (c == ',') c = ' ';
    }
    std::istringstream in(points);
    std::vector<double> values;
    double v = 0.0;
    while (in >> v) values.push_back(v);
    if (values.size() < 6 || values.size() % 2 != 0) return std::nullopt;
    Polygon p;
    for (std::size_t i = 0; i < values.size(); i += 2) {
        p.vertices.push_back({values[i], values[i + 1]});
    }
    if (!validate_polygon_simple(p)) return std::nullopt;
    return p;
}

RegionGeometry alto_geometry(const ptree& node, const std::string& what) {
    if (auto poly = alto_polygon(node)) return *poly;
    if (auto box = alto_box(node)) return *box;
    throw InputError("ALTO: " + what + " lacks usable coordinates");
}

}  // namespace

PageLayout load_alto(const std::string& bytes) {
    ptree tree;
    try {
        std::istringstream in(bytes);
        boost::property_tree::read_xml(in, tree);
    } catch (const std::exception& e) {
        throw InputError(std::string("malformed ALTO XML: ") + e.what());
    }
    const ptree* alto = nullptr;
    for (const auto& [tag, child] : tree) {
        if (local_name(tag) == "alto" || local_name(tag) == "ALTO") {
            alto = &child;
            break;
        }
    }
    if (!alto) throw InputError("ALTO: missing root <alto> element");
    const ptree* layout_el = find_child(*alto, "Layout");
    if (!layout_el) throw InputError("ALTO: missing Layout element");
    const ptree* page_el = find_child(*layout_el, "Page");
    if (!page_el) throw InputError("ALTO: missing Page element");

    PageLayout layout;
    layout.page_id = attr(*page_el, "ID", "page");
    const std::string w = attr(*page_el, "WIDTH");
    const std::string h = attr(*page_el, "HEIGHT");
    if (w.empty() || h.empty()) throw InputError("ALTO: Page missing WIDTH/HEIGHT");
    layout.width = std::stod(w);
    layout.height = std::stod(h);

    int block_n = 0, line_n = 0, word_n = 0;
    const ptree* print_space = find_child(*page_el, "PrintSpace");
    if (!print_space) return layout;

    auto process_string = [&](const ptree& str) {
        Region word_region;
        word_region.id = attr(str, "ID", "word-" + std::to_string(word_n));
        ++word_n;
        word_region.granularity = Granularity::word;
        word_region.geometry = alto_geometry(str, "String");
        word_region.text = attr(str, "CONTENT");
        std::string text = word_region.text;
        layout.gt_regions.push_back(std::move(word_region));
        return text;
    };
    auto process_line = [&](const ptree& line) {
        std::vector<std::string> word_texts;
        Region line_region;
        line_region.id = attr(line, "ID", "line-" + std::to_string(line_n));
        ++line_n;
        line_region.granularity = Granularity::line;
        line_region.geometry = alto_geometry(line, "TextLine");
        for (const auto& [stag, str] : line) {
            if (local_name(stag) == "String") word_texts.push_back(process_string(str));
        }
        std::string text;
        for (const std::string& t : word_texts) {
            if (!text.empty()) text += ' ';
            text += t;
        }
        line_region.text = text;
        layout.gt_regions.push_back(std::move(line_region));
        return text;
    };
    auto process_block = [&](const ptree& block) {
        std::vector<std::string> line_texts;
        Region block_region;
        block_region.id = attr(block, "ID", "block-" + std::to_string(block_n));
        ++block_n;
        block_region.granularity = Granularity::paragraph;
        block_region.geometry = alto_geometry(block, "TextBlock");
        for (const auto& [ltag, line] : block) {
            if (local_name(ltag) == "TextLine") {
                line_texts.push_back(process_line(line));
            } else if (local_name(ltag) == "String") {
                line_texts.push_back(process_string(line));
            }
        }
        std::string text;
        for (const std::string& t : line_texts) {
            if (!text.empty()) text += ' ';
            text += t;
        }
        block_region.text = std::move(text);
        layout.gt_regions.push_back(std::move(block_region));
    };

    // Strings and TextLines may appear directly under PrintSpace in
    // minimal documents; accept them at any of the three levels.
    for (const auto& [btag, block] : *print_space) {
        const std::string name = local_name(btag);
        if (name == "TextBlock") {
            process_block(block);
        } else if (name == "TextLine") {
            process_line(block);
        } else if (name == "String") {
            process_string(block);
        }
    }
    return layout;
}

}  // namespace cevkit::io
