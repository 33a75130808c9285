#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cevkit/decompose.hpp"
#include "cevkit/geometry.hpp"

namespace cevkit::io {

inline constexpr const char* kPageSchemaVersion = "cevkit-page/1";
inline constexpr const char* kReportSchemaVersion = "cevkit-report/1";

struct PageDocument {
    PageLayout layout;
    std::optional<std::map<std::string, std::string>> ocr_on_gt;
    std::optional<std::map<std::string, std::string>> ocr_on_pred;
    std::string unit = "px";
    std::vector<std::string> warnings;  // unknown fields, soft violations
};

// Schema violations raise InputError with the offending field path.
PageDocument load_page_json(const std::string& bytes);
std::string write_page_json(const PageDocument& doc);

struct PageReportRow {
    std::string page_id;
    DecompositionReport decomposition;
    std::optional<CoteComponents> cote;
    std::optional<TriageVerdict> triage;
    // Extra scalar metrics (e.g. CER) emitted by the score command.
    std::map<std::string, double> extra;
};

struct Aggregate {
    double mean = 0.0;
    double median = 0.0;
    std::size_t n = 0;
    friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

struct ReportDocument {
    std::vector<PageReportRow> rows;
    std::map<std::string, Aggregate> aggregates;  // recomputable from rows
};

// Mean and median per numeric column, over rows where it is present.
std::map<std::string, Aggregate> compute_aggregates(const std::vector<PageReportRow>& rows);

enum class ReportFormat { json, csv };

// json round-trips losslessly; csv is one row per page (plus mean and
// median rows) with a fixed column order and 6-significant-digit floats.
std::string write_report(const ReportDocument& report, ReportFormat format);
ReportDocument read_report_json(const std::string& bytes);

// ALTO v2-v4 subset: TextBlock -> paragraph, TextLine -> line,
// String -> word, via HPOS/VPOS/WIDTH/HEIGHT and CONTENT;
// Shape/Polygon honored; namespace prefixes ignored.
PageLayout load_alto(const std::string& bytes);

std::string format_double(double v);  // %.6g

}  // namespace cevkit::io
