#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cevkit/charvec.hpp"
#include "cevkit/error.hpp"

namespace cevkit {

struct Point {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point&, const Point&) = default;
};

struct Box {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    Point center() const { return {(x0 + x1) / 2.0, (y0 + y1) / 2.0}; }
    friend bool operator==(const Box&, const Box&) = default;
};

struct Polygon {
    std::vector<Point> vertices;  // ordered, >= 3, simple
    friend bool operator==(const Polygon&, const Polygon&) = default;
};

using RegionGeometry = std::variant<Box, Polygon>;

enum class Granularity { word, line, paragraph, page };

struct OrderHint {
    int column = 0;
    int index = 0;
    friend bool operator==(const OrderHint&, const OrderHint&) = default;
};

struct Region {
    std::string id;
    RegionGeometry geometry;
    std::string text;
    Granularity granularity = Granularity::word;
    std::optional<std::string> semantic_class;
    std::optional<OrderHint> order_hint;
};

struct PageLayout {
    std::string page_id;
    double width = 0.0;
    double height = 0.0;
    std::vector<Region> gt_regions;
    std::vector<Region> pred_regions;  // empty when absent
};

/// One character instance with an inferred or exact glyph-center position.
struct CharToken {
    char32_t token = 0;
    Point position;
    std::string source_region;
    int sequence_index = 0;
};

/// Controls virtual-line estimation for paragraph-level inference.
struct InferenceConfig {
    std::optional<double> line_height;   // overrides the heuristic when set
    double aspect_heuristic = 0.025;     // virtual lines ~= char_count * this
};

double geometry_area(const RegionGeometry& g);
Box bounding_box(const RegionGeometry& g);
bool validate_polygon_simple(const Polygon& p);

// Boundary-inclusive containment; ray casting for polygons.
bool point_in_geometry(const Point& p, const RegionGeometry& g);

// Exact for box-box; polygon cases via clipping (convex decomposition
// of the clip polygon).
double intersection_area(const RegionGeometry& a, const RegionGeometry& b);

double iou(const RegionGeometry& a, const RegionGeometry& b);

// Mono-spaced glyph-center inference. Word/line: equal spacing on the
// box's vertical midline. Paragraph: text wrapped into virtual lines.
// Polygon regions use their bounding box; tokens landing outside the
// polygon are snapped to the nearest boundary point.
std::vector<CharToken> infer_char_positions(const Region& region,
                                            const InferenceConfig& config = {});

struct AssignmentTable {
    std::map<std::string, CharVector> per_prediction;  // prediction id -> vector
    CharVector aggregate;                              // R: multiplicity-counted
    std::vector<std::vector<std::string>> token_hits;  // per token: covering prediction ids
};

// A token inside k overlapping predictions contributes count k to the
// aggregate; uncovered tokens contribute 0.
AssignmentTable assign_characters(const std::vector<CharToken>& tokens,
                                  const std::vector<Region>& predictions,
                                  bool count_spaces = false);

}  // namespace cevkit
