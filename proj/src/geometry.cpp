#include "cevkit/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "cevkit/unicode.hpp"

namespace cevkit {

namespace {

constexpr double kEps = 1e-9;

double cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double signed_area(const std::vector<Point>& v) {
    double a = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = v[i];
        const Point& q = v[(i + 1) % n];
        a += p.x * q.y - q.x * p.y;
    }
    return a / 2.0;
}

bool on_segment(const Point& p, const Point& a, const Point& b) {
    const double c = cross(a, b, p);
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (std::abs(c) > kEps * std::max(1.0, len)) return false;
    return p.x >= std::min(a.x, b.x) - kEps && p.x <= std::max(a.x, b.x) + kEps &&
           p.y >= std::min(a.y, b.y) - kEps && p.y <= std::max(a.y, b.y) + kEps;
}

bool segments_properly_intersect(const Point& a, const Point& b, const Point& c,
                                 const Point& d) {
    const double d1 = cross(c, d, a);
    const double d2 = cross(c, d, b);
    const double d3 = cross(a, b, c);
    const double d4 = cross(a, b, d);
    return ((d1 > kEps && d2 < -kEps) || (d1 < -kEps && d2 > kEps)) &&
           ((d3 > kEps && d4 < -kEps) || (d3 < -kEps && d4 > kEps));
}

std::vector<Point> to_vertices(const RegionGeometry& g) {
    if (const Box* b = std::get_if<Box>(&g)) {
        return {{b->x0, b->y0}, {b->x1, b->y0}, {b->x1, b->y1}, {b->x0, b->y1}};
    }
    return std::get<Polygon>(g).vertices;
}

std::vector<Point> ccw(std::vector<Point> v) {
    if (signed_area(v) < 0.0) std::reverse(v.begin(), v.end());
    return v;
}

bool is_convex(const std::vector<Point>& v) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (cross(v[i], v[(i + 1) % n], v[(i + 2) % n]) < -kEps) return false;
    }
    return true;
}

// Sutherland-Hodgman: clip a simple subject polygon by a convex CCW
// clip polygon. Concave subjects may yield zero-width bridges; the
// enclosed area is still the intersection area.
std::vector<Point> clip_by_convex(const std::vector<Point>& subject,
                                  const std::vector<Point>& clip) {
    std::vector<Point> output = subject;
    const std::size_t m = clip.size();
    for (std::size_t e = 0; e < m && !output.empty(); ++e) {
        const Point a = clip[e];
        const Point b = clip[(e + 1) % m];
        std::vector<Point> input = std::move(output);
        output.clear();
        const std::size_t n = input.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point& cur = input[i];
            const Point& nxt = input[(i + 1) % n];
            const bool cur_in = cross(a, b, cur) >= -kEps;
            const bool nxt_in = cross(a, b, nxt) >= -kEps;
            auto intersect = [&]() -> Point {
                const double a1 = cross(a, b, cur);
                const double a2 = cross(a, b, nxt);
                const double t = a1 / (a1 - a2);
                return {cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)};
            };
            if (cur_in) {
                output.push_back(cur);
                if (!nxt_in) output.push_back(intersect());
            } else if (nxt_in) {
                output.push_back(intersect());
            }
        }
    }
    return output;
}

bool point_in_triangle(const Point& p, const Point& a, const Point& b, const Point& c) {
    const double d1 = cross(a, b, p);
    const double d2 = cross(b, c, p);
    const double d3 = cross(c, a, p);
    const bool has_neg = (d1 < -kEps) || (d2 < -kEps) || (d3 < -kEps);
    const bool has_pos = (d1 > kEps) || (d2 > kEps) || (d3 > kEps);
    return !(has_neg && has_pos);
}

// Ear-clipping triangulation of a simple CCW polygon.
std::vector<std::array<Point, 3>> triangulate(std::vector<Point> v) {
    std::vector<std::array<Point, 3>> tris;
    while (v.size() > 3) {
        const std::size_t n = v.size();
        bool clipped = false;
        for (std::size_t i = 0; i < n; ++i) {
            const Point& prev = v[(i + n - 1) % n];
            const Point& cur = v[i];
            const Point& next = v[(i + 1) % n];
            if (cross(prev, cur, next) <= kEps) continue;  // reflex or collinear
            bool ear = true;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
                if (point_in_triangle(v[j], prev, cur, next)) {
                    ear = false;
                    break;
                }
            }
            if (ear) {
                tris.push_back({prev, cur, next});
                v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
                clipped = true;
                break;
            }
        }
        if (!clipped) break;  // degenerate remainder; drop it
    }
    if (v.size() == 3) tris.push_back({v[0], v[1], v[2]});
    return tris;
}

Point closest_point_on_segment(const Point& p, const Point& a, const Point& b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 <= 0.0) return a;
    double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return {a.x + t * dx, a.y + t * dy};
}

Point closest_boundary_point(const Point& p, const Polygon& poly) {
    Point best = poly.vertices.front();
    double best_d2 = std::numeric_limits<double>::max();
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point c =
            closest_point_on_segment(p, poly.vertices[i], poly.vertices[(i + 1) % n]);
        const double d2 = (c.x - p.x) * (c.x - p.x) + (c.y - p.y) * (c.y - p.y);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = c;
        }
    }
    return best;
}

}  // namespace

double geometry_area(const RegionGeometry& g) {
    if (const Box* b = std::get_if<Box>(&g)) return std::max(0.0, b->area());
    return std::abs(signed_area(std::get<Polygon>(g).vertices));
}

Box bounding_box(const RegionGeometry& g) {
    if (const Box* b = std::get_if<Box>(&g)) return *b;
    const auto& v = std::get<Polygon>(g).vertices;
    Box box{v.front().x, v.front().y, v.front().x, v.front().y};
    for (const Point& p : v) {
        box.x0 = std::min(box.x0, p.x);
        box.y0 = std::min(box.y0, p.y);
        box.x1 = std::max(box.x1, p.x);
        box.y1 = std::max(box.y1, p.y);
    }
    return box;
}

bool validate_polygon_simple(const Polygon& p) {
    const std::size_t n = p.vertices.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;  // adjacent edges
            if (segments_properly_intersect(p.vertices[i], p.vertices[(i + 1) % n],
                                            p.vertices[j], p.vertices[(j + 1) % n])) {
                return false;
            }
        }
    }
    return true;
}

bool point_in_geometry(const Point& p, const RegionGeometry& g) {
    if (const Box* b = std::get_if<Box>(&g)) {
        return p.x >= b->x0 && p.x <= b->x1 && p.y >= b->y0 && p.y <= b->y1;
    }
    const auto& v = std::get<Polygon>(g).vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (on_segment(p, v[i], v[(i + 1) % n])) return true;
    }
    // Ray casting (crossing parity).
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if ((v[i].y > p.y) != (v[j].y > p.y)) {
            const double xi =
                v[j].x + (p.y - v[j].y) / (v[i].y - v[j].y) * (v[i].x - v[j].x);
            if (p.x < xi) inside = !inside;
        }
    }
    return inside;
}

double intersection_area(const RegionGeometry& a, const RegionGeometry& b) {
    if (const Box* ba = std::get_if<Box>(&a)) {
        if (const Box* bb = std::get_if<Box>(&b)) {
            const double w = std::min(ba->x1, bb->x1) - std::max(ba->x0, bb->x0);
            const double h = std::min(ba->y1, bb->y1) - std::max(ba->y0, bb->y0);
            return (w > 0.0 && h > 0.0) ? w * h : 0.0;
        }
    }
    const std::vector<Point> subject = ccw(to_vertices(a));
    std::vector<Point> clip = ccw(to_vertices(b));
    if (subject.size() < 3 || clip.size() < 3) return 0.0;
    if (is_convex(clip)) {
        return std::abs(signed_area(clip_by_convex(subject, clip)));
    }
    double area = 0.0;
    for (const auto& tri : triangulate(std::move(clip))) {
        area += std::abs(signed_area(clip_by_convex(subject, {tri[0], tri[1], tri[2]})));
    }
    return area;
}

double iou(const RegionGeometry& a, const RegionGeometry& b) {
    const double inter = intersection_area(a, b);
    const double uni = geometry_area(a) + geometry_area(b) - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

std::vector<CharToken> infer_char_positions(const Region& region,
                                            const InferenceConfig& config) {
    const std::u32string cps = unicode::decode_utf8(region.text);
    if (cps.empty()) return {};
    const Box box = bounding_box(region.geometry);
    if (box.width() <= 0.0 || box.height() <= 0.0) {
        throw Error("infer_char_positions: degenerate geometry for region '" + region.id +
                    "'");
    }

    std::vector<CharToken> tokens;
    tokens.reserve(cps.size());
    const bool multi_line =
        region.granularity == Granularity::paragraph || region.granularity == Granularity::page;

    if (!multi_line) {
        const double step = box.width() / static_cast<double>(cps.size());
        const double midy = (box.y0 + box.y1) / 2.0;
        for (std::size_t i = 0; i < cps.size(); ++i) {
            tokens.push_back({cps[i],
                              {box.x0 + (static_cast<double>(i) + 0.5) * step, midy},
                              region.id,
                              static_cast<int>(i)});
        }
    } else {
        // Split into virtual lines: explicit newlines when present,
        // otherwise the configured line-count heuristic.
        std::vector<std::u32string> lines;
        if (cps.find(U'\n') != std::u32string::npos) {
            std::u32string cur;
            for (char32_t c : cps) {
                if (c == U'\n') {
                    lines.push_back(cur);
                    cur.clear();
                } else {
                    cur.push_back(c);
                }
            }
            lines.push_back(cur);
        } else {
            const auto n = static_cast<double>(cps.size());
            std::size_t k;
            if (config.line_height) {
                k = static_cast<std::size_t>(
                    std::max(1.0, std::round(box.height() / *config.line_height)));
            } else {
                k = static_cast<std::size_t>(
                    std::max(1.0, std::round(n * config.aspect_heuristic)));
            }
            k = std::min(k, cps.size());
            const std::size_t per_line = (cps.size() + k - 1) / k;
            for (std::size_t start = 0; start < cps.size(); start += per_line) {
                lines.push_back(cps.substr(start, per_line));
            }
        }
        const double band = box.height() / static_cast<double>(lines.size());
        int seq = 0;
        for (std::size_t j = 0; j < lines.size(); ++j) {
            const double y = box.y0 + (static_cast<double>(j) + 0.5) * band;
            const std::size_t len = lines[j].size();
            if (len == 0) continue;
            const double step = box.width() / static_cast<double>(len);
            for (std::size_t i = 0; i < len; ++i) {
                tokens.push_back({lines[j][i],
                                  {box.x0 + (static_cast<double>(i) + 0.5) * step, y},
                                  region.id,
                                  seq++});
            }
        }
    }

    if (const Polygon* poly = std::get_if<Polygon>(&region.geometry)) {
        for (CharToken& t : tokens) {
            if (!point_in_geometry(t.position, region.geometry)) {
                t.position = closest_boundary_point(t.position, *poly);
            }
        }
    }
    return tokens;
}

AssignmentTable assign_characters(const std::vector<CharToken>& tokens,
                                  const std::vector<Region>& predictions,
                                  bool count_spaces) {
    AssignmentTable table;
    table.aggregate = CharVector(CountUnit::character);
    table.token_hits.assign(tokens.size(), {});
    for (const Region& pred : predictions) {
        table.per_prediction.emplace(pred.id, CharVector(CountUnit::character));
    }
    if (tokens.empty() || predictions.empty()) return table;

    // Uniform grid over the token extent keeps per-prediction lookups
    // proportional to the prediction's own footprint.
    Box extent{tokens.front().position.x, tokens.front().position.y,
               tokens.front().position.x, tokens.front().position.y};
    for (const CharToken& t : tokens) {
        extent.x0 = std::min(extent.x0, t.position.x);
        extent.y0 = std::min(extent.y0, t.position.y);
        extent.x1 = std::max(extent.x1, t.position.x);
        extent.y1 = std::max(extent.y1, t.position.y);
    }
    const int grid = std::max(
        1, static_cast<int>(std::sqrt(static_cast<double>(tokens.size()) / 4.0)));
    const double cw = std::max(extent.width(), 1e-9) / grid;
    const double ch = std::max(extent.height(), 1e-9) / grid;
    auto cell_of = [&](double v, double origin, double size) {
        return std::clamp(static_cast<int>((v - origin) / size), 0, grid - 1);
    };
    std::vector<std::vector<std::size_t>> cells(
        static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid));
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const int cx = cell_of(tokens[i].position.x, extent.x0, cw);
        const int cy = cell_of(tokens[i].position.y, extent.y0, ch);
        cells[static_cast<std::size_t>(cy) * grid + cx].push_back(i);
    }

    for (const Region& pred : predictions) {
        const Box bb = bounding_box(pred.geometry);
        if (bb.x1 < extent.x0 || bb.x0 > extent.x1 || bb.y1 < extent.y0 ||
            bb.y0 > extent.y1) {
            continue;
        }
        const int cx0 = cell_of(bb.x0, extent.x0, cw);
        const int cx1 = cell_of(bb.x1, extent.x0, cw);
        const int cy0 = cell_of(bb.y0, extent.y0, ch);
        const int cy1 = cell_of(bb.y1, extent.y0, ch);
        CharVector& pv = table.per_prediction.at(pred.id);
        for (int cy = cy0; cy <= cy1; ++cy) {
            for (int cx = cx0; cx <= cx1; ++cx) {
                for (std::size_t i : cells[static_cast<std::size_t>(cy) * grid + cx]) {
                    const CharToken& t = tokens[i];
                    if (!point_in_geometry(t.position, pred.geometry)) continue;
                    table.token_hits[i].push_back(pred.id);
                    if (t.token == U' ' && !count_spaces) continue;
                    const std::string key = unicode::encode_utf8(t.token);
                    pv.add(key);
                    table.aggregate.add(key);
                }
            }
        }
    }
    return table;
}

}  // namespace cevkit
