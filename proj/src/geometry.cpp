#include "skyway/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace skyway {

namespace {

double cross(Point o, Point a, Point b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

bool contains(const Circle& c, Point p) {
    const double dx = p.x - c.center.x;
    const double dy = p.y - c.center.y;
    return dx * dx + dy * dy <= c.radius * c.radius;
}

Circle build_circle(Point a, Point b, double radius) {
    if (!(radius > 0.0)) {
        throw Error("build_circle: radius must be positive");
    }
    return Circle{{(a.x + b.x) / 2.0, (a.y + b.y) / 2.0}, radius};
}

int CellGrid::col_of(double x) const {
    const int c = static_cast<int>(std::floor((x - origin.x) / cell_size));
    return std::clamp(c, 0, cols - 1);
}

int CellGrid::row_of(double y) const {
    const int r = static_cast<int>(std::floor((y - origin.y) / cell_size));
    return std::clamp(r, 0, rows - 1);
}

CellGrid build_cell_grid(const SkywayNetwork& net, double cell_size) {
    if (!(cell_size > 0.0)) {
        throw Error("build_cell_grid: cell_size must be positive");
    }
    const BBox bb = net.bbox();
    CellGrid grid;
    grid.cell_size = cell_size;
    grid.origin = {bb.min_x, bb.min_y};
    grid.cols = std::max(1, static_cast<int>(std::ceil(bb.width() / cell_size)));
    grid.rows = std::max(1, static_cast<int>(std::ceil(bb.height() / cell_size)));
    grid.counts.assign(static_cast<std::size_t>(grid.rows) * grid.cols, 0);
    for (const Node& n : net.nodes()) {
        ++grid.counts[static_cast<std::size_t>(grid.index_of(n.pos()))];
    }
    const auto [lo, hi] =
        std::minmax_element(grid.counts.begin(), grid.counts.end());
    grid.co = *hi - *lo;

    grid.classes.resize(grid.counts.size());
    if (grid.co == 0) {
        std::fill(grid.classes.begin(), grid.classes.end(), CellClass::kDense);
        return grid;
    }
    const double third = grid.co / 3.0;
    for (std::size_t i = 0; i < grid.counts.size(); ++i) {
        const double c = grid.counts[i];
        grid.classes[i] = c < third            ? CellClass::kSparse
                          : c < 2.0 * third    ? CellClass::kAverage
                                               : CellClass::kDense;
    }
    return grid;
}

bool contains(const SquareUnion& u, Point p) {
    for (const AxisSquare& s : u.squares) {
        if (p.x >= s.min_x && p.x <= s.max_x && p.y >= s.min_y &&
            p.y <= s.max_y) {
            return true;
        }
    }
    return false;
}

SquareUnion build_partial_areas(const SkywayNetwork& net,
                                std::span<const int> nn, const CellGrid& grid,
                                double do_size) {
    if (!(do_size > 0.0)) {
        throw Error("build_partial_areas: do_size must be positive");
    }
    if (nn.empty()) {
        throw Error("build_partial_areas: empty node set");
    }
    SquareUnion out;
    out.squares.reserve(nn.size());
    for (int id : nn) {
        const Point p = net.node(id).pos();
        double mult = 1.0;
        switch (grid.class_at(p)) {
            case CellClass::kDense:   mult = 1.0; break;
            case CellClass::kAverage: mult = 2.0; break;
            case CellClass::kSparse:  mult = 3.0; break;
        }
        const double half = mult * do_size;
        out.squares.push_back({p.x - half, p.y - half, p.x + half, p.y + half});
    }
    return out;
}

ConvexPolygonRegion::ConvexPolygonRegion(std::vector<Point> vertices) {
    if (vertices.size() < 3) {
        throw ValidationError("polygon needs at least 3 vertices");
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        scale = std::max(scale, euclidean(vertices[i],
                                          vertices[(i + 1) % vertices.size()]));
    }
    // Drop collinear middles, then require strict CCW turns throughout.
    std::vector<Point> kept;
    const double eps = 1e-12 * scale * scale;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const Point prev = vertices[(i + vertices.size() - 1) % vertices.size()];
        const Point cur = vertices[i];
        const Point next = vertices[(i + 1) % vertices.size()];
        if (std::abs(cross(prev, cur, next)) > eps) {
            kept.push_back(cur);
        }
    }
    if (kept.size() < 3) {
        throw ValidationError("polygon degenerates to fewer than 3 vertices");
    }
    for (std::size_t i = 0; i < kept.size(); ++i) {
        const Point a = kept[i];
        const Point b = kept[(i + 1) % kept.size()];
        const Point c = kept[(i + 2) % kept.size()];
        if (cross(a, b, c) <= 0.0) {
            throw ValidationError(
                "polygon vertices are not strictly counterclockwise");
        }
    }
    vertices_ = std::move(kept);
    scale_ = scale;
}

bool ConvexPolygonRegion::contains(Point p) const {
    // Inclusive with a slack of ~1e-9 * polygon scale so that computed
    // boundary points (the segment endpoints in particular) stay inside.
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const Point a = vertices_[i];
        const Point b = vertices_[(i + 1) % vertices_.size()];
        if (cross(a, b, p) < -1e-9 * scale_ * euclidean(a, b)) {
            return false;
        }
    }
    return true;
}

double ConvexPolygonRegion::area() const {
    double twice = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const Point a = vertices_[i];
        const Point b = vertices_[(i + 1) % vertices_.size()];
        twice += a.x * b.y - a.y * b.x;
    }
    return twice / 2.0;
}

RhombusRegions build_rhombus_regions(const SkywayNetwork& net, Point a,
                                     Point b, double val) {
    const double d = euclidean(a, b);
    if (!(d > 0.0)) {
        throw Error("build_rhombus_regions: degenerate segment (a equals b)");
    }
    if (!(val > 0.0)) {
        throw Error("build_rhombus_regions: offset must be positive");
    }
    // Work in the frame where the segment line is the x axis: u along
    // a->b, w along its left normal. No slope arithmetic, so vertical
    // segments need no special case.
    const Point dir{(b.x - a.x) / d, (b.y - a.y) / d};
    const Point nrm{-dir.y, dir.x};
    auto world = [&](double u, double w) {
        return Point{a.x + u * dir.x + w * nrm.x, a.y + u * dir.y + w * nrm.y};
    };

    ConvexPolygonRegion full({world(0, -val), world(d, -val), world(d, val),
                              world(0, val)});
    ConvexPolygonRegion midpoint(
        {a, world(d / 2, -val), b, world(d / 2, val)});

    // Count rectangle nodes per side of the segment line (nodes on the
    // line belong to both). Ties prefer the side holding the smaller
    // node id among nodes unique to one side, then the positive side.
    std::size_t upper = 0, lower = 0;
    int min_upper_only = std::numeric_limits<int>::max();
    int min_lower_only = std::numeric_limits<int>::max();
    const double line_eps = 1e-9 * d * d;
    for (const Node& n : net.nodes()) {
        const Point p = n.pos();
        if (!full.contains(p)) continue;
        const double s = cross(a, b, p);
        const bool in_upper = s >= -line_eps;
        const bool in_lower = s <= line_eps;
        if (in_upper) ++upper;
        if (in_lower) ++lower;
        if (in_upper && !in_lower) min_upper_only = std::min(min_upper_only, n.id);
        if (in_lower && !in_upper) min_lower_only = std::min(min_lower_only, n.id);
    }
    bool chose_upper;
    if (upper != lower) {
        chose_upper = upper > lower;
    } else if (min_upper_only != min_lower_only) {
        chose_upper = min_upper_only < min_lower_only;
    } else {
        chose_upper = true;
    }

    ConvexPolygonRegion triangle =
        chose_upper ? ConvexPolygonRegion({a, b, world(d / 2, val)})
                    : ConvexPolygonRegion({a, world(d / 2, -val), b});

    return RhombusRegions{std::move(full), std::move(midpoint),
                          std::move(triangle), upper, lower, chose_upper};
}

namespace {

struct MembershipVisitor {
    const SkywayNetwork& net;
    Point p;

    bool operator()(const Circle& c) const { return contains(c, p); }
    bool operator()(const SquareUnion& u) const { return contains(u, p); }
    bool operator()(const ConvexPolygonRegion& r) const { return r.contains(p); }
    bool operator()(const WholeNetwork&) const { return true; }
    bool operator()(const NodeSetRegion& r) const {
        for (int id : r.ids) {
            const Node& n = net.node(id);
            if (n.x == p.x && n.y == p.y) return true;
        }
        return false;
    }
};

}  // namespace

std::vector<int> nodes_in_region(const SkywayNetwork& net, const Region& r) {
    std::vector<int> out;
    if (const auto* ns = std::get_if<NodeSetRegion>(&r)) {
        for (int id : ns->ids) {
            if (net.has_node(id)) out.push_back(id);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
    for (const Node& n : net.nodes()) {
        if (std::visit(MembershipVisitor{net, n.pos()}, r)) {
            out.push_back(n.id);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t count_in_region(const SkywayNetwork& net, const Region& r) {
    if (const auto* ns = std::get_if<NodeSetRegion>(&r)) {
        std::size_t count = 0;
        for (int id : ns->ids) count += net.has_node(id) ? 1 : 0;
        return count;
    }
    std::size_t count = 0;
    for (const Node& n : net.nodes()) {
        count += std::visit(MembershipVisitor{net, n.pos()}, r) ? 1 : 0;
    }
    return count;
}

std::string region_to_json(const Region& r) {
    using nlohmann::json;
    json j;
    if (const auto* c = std::get_if<Circle>(&r)) {
        j = {{"kind", "circle"},
             {"center", {c->center.x, c->center.y}},
             {"radius", c->radius}};
    } else if (const auto* u = std::get_if<SquareUnion>(&r)) {
        json squares = json::array();
        for (const AxisSquare& s : u->squares) {
            squares.push_back({s.min_x, s.min_y, s.max_x, s.max_y});
        }
        j = {{"kind", "squares"}, {"squares", std::move(squares)}};
    } else if (const auto* p = std::get_if<ConvexPolygonRegion>(&r)) {
        json verts = json::array();
        for (const Point& v : p->vertices()) verts.push_back({v.x, v.y});
        j = {{"kind", "polygon"}, {"vertices", std::move(verts)}};
    } else if (const auto* ns = std::get_if<NodeSetRegion>(&r)) {
        j = {{"kind", "nodes"}, {"count", ns->ids.size()}};
    } else {
        j = {{"kind", "all"}};
    }
    return j.dump();
}

}  // namespace skyway
