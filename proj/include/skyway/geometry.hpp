#pragma once

#include <span>
#include <variant>
#include <vector>

#include "skyway/network.hpp"

namespace skyway {

struct Circle {
    Point center;
    double radius = 0.0;
};

/// Inclusive: boundary points count as inside.
bool contains(const Circle& c, Point p);

/// Midpoint circle around the broken segment (a, b).
Circle build_circle(Point a, Point b, double radius);

enum class CellClass { kSparse, kAverage, kDense };

/// Uniform grid over the network bbox. Cell classes split the count
/// spread CO = max - min into thirds; CO == 0 marks every cell dense.
struct CellGrid {
    double cell_size = 0.0;
    Point origin;
    int rows = 0;
    int cols = 0;
    int co = 0;
    std::vector<int> counts;        // row-major, rows * cols
    std::vector<CellClass> classes;

    int col_of(double x) const;
    int row_of(double y) const;
    int index_of(Point p) const { return row_of(p.y) * cols + col_of(p.x); }
    CellClass class_at(Point p) const { return classes[index_of(p)]; }
};

CellGrid build_cell_grid(const SkywayNetwork& net, double cell_size);

struct AxisSquare {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;
};

struct SquareUnion {
    std::vector<AxisSquare> squares;
};

bool contains(const SquareUnion& u, Point p);

/// One axis-aligned square per node in nn, centered on the node with
/// half-width density_multiplier * do_size where the multiplier is 1 for
/// dense, 2 for average and 3 for sparse cells.
SquareUnion build_partial_areas(const SkywayNetwork& net,
                                std::span<const int> nn, const CellGrid& grid,
                                double do_size);

/// Strictly convex polygon with counterclockwise vertices. Collinear
/// vertices are eliminated on construction. Membership is inclusive.
class ConvexPolygonRegion {
public:
    explicit ConvexPolygonRegion(std::vector<Point> vertices);

    const std::vector<Point>& vertices() const { return vertices_; }
    bool contains(Point p) const;
    double area() const;  // shoelace

private:
    std::vector<Point> vertices_;
    double scale_ = 0.0;  // tolerance length scale
};

struct WholeNetwork {};

/// Explicit allowed node set; produced by search-space growth that is no
/// longer described by a geometric shape.
struct NodeSetRegion {
    std::vector<int> ids;  // sorted ascending
};

using Region = std::variant<Circle, SquareUnion, ConvexPolygonRegion,
                            NodeSetRegion, WholeNetwork>;

/// Corridor regions around the broken segment (a, b): the bounding
/// rectangle at perpendicular offset val from the segment line, the
/// quadrilateral joining the rectangle's side midpoints (its vertices
/// include a and b), and that quadrilateral's half lying in whichever
/// side of the segment line holds more network nodes.
struct RhombusRegions {
    ConvexPolygonRegion full;      // offset rectangle
    ConvexPolygonRegion midpoint;  // side-midpoint rhombus, area/2
    ConvexPolygonRegion triangle;  // denser half of the rhombus, area/4
    std::size_t upper_count = 0;   // rectangle nodes on the positive side
    std::size_t lower_count = 0;
    bool chose_upper = false;
};

RhombusRegions build_rhombus_regions(const SkywayNetwork& net, Point a,
                                     Point b, double val);

/// Ids of nodes whose coordinates satisfy the region's inclusive
/// membership test, ascending. WholeNetwork returns every node.
std::vector<int> nodes_in_region(const SkywayNetwork& net, const Region& r);

std::size_t count_in_region(const SkywayNetwork& net, const Region& r);

std::string region_to_json(const Region& r);

}  // namespace skyway
