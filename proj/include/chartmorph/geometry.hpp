#ifndef CHARTMORPH_GEOMETRY_HPP
#define CHARTMORPH_GEOMETRY_HPP

#include "chartmorph/spec_io.hpp"

#include <string>
#include <utility>
#include <vector>

namespace chartmorph {

inline constexpr double kPi = 3.14159265358979323846;

// Unified bar / sector / point glyph.
//
// (mx, my) is the anchor: the mid-point of the glyph's base edge for bars,
// the middle of the arc band for sectors and the centre for points. phi is
// the screen angle of the radial direction n = (cos phi, sin phi) (y grows
// downwards). kappa is the curvature of the tangential axis: 0 gives a
// rectangle, kappa > 0 a sector whose centre lies 1/kappa behind the anchor.
// len is the extent along n, wid the extent along the tangential axis.
struct Glyph {
    double mx = 0;
    double my = 0;
    double phi = 0;
    double kappa = 0;
    double len = 0;
    double wid = 0;

    bool operator==(const Glyph&) const = default;
};

struct Point2 {
    double x = 0;
    double y = 0;
    bool operator==(const Point2&) const = default;
};

// Sector in polar form. Angles are screen angles (radians, clockwise on
// screen since y grows downwards).
struct Sector {
    Point2 center;
    double r0 = 0;
    double r1 = 0;
    double midAngle = 0;
    double sweep = 0;
};

Glyph rect_glyph(double x0, double y0, double x1, double y1, bool vertical);
Glyph sector_glyph(Point2 center, double r0, double r1, double startAngle, double endAngle);
Glyph point_glyph(Point2 center, double radius);

bool is_sector(const Glyph& g);
Sector to_sector(const Glyph& g);
Glyph from_sector(const Sector& s);

// Axis-aligned corners of a flat glyph (kappa == 0), rotated by phi.
std::vector<Point2> rect_corners(const Glyph& g);

double lerp(double a, double b, double t);
// Exact endpoints at t = 0 and t = 1. Sector pairs interpolate in polar
// space, everything else on the raw parameters.
Glyph interpolate(const Glyph& a, const Glyph& b, double t);

struct Rgb {
    double r = 0;
    double g = 0;
    double b = 0;
    bool operator==(const Rgb&) const = default;
};

struct Lab {
    double l = 0;
    double a = 0;
    double b = 0;
};

Lab to_lab(const Rgb& c);
Rgb from_lab(const Lab& c);
Rgb interpolate(const Rgb& a, const Rgb& b, double t);
std::string to_hex(const Rgb& c);

const std::vector<Rgb>& palette();
Rgb palette_color(std::size_t index);

enum class MarkShape { Bar, Arc, Point, Polyline };

const char* to_string(MarkShape shape);

struct Mark {
    std::string id;
    std::vector<std::pair<std::string, std::string>> path; // tree path, empty for polylines
    double value = 0;
    MarkShape shape = MarkShape::Bar;
    Glyph glyph;
    std::vector<Point2> vertices; // polylines only
    Rgb fill;
    double opacity = 1;

    bool operator==(const Mark&) const = default;
};

enum class ChromeKind { Text, Rule };

struct ChromeItem {
    std::string id;
    ChromeKind kind = ChromeKind::Text;
    std::string text;
    double x = 0;
    double y = 0;
    double x2 = 0; // rules only
    double y2 = 0;
    std::string anchor = "middle";
    double fontSize = 11;
    double strokeWidth = 1; // rules only
    Rgb fill{51, 51, 51};
    double opacity = 1;

    bool operator==(const ChromeItem&) const = default;
};

struct SceneGraph {
    double width = 640;
    double height = 400;
    std::vector<Mark> marks;
    std::vector<ChromeItem> chrome;

    const Mark* find_mark(std::string_view id) const;
    const ChromeItem* find_chrome(std::string_view id) const;

    bool operator==(const SceneGraph&) const = default;
};

} // namespace chartmorph

#endif
