#include "chartmorph/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace chartmorph {

Glyph rect_glyph(double x0, double y0, double x1, double y1, bool vertical)
{
    if (vertical)
        return {(x0 + x1) / 2, y1, -kPi / 2, 0, y1 - y0, x1 - x0};
    return {x0, (y0 + y1) / 2, 0, 0, x1 - x0, y1 - y0};
}

Glyph sector_glyph(Point2 center, double r0, double r1, double startAngle, double endAngle)
{
    Sector s;
    s.center = center;
    s.r0 = r0;
    s.r1 = r1;
    s.midAngle = (startAngle + endAngle) / 2;
    s.sweep = endAngle - startAngle;
    return from_sector(s);
}

Glyph point_glyph(Point2 center, double radius)
{
    Sector s;
    s.center = center;
    s.r0 = 0;
    s.r1 = radius;
    s.midAngle = -kPi / 2;
    s.sweep = 2 * kPi;
    return from_sector(s);
}

bool is_sector(const Glyph& g)
{
    return g.kappa > 1e-12;
}

Sector to_sector(const Glyph& g)
{
    Sector s;
    double rMid = 1 / g.kappa;
    s.center = {g.mx - rMid * std::cos(g.phi), g.my - rMid * std::sin(g.phi)};
    s.r0 = rMid - g.len / 2;
    s.r1 = rMid + g.len / 2;
    s.midAngle = g.phi;
    s.sweep = g.wid * g.kappa;
    return s;
}

Glyph from_sector(const Sector& s)
{
    double rMid = (s.r0 + s.r1) / 2;
    Glyph g;
    g.phi = s.midAngle;
    g.mx = s.center.x + rMid * std::cos(s.midAngle);
    g.my = s.center.y + rMid * std::sin(s.midAngle);
    g.kappa = rMid > 0 ? 1 / rMid : 0;
    g.len = s.r1 - s.r0;
    g.wid = s.sweep * rMid;
    return g;
}

std::vector<Point2> rect_corners(const Glyph& g)
{
    double nx = std::cos(g.phi), ny = std::sin(g.phi);
    double tx = -ny, ty = nx;
    double hw = g.wid / 2;
    return {
        {g.mx - tx * hw, g.my - ty * hw},
        {g.mx + tx * hw, g.my + ty * hw},
        {g.mx + tx * hw + nx * g.len, g.my + ty * hw + ny * g.len},
        {g.mx - tx * hw + nx * g.len, g.my - ty * hw + ny * g.len},
    };
}

double lerp(double a, double b, double t)
{
    if (t <= 0)
        return a;
    if (t >= 1)
        return b;
    return a * (1 - t) + b * t;
}

Glyph interpolate(const Glyph& a, const Glyph& b, double t)
{
    if (t <= 0)
        return a;
    if (t >= 1)
        return b;
    if (is_sector(a) && is_sector(b)) {
        Sector sa = to_sector(a), sb = to_sector(b), s;
        s.center = {lerp(sa.center.x, sb.center.x, t), lerp(sa.center.y, sb.center.y, t)};
        s.r0 = lerp(sa.r0, sb.r0, t);
        s.r1 = lerp(sa.r1, sb.r1, t);
        s.midAngle = lerp(sa.midAngle, sb.midAngle, t);
        s.sweep = lerp(sa.sweep, sb.sweep, t);
        return from_sector(s);
    }
    return {lerp(a.mx, b.mx, t),       lerp(a.my, b.my, t),   lerp(a.phi, b.phi, t),
            lerp(a.kappa, b.kappa, t), lerp(a.len, b.len, t), lerp(a.wid, b.wid, t)};
}

namespace {

double srgb_to_linear(double c)
{
    c /= 255;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double c)
{
    c = c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1 / 2.4) - 0.055;
    return std::clamp(c * 255, 0.0, 255.0);
}

constexpr double kXn = 0.95047, kYn = 1.0, kZn = 1.08883;

double lab_f(double t)
{
    constexpr double d = 6.0 / 29;
    return t > d * d * d ? std::cbrt(t) : t / (3 * d * d) + 4.0 / 29;
}

double lab_finv(double t)
{
    constexpr double d = 6.0 / 29;
    return t > d ? t * t * t : 3 * d * d * (t - 4.0 / 29);
}

} // namespace

Lab to_lab(const Rgb& c)
{
    double r = srgb_to_linear(c.r), g = srgb_to_linear(c.g), b = srgb_to_linear(c.b);
    double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
    double fx = lab_f(x / kXn), fy = lab_f(y / kYn), fz = lab_f(z / kZn);
    return {116 * fy - 16, 500 * (fx - fy), 200 * (fy - fz)};
}

Rgb from_lab(const Lab& c)
{
    double fy = (c.l + 16) / 116;
    double fx = fy + c.a / 500;
    double fz = fy - c.b / 200;
    double x = kXn * lab_finv(fx), y = kYn * lab_finv(fy), z = kZn * lab_finv(fz);
    double r = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
    double g = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
    double b = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
    return {linear_to_srgb(r), linear_to_srgb(g), linear_to_srgb(b)};
}

Rgb interpolate(const Rgb& a, const Rgb& b, double t)
{
    if (t <= 0 || a == b)
        return a;
    if (t >= 1)
        return b;
    Lab la = to_lab(a), lb = to_lab(b);
    return from_lab({lerp(la.l, lb.l, t), lerp(la.a, lb.a, t), lerp(la.b, lb.b, t)});
}

std::string to_hex(const Rgb& c)
{
    auto byte = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 255.0))); };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", byte(c.r), byte(c.g), byte(c.b));
    return buf;
}

const std::vector<Rgb>& palette()
{
    static const std::vector<Rgb> colors = {
        {78, 121, 167}, {242, 142, 43}, {225, 87, 89},  {118, 183, 178}, {89, 161, 79},
        {237, 201, 72}, {176, 122, 161}, {255, 157, 167}, {156, 117, 95}, {186, 176, 172},
    };
    return colors;
}

Rgb palette_color(std::size_t index)
{
    return palette()[index % palette().size()];
}

const char* to_string(MarkShape shape)
{
    switch (shape) {
    case MarkShape::Bar: return "bar";
    case MarkShape::Arc: return "arc";
    case MarkShape::Point: return "point";
    case MarkShape::Polyline: return "polyline";
    }
    return "bar";
}

const Mark* SceneGraph::find_mark(std::string_view id) const
{
    for (const auto& m : marks)
        if (m.id == id)
            return &m;
    return nullptr;
}

const ChromeItem* SceneGraph::find_chrome(std::string_view id) const
{
    for (const auto& c : chrome)
        if (c.id == id)
            return &c;
    return nullptr;
}

} // namespace chartmorph
