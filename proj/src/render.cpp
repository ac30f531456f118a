#include "chartmorph/render.hpp"
#include "chartmorph/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace chartmorph {

SceneGraph sample_scene(const KeyframeTimeline& tl, double t)
{
    if (!(t >= 0 && t <= tl.total))
        throw ChartError(ErrorCode::OutOfRange, "sample time " + format_number(t) + " outside [0, " +
                                                    format_number(tl.total) + "]");
    if (t == 0)
        return tl.source;
    if (t >= tl.total || tl.times.empty())
        return tl.target;
    if (t < tl.times.front())
        return tl.source;

    std::size_t i = static_cast<std::size_t>(std::upper_bound(tl.times.begin(), tl.times.end(), t) - tl.times.begin());
    // times[i-1] <= t < times[i]
    std::size_t a = i - 1;
    std::size_t b = std::min(i, tl.times.size() - 1);
    double u = 0;
    if (a < tl.hold.size() && tl.hold[a])
        b = a;
    if (b != a && tl.times[b] > tl.times[a])
        u = ease(tl.easing[a], std::clamp((t - tl.times[a]) / (tl.times[b] - tl.times[a]), 0.0, 1.0));

    SceneGraph scene;
    scene.width = tl.target.width;
    scene.height = tl.target.height;
    for (const auto& track : tl.marks) {
        const MarkState& sa = track.states[a];
        const MarkState& sb = track.states[b];
        if (!sa.present || !sb.present)
            continue;
        scene.marks.push_back(sa.mark == sb.mark ? sa.mark : interpolate(sa.mark, sb.mark, u));
    }
    for (const auto& track : tl.chrome) {
        const ChromeState& sa = track.states[a];
        const ChromeState& sb = track.states[b];
        if (!sa.present || !sb.present)
            continue;
        scene.chrome.push_back(sa.item == sb.item ? sa.item : interpolate(sa.item, sb.item, u));
    }
    return scene;
}

namespace {

std::string num(double v)
{
    return format_fixed3(v);
}

std::string xml_escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string opacity_attr(double opacity)
{
    return opacity < 1 ? " opacity=\"" + num(std::max(0.0, opacity)) + "\"" : "";
}

std::string sector_path(const Sector& sIn)
{
    Sector s = sIn;
    s.sweep = std::clamp(s.sweep, 0.0, 2 * kPi);
    s.r0 = std::max(0.0, s.r0);
    s.r1 = std::max(s.r0, s.r1);
    const double a0 = s.midAngle - s.sweep / 2, a1 = s.midAngle + s.sweep / 2;
    auto pt = [&](double r, double a) {
        return num(s.center.x + r * std::cos(a)) + " " + num(s.center.y + r * std::sin(a));
    };
    if (s.sweep >= 2 * kPi - 1e-9) {
        // Full ring: two half arcs per radius.
        double am = a0 + kPi;
        std::string d = "M" + pt(s.r1, a0) + "A" + num(s.r1) + " " + num(s.r1) + " 0 1 1 " + pt(s.r1, am) + "A" +
                        num(s.r1) + " " + num(s.r1) + " 0 1 1 " + pt(s.r1, a0) + "Z";
        if (s.r0 > 0)
            d += "M" + pt(s.r0, a0) + "A" + num(s.r0) + " " + num(s.r0) + " 0 1 0 " + pt(s.r0, am) + "A" + num(s.r0) +
                 " " + num(s.r0) + " 0 1 0 " + pt(s.r0, a0) + "Z";
        return d;
    }
    const char* large = s.sweep > kPi ? "1" : "0";
    std::string d = "M" + pt(s.r1, a0) + "A" + num(s.r1) + " " + num(s.r1) + " 0 " + large + " 1 " + pt(s.r1, a1);
    if (s.r0 > 0)
        d += "L" + pt(s.r0, a1) + "A" + num(s.r0) + " " + num(s.r0) + " 0 " + large + " 0 " + pt(s.r0, a0);
    else
        d += "L" + num(s.center.x) + " " + num(s.center.y);
    return d + "Z";
}

std::string mark_svg(const Mark& m)
{
    std::string id = " data-id=\"" + xml_escape(m.id) + "\"";
    if (m.shape == MarkShape::Polyline) {
        std::string pts;
        for (std::size_t i = 0; i < m.vertices.size(); ++i)
            pts += (i ? " " : "") + num(m.vertices[i].x) + "," + num(m.vertices[i].y);
        return "<polyline" + id + " points=\"" + pts + "\" fill=\"none\" stroke=\"" + to_hex(m.fill) +
               "\" stroke-width=\"2\"" + opacity_attr(m.opacity) + "/>";
    }
    std::string d;
    if (is_sector(m.glyph)) {
        d = sector_path(to_sector(m.glyph));
    } else {
        auto c = rect_corners(m.glyph);
        auto same = [](double a, double b) { return std::abs(a - b) < 1e-9; };
        bool aligned = (same(c[0].x, c[1].x) && same(c[1].y, c[2].y) && same(c[2].x, c[3].x) && same(c[3].y, c[0].y)) ||
                       (same(c[0].y, c[1].y) && same(c[1].x, c[2].x) && same(c[2].y, c[3].y) && same(c[3].x, c[0].x));
        if (aligned) {
            double x0 = std::min({c[0].x, c[1].x, c[2].x, c[3].x}), x1 = std::max({c[0].x, c[1].x, c[2].x, c[3].x});
            double y0 = std::min({c[0].y, c[1].y, c[2].y, c[3].y}), y1 = std::max({c[0].y, c[1].y, c[2].y, c[3].y});
            return "<rect" + id + " x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" + num(x1 - x0) +
                   "\" height=\"" + num(y1 - y0) + "\" fill=\"" + to_hex(m.fill) + "\"" + opacity_attr(m.opacity) +
                   "/>";
        }
        d = "M" + num(c[0].x) + " " + num(c[0].y);
        for (std::size_t i = 1; i < 4; ++i)
            d += "L" + num(c[i].x) + " " + num(c[i].y);
        d += "Z";
    }
    return "<path" + id + " d=\"" + d + "\" fill=\"" + to_hex(m.fill) + "\"" + opacity_attr(m.opacity) + "/>";
}

std::string chrome_svg(const ChromeItem& c)
{
    std::string id = " data-id=\"" + xml_escape(c.id) + "\"";
    if (c.kind == ChromeKind::Rule)
        return "<line" + id + " x1=\"" + num(c.x) + "\" y1=\"" + num(c.y) + "\" x2=\"" + num(c.x2) + "\" y2=\"" +
               num(c.y2) + "\" stroke=\"" + to_hex(c.fill) + "\" stroke-width=\"" + num(c.strokeWidth) + "\"" +
               opacity_attr(c.opacity) + "/>";
    return "<text" + id + " x=\"" + num(c.x) + "\" y=\"" + num(c.y) + "\" font-size=\"" + num(c.fontSize) +
           "\" text-anchor=\"" + c.anchor + "\" fill=\"" + to_hex(c.fill) + "\"" + opacity_attr(c.opacity) + ">" +
           xml_escape(c.text) + "</text>";
}

bool starts_with(std::string_view s, std::string_view p)
{
    return s.substr(0, p.size()) == p;
}

} // namespace

std::string render_svg(const SceneGraph& scene)
{
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(scene.width) + "\" height=\"" +
                      num(scene.height) + "\" viewBox=\"0 0 " + num(scene.width) + " " + num(scene.height) + "\">\n";
    out += "<rect width=\"" + num(scene.width) + "\" height=\"" + num(scene.height) + "\" fill=\"#ffffff\"/>\n";

    std::vector<const Mark*> marks;
    for (const auto& m : scene.marks)
        marks.push_back(&m);
    std::stable_sort(marks.begin(), marks.end(), [](const Mark* a, const Mark* b) { return a->id < b->id; });
    out += "<g class=\"marks\">\n";
    for (const Mark* m : marks)
        out += mark_svg(*m) + "\n";
    out += "</g>\n";

    for (const auto& [group, prefix] : {std::pair{"axes", "axis-"}, {"legend", "legend:"}, {"title", "title:"}}) {
        std::vector<const ChromeItem*> items;
        for (const auto& c : scene.chrome)
            if (starts_with(c.id, prefix))
                items.push_back(&c);
        std::stable_sort(items.begin(), items.end(), [](auto* a, auto* b) { return a->id < b->id; });
        out += std::string("<g class=\"") + group + "\">\n";
        for (const auto* c : items)
            out += chrome_svg(*c) + "\n";
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

// ---------------------------------------------------------------------------
// Rasterizer

namespace {

struct Box {
    int x0, y0, x1, y1;
};

Box clip_box(double x0, double y0, double x1, double y1, int w, int h)
{
    return {std::max(0, static_cast<int>(std::floor(x0))), std::max(0, static_cast<int>(std::floor(y0))),
            std::min(w - 1, static_cast<int>(std::ceil(x1))), std::min(h - 1, static_cast<int>(std::ceil(y1)))};
}

void blend(Raster& r, int x, int y, const Rgb& c, double alpha)
{
    std::size_t i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(r.width) + static_cast<std::size_t>(x)) * 3;
    auto mix = [&](std::uint8_t dst, double src) {
        double v = dst * (1 - alpha) + std::clamp(src, 0.0, 255.0) * alpha;
        return static_cast<std::uint8_t>(std::lround(v));
    };
    r.rgb[i] = mix(r.rgb[i], c.r);
    r.rgb[i + 1] = mix(r.rgb[i + 1], c.g);
    r.rgb[i + 2] = mix(r.rgb[i + 2], c.b);
}

double segment_distance(double px, double py, Point2 a, Point2 b)
{
    double dx = b.x - a.x, dy = b.y - a.y;
    double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? std::clamp(((px - a.x) * dx + (py - a.y) * dy) / len2, 0.0, 1.0) : 0;
    double ex = a.x + t * dx - px, ey = a.y + t * dy - py;
    return std::sqrt(ex * ex + ey * ey);
}

void draw_segment(Raster& r, Point2 a, Point2 b, double halfWidth, const Rgb& c, double alpha)
{
    Box box = clip_box(std::min(a.x, b.x) - halfWidth, std::min(a.y, b.y) - halfWidth, std::max(a.x, b.x) + halfWidth,
                       std::max(a.y, b.y) + halfWidth, r.width, r.height);
    for (int y = box.y0; y <= box.y1; ++y)
        for (int x = box.x0; x <= box.x1; ++x)
            if (segment_distance(x + 0.5, y + 0.5, a, b) <= halfWidth)
                blend(r, x, y, c, alpha);
}

void draw_mark(Raster& r, const Mark& m)
{
    double alpha = std::clamp(m.opacity, 0.0, 1.0);
    if (alpha <= 0)
        return;
    if (m.shape == MarkShape::Polyline) {
        for (std::size_t i = 1; i < m.vertices.size(); ++i)
            draw_segment(r, m.vertices[i - 1], m.vertices[i], 1.0, m.fill, alpha);
        return;
    }
    if (is_sector(m.glyph)) {
        Sector s = to_sector(m.glyph);
        double sweep = std::clamp(s.sweep, 0.0, 2 * kPi);
        double r0 = std::max(0.0, s.r0), r1 = std::max(r0, s.r1);
        if (sweep <= 0 || r1 <= 0)
            return;
        Box box = clip_box(s.center.x - r1, s.center.y - r1, s.center.x + r1, s.center.y + r1, r.width, r.height);
        double a0 = s.midAngle - sweep / 2;
        for (int y = box.y0; y <= box.y1; ++y)
            for (int x = box.x0; x <= box.x1; ++x) {
                double dx = x + 0.5 - s.center.x, dy = y + 0.5 - s.center.y;
                double d = std::sqrt(dx * dx + dy * dy);
                if (d < r0 || d > r1)
                    continue;
                double rel = std::fmod(std::atan2(dy, dx) - a0, 2 * kPi);
                if (rel < 0)
                    rel += 2 * kPi;
                if (rel <= sweep)
                    blend(r, x, y, m.fill, alpha);
            }
        return;
    }
    auto c = rect_corners(m.glyph);
    double minX = c[0].x, maxX = c[0].x, minY = c[0].y, maxY = c[0].y;
    for (const auto& p : c) {
        minX = std::min(minX, p.x);
        maxX = std::max(maxX, p.x);
        minY = std::min(minY, p.y);
        maxY = std::max(maxY, p.y);
    }
    Box box = clip_box(minX, minY, maxX, maxY, r.width, r.height);
    for (int y = box.y0; y <= box.y1; ++y)
        for (int x = box.x0; x <= box.x1; ++x) {
            double px = x + 0.5, py = y + 0.5;
            bool pos = false, neg = false;
            for (std::size_t i = 0; i < 4; ++i) {
                const Point2& a = c[i];
                const Point2& b = c[(i + 1) % 4];
                double cross = (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
                pos = pos || cross > 0;
                neg = neg || cross < 0;
            }
            if (!(pos && neg))
                blend(r, x, y, m.fill, alpha);
        }
}

} // namespace

Raster rasterize(const SceneGraph& scene)
{
    Raster r;
    r.width = static_cast<int>(std::lround(scene.width));
    r.height = static_cast<int>(std::lround(scene.height));
    r.rgb.assign(static_cast<std::size_t>(r.width) * static_cast<std::size_t>(r.height) * 3, 255);
    std::vector<const Mark*> marks;
    for (const auto& m : scene.marks)
        marks.push_back(&m);
    std::stable_sort(marks.begin(), marks.end(), [](const Mark* a, const Mark* b) { return a->id < b->id; });
    for (const Mark* m : marks)
        draw_mark(r, *m);
    for (const auto& c : scene.chrome)
        if (c.kind == ChromeKind::Rule && c.opacity > 0)
            draw_segment(r, {c.x, c.y}, {c.x2, c.y2}, std::max(0.5, c.strokeWidth / 2), c.fill,
                         std::clamp(c.opacity, 0.0, 1.0));
    return r;
}

// ---------------------------------------------------------------------------
// Export

std::optional<ExportFormat> parse_export_format(std::string_view text)
{
    if (text == "frames")
        return ExportFormat::Frames;
    if (text == "gif")
        return ExportFormat::Gif;
    if (text == "planOnly")
        return ExportFormat::PlanOnly;
    return std::nullopt;
}

const char* to_string(ExportFormat format)
{
    switch (format) {
    case ExportFormat::Frames: return "frames";
    case ExportFormat::Gif: return "gif";
    case ExportFormat::PlanOnly: return "planOnly";
    }
    return "frames";
}

std::vector<FrameTime> frame_times(const TransitionPlan& plan, int fps)
{
    if (fps <= 0)
        throw ChartError(ErrorCode::OutOfRange, "fps must be positive");
    const std::int64_t count = plan.total * fps / 1000 + 1;
    std::vector<FrameTime> out;
    for (std::int64_t k = 0; k < count; ++k) {
        FrameTime f;
        f.index = static_cast<std::size_t>(k);
        f.time = k + 1 == count ? static_cast<double>(plan.total) : static_cast<double>(k) * 1000.0 / fps;
        for (const auto& s : plan.stages)
            if (f.time >= static_cast<double>(s.start - s.standingBefore))
                f.stage = s.id;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> export_files(const TransitionPlan& plan,
                                                              const KeyframeTimeline& timeline, int fps,
                                                              ExportFormat format)
{
    std::vector<std::pair<std::string, std::string>> files;
    files.emplace_back("plan.json", serialize_plan(plan));
    if (format == ExportFormat::PlanOnly)
        return files;
    auto times = frame_times(plan, fps);
    Json manifest;
    manifest["fps"] = fps;
    manifest["total"] = plan.total;
    Json frames = Json::array();
    std::vector<Raster> rasters;
    for (const auto& f : times) {
        SceneGraph scene = sample_scene(timeline, f.time);
        char name[32];
        std::snprintf(name, sizeof name, "frames/f%05zu.svg", f.index);
        files.emplace_back(name, render_svg(scene));
        frames.push_back(Json{{"index", f.index}, {"time", f.time}, {"stage", f.stage}, {"file", name}});
        if (format == ExportFormat::Gif)
            rasters.push_back(rasterize(scene));
    }
    manifest["frames"] = frames;
    if (format == ExportFormat::Gif) {
        int delay = std::max(1, static_cast<int>(std::lround(100.0 / fps)));
        auto gif = encode_gif(rasters, delay, {0, rasters.size() - 1});
        files.emplace_back("animation.gif", std::string(gif.begin(), gif.end()));
        manifest["animation"] = "animation.gif";
    }
    files.emplace_back("manifest.json", manifest.dump(2) + "\n");
    return files;
}

ExportResult export_animation(const TransitionPlan& plan, const KeyframeTimeline& timeline, int fps,
                              ExportFormat format, const std::filesystem::path& outDir)
{
    auto files = export_files(plan, timeline, fps, format);
    ExportResult result;
    std::error_code ec;
    std::filesystem::create_directories(outDir, ec);
    if (ec)
        throw ChartError(ErrorCode::IoFailure, "cannot create " + outDir.string() + ": " + ec.message());
    for (const auto& [name, bytes] : files) {
        std::filesystem::path p = outDir / name;
        std::filesystem::create_directories(p.parent_path(), ec);
        std::ofstream out(p, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out)
            throw ChartError(ErrorCode::IoFailure, "cannot write " + p.string());
        result.files.push_back(name);
        if (name == "manifest.json")
            result.manifest = Json::parse(bytes);
    }
    return result;
}

std::string make_tar(const std::vector<std::pair<std::string, std::string>>& files)
{
    std::string out;
    for (const auto& [name, bytes] : files) {
        char header[512] = {};
        std::snprintf(header, 100, "%s", name.c_str());
        std::snprintf(header + 100, 8, "%07o", 0644);
        std::snprintf(header + 108, 8, "%07o", 0);
        std::snprintf(header + 116, 8, "%07o", 0);
        std::snprintf(header + 124, 12, "%011llo", static_cast<unsigned long long>(bytes.size()));
        std::snprintf(header + 136, 12, "%011o", 0);
        std::memset(header + 148, ' ', 8);
        header[156] = '0';
        std::memcpy(header + 257, "ustar", 6);
        std::memcpy(header + 263, "00", 2);
        unsigned sum = 0;
        for (unsigned char c : header)
            sum += c;
        std::snprintf(header + 148, 8, "%06o", sum);
        header[155] = ' ';
        out.append(header, 512);
        out += bytes;
        out.append((512 - bytes.size() % 512) % 512, '\0');
    }
    out.append(1024, '\0');
    return out;
}

} // namespace chartmorph
