#ifndef CHARTMORPH_RENDER_HPP
#define CHARTMORPH_RENDER_HPP

#include "chartmorph/keyframes.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace chartmorph {

// Throws OutOfRange outside [0, total]. t = 0 and t = total return the
// static scenes unchanged.
SceneGraph sample_scene(const KeyframeTimeline& timeline, double t);

// Background, marks by id, axes, legend, title; numbers with at most three
// decimals.
std::string render_svg(const SceneGraph& scene);

struct Raster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb; // row-major, 3 bytes per pixel

    bool operator==(const Raster&) const = default;
};

// Marks and rules only; text is not drawn.
Raster rasterize(const SceneGraph& scene);

// Animated GIF, palette fitted to the given key frames, `delayCs` hundredths
// of a second per frame.
std::vector<std::uint8_t> encode_gif(const std::vector<Raster>& frames, int delayCs,
                                     const std::vector<std::size_t>& paletteFrames);

// Minimal LZW compressor for GIF image data (exposed for tests).
std::vector<std::uint8_t> gif_lzw(const std::vector<std::uint8_t>& indices, int minCodeSize);
std::vector<std::uint8_t> gif_lzw_decode(const std::vector<std::uint8_t>& data, int minCodeSize);

enum class ExportFormat { Frames, Gif, PlanOnly };

std::optional<ExportFormat> parse_export_format(std::string_view text);
const char* to_string(ExportFormat format);

struct FrameTime {
    std::size_t index = 0;
    double time = 0;
    std::string stage; // stage id, "" before the first stage
};

// floor(total * fps / 1000) + 1 frames; the last one sits exactly on total.
std::vector<FrameTime> frame_times(const TransitionPlan& plan, int fps);

struct ExportResult {
    Json manifest;
    std::vector<std::string> files; // relative to the output directory
};

// Writes plan.json, frames/fNNNNN.svg, manifest.json and animation.gif
// (gif format) below `outDir`.
ExportResult export_animation(const TransitionPlan& plan, const KeyframeTimeline& timeline, int fps,
                              ExportFormat format, const std::filesystem::path& outDir);

// In-memory variant: (relative path, bytes) pairs in write order.
std::vector<std::pair<std::string, std::string>> export_files(const TransitionPlan& plan,
                                                              const KeyframeTimeline& timeline, int fps,
                                                              ExportFormat format);

// POSIX ustar archive of the given files.
std::string make_tar(const std::vector<std::pair<std::string, std::string>>& files);

} // namespace chartmorph

#endif
