#ifndef CHARTMORPH_KEYFRAMES_HPP
#define CHARTMORPH_KEYFRAMES_HPP

#include "chartmorph/layout.hpp"
#include "chartmorph/sequencer.hpp"

#include <vector>

namespace chartmorph {

struct MarkState {
    bool present = false;
    Mark mark;
};

struct ChromeState {
    bool present = false;
    ChromeItem item;
};

struct MarkTrack {
    std::string id;
    std::vector<MarkState> states; // one per timeline keyframe
};

struct ChromeTrack {
    std::string id;
    std::vector<ChromeState> states;
};

// Every track shares the keyframe times: each stage contributes its start
// and the end of each of its steps.
struct KeyframeTimeline {
    SceneGraph source;
    SceneGraph target;
    std::vector<double> times;
    std::vector<Easing> easing; // easing[i] drives the segment times[i] -> times[i+1]
    std::vector<bool> hold;     // standing time between stages: keep the state at times[i]
    std::vector<MarkTrack> marks;
    std::vector<ChromeTrack> chrome;
    double total = 0;
};

// Scenes at each stage boundary: [source, after stage 0, ..., target]. The
// first and last entries are the static layouts of the two charts.
std::vector<SceneGraph> stage_boundary_scenes(const TransitionPlan& plan, const ChartTree& sourceTree,
                                              const ChartSpec& sourceSpec, const ChartTree& targetTree,
                                              const ChartSpec& targetSpec, const Canvas& canvas = {});

KeyframeTimeline synthesize_keyframes(const TransitionPlan& plan, const std::vector<SceneGraph>& boundaries);

Mark interpolate(const Mark& a, const Mark& b, double t);
ChromeItem interpolate(const ChromeItem& a, const ChromeItem& b, double t);

// Splits a glyph along its tangential axis into pieces of the given
// fractions (summing to 1).
std::vector<Glyph> subdivide(const Glyph& g, const std::vector<double>& fractions);

} // namespace chartmorph

#endif
