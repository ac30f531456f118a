#ifndef CHARTMORPH_PIPELINE_HPP
#define CHARTMORPH_PIPELINE_HPP

#include "chartmorph/keyframes.hpp"
#include "chartmorph/render.hpp"
#include "chartmorph/sequencer.hpp"

#include <optional>

namespace chartmorph {

struct PlanConfig {
    TimingConfig timing;
    Easing easing = Easing::Linear;
    EffectOverrides effects;
    std::optional<std::size_t> flipPreference; // 1-based priority row
    std::optional<PriorityTable> priority;     // replaces the shipped table
    int fps = 30;
    ExportFormat format = ExportFormat::Frames;
    bool embedInputs = false;
};

// Overlays the fields present in `config` (same keys as the plan's config
// echo plus fps/format/embedInputs). Throws InputError on bad values.
void apply_config_json(PlanConfig& config, const Json& json, const std::string& pathPrefix = "config");
// Plan-relevant settings only; fed back through apply_config_json it
// reproduces the same plan.
Json config_echo(const PlanConfig& config);
// JSON schema of the config object.
Json config_schema();

struct PlanBundle {
    ChartPair pair;
    ChartTree sourceTree;
    ChartTree targetTree;
    EditScript script;
    TransitionPlan plan;
};

PlanBundle build_plan(const ChartPair& pair, const PlanConfig& config);
KeyframeTimeline build_timeline(const PlanBundle& bundle);

// Both documents parsed together; violations carry "<prefix>source." /
// "<prefix>target." paths.
ChartPair parse_pair_json(const Json& source, const Json& target, const std::string& prefix = "");

// Rebuilds a bundle from a plan document carrying embedded inputs.
PlanBundle bundle_from_plan(const Json& planDocument);

} // namespace chartmorph

#endif
