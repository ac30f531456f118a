#include "chartmorph/pipeline.hpp"

#include <algorithm>

namespace chartmorph {

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& message)
{
    throw InputError({{ErrorCode::SchemaViolation, "Config", path, message}});
}

} // namespace

void apply_config_json(PlanConfig& config, const Json& json, const std::string& prefix)
{
    if (!json.is_object())
        config_error(prefix, "config must be an object");
    static const std::vector<std::string> known = {"timing", "stepMs", "easing",  "effects",    "flipPreference",
                                                   "priority", "fps",  "format", "embedInputs"};
    for (const auto& [key, value] : json.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            config_error(prefix + "." + key, "unknown config field");
    if (json.contains("stepMs")) {
        if (!json["stepMs"].is_number_integer() || json["stepMs"].get<std::int64_t>() < 0)
            config_error(prefix + ".stepMs", "stepMs must be a non-negative integer");
        config.timing.stepMs = json["stepMs"].get<std::int64_t>();
    }
    if (json.contains("timing")) {
        if (!json["timing"].is_string())
            config_error(prefix + ".timing", "timing must be 'animation' or 'fixed:<ms>'");
        try {
            TimingConfig t = parse_timing(json["timing"].get<std::string>(), config.timing.stepMs);
            config.timing = t;
        } catch (const ChartError& e) {
            config_error(prefix + ".timing", e.what());
        }
    }
    if (json.contains("easing")) {
        auto e = json["easing"].is_string() ? parse_easing(json["easing"].get<std::string>()) : std::nullopt;
        if (!e)
            config_error(prefix + ".easing", "easing must be 'linear' or 'in-out'");
        config.easing = *e;
    }
    if (json.contains("effects")) {
        const Json& effects = json["effects"];
        if (!effects.is_object())
            config_error(prefix + ".effects", "effects must map unit kinds to effect ids");
        for (const auto& [k, v] : effects.items()) {
            auto kind = parse_unit_kind(k);
            auto effect = v.is_string() ? parse_effect(v.get<std::string>()) : std::nullopt;
            if (!kind)
                config_error(prefix + ".effects." + k, "unknown unit kind");
            if (!effect)
                config_error(prefix + ".effects." + k, "unknown effect id");
            auto allowed = allowed_effects(*kind);
            if (std::find(allowed.begin(), allowed.end(), *effect) == allowed.end())
                throw ChartError(ErrorCode::UnsupportedCombination,
                                 std::string("effect ") + to_string(*effect) + " is not allowed for " + k);
            config.effects[*kind] = *effect;
        }
    }
    if (json.contains("flipPreference")) {
        const Json& f = json["flipPreference"];
        if (f.is_null())
            config.flipPreference.reset();
        else if (!f.is_number_integer() || f.get<std::int64_t>() < 1 || f.get<std::int64_t>() > 7)
            config_error(prefix + ".flipPreference", "flipPreference must be a priority row between 1 and 7");
        else
            config.flipPreference = f.get<std::size_t>();
    }
    if (json.contains("priority")) {
        try {
            config.priority = priority_table_from_json(json["priority"]);
        } catch (const ChartError& e) {
            config_error(prefix + ".priority", e.what());
        }
    }
    if (json.contains("fps")) {
        if (!json["fps"].is_number_integer() || json["fps"].get<std::int64_t>() <= 0)
            config_error(prefix + ".fps", "fps must be a positive integer");
        config.fps = json["fps"].get<int>();
    }
    if (json.contains("format")) {
        auto f = json["format"].is_string() ? parse_export_format(json["format"].get<std::string>()) : std::nullopt;
        if (!f)
            config_error(prefix + ".format", "format must be frames, gif or planOnly");
        config.format = *f;
    }
    if (json.contains("embedInputs")) {
        if (!json["embedInputs"].is_boolean())
            config_error(prefix + ".embedInputs", "embedInputs must be a boolean");
        config.embedInputs = json["embedInputs"].get<bool>();
    }
}

Json config_echo(const PlanConfig& config)
{
    Json j;
    j["timing"] = to_string(config.timing);
    j["stepMs"] = config.timing.stepMs;
    j["easing"] = to_string(config.easing);
    Json effects = Json::object();
    for (const auto& [k, e] : config.effects)
        effects[to_string(k)] = to_string(e);
    j["effects"] = effects;
    if (config.flipPreference)
        j["flipPreference"] = *config.flipPreference;
    if (config.priority)
        j["priority"] = to_json(*config.priority);
    return j;
}

Json config_schema()
{
    Json kinds = Json::array();
    for (std::size_t i = 0; i < kUnitKindCount; ++i)
        kinds.push_back(to_string(static_cast<UnitKind>(i)));
    Json effects = Json::array();
    for (EffectId e : kAllEffects)
        effects.push_back(to_string(e));
    return Json{
        {"type", "object"},
        {"additionalProperties", false},
        {"properties",
         {
             {"timing", {{"type", "string"}, {"pattern", "^(animation|fixed:[0-9]+)$"}, {"default", "animation"}}},
             {"stepMs", {{"type", "integer"}, {"minimum", 0}, {"default", 500}}},
             {"easing", {{"enum", {"linear", "in-out", "slowInSlowOut"}}, {"default", "linear"}}},
             {"effects",
              {{"type", "object"},
               {"propertyNames", {{"enum", kinds}}},
               {"additionalProperties", {{"enum", effects}}}}},
             {"flipPreference", {{"type", "integer"}, {"minimum", 1}, {"maximum", 7}}},
             {"priority", {{"type", "array"}}},
             {"fps", {{"type", "integer"}, {"minimum", 1}, {"default", 30}}},
             {"format", {{"enum", {"frames", "gif", "planOnly"}}, {"default", "frames"}}},
             {"embedInputs", {{"type", "boolean"}, {"default", false}}},
         }},
    };
}

PlanBundle build_plan(const ChartPair& pair, const PlanConfig& config)
{
    PlanBundle b;
    b.pair = pair;
    const ChartSpec& specA = pair.source.chart;
    const ChartSpec& specB = pair.target.chart;
    b.sourceTree = build_tree(pair.source.table, specA);
    b.targetTree = build_tree(pair.target.table, specB);

    DiffOptions options;
    options.labelMap = specB.labelMap;
    options.labelMap.insert(options.labelMap.end(), specA.labelMap.begin(), specA.labelMap.end());
    b.script = diff_trees(b.sourceTree, b.targetTree, options, 0);
    std::vector<TransitionUnit> visual = detect_visual_units(specA, specB, b.script.units.size());

    PriorityTable table = config.priority ? *config.priority : PriorityTable::defaults();
    if (config.flipPreference)
        table = table.flipped(*config.flipPreference - 1);
    table.check();

    std::vector<const TransitionUnit*> data;
    for (const auto& u : b.script.units)
        data.push_back(&u);
    const bool typeChange = std::any_of(visual.begin(), visual.end(),
                                        [](const auto& u) { return u.kind == UnitKind::ChangeChartType; });
    std::vector<const TransitionUnit*> dataOrder = sort_data_units(data, table);
    if (typeChange)
        std::stable_partition(dataOrder.begin(), dataOrder.end(),
                              [](const TransitionUnit* u) { return is_removal_side(u->kind); });
    std::vector<TransitionUnit> dependents = derive_data_dependent_units(
        dataOrder, b.sourceTree, b.targetTree, specA.type, specB.type, b.script.units.size() + visual.size());

    std::vector<const TransitionUnit*> visualPtrs, dependentPtrs;
    for (const auto& u : visual)
        visualPtrs.push_back(&u);
    for (const auto& u : dependents)
        dependentPtrs.push_back(&u);
    std::vector<const TransitionUnit*> ordered = order_units(data, dependentPtrs, visualPtrs, table);

    // Chart type in effect when each unit plays.
    std::map<std::string, ChartType> typeAt;
    bool afterChange = false;
    for (const auto* u : ordered) {
        typeAt[u->id] = afterChange || u->kind == UnitKind::ChangeChartType ? specB.type : specA.type;
        if (u->kind == UnitKind::ChangeChartType)
            afterChange = true;
    }

    TransitionPlan& plan = b.plan;
    for (const auto* u : ordered)
        plan.units.push_back(*u);
    std::vector<UnitKind> firstKinds;
    auto groups = group_units(ordered);
    for (std::size_t i = 0; i < groups.size(); ++i) {
        Stage stage;
        stage.id = "s" + std::to_string(i);
        stage.unitIds = groups[i];
        stage.easing = config.easing;
        stage.steps = 1;
        for (const auto& id : groups[i]) {
            const TransitionUnit* u = plan.unit(id);
            if (std::find(stage.kinds.begin(), stage.kinds.end(), u->kind) == stage.kinds.end())
                stage.kinds.push_back(u->kind);
            ChartType type = typeAt[id];
            EffectId effect;
            auto o = config.effects.find(u->kind);
            if (o != config.effects.end()) {
                check_binding(u->kind, o->second, type);
                effect = o->second;
            } else if (u->kind == UnitKind::Sort && !is_area_type(type)) {
                // Reordered categories on a line or scatter chart just reposition.
                effect = EffectId::Move;
            } else {
                effect = default_binding(u->kind, type);
            }
            stage.effects[id] = effect;
            stage.steps = std::max(stage.steps, step_count(u->kind, effect, specA.type, specB.type));
        }
        firstKinds.push_back(plan.unit(groups[i].front())->kind);
        plan.stages.push_back(std::move(stage));
    }
    assign_timing(plan.stages, firstKinds, config.timing);
    plan.total = plan.stages.empty() ? 0 : plan.stages.back().start + plan.stages.back().duration;
    plan.config = config_echo(config);
    if (config.embedInputs)
        plan.inputs = Json{{"source", to_json(pair.source)}, {"target", to_json(pair.target)}};
    return b;
}

KeyframeTimeline build_timeline(const PlanBundle& b)
{
    auto scenes = stage_boundary_scenes(b.plan, b.sourceTree, b.pair.source.chart, b.targetTree, b.pair.target.chart);
    return synthesize_keyframes(b.plan, scenes);
}

ChartPair parse_pair_json(const Json& source, const Json& target, const std::string& prefix)
{
    ChartPair pair;
    std::vector<Violation> violations;
    try {
        pair.source = parse_chart_document(source, prefix + "source.");
    } catch (const InputError& e) {
        violations.insert(violations.end(), e.violations().begin(), e.violations().end());
    }
    try {
        pair.target = parse_chart_document(target, prefix + "target.");
    } catch (const InputError& e) {
        violations.insert(violations.end(), e.violations().begin(), e.violations().end());
    }
    if (!violations.empty())
        throw InputError(violations);
    return pair;
}

PlanBundle bundle_from_plan(const Json& doc)
{
    if (!doc.is_object() || !doc.contains("inputs") || !doc["inputs"].is_object())
        throw InputError({{ErrorCode::SchemaViolation, "EmbeddedInputs", "inputs",
                           "plan has no embedded inputs; create it with --embed-inputs"}});
    const Json& inputs = doc["inputs"];
    if (!inputs.contains("source") || !inputs.contains("target"))
        throw InputError({{ErrorCode::SchemaViolation, "EmbeddedInputs", "inputs",
                           "embedded inputs need 'source' and 'target'"}});
    ChartPair pair = parse_pair_json(inputs["source"], inputs["target"], "inputs.");
    PlanConfig config;
    apply_config_json(config, doc.value("config", Json::object()));
    config.embedInputs = true;
    return build_plan(pair, config);
}

} // namespace chartmorph
