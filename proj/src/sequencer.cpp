#include "chartmorph/sequencer.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <set>

namespace chartmorph {

namespace {

const std::vector<UnitKind> kAdjustDataItem = {UnitKind::AddDataItem, UnitKind::RemoveDataItem};

bool contains(const std::vector<UnitKind>& v, UnitKind k)
{
    return std::find(v.begin(), v.end(), k) != v.end();
}

} // namespace

PriorityTable PriorityTable::defaults()
{
    using K = UnitKind;
    PriorityTable t;
    t.rows = {
        {"RemoveDataItem>AddDataItem", {K::RemoveDataItem}, {K::AddDataItem}},
        {"AdjustDataItem>AddDimension", kAdjustDataItem, {K::AddDimension}},
        {"RemoveDimension>AdjustDataItem", {K::RemoveDimension}, kAdjustDataItem},
        {"AdjustDataItem>AddMeasure", kAdjustDataItem, {K::AddMeasure}},
        {"RemoveMeasure>AdjustDataItem", {K::RemoveMeasure}, kAdjustDataItem},
        {"AdjustDataItem>AddSeries", kAdjustDataItem, {K::AddSeries}},
        {"RemoveSeries>AdjustDataItem", {K::RemoveSeries}, kAdjustDataItem},
    };
    return t;
}

PriorityTable PriorityTable::flipped(std::size_t index) const
{
    if (index >= rows.size())
        throw ChartError(ErrorCode::OutOfRange, "no priority row " + std::to_string(index + 1));
    PriorityTable t = *this;
    std::swap(t.rows[index].before, t.rows[index].after);
    return t;
}

bool PriorityTable::prefers(UnitKind a, UnitKind b) const
{
    for (const auto& r : rows)
        if (contains(r.before, a) && contains(r.after, b))
            return true;
    return false;
}

void PriorityTable::check() const
{
    // Depth-first search for a back edge over the kind graph.
    std::array<int, kUnitKindCount> state{};
    std::function<bool(std::size_t)> cyclic = [&](std::size_t k) {
        state[k] = 1;
        for (std::size_t n = 0; n < kUnitKindCount; ++n) {
            if (!prefers(static_cast<UnitKind>(k), static_cast<UnitKind>(n)))
                continue;
            if (state[n] == 1 || (state[n] == 0 && cyclic(n)))
                return true;
        }
        state[k] = 2;
        return false;
    };
    for (std::size_t k = 0; k < kUnitKindCount; ++k)
        if (state[k] == 0 && cyclic(k))
            throw ChartError(ErrorCode::CyclicPriority, "priority table contains a cycle");
}

PriorityTable priority_table_from_json(const Json& rows)
{
    PriorityTable t;
    if (!rows.is_array())
        throw ChartError(ErrorCode::SchemaViolation, "priority table must be an array");
    auto kinds = [](const Json& list) {
        std::vector<UnitKind> out;
        if (!list.is_array())
            throw ChartError(ErrorCode::SchemaViolation, "priority row entries must be arrays");
        for (const auto& k : list) {
            auto kind = k.is_string() ? parse_unit_kind(k.get<std::string>()) : std::nullopt;
            if (!kind)
                throw ChartError(ErrorCode::SchemaViolation, "unknown unit kind in priority table: " + k.dump());
            out.push_back(*kind);
        }
        return out;
    };
    for (const auto& row : rows) {
        if (!row.is_object() || !row.contains("before") || !row.contains("after"))
            throw ChartError(ErrorCode::SchemaViolation, "priority rows need 'before' and 'after'");
        Preference p;
        p.before = kinds(row["before"]);
        p.after = kinds(row["after"]);
        p.name = row.value("name", std::string());
        t.rows.push_back(std::move(p));
    }
    return t;
}

Json to_json(const PriorityTable& table)
{
    Json out = Json::array();
    for (const auto& r : table.rows) {
        Json before = Json::array(), after = Json::array();
        for (auto k : r.before)
            before.push_back(to_string(k));
        for (auto k : r.after)
            after.push_back(to_string(k));
        out.push_back(Json{{"name", r.name}, {"before", before}, {"after", after}});
    }
    return out;
}

std::vector<const TransitionUnit*> sort_data_units(const std::vector<const TransitionUnit*>& dataUnits,
                                                   const PriorityTable& table)
{
    const std::size_t n = dataUnits.size();
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && table.prefers(dataUnits[i]->kind, dataUnits[j]->kind))
                ++indegree[j];
    std::vector<bool> done(n, false);
    std::vector<const TransitionUnit*> out;
    for (std::size_t round = 0; round < n; ++round) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n && pick == n; ++i)
            if (!done[i] && indegree[i] == 0)
                pick = i;
        if (pick == n)
            throw ChartError(ErrorCode::CyclicPriority, "priority table contains a cycle");
        done[pick] = true;
        out.push_back(dataUnits[pick]);
        for (std::size_t j = 0; j < n; ++j)
            if (j != pick && table.prefers(dataUnits[pick]->kind, dataUnits[j]->kind))
                --indegree[j];
    }
    return out;
}

bool is_legend_or_title(UnitKind kind)
{
    return kind == UnitKind::ShowLegend || kind == UnitKind::HideLegend || kind == UnitKind::ChangeTitle;
}

std::vector<const TransitionUnit*> order_units(const std::vector<const TransitionUnit*>& dataUnits,
                                               const std::vector<const TransitionUnit*>& dependentUnits,
                                               const std::vector<const TransitionUnit*>& visualUnits,
                                               const PriorityTable& table)
{
    std::vector<const TransitionUnit*> sorted = sort_data_units(dataUnits, table);
    const TransitionUnit* typeChange = nullptr;
    std::vector<const TransitionUnit*> hideAxes, showAxes, tail;
    for (const auto* u : visualUnits) {
        if (u->kind == UnitKind::ChangeChartType)
            typeChange = u;
        else if (u->kind == UnitKind::HideXAxis || u->kind == UnitKind::HideYAxis)
            hideAxes.push_back(u);
        else if (u->kind == UnitKind::ShowXAxis || u->kind == UnitKind::ShowYAxis)
            showAxes.push_back(u);
        else
            tail.push_back(u);
    }
    std::vector<const TransitionUnit*> out;
    auto push_with_dependents = [&](const TransitionUnit* u) {
        out.push_back(u);
        for (const auto* d : dependentUnits)
            if (d->dependsOn && *d->dependsOn == u->id)
                out.push_back(d);
    };
    if (typeChange) {
        for (const auto* u : sorted)
            if (is_removal_side(u->kind))
                push_with_dependents(u);
        out.insert(out.end(), hideAxes.begin(), hideAxes.end());
        out.push_back(typeChange);
        out.insert(out.end(), showAxes.begin(), showAxes.end());
        for (const auto* u : sorted)
            if (!is_removal_side(u->kind))
                push_with_dependents(u);
    } else {
        for (const auto* u : sorted)
            push_with_dependents(u);
        out.insert(out.end(), hideAxes.begin(), hideAxes.end());
        out.insert(out.end(), showAxes.begin(), showAxes.end());
    }
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

std::vector<std::vector<std::string>> group_units(const std::vector<const TransitionUnit*>& ordered)
{
    std::vector<std::vector<std::string>> stages;
    std::vector<std::string> last;
    std::optional<UnitKind> currentKind;
    for (const auto* u : ordered) {
        if (is_legend_or_title(u->kind)) {
            last.push_back(u->id);
            continue;
        }
        if (is_data_dependent(u->kind) && !stages.empty()) {
            stages.back().push_back(u->id);
            continue;
        }
        if (stages.empty() || currentKind != u->kind) {
            stages.emplace_back();
            currentKind = u->kind;
        }
        stages.back().push_back(u->id);
    }
    if (!last.empty())
        stages.push_back(std::move(last));
    return stages;
}

TimingConfig parse_timing(std::string_view text, std::int64_t stepMs)
{
    TimingConfig t;
    t.stepMs = stepMs;
    if (text == "animation")
        return t;
    constexpr std::string_view prefix = "fixed:";
    if (text.substr(0, prefix.size()) == prefix) {
        std::string_view num = text.substr(prefix.size());
        std::int64_t total = 0;
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), total);
        if (ec != std::errc() || ptr != num.data() + num.size())
            throw ChartError(ErrorCode::SchemaViolation, "invalid fixed total '" + std::string(num) + "'");
        t.mode = TimingConfig::Mode::Fixed;
        t.totalMs = total;
        return t;
    }
    throw ChartError(ErrorCode::SchemaViolation, "timing must be 'animation' or 'fixed:<ms>'");
}

std::string to_string(const TimingConfig& timing)
{
    if (timing.mode == TimingConfig::Mode::Animation)
        return "animation";
    return "fixed:" + std::to_string(timing.totalMs);
}

std::int64_t standing_time(UnitKind firstKind)
{
    if (is_data_change(firstKind))
        return kDataStandingMs;
    if (firstKind == UnitKind::ChangeChartType)
        return kChartTypeStandingMs;
    return 0;
}

void assign_timing(std::vector<Stage>& stages, const std::vector<UnitKind>& firstKinds, const TimingConfig& timing)
{
    std::int64_t perStep = timing.stepMs;
    std::int64_t remainder = 0;
    if (timing.mode == TimingConfig::Mode::Fixed) {
        if (timing.totalMs <= 0)
            throw ChartError(ErrorCode::NonPositiveTotal, "fixed total must be positive");
        std::int64_t steps = 0;
        for (const auto& s : stages)
            steps += s.steps;
        if (steps > 0) {
            perStep = timing.totalMs / steps;
            remainder = timing.totalMs - perStep * steps;
        }
    } else if (timing.stepMs < 0) {
        throw ChartError(ErrorCode::OutOfRange, "step duration must not be negative");
    }
    std::int64_t clock = 0;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        Stage& s = stages[i];
        s.standingBefore = standing_time(firstKinds[i]);
        s.start = clock + s.standingBefore;
        s.stepDurations.assign(static_cast<std::size_t>(s.steps), perStep);
        if (i + 1 == stages.size() && !s.stepDurations.empty())
            s.stepDurations.back() += remainder;
        s.duration = 0;
        for (auto d : s.stepDurations)
            s.duration += d;
        clock = s.start + s.duration;
    }
}

const TransitionUnit* TransitionPlan::unit(std::string_view id) const
{
    for (const auto& u : units)
        if (u.id == id)
            return &u;
    return nullptr;
}

Json to_json(const Stage& stage)
{
    Json j;
    j["id"] = stage.id;
    j["unitIds"] = stage.unitIds;
    Json kinds = Json::array();
    for (auto k : stage.kinds)
        kinds.push_back(to_string(k));
    j["kindLabels"] = kinds;
    j["start"] = stage.start;
    j["duration"] = stage.duration;
    j["steps"] = stage.steps;
    j["stepDurations"] = stage.stepDurations;
    j["standingBefore"] = stage.standingBefore;
    j["easing"] = to_string(stage.easing);
    Json effects = Json::object();
    for (const auto& id : stage.unitIds) {
        auto it = stage.effects.find(id);
        if (it != stage.effects.end())
            effects[id] = to_string(it->second);
    }
    j["effects"] = effects;
    return j;
}

Json to_json(const TransitionPlan& plan)
{
    Json j;
    Json stages = Json::array();
    for (const auto& s : plan.stages)
        stages.push_back(to_json(s));
    j["stages"] = stages;
    Json units = Json::array();
    for (const auto& u : plan.units)
        units.push_back(to_json(u));
    j["units"] = units;
    j["total"] = plan.total;
    j["config"] = plan.config;
    if (!plan.inputs.is_null())
        j["inputs"] = plan.inputs;
    return j;
}

std::string serialize_plan(const TransitionPlan& plan)
{
    return to_json(plan).dump(2) + "\n";
}

TransitionPlan plan_from_json(const Json& doc)
{
    TransitionPlan plan;
    try {
        for (const auto& u : doc.at("units")) {
            TransitionUnit unit;
            unit.id = u.at("id").get<std::string>();
            auto kind = parse_unit_kind(u.at("kind").get<std::string>());
            if (!kind)
                throw ChartError(ErrorCode::SchemaViolation, "unknown unit kind " + u.at("kind").dump());
            unit.kind = *kind;
            if (u.contains("dependsOn"))
                unit.dependsOn = u["dependsOn"].get<std::string>();
            unit.payload = u.value("payload", Json::object());
            plan.units.push_back(std::move(unit));
        }
        for (const auto& s : doc.at("stages")) {
            Stage stage;
            stage.id = s.at("id").get<std::string>();
            stage.unitIds = s.at("unitIds").get<std::vector<std::string>>();
            for (const auto& k : s.at("kindLabels")) {
                auto kind = parse_unit_kind(k.get<std::string>());
                if (!kind)
                    throw ChartError(ErrorCode::SchemaViolation, "unknown unit kind " + k.dump());
                stage.kinds.push_back(*kind);
            }
            stage.start = s.at("start").get<std::int64_t>();
            stage.duration = s.at("duration").get<std::int64_t>();
            stage.steps = s.at("steps").get<int>();
            stage.stepDurations = s.at("stepDurations").get<std::vector<std::int64_t>>();
            stage.standingBefore = s.at("standingBefore").get<std::int64_t>();
            auto easing = parse_easing(s.at("easing").get<std::string>());
            if (!easing)
                throw ChartError(ErrorCode::SchemaViolation, "unknown easing " + s.at("easing").dump());
            stage.easing = *easing;
            for (const auto& [id, e] : s.at("effects").items()) {
                auto effect = parse_effect(e.get<std::string>());
                if (!effect)
                    throw ChartError(ErrorCode::SchemaViolation, "unknown effect " + e.dump());
                stage.effects[id] = *effect;
            }
            plan.stages.push_back(std::move(stage));
        }
        plan.total = doc.at("total").get<std::int64_t>();
        plan.config = doc.value("config", Json::object());
        if (doc.contains("inputs"))
            plan.inputs = doc["inputs"];
    } catch (const nlohmann::json::exception& e) {
        throw ChartError(ErrorCode::MalformedDocument, std::string("malformed plan: ") + e.what());
    }
    return plan;
}

} // namespace chartmorph
