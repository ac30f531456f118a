#include "chartmorph/effects.hpp"

#include <algorithm>

namespace chartmorph {

const char* to_string(Easing easing)
{
    return easing == Easing::Linear ? "linear" : "slowInSlowOut";
}

std::optional<Easing> parse_easing(std::string_view text)
{
    if (text == "linear")
        return Easing::Linear;
    if (text == "slowInSlowOut" || text == "in-out")
        return Easing::SlowInSlowOut;
    return std::nullopt;
}

double ease(Easing easing, double t)
{
    if (!(t >= 0 && t <= 1))
        throw ChartError(ErrorCode::OutOfRange, "easing input outside [0, 1]");
    if (easing == Easing::Linear)
        return t;
    if (t < 0.5)
        return 4 * t * t * t;
    double u = 1 - t;
    return 1 - 4 * u * u * u;
}

namespace {

constexpr const char* kEffectNames[] = {"fadeIn", "fadeOut", "wipe",  "flyIn",       "flyOut", "grow",
                                        "shrink", "move",    "morph", "colorChange", "tween"};

} // namespace

const char* to_string(EffectId effect)
{
    return kEffectNames[static_cast<std::size_t>(effect)];
}

std::optional<EffectId> parse_effect(std::string_view text)
{
    for (EffectId e : kAllEffects)
        if (text == to_string(e))
            return e;
    return std::nullopt;
}

const char* to_string(EffectCategory category)
{
    switch (category) {
    case EffectCategory::Entrance: return "entrance";
    case EffectCategory::Exit: return "exit";
    case EffectCategory::Update: return "update";
    }
    return "update";
}

EffectCategory category_of(UnitKind kind)
{
    switch (kind) {
    case UnitKind::AddDataItem:
    case UnitKind::AddSeries:
    case UnitKind::AddMeasure:
    case UnitKind::ShowXAxis:
    case UnitKind::ShowYAxis:
    case UnitKind::ShowLegend:
        return EffectCategory::Entrance;
    case UnitKind::RemoveDataItem:
    case UnitKind::RemoveSeries:
    case UnitKind::RemoveMeasure:
    case UnitKind::HideXAxis:
    case UnitKind::HideYAxis:
    case UnitKind::HideLegend:
        return EffectCategory::Exit;
    default:
        return EffectCategory::Update;
    }
}

EffectCategory category_of(EffectId effect)
{
    switch (effect) {
    case EffectId::FadeIn:
    case EffectId::Wipe:
    case EffectId::FlyIn:
    case EffectId::Grow:
        return EffectCategory::Entrance;
    case EffectId::FadeOut:
    case EffectId::FlyOut:
    case EffectId::Shrink:
        return EffectCategory::Exit;
    default:
        return EffectCategory::Update;
    }
}

std::vector<EffectId> allowed_effects(UnitKind kind)
{
    using E = EffectId;
    switch (category_of(kind)) {
    case EffectCategory::Entrance:
        return {E::FadeIn, E::Wipe, E::FlyIn, E::Grow};
    case EffectCategory::Exit:
        return {E::FadeOut, E::FlyOut, E::Shrink};
    case EffectCategory::Update:
        break;
    }
    switch (kind) {
    case UnitKind::AddDimension:
    case UnitKind::RemoveDimension:
        return {E::ColorChange, E::Morph};
    case UnitKind::MergeDataItem:
    case UnitKind::SplitDataItem:
    case UnitKind::AggregateDataItem:
    case UnitKind::DisaggregateDataItem:
        return {E::Move, E::Morph};
    case UnitKind::ValueChange:
        return {E::Tween, E::Morph};
    case UnitKind::Sort:
        return {E::Move};
    case UnitKind::ChangeChartType:
        return {E::Morph};
    default:
        return {E::Tween};
    }
}

EffectId default_binding(UnitKind kind, ChartType type)
{
    const bool area = is_area_type(type);
    switch (kind) {
    case UnitKind::AddDataItem:
    case UnitKind::AddSeries:
    case UnitKind::AddMeasure:
        return area ? EffectId::Grow : EffectId::FadeIn;
    case UnitKind::RemoveDataItem:
    case UnitKind::RemoveSeries:
    case UnitKind::RemoveMeasure:
        return area ? EffectId::Shrink : EffectId::FadeOut;
    case UnitKind::ShowXAxis:
    case UnitKind::ShowYAxis:
    case UnitKind::ShowLegend:
        return EffectId::FadeIn;
    case UnitKind::HideXAxis:
    case UnitKind::HideYAxis:
    case UnitKind::HideLegend:
        return EffectId::FadeOut;
    case UnitKind::Sort:
        if (!area)
            throw ChartError(ErrorCode::UnsupportedCombination,
                             std::string("Sort is not animated on ") + to_string(type) + " charts");
        return EffectId::Move;
    default:
        return allowed_effects(kind).front();
    }
}

void check_binding(UnitKind kind, EffectId effect, ChartType type)
{
    auto allowed = allowed_effects(kind);
    if (std::find(allowed.begin(), allowed.end(), effect) == allowed.end())
        throw ChartError(ErrorCode::UnsupportedCombination,
                         std::string("effect ") + to_string(effect) + " is not allowed for " + to_string(kind));
    if (kind == UnitKind::Sort && !is_area_type(type))
        throw ChartError(ErrorCode::UnsupportedCombination,
                         std::string("Sort is not animated on ") + to_string(type) + " charts");
}

const char* to_string(MorphStep step)
{
    switch (step) {
    case MorphStep::Morph: return "morph";
    case MorphStep::Move: return "move";
    case MorphStep::ShrinkWidth: return "shrinkWidth";
    case MorphStep::ShrinkToPoints: return "shrinkToPoints";
    case MorphStep::MoveToPositions: return "moveToPositions";
    case MorphStep::ExtendToLines: return "extendToLines";
    case MorphStep::ExpandToBars: return "expandToBars";
    case MorphStep::DirectMorphPointsToArcs: return "directMorphPointsToArcs";
    case MorphStep::DirectMorphArcsToPoints: return "directMorphArcsToPoints";
    }
    return "morph";
}

bool is_area_type(ChartType type)
{
    return type == ChartType::BarV || type == ChartType::BarH || type == ChartType::Pie;
}

std::vector<MorphStep> plan_mark_morph(ChartType from, ChartType to)
{
    using S = MorphStep;
    if (from == to)
        return {};
    const bool fromArea = is_area_type(from), toArea = is_area_type(to);
    if (fromArea == toArea)
        return {S::Morph, S::Move};
    if (from == ChartType::Pie)
        return {S::DirectMorphArcsToPoints};
    if (to == ChartType::Pie)
        return {S::DirectMorphPointsToArcs};
    if (fromArea)
        return {S::ShrinkWidth, S::ShrinkToPoints, S::MoveToPositions};
    return {S::MoveToPositions, S::ExtendToLines, S::ExpandToBars};
}

int step_count(UnitKind kind, EffectId effect, ChartType from, ChartType to)
{
    switch (kind) {
    case UnitKind::ChangeChartType:
        return std::max<int>(1, static_cast<int>(plan_mark_morph(from, to).size()));
    case UnitKind::MergeDataItem:
    case UnitKind::SplitDataItem:
    case UnitKind::AggregateDataItem:
    case UnitKind::DisaggregateDataItem:
        return effect == EffectId::Move ? 2 : 1;
    default:
        return 1;
    }
}

} // namespace chartmorph
