#ifndef CHARTMORPH_EFFECTS_HPP
#define CHARTMORPH_EFFECTS_HPP

#include "chartmorph/diff.hpp"

#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace chartmorph {

enum class Easing { Linear, SlowInSlowOut };

const char* to_string(Easing easing);
// Accepts "linear", "slowInSlowOut" and "in-out".
std::optional<Easing> parse_easing(std::string_view text);
// Throws ChartError(OutOfRange) outside [0, 1].
double ease(Easing easing, double t);

enum class EffectId { FadeIn, FadeOut, Wipe, FlyIn, FlyOut, Grow, Shrink, Move, Morph, ColorChange, Tween };

inline constexpr EffectId kAllEffects[] = {EffectId::FadeIn, EffectId::FadeOut, EffectId::Wipe,   EffectId::FlyIn,
                                           EffectId::FlyOut, EffectId::Grow,    EffectId::Shrink, EffectId::Move,
                                           EffectId::Morph,  EffectId::ColorChange, EffectId::Tween};

const char* to_string(EffectId effect);
std::optional<EffectId> parse_effect(std::string_view text);

enum class EffectCategory { Entrance, Exit, Update };

const char* to_string(EffectCategory category);
EffectCategory category_of(UnitKind kind);
EffectCategory category_of(EffectId effect);

std::vector<EffectId> allowed_effects(UnitKind kind);
// Shipped default for a unit shown in a chart of `type`.
EffectId default_binding(UnitKind kind, ChartType type);
// Throws UnsupportedCombination when `effect` is not allowed for the pair.
void check_binding(UnitKind kind, EffectId effect, ChartType type);

enum class MorphStep {
    Morph,
    Move,
    ShrinkWidth,
    ShrinkToPoints,
    MoveToPositions,
    ExtendToLines,
    ExpandToBars,
    DirectMorphPointsToArcs,
    DirectMorphArcsToPoints,
};

const char* to_string(MorphStep step);

bool is_area_type(ChartType type);
std::vector<MorphStep> plan_mark_morph(ChartType from, ChartType to);

// Sequential animation steps a unit expands to.
int step_count(UnitKind kind, EffectId effect, ChartType from, ChartType to);

using EffectOverrides = std::map<UnitKind, EffectId>;

} // namespace chartmorph

#endif
