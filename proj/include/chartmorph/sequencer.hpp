#ifndef CHARTMORPH_SEQUENCER_HPP
#define CHARTMORPH_SEQUENCER_HPP

#include "chartmorph/diff.hpp"
#include "chartmorph/effects.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace chartmorph {

// One pairwise preference: every kind in `before` goes ahead of every kind
// in `after`.
struct Preference {
    std::string name;
    std::vector<UnitKind> before;
    std::vector<UnitKind> after;
};

struct PriorityTable {
    std::vector<Preference> rows;

    static PriorityTable defaults();
    // Copy with row `index` (0-based) reversed.
    PriorityTable flipped(std::size_t index) const;
    // Throws ChartError(CyclicPriority) when the induced kind relation has a cycle.
    void check() const;
    bool prefers(UnitKind a, UnitKind b) const;
};

// Rows as [{"before": [kinds], "after": [kinds]}].
PriorityTable priority_table_from_json(const Json& rows);
Json to_json(const PriorityTable& table);

// Data units ordered by the table (stable; ties keep the given order).
std::vector<const TransitionUnit*> sort_data_units(const std::vector<const TransitionUnit*>& dataUnits,
                                                   const PriorityTable& table);

// Full presentation order: data units with their dependent units right
// behind them, removals before additions around ChangeChartType, axis
// hide/show next to the type change, legend and title units last.
std::vector<const TransitionUnit*> order_units(const std::vector<const TransitionUnit*>& dataUnits,
                                               const std::vector<const TransitionUnit*>& dependentUnits,
                                               const std::vector<const TransitionUnit*>& visualUnits,
                                               const PriorityTable& table);

bool is_legend_or_title(UnitKind kind);

// Untimed stages as lists of unit ids.
std::vector<std::vector<std::string>> group_units(const std::vector<const TransitionUnit*>& ordered);

struct TimingConfig {
    enum class Mode { Animation, Fixed };
    Mode mode = Mode::Animation;
    std::int64_t stepMs = 500;
    std::int64_t totalMs = 0; // fixed mode only
};

// "animation" or "fixed:<ms>".
TimingConfig parse_timing(std::string_view text, std::int64_t stepMs = 500);
std::string to_string(const TimingConfig& timing);

struct Stage {
    std::string id;
    std::vector<std::string> unitIds;
    std::vector<UnitKind> kinds; // distinct, in unit order
    std::int64_t start = 0;
    std::int64_t duration = 0;
    std::int64_t standingBefore = 0;
    int steps = 1;
    std::vector<std::int64_t> stepDurations;
    Easing easing = Easing::Linear;
    std::map<std::string, EffectId> effects; // unit id -> effect
};

inline constexpr std::int64_t kDataStandingMs = 1000;
inline constexpr std::int64_t kChartTypeStandingMs = 500;

// Standing time before a stage whose first unit has `kind`.
std::int64_t standing_time(UnitKind firstKind);

// Fills start, duration, standingBefore and stepDurations from `steps` and
// the first unit kind of each stage. Throws NonPositiveTotal in fixed mode
// with totalMs <= 0.
void assign_timing(std::vector<Stage>& stages, const std::vector<UnitKind>& firstKinds, const TimingConfig& timing);

struct TransitionPlan {
    std::vector<Stage> stages;
    std::vector<TransitionUnit> units; // presentation order
    std::int64_t total = 0;
    Json config = Json::object();
    Json inputs; // null unless embedded

    const TransitionUnit* unit(std::string_view id) const;
};

Json to_json(const Stage& stage);
Json to_json(const TransitionPlan& plan);
std::string serialize_plan(const TransitionPlan& plan);
// Reads a document written by serialize_plan (unit ops are not restored).
TransitionPlan plan_from_json(const Json& document);

} // namespace chartmorph

#endif
