#ifndef CHARTMORPH_DIFF_HPP
#define CHARTMORPH_DIFF_HPP

#include "chartmorph/layout.hpp"
#include "chartmorph/tree.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace chartmorph {

enum class UnitKind {
    AddDimension,
    RemoveDimension,
    AddMeasure,
    RemoveMeasure,
    AddSeries,
    RemoveSeries,
    AddDataItem,
    RemoveDataItem,
    SplitDataItem,
    MergeDataItem,
    Sort,
    ValueChange,
    AggregateDataItem,
    DisaggregateDataItem,
    ShowXAxis,
    HideXAxis,
    ShowYAxis,
    HideYAxis,
    ShowLegend,
    HideLegend,
    ChangeChartType,
    ChangeTitle,
    RescaleXAxis,
    RescaleYAxis,
    UpdateLegend,
};

inline constexpr std::size_t kUnitKindCount = 25;

const char* to_string(UnitKind kind);
std::optional<UnitKind> parse_unit_kind(std::string_view text);

bool is_data_change(UnitKind kind);
bool is_data_dependent(UnitKind kind);
bool is_visual_related(UnitKind kind);
// Units that shrink the data (played before a chart-type change).
bool is_removal_side(UnitKind kind);

// A column=label filter; an empty list addresses the whole tree.
using Constraints = std::vector<std::pair<std::string, std::string>>;

namespace op {

struct RemoveWhere { Constraints where; };
// Inserts the target records matching `where`, reshaped to the current levels.
struct InsertFrom { Constraints where; std::string column; };
struct RemoveLevel { std::string column; };
struct AddLevel { std::string column; std::size_t depth; };
struct MergeLabels { std::string column; std::string group; std::vector<std::string> members; };
struct SplitLabel { std::string column; std::string group; std::vector<std::string> members; };
struct SortLike { std::string column; };
struct SetValues { std::vector<std::pair<Constraints, double>> values; };

} // namespace op

using TreeOp = std::variant<op::RemoveWhere, op::InsertFrom, op::RemoveLevel, op::AddLevel, op::MergeLabels,
                            op::SplitLabel, op::SortLike, op::SetValues>;

struct TransitionUnit {
    std::string id; // "u0", "u1", ...
    UnitKind kind = UnitKind::ValueChange;
    Json payload = Json::object();
    std::optional<std::string> dependsOn;
    std::vector<TreeOp> ops;
};

struct EditScript {
    std::size_t alignedLevel = 0;
    std::vector<TransitionUnit> units; // canonical procedure order
};

// Largest N such that level descriptors 1..N agree (root is level 0).
std::size_t find_aligned_level(const ChartTree& a, const ChartTree& b);

struct DiffOptions {
    std::vector<LabelGroup> labelMap; // declared Merge/Split groupings
    bool inferPrefixGroups = true;
};

// Data-change units transforming `a` into `b`. Unit ids are assigned from
// `firstId` upward.
EditScript diff_trees(const ChartTree& a, const ChartTree& b, const DiffOptions& options = {},
                      std::size_t firstId = 0);

// Applies one op. `target` supplies the data for insertions and splits.
void apply_op(ChartTree& tree, const TreeOp& op, const ChartTree& target);
ChartTree replay(const ChartTree& source, const std::vector<const TransitionUnit*>& units,
                 const ChartTree& target);
ChartTree replay(const ChartTree& source, const EditScript& script, const ChartTree& target);

struct NodeEditContext {
    LevelKind levelKind = LevelKind::Dimension;
    bool removal = true;
    bool wholeLevel = false;
    bool lowestDimension = false;
    std::size_t dimensionCount = 0;
    // The label disappears (or appears) under every parent of its level.
    bool labelEverywhere = true;
};

struct Classification {
    UnitKind kind;
    bool ambiguous = false; // AmbiguousClassification: another kind was possible
};

Classification classify_node_edit(const NodeEditContext& context);

// Visual-related units from spec comparison (ids from `firstId`).
std::vector<TransitionUnit> detect_visual_units(const ChartSpec& a, const ChartSpec& b, std::size_t firstId = 0);

struct ChartFrame {
    CategoryDomain x;
    ValueDomain y;
    std::vector<std::string> legend;
    bool operator==(const ChartFrame&) const = default;
};

ChartFrame chart_frame(const ChartTree& tree, ChartType type);

// For each data unit (taken in the given order), replays it and emits
// RescaleXAxis / RescaleYAxis / UpdateLegend when the corresponding domain
// changed and the trigger kind admits it. Removal-side units are judged
// with the source chart type, the rest with the target type.
std::vector<TransitionUnit> derive_data_dependent_units(const std::vector<const TransitionUnit*>& dataUnits,
                                                        const ChartTree& source, const ChartTree& target,
                                                        ChartType sourceType, ChartType targetType,
                                                        std::size_t firstId);

Json to_json(const TransitionUnit& unit);
Json to_json(const CategoryDomain& domain);
Json to_json(const ValueDomain& domain);

} // namespace chartmorph

#endif
