#ifndef CHARTMORPH_SPEC_IO_HPP
#define CHARTMORPH_SPEC_IO_HPP

#include "chartmorph/error.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace chartmorph {

using Json = nlohmann::ordered_json;

enum class ColumnRole { Dimension, Measure };
enum class ValueType { Categorical, Temporal, Numeric };

struct Column {
    std::string name;
    ColumnRole role = ColumnRole::Dimension;
    ValueType valueType = ValueType::Categorical;
    // Temporal columns only: pattern built from YYYY MM DD HH mm ss tokens.
    std::optional<std::string> format;

    bool operator==(const Column&) const = default;
};

// A cell keeps the JSON type it was written with so documents round-trip.
using Cell = std::variant<std::string, double>;

std::string cell_label(const Cell& cell);

struct DataTable {
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows; // rows[i][j] belongs to columns[j]

    std::optional<std::size_t> column_index(std::string_view name) const;
    const Column* find_column(std::string_view name) const;

    bool operator==(const DataTable&) const = default;
};

enum class ChartType { BarV, BarH, Line, Pie, Scatter };
enum class Aggregate { Sum, Avg, Count, None };
enum class SortBy { Measure, Label };

inline constexpr ChartType kAllChartTypes[] = {
    ChartType::BarV, ChartType::BarH, ChartType::Line, ChartType::Pie, ChartType::Scatter};

const char* to_string(ChartType type);
const char* to_string(Aggregate aggregate);
std::optional<ChartType> parse_chart_type(std::string_view text);
std::optional<Aggregate> parse_aggregate(std::string_view text);

struct MeasureRef {
    std::string column;
    Aggregate aggregate = Aggregate::Sum;

    bool operator==(const MeasureRef&) const = default;
};

struct SortOrder {
    SortBy by = SortBy::Measure;
    bool descending = false;

    bool operator==(const SortOrder&) const = default;
};

// Declared Merge/Split relation: `group` on one chart corresponds to
// `members` on the other, at dimension `column`.
struct LabelGroup {
    std::string column;
    std::string group;
    std::vector<std::string> members;

    bool operator==(const LabelGroup&) const = default;
};

struct ChartSpec {
    ChartType type = ChartType::BarV;
    std::optional<std::string> xDimension;
    std::optional<std::string> legendDimension;
    std::vector<MeasureRef> measures;
    std::optional<SortOrder> sortOrder;
    bool showXAxis = true;
    bool showYAxis = true;
    bool showLegend = true;
    std::string title;
    std::vector<LabelGroup> labelMap;

    // Mapped dimensions in tree-level order (x first, then legend).
    std::vector<std::string> dimensions() const;
    bool raw_values() const;

    bool operator==(const ChartSpec&) const = default;
};

struct ChartDocument {
    DataTable table;
    ChartSpec chart;

    bool operator==(const ChartDocument&) const = default;
};

struct ChartPair {
    ChartDocument source;
    ChartDocument target;
};

// Parses one chart document. Throws InputError listing every violation.
ChartDocument parse_chart_document(std::string_view text, const std::string& pathPrefix = "");
ChartDocument parse_chart_document(const Json& document, const std::string& pathPrefix = "");

// Parses both documents; violations of both are reported together with
// "source." / "target." path prefixes.
ChartPair parse_chart_pair(std::string_view sourceDoc, std::string_view targetDoc);

// Checks the ChartSpec invariants against the table. Returns an empty list
// iff the spec is usable.
//
// Supported encodings:
//
//   type     x         legend            measures  aggregate
//   barV     optional  needs x           >= 1      sum|avg|count
//   barH     optional  needs x           >= 1      sum|avg|count
//   line     required  optional          >= 1      sum|avg|count
//   pie      exactly one of x/legend     == 1      sum|avg|count
//   scatter  optional  needs x           >= 1      all none, or all sum|avg|count
//
// Pie measures must not hold negative values.
std::vector<Violation> validate_spec(const DataTable& table, const ChartSpec& spec);

Json to_json(const ChartDocument& document);
std::string serialize_document(const ChartDocument& document);

// Sort key for a temporal label under a declared format; nullopt when the
// label does not match the pattern.
std::optional<std::vector<int>> temporal_key(std::string_view label, std::string_view format);

} // namespace chartmorph

#endif
