#ifndef CHARTMORPH_TREE_HPP
#define CHARTMORPH_TREE_HPP

#include "chartmorph/spec_io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chartmorph {

enum class LevelKind { Dimension, Measure, Raw };

// Pseudo-columns used when addressing the measure and raw-value levels.
inline const std::string kMeasureColumn = "#measure";
inline const std::string kRawColumn = "#raw";

struct Level {
    LevelKind kind = LevelKind::Dimension;
    std::string column; // dimension name; kMeasureColumn / kRawColumn otherwise

    static Level dimension(std::string name) { return {LevelKind::Dimension, std::move(name)}; }
    static Level measure() { return {LevelKind::Measure, kMeasureColumn}; }
    static Level raw() { return {LevelKind::Raw, kRawColumn}; }

    bool operator==(const Level&) const = default;
};

struct Node {
    std::string label;
    std::vector<Node> children;
    std::optional<double> value; // leaves only
    double weight = 0;           // number of source rows behind a leaf

    const Node* child(std::string_view label) const;
};

// Root = whole table (depth 0); levels[i] describes the nodes at depth i+1.
// Leaves sit at depth levels.size().
struct ChartTree {
    std::vector<Level> levels;
    std::vector<MeasureRef> measures; // declared order; aggregate drives merges
    Node root;

    std::size_t depth() const { return levels.size(); }
    std::size_t dimension_count() const;
    std::vector<std::string> dimensions() const;
    bool has_raw() const;
    std::optional<std::size_t> level_of(std::string_view column) const; // 1-based depth
    const MeasureRef* measure(std::string_view name) const;
};

ChartTree build_tree(const DataTable& table, const ChartSpec& spec);

bool tree_equal(const ChartTree& a, const ChartTree& b, double relTol = 1e-9);

// One node per line, indented two spaces per depth: `level:label` for inner
// nodes and `level:label=value` for leaves.
std::string dump_tree(const ChartTree& tree);

// Flat view of a tree: one record per leaf, carrying the labels of every
// level on its path (dimension columns, kMeasureColumn, kRawColumn).
struct Record {
    std::vector<std::pair<std::string, std::string>> coords;
    double value = 0;
    double weight = 0;

    const std::string* coord(std::string_view column) const;
    void set_coord(const std::string& column, std::string label);
    void drop_coord(std::string_view column);
};

std::vector<Record> tree_records(const ChartTree& tree);

// Rebuilds a tree with the given levels from records. Siblings appear in
// first-appearance order; records sharing a full path are combined with the
// measure's aggregate (sum/count add, avg is row-weighted). Coordinates for
// levels a record lacks become "*". Raw leaves are renumbered 0..k-1 per
// measure node.
ChartTree group_records(const std::vector<Record>& records, std::vector<Level> levels,
                        std::vector<MeasureRef> measures);

double combine_values(Aggregate aggregate, double a, double wa, double b, double wb);

} // namespace chartmorph

#endif
