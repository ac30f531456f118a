#include "chartmorph/tree.hpp"
#include "chartmorph/util.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace chartmorph {

const Node* Node::child(std::string_view l) const
{
    for (const auto& c : children)
        if (c.label == l)
            return &c;
    return nullptr;
}

std::size_t ChartTree::dimension_count() const
{
    return static_cast<std::size_t>(std::count_if(levels.begin(), levels.end(), [](const Level& l) {
        return l.kind == LevelKind::Dimension;
    }));
}

std::vector<std::string> ChartTree::dimensions() const
{
    std::vector<std::string> dims;
    for (const auto& l : levels)
        if (l.kind == LevelKind::Dimension)
            dims.push_back(l.column);
    return dims;
}

bool ChartTree::has_raw() const
{
    return !levels.empty() && levels.back().kind == LevelKind::Raw;
}

std::optional<std::size_t> ChartTree::level_of(std::string_view column) const
{
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i].column == column)
            return i + 1;
    return std::nullopt;
}

const MeasureRef* ChartTree::measure(std::string_view name) const
{
    for (const auto& m : measures)
        if (m.column == name)
            return &m;
    return nullptr;
}

const std::string* Record::coord(std::string_view column) const
{
    for (const auto& [c, l] : coords)
        if (c == column)
            return &l;
    return nullptr;
}

void Record::set_coord(const std::string& column, std::string label)
{
    for (auto& [c, l] : coords)
        if (c == column) {
            l = std::move(label);
            return;
        }
    coords.emplace_back(column, std::move(label));
}

void Record::drop_coord(std::string_view column)
{
    std::erase_if(coords, [&](const auto& p) { return p.first == column; });
}

double combine_values(Aggregate aggregate, double a, double wa, double b, double wb)
{
    if (aggregate == Aggregate::Avg) {
        double w = wa + wb;
        return w > 0 ? (a * wa + b * wb) / w : 0.0;
    }
    return a + b;
}

namespace {

void collect_records(const Node& node, const std::vector<Level>& levels, std::size_t depth,
                     std::vector<std::pair<std::string, std::string>>& path, std::vector<Record>& out)
{
    if (depth == levels.size()) {
        out.push_back({path, node.value.value_or(0.0), node.weight});
        return;
    }
    for (const auto& child : node.children) {
        path.emplace_back(levels[depth].column, child.label);
        collect_records(child, levels, depth + 1, path, out);
        path.pop_back();
    }
}

Aggregate aggregate_for(const std::vector<MeasureRef>& measures, const std::string& name)
{
    for (const auto& m : measures)
        if (m.column == name)
            return m.aggregate == Aggregate::None ? Aggregate::Sum : m.aggregate;
    return Aggregate::Sum;
}

void group_into(Node& parent, const std::vector<const Record*>& records, const std::vector<Level>& levels,
                std::size_t depth, const std::vector<MeasureRef>& measures, const std::string& measureName)
{
    const Level& level = levels[depth];
    const bool leafLevel = depth + 1 == levels.size();
    if (level.kind == LevelKind::Raw) {
        for (std::size_t i = 0; i < records.size(); ++i) {
            Node leaf;
            leaf.label = std::to_string(i);
            leaf.value = records[i]->value;
            leaf.weight = records[i]->weight;
            parent.children.push_back(std::move(leaf));
        }
        return;
    }
    std::vector<std::string> order;
    std::map<std::string, std::vector<const Record*>> groups;
    for (const Record* r : records) {
        const std::string* l = r->coord(level.column);
        std::string label = l ? *l : std::string("*");
        auto [it, inserted] = groups.try_emplace(label);
        if (inserted)
            order.push_back(label);
        it->second.push_back(r);
    }
    for (const auto& label : order) {
        const auto& members = groups[label];
        Node child;
        child.label = label;
        const std::string& m = level.kind == LevelKind::Measure ? label : measureName;
        if (leafLevel) {
            Aggregate agg = aggregate_for(measures, m);
            double value = members.front()->value;
            double weight = members.front()->weight;
            for (std::size_t i = 1; i < members.size(); ++i) {
                value = combine_values(agg, value, weight, members[i]->value, members[i]->weight);
                weight += members[i]->weight;
            }
            child.value = value;
            child.weight = weight;
        } else {
            group_into(child, members, levels, depth + 1, measures, m);
        }
        parent.children.push_back(std::move(child));
    }
}

// Combined value of `measureName` over every leaf below `node`.
std::optional<double> subtree_total(const ChartTree& tree, const Node& node, std::size_t depth,
                                    const std::string& measureName)
{
    Aggregate agg = aggregate_for(tree.measures, measureName);
    std::optional<double> total;
    double weight = 0;
    std::function<void(const Node&, std::size_t, bool)> walk = [&](const Node& n, std::size_t d, bool inMeasure) {
        if (d == tree.depth()) {
            if (!inMeasure || !n.value)
                return;
            total = total ? combine_values(agg, *total, weight, *n.value, n.weight) : *n.value;
            weight += n.weight;
            return;
        }
        const Level& level = tree.levels[d];
        for (const auto& c : n.children) {
            bool in = inMeasure;
            if (level.kind == LevelKind::Measure)
                in = c.label == measureName;
            walk(c, d + 1, in);
        }
    };
    walk(node, depth, false);
    return total;
}

void sort_level(Node& node, std::size_t depth, std::size_t target,
                const std::function<void(std::vector<Node>&)>& sorter)
{
    if (depth + 1 == target) {
        sorter(node.children);
        return;
    }
    for (auto& c : node.children)
        sort_level(c, depth + 1, target, sorter);
}

bool nodes_equal(const Node& a, const Node& b, double relTol)
{
    if (a.label != b.label || a.children.size() != b.children.size())
        return false;
    if (a.value.has_value() != b.value.has_value())
        return false;
    if (a.value && !nearly_equal(*a.value, *b.value, relTol))
        return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!nodes_equal(a.children[i], b.children[i], relTol))
            return false;
    return true;
}

} // namespace

std::vector<Record> tree_records(const ChartTree& tree)
{
    std::vector<Record> out;
    std::vector<std::pair<std::string, std::string>> path;
    if (tree.levels.empty())
        return out;
    collect_records(tree.root, tree.levels, 0, path, out);
    return out;
}

ChartTree group_records(const std::vector<Record>& records, std::vector<Level> levels,
                        std::vector<MeasureRef> measures)
{
    ChartTree tree;
    tree.levels = std::move(levels);
    tree.measures = std::move(measures);
    tree.root.label = "*";
    if (tree.levels.empty() || records.empty())
        return tree;
    std::vector<const Record*> ptrs;
    ptrs.reserve(records.size());
    for (const auto& r : records)
        ptrs.push_back(&r);
    group_into(tree.root, ptrs, tree.levels, 0, tree.measures, "");
    return tree;
}

ChartTree build_tree(const DataTable& table, const ChartSpec& spec)
{
    std::vector<Level> levels;
    std::vector<std::size_t> dimIdx;
    for (const auto& d : spec.dimensions()) {
        levels.push_back(Level::dimension(d));
        auto idx = table.column_index(d);
        if (!idx)
            throw ChartError(ErrorCode::SemanticViolation, "unknown dimension '" + d + "'");
        dimIdx.push_back(*idx);
    }
    levels.push_back(Level::measure());
    const bool raw = spec.raw_values();
    if (raw)
        levels.push_back(Level::raw());

    std::vector<Record> records;
    records.reserve(table.rows.size() * spec.measures.size());
    for (const auto& row : table.rows) {
        for (const auto& m : spec.measures) {
            auto idx = table.column_index(m.column);
            if (!idx)
                throw ChartError(ErrorCode::SemanticViolation, "unknown measure '" + m.column + "'");
            Record r;
            for (std::size_t i = 0; i < dimIdx.size(); ++i)
                r.coords.emplace_back(levels[i].column, cell_label(row[dimIdx[i]]));
            r.coords.emplace_back(kMeasureColumn, m.column);
            if (m.aggregate == Aggregate::Count) {
                r.value = 1.0;
            } else {
                const auto* v = std::get_if<double>(&row[*idx]);
                if (!v)
                    throw ChartError(ErrorCode::AggregateOnNonNumeric,
                                     "measure '" + m.column + "' holds a non-numeric value");
                r.value = *v;
            }
            r.weight = 1.0;
            records.push_back(std::move(r));
        }
    }
    ChartTree tree = group_records(records, levels, spec.measures);

    // Measure siblings follow declaration order.
    std::size_t measureDepth = dimIdx.size() + 1;
    sort_level(tree.root, 0, measureDepth, [&](std::vector<Node>& nodes) {
        std::stable_sort(nodes.begin(), nodes.end(), [&](const Node& a, const Node& b) {
            auto pos = [&](const std::string& n) {
                for (std::size_t i = 0; i < spec.measures.size(); ++i)
                    if (spec.measures[i].column == n)
                        return i;
                return spec.measures.size();
            };
            return pos(a.label) < pos(b.label);
        });
    });

    for (std::size_t i = 0; i < dimIdx.size(); ++i) {
        const Column& col = table.columns[dimIdx[i]];
        std::size_t depth = i + 1;
        auto labelLess = [&col](const std::string& a, const std::string& b) {
            if (col.valueType == ValueType::Temporal && col.format) {
                auto ka = temporal_key(a, *col.format);
                auto kb = temporal_key(b, *col.format);
                if (ka && kb)
                    return *ka < *kb;
            }
            return a < b;
        };
        if (col.valueType == ValueType::Temporal) {
            sort_level(tree.root, 0, depth, [&](std::vector<Node>& nodes) {
                std::stable_sort(nodes.begin(), nodes.end(),
                                 [&](const Node& a, const Node& b) { return labelLess(a.label, b.label); });
            });
        }
        if (i == 0 && spec.sortOrder) {
            const SortOrder order = *spec.sortOrder;
            const std::string firstMeasure = spec.measures.front().column;
            sort_level(tree.root, 0, depth, [&](std::vector<Node>& nodes) {
                if (order.by == SortBy::Label) {
                    std::stable_sort(nodes.begin(), nodes.end(), [&](const Node& a, const Node& b) {
                        return order.descending ? labelLess(b.label, a.label) : labelLess(a.label, b.label);
                    });
                    return;
                }
                std::vector<std::pair<double, std::size_t>> keys;
                for (std::size_t k = 0; k < nodes.size(); ++k)
                    keys.emplace_back(subtree_total(tree, nodes[k], depth, firstMeasure).value_or(0.0), k);
                std::stable_sort(keys.begin(), keys.end(), [&](const auto& a, const auto& b) {
                    return order.descending ? a.first > b.first : a.first < b.first;
                });
                std::vector<Node> sorted;
                sorted.reserve(nodes.size());
                for (const auto& [_, k] : keys)
                    sorted.push_back(std::move(nodes[k]));
                nodes = std::move(sorted);
            });
        }
    }
    return tree;
}

bool tree_equal(const ChartTree& a, const ChartTree& b, double relTol)
{
    return a.levels == b.levels && nodes_equal(a.root, b.root, relTol);
}

std::string dump_tree(const ChartTree& tree)
{
    std::string out = "root\n";
    std::function<void(const Node&, std::size_t)> walk = [&](const Node& n, std::size_t depth) {
        for (const auto& c : n.children) {
            const Level& level = tree.levels[depth];
            out.append(2 * (depth + 1), ' ');
            out += level.kind == LevelKind::Dimension ? level.column
                   : level.kind == LevelKind::Measure ? std::string("measure")
                                                      : std::string("raw");
            out += ':';
            out += c.label;
            if (c.value)
                out += "=" + format_number(*c.value);
            out += '\n';
            walk(c, depth + 1);
        }
    };
    walk(tree.root, 0);
    return out;
}

} // namespace chartmorph
