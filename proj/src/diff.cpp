#include "chartmorph/diff.hpp"
#include "chartmorph/util.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace chartmorph {

namespace {

constexpr const char* kKindNames[kUnitKindCount] = {
    "AddDimension",   "RemoveDimension", "AddMeasure",     "RemoveMeasure",        "AddSeries",
    "RemoveSeries",   "AddDataItem",     "RemoveDataItem", "SplitDataItem",        "MergeDataItem",
    "Sort",           "ValueChange",     "AggregateDataItem", "DisaggregateDataItem", "ShowXAxis",
    "HideXAxis",      "ShowYAxis",       "HideYAxis",      "ShowLegend",           "HideLegend",
    "ChangeChartType", "ChangeTitle",    "RescaleXAxis",   "RescaleYAxis",         "UpdateLegend",
};

} // namespace

const char* to_string(UnitKind kind)
{
    return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<UnitKind> parse_unit_kind(std::string_view text)
{
    for (std::size_t i = 0; i < kUnitKindCount; ++i)
        if (text == kKindNames[i])
            return static_cast<UnitKind>(i);
    return std::nullopt;
}

bool is_data_change(UnitKind kind)
{
    return static_cast<std::size_t>(kind) <= static_cast<std::size_t>(UnitKind::DisaggregateDataItem);
}

bool is_data_dependent(UnitKind kind)
{
    return kind == UnitKind::RescaleXAxis || kind == UnitKind::RescaleYAxis || kind == UnitKind::UpdateLegend;
}

bool is_visual_related(UnitKind kind)
{
    return !is_data_change(kind) && !is_data_dependent(kind);
}

bool is_removal_side(UnitKind kind)
{
    switch (kind) {
    case UnitKind::RemoveDimension:
    case UnitKind::RemoveMeasure:
    case UnitKind::RemoveSeries:
    case UnitKind::RemoveDataItem:
    case UnitKind::MergeDataItem:
    case UnitKind::AggregateDataItem:
        return true;
    default:
        return false;
    }
}

// ---------------------------------------------------------------------------
// Tree helpers

namespace {

bool matches(const Record& r, const Constraints& where)
{
    for (const auto& [c, l] : where) {
        const std::string* v = r.coord(c);
        if (!v || *v != l)
            return false;
    }
    return true;
}

// Constraints restricted to columns the tree has.
Constraints restrict_to(const Constraints& where, const ChartTree& tree)
{
    Constraints out;
    for (const auto& p : where)
        if (tree.level_of(p.first))
            out.push_back(p);
    return out;
}

using NodeVisitor = std::function<void(const Constraints&, const Node&)>;

void each_node_at(const ChartTree& tree, std::size_t depth, const NodeVisitor& visit)
{
    Constraints path;
    std::function<void(const Node&, std::size_t)> walk = [&](const Node& n, std::size_t d) {
        if (d == depth) {
            visit(path, n);
            return;
        }
        for (const auto& c : n.children) {
            path.emplace_back(tree.levels[d].column, c.label);
            walk(c, d + 1);
            path.pop_back();
        }
    };
    walk(tree.root, 0);
}

std::vector<std::string> labels_at(const ChartTree& tree, std::size_t depth)
{
    std::vector<std::string> out;
    std::set<std::string> seen;
    each_node_at(tree, depth, [&](const Constraints&, const Node& n) {
        if (seen.insert(n.label).second)
            out.push_back(n.label);
    });
    return out;
}

const Node* find_path(const Node& root, const Constraints& path)
{
    const Node* n = &root;
    for (const auto& p : path) {
        n = n->child(p.second);
        if (!n)
            return nullptr;
    }
    return n;
}

Node* find_path_mut(Node& root, const Constraints& path)
{
    return const_cast<Node*>(find_path(root, path));
}

std::string path_key(const Constraints& path)
{
    std::string out;
    for (const auto& [c, l] : path) {
        out += c;
        out += '=';
        out += l;
        out += '\x1f';
    }
    return out;
}

std::set<std::string> present_measures(const std::vector<Record>& records)
{
    std::set<std::string> out;
    for (const auto& r : records)
        if (const std::string* m = r.coord(kMeasureColumn))
            out.insert(*m);
    return out;
}

// Keeps tree.measures in step with the measures present in `records`.
void sync_measures(ChartTree& tree, const std::vector<Record>& records, const ChartTree& target)
{
    std::set<std::string> present = present_measures(records);
    std::erase_if(tree.measures, [&](const MeasureRef& m) { return !present.count(m.column); });
    for (const auto& name : present) {
        if (tree.measure(name))
            continue;
        MeasureRef ref{name, Aggregate::Sum};
        if (const MeasureRef* t = target.measure(name))
            ref = *t;
        if (tree.has_raw())
            ref.aggregate = Aggregate::None;
        else if (ref.aggregate == Aggregate::None)
            ref.aggregate = Aggregate::Sum;
        // Place after the nearest measure that precedes it in the target.
        std::size_t pos = 0;
        for (const auto& tm : target.measures) {
            if (tm.column == name)
                break;
            for (std::size_t i = 0; i < tree.measures.size(); ++i)
                if (tree.measures[i].column == tm.column)
                    pos = i + 1;
        }
        tree.measures.insert(tree.measures.begin() + static_cast<std::ptrdiff_t>(pos), ref);
    }
}

void rebuild(ChartTree& tree, const std::vector<Record>& records, const ChartTree& target)
{
    ChartTree rebuilt = group_records(records, tree.levels, tree.measures);
    tree.root = std::move(rebuilt.root);
    sync_measures(tree, records, target);
}

Record project(const Record& r, const std::vector<Level>& levels)
{
    Record out;
    out.value = r.value;
    out.weight = r.weight;
    for (const auto& level : levels) {
        const std::string* v = r.coord(level.column);
        if (v)
            out.coords.emplace_back(level.column, *v);
        else
            out.coords.emplace_back(level.column, level.kind == LevelKind::Raw ? "0" : "*");
    }
    return out;
}

// Labels of `column` among target records under `parent`, in target order.
std::vector<std::string> target_order(const ChartTree& target, const Constraints& parent, const std::string& column)
{
    std::vector<std::string> out;
    if (!target.level_of(column))
        return out;
    Constraints where = restrict_to(parent, target);
    std::set<std::string> seen;
    for (const auto& r : tree_records(target)) {
        if (!matches(r, where))
            continue;
        const std::string* l = r.coord(column);
        if (l && seen.insert(*l).second)
            out.push_back(*l);
    }
    return out;
}

std::size_t rank_in(const std::vector<std::string>& order, const std::string& label)
{
    auto it = std::find(order.begin(), order.end(), label);
    return it == order.end() ? order.size() : static_cast<std::size_t>(it - order.begin());
}

// Moves the children listed as new next to their target neighbours.
void place_new_children(ChartTree& tree, const std::string& column, const std::set<std::string>& before,
                        const ChartTree& target)
{
    auto depth = tree.level_of(column);
    if (!depth)
        return;
    std::vector<Constraints> parents;
    each_node_at(tree, *depth - 1, [&](const Constraints& path, const Node&) { parents.push_back(path); });
    for (const auto& parentPath : parents) {
        Node* parent = find_path_mut(tree.root, parentPath);
        std::vector<std::string> order = target_order(target, parentPath, column);
        std::vector<Node> kept, added;
        for (auto& c : parent->children) {
            Constraints p = parentPath;
            p.emplace_back(column, c.label);
            (before.count(path_key(p)) ? kept : added).push_back(std::move(c));
        }
        std::stable_sort(added.begin(), added.end(), [&](const Node& a, const Node& b) {
            return rank_in(order, a.label) < rank_in(order, b.label);
        });
        std::vector<Node> result = std::move(kept);
        for (auto& n : added) {
            std::size_t r = rank_in(order, n.label);
            std::size_t pos = 0;
            for (std::size_t i = 0; i < result.size(); ++i)
                if (rank_in(order, result[i].label) < r)
                    pos = i + 1;
            result.insert(result.begin() + static_cast<std::ptrdiff_t>(pos), std::move(n));
        }
        parent->children = std::move(result);
    }
}

std::set<std::string> node_keys_at(const ChartTree& tree, std::size_t depth)
{
    std::set<std::string> out;
    each_node_at(tree, depth, [&](const Constraints& p, const Node&) { out.insert(path_key(p)); });
    return out;
}

// Target records restricted to the measures usable in `tree`.
std::vector<Record> usable_target_records(const ChartTree& tree, const ChartTree& target, const Constraints& where)
{
    std::vector<Record> current = tree_records(tree);
    std::set<std::string> measures = present_measures(current);
    std::string explicitMeasure;
    for (const auto& [c, l] : where)
        if (c == kMeasureColumn)
            explicitMeasure = l;
    std::vector<Record> out;
    for (const auto& r : tree_records(target)) {
        if (!matches(r, where))
            continue;
        const std::string* m = r.coord(kMeasureColumn);
        if (!measures.empty() && m && !measures.count(*m) && *m != explicitMeasure)
            continue;
        out.push_back(r);
    }
    return out;
}

void apply_remove_where(ChartTree& tree, const op::RemoveWhere& o, const ChartTree& target)
{
    std::vector<Record> records = tree_records(tree);
    std::erase_if(records, [&](const Record& r) { return matches(r, o.where); });
    rebuild(tree, records, target);
}

void apply_insert_from(ChartTree& tree, const op::InsertFrom& o, const ChartTree& target)
{
    auto depth = tree.level_of(o.column);
    std::set<std::string> before = depth ? node_keys_at(tree, *depth) : std::set<std::string>{};
    std::vector<Record> records = tree_records(tree);
    for (const auto& r : usable_target_records(tree, target, o.where))
        records.push_back(project(r, tree.levels));
    rebuild(tree, records, target);
    place_new_children(tree, o.column, before, target);
}

void apply_remove_level(ChartTree& tree, const op::RemoveLevel& o, const ChartTree& target)
{
    auto depth = tree.level_of(o.column);
    if (!depth)
        return;
    std::vector<Record> records = tree_records(tree);
    for (auto& r : records)
        r.drop_coord(o.column);
    tree.levels.erase(tree.levels.begin() + static_cast<std::ptrdiff_t>(*depth - 1));
    if (o.column == kRawColumn) {
        for (auto& m : tree.measures) {
            const MeasureRef* t = target.measure(m.column);
            m.aggregate = t && t->aggregate != Aggregate::None ? t->aggregate : Aggregate::Sum;
        }
    }
    rebuild(tree, records, target);
}

void apply_add_level(ChartTree& tree, const op::AddLevel& o, const ChartTree& target)
{
    if (tree.level_of(o.column))
        return;
    std::size_t index = std::min(o.depth == 0 ? 0 : o.depth - 1, tree.levels.size());
    std::vector<Level> levels = tree.levels;
    Level added = o.column == kRawColumn ? Level::raw() : Level::dimension(o.column);
    levels.insert(levels.begin() + static_cast<std::ptrdiff_t>(index), added);

    std::vector<Record> current = tree_records(tree);
    std::vector<std::string> prefixCols;
    for (std::size_t i = 0; i < index; ++i)
        prefixCols.push_back(tree.levels[i].column);
    // Current records grouped by the coordinates above the new level.
    std::vector<Constraints> prefixes;
    std::map<std::string, std::vector<const Record*>> byPrefix;
    for (const auto& r : current) {
        Constraints p;
        for (const auto& c : prefixCols)
            p.emplace_back(c, *r.coord(c));
        auto [it, inserted] = byPrefix.try_emplace(path_key(p));
        if (inserted)
            prefixes.push_back(p);
        it->second.push_back(&r);
    }
    std::set<std::string> measures = present_measures(current);
    std::vector<Record> targetRecords = tree_records(target);
    std::vector<Record> out;
    for (const auto& p : prefixes) {
        bool unmatched = false;
        for (const auto& c : p)
            if (!target.level_of(c.first))
                unmatched = true;
        std::size_t start = out.size();
        if (!unmatched) {
            for (const auto& r : targetRecords) {
                if (!matches(r, p))
                    continue;
                const std::string* m = r.coord(kMeasureColumn);
                if (m && !measures.count(*m))
                    continue;
                out.push_back(project(r, levels));
            }
        }
        if (out.size() == start) {
            for (const Record* r : byPrefix[path_key(p)]) {
                Record copy = *r;
                copy.set_coord(o.column, o.column == kRawColumn ? "0" : "*");
                out.push_back(project(copy, levels));
            }
        }
    }
    tree.levels = std::move(levels);
    if (o.column == kRawColumn)
        for (auto& m : tree.measures)
            m.aggregate = Aggregate::None;
    rebuild(tree, out, target);
}

void apply_merge(ChartTree& tree, const op::MergeLabels& o, const ChartTree& target)
{
    std::vector<Record> records = tree_records(tree);
    for (auto& r : records) {
        const std::string* l = r.coord(o.column);
        if (l && std::find(o.members.begin(), o.members.end(), *l) != o.members.end())
            r.set_coord(o.column, o.group);
    }
    rebuild(tree, records, target);
}

void apply_split(ChartTree& tree, const op::SplitLabel& o, const ChartTree& target)
{
    auto depth = tree.level_of(o.column);
    if (!depth)
        return;
    std::vector<Record> records = tree_records(tree);
    std::vector<Record> targetRecords = tree_records(target);
    std::set<std::string> measures = present_measures(records);
    std::vector<Record> out;
    std::set<std::string> doneContexts;
    for (const auto& r : records) {
        const std::string* l = r.coord(o.column);
        if (!l || *l != o.group) {
            out.push_back(r);
            continue;
        }
        Constraints context;
        for (std::size_t i = 0; i + 1 < *depth; ++i)
            context.emplace_back(tree.levels[i].column, *r.coord(tree.levels[i].column));
        std::string key = path_key(context);
        if (doneContexts.count(key))
            continue;
        doneContexts.insert(key);
        Constraints where = restrict_to(context, target);
        std::vector<Record> replacement;
        for (const auto& t : targetRecords) {
            const std::string* tl = t.coord(o.column);
            if (!tl || std::find(o.members.begin(), o.members.end(), *tl) == o.members.end())
                continue;
            const std::string* m = t.coord(kMeasureColumn);
            if (m && !measures.count(*m))
                continue;
            if (!matches(t, where) || where.size() != context.size())
                continue;
            replacement.push_back(project(t, tree.levels));
        }
        if (replacement.empty()) {
            for (const auto& same : records) {
                Constraints c2;
                const std::string* sl = same.coord(o.column);
                if (!sl || *sl != o.group)
                    continue;
                for (std::size_t i = 0; i + 1 < *depth; ++i)
                    c2.emplace_back(tree.levels[i].column, *same.coord(tree.levels[i].column));
                if (path_key(c2) == key)
                    out.push_back(same);
            }
        } else {
            out.insert(out.end(), replacement.begin(), replacement.end());
        }
    }
    rebuild(tree, out, target);
}

void apply_sort(ChartTree& tree, const op::SortLike& o, const ChartTree& target)
{
    auto depth = tree.level_of(o.column);
    if (!depth)
        return;
    std::vector<Constraints> parents;
    each_node_at(tree, *depth - 1, [&](const Constraints& path, const Node&) { parents.push_back(path); });
    for (const auto& parentPath : parents) {
        Node* parent = find_path_mut(tree.root, parentPath);
        std::vector<std::string> order;
        const Node* tp = target.levels.size() >= *depth &&
                                 std::equal(tree.levels.begin(), tree.levels.begin() + static_cast<std::ptrdiff_t>(*depth),
                                            target.levels.begin())
                             ? find_path(target.root, parentPath)
                             : nullptr;
        if (tp)
            for (const auto& c : tp->children)
                order.push_back(c.label);
        else
            order = target_order(target, {}, o.column);
        std::stable_sort(parent->children.begin(), parent->children.end(), [&](const Node& a, const Node& b) {
            return rank_in(order, a.label) < rank_in(order, b.label);
        });
    }
}

void apply_set_values(ChartTree& tree, const op::SetValues& o)
{
    for (const auto& [path, value] : o.values)
        if (Node* n = find_path_mut(tree.root, path); n && n->value)
            n->value = value;
}

} // namespace

void apply_op(ChartTree& tree, const TreeOp& op, const ChartTree& target)
{
    std::visit(
        [&](const auto& o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, op::RemoveWhere>)
                apply_remove_where(tree, o, target);
            else if constexpr (std::is_same_v<T, op::InsertFrom>)
                apply_insert_from(tree, o, target);
            else if constexpr (std::is_same_v<T, op::RemoveLevel>)
                apply_remove_level(tree, o, target);
            else if constexpr (std::is_same_v<T, op::AddLevel>)
                apply_add_level(tree, o, target);
            else if constexpr (std::is_same_v<T, op::MergeLabels>)
                apply_merge(tree, o, target);
            else if constexpr (std::is_same_v<T, op::SplitLabel>)
                apply_split(tree, o, target);
            else if constexpr (std::is_same_v<T, op::SortLike>)
                apply_sort(tree, o, target);
            else
                apply_set_values(tree, o);
        },
        op);
}

ChartTree replay(const ChartTree& source, const std::vector<const TransitionUnit*>& units, const ChartTree& target)
{
    ChartTree tree = source;
    for (const TransitionUnit* u : units)
        for (const auto& o : u->ops)
            apply_op(tree, o, target);
    return tree;
}

ChartTree replay(const ChartTree& source, const EditScript& script, const ChartTree& target)
{
    std::vector<const TransitionUnit*> units;
    for (const auto& u : script.units)
        units.push_back(&u);
    return replay(source, units, target);
}

std::size_t find_aligned_level(const ChartTree& a, const ChartTree& b)
{
    std::size_t n = 0;
    while (n < a.levels.size() && n < b.levels.size() && a.levels[n] == b.levels[n])
        ++n;
    return n;
}

Classification classify_node_edit(const NodeEditContext& c)
{
    if (c.wholeLevel) {
        if (c.levelKind == LevelKind::Raw)
            return {c.removal ? UnitKind::AggregateDataItem : UnitKind::DisaggregateDataItem};
        if (c.levelKind == LevelKind::Measure)
            return {c.removal ? UnitKind::RemoveMeasure : UnitKind::AddMeasure};
        if (c.removal && c.dimensionCount == 1)
            return {UnitKind::MergeDataItem, true};
        return {c.removal ? UnitKind::RemoveDimension : UnitKind::AddDimension};
    }
    if (c.levelKind == LevelKind::Measure && c.labelEverywhere)
        return {c.removal ? UnitKind::RemoveMeasure : UnitKind::AddMeasure};
    if (c.levelKind == LevelKind::Dimension && c.lowestDimension && c.dimensionCount >= 2) {
        if (c.labelEverywhere)
            return {c.removal ? UnitKind::RemoveSeries : UnitKind::AddSeries};
        return {c.removal ? UnitKind::RemoveDataItem : UnitKind::AddDataItem, true};
    }
    return {c.removal ? UnitKind::RemoveDataItem : UnitKind::AddDataItem};
}

// ---------------------------------------------------------------------------
// diff_trees

namespace {

Json path_json(const Constraints& path)
{
    Json out = Json::array();
    for (const auto& [c, l] : path)
        out.push_back(Json{{"column", c}, {"label", l}});
    return out;
}

struct Differ {
    const ChartTree& target;
    const DiffOptions& options;
    std::size_t nextId;
    ChartTree cur;
    std::vector<TransitionUnit> units;

    TransitionUnit& emit(UnitKind kind, Json payload, std::vector<TreeOp> ops)
    {
        TransitionUnit u;
        u.id = "u" + std::to_string(nextId++);
        u.kind = kind;
        u.payload = std::move(payload);
        u.ops = std::move(ops);
        for (const auto& o : u.ops)
            apply_op(cur, o, target);
        units.push_back(std::move(u));
        return units.back();
    }

    std::size_t leading_shared_dimensions() const
    {
        std::size_t n = find_aligned_level(cur, target);
        std::size_t k = 0;
        while (k < n && cur.levels[k].kind == LevelKind::Dimension)
            ++k;
        return k;
    }

    void merge_split()
    {
        std::size_t shared = leading_shared_dimensions();
        for (std::size_t d = 1; d <= shared; ++d) {
            const std::string column = cur.levels[d - 1].column;
            std::vector<std::string> la = labels_at(cur, d), lb = labels_at(target, d);
            std::set<std::string> sa(la.begin(), la.end()), sb(lb.begin(), lb.end());
            std::vector<LabelGroup> merges, splits;
            auto consider = [&](const LabelGroup& g) {
                if (g.column != column || g.members.empty())
                    return;
                bool membersInA = std::all_of(g.members.begin(), g.members.end(), [&](auto& m) { return sa.count(m); });
                bool membersInB = std::all_of(g.members.begin(), g.members.end(), [&](auto& m) { return sb.count(m); });
                bool noneInA = std::none_of(g.members.begin(), g.members.end(), [&](auto& m) { return sa.count(m); });
                bool noneInB = std::none_of(g.members.begin(), g.members.end(), [&](auto& m) { return sb.count(m); });
                if (sb.count(g.group) && !sa.count(g.group) && membersInA && noneInB)
                    merges.push_back(g);
                else if (sa.count(g.group) && !sb.count(g.group) && membersInB && noneInA)
                    splits.push_back(g);
            };
            for (const auto& g : options.labelMap)
                consider(g);
            if (options.inferPrefixGroups && merges.empty() && splits.empty()) {
                auto infer = [&](const std::vector<std::string>& groupsSide, const std::set<std::string>& groupsOther,
                                 const std::vector<std::string>& memberSide, const std::set<std::string>& memberOther) {
                    std::vector<LabelGroup> found;
                    std::vector<std::string> candidates;
                    for (const auto& g : groupsSide)
                        if (!groupsOther.count(g))
                            candidates.push_back(g);
                    for (const auto& g : candidates) {
                        LabelGroup lg{column, g, {}};
                        for (const auto& m : memberSide) {
                            if (memberOther.count(m) || m.size() <= g.size() || m.compare(0, g.size(), g) != 0)
                                continue;
                            bool unique = std::none_of(candidates.begin(), candidates.end(), [&](const auto& o) {
                                return o != g && m.size() > o.size() && m.compare(0, o.size(), o) == 0;
                            });
                            if (unique)
                                lg.members.push_back(m);
                        }
                        if (lg.members.size() >= 2)
                            found.push_back(lg);
                    }
                    return found;
                };
                for (auto& g : infer(lb, sa, la, sb))
                    consider(g);
                for (auto& g : infer(la, sb, lb, sa))
                    consider(g);
            }
            for (const auto& g : merges)
                emit(UnitKind::MergeDataItem, {{"column", column}, {"group", g.group}, {"members", g.members}},
                     {op::MergeLabels{column, g.group, g.members}});
            for (const auto& g : splits)
                emit(UnitKind::SplitDataItem, {{"column", column}, {"group", g.group}, {"members", g.members}},
                     {op::SplitLabel{column, g.group, g.members}});
        }
    }

    // Node removal (or addition) at depths [1, maxDepth] where cur and target
    // share level descriptors.
    void reconcile(bool removal, std::size_t maxDepth)
    {
        for (std::size_t d = 1; d <= maxDepth && d <= cur.levels.size() && d <= target.levels.size(); ++d) {
            if (cur.levels[d - 1] != target.levels[d - 1])
                break;
            const ChartTree& from = removal ? cur : target;
            const ChartTree& other = removal ? target : cur;
            const Level level = cur.levels[d - 1];
            std::vector<std::string> otherLabels = labels_at(other, d);
            std::set<std::string> otherSet(otherLabels.begin(), otherLabels.end());

            std::vector<std::string> labelOrder;
            std::map<std::string, std::vector<Constraints>> missing;
            each_node_at(from, d, [&](const Constraints& path, const Node&) {
                Constraints parent(path.begin(), path.end() - 1);
                if (!find_path(other.root, parent) || find_path(other.root, path))
                    return;
                auto [it, inserted] = missing.try_emplace(path.back().second);
                if (inserted)
                    labelOrder.push_back(path.back().second);
                it->second.push_back(path);
            });
            // Raw leaves are renumbered on regrouping: drop the highest index first.
            if (removal && level.kind == LevelKind::Raw)
                std::sort(labelOrder.begin(), labelOrder.end(),
                          [](const std::string& x, const std::string& y) { return std::stoul(x) > std::stoul(y); });
            std::size_t dims = cur.dimension_count();
            for (const auto& label : labelOrder) {
                NodeEditContext ctx;
                ctx.levelKind = level.kind;
                ctx.removal = removal;
                ctx.lowestDimension = level.kind == LevelKind::Dimension && d == dims;
                ctx.dimensionCount = dims;
                ctx.labelEverywhere = !otherSet.count(label);
                Classification cls = classify_node_edit(ctx);
                bool byLabel = cls.kind == UnitKind::RemoveSeries || cls.kind == UnitKind::AddSeries ||
                               cls.kind == UnitKind::RemoveMeasure || cls.kind == UnitKind::AddMeasure;
                if (byLabel) {
                    Constraints where{{level.column, label}};
                    Json payload{{"column", level.column}, {"label", label}};
                    if (cls.kind == UnitKind::RemoveMeasure || cls.kind == UnitKind::AddMeasure)
                        payload = Json{{"measure", label}};
                    if (removal)
                        emit(cls.kind, payload, {op::RemoveWhere{where}});
                    else
                        emit(cls.kind, payload, {op::InsertFrom{where, level.column}});
                    continue;
                }
                for (const auto& path : missing[label]) {
                    Json payload{{"column", level.column}, {"label", label}, {"path", path_json(path)}};
                    if (cls.ambiguous)
                        payload["ambiguous"] = true;
                    if (removal)
                        emit(cls.kind, payload, {op::RemoveWhere{path}});
                    else
                        emit(cls.kind, payload, {op::InsertFrom{path, level.column}});
                }
            }
        }
    }

    void remove_absent_measures()
    {
        std::vector<std::string> names;
        for (const auto& m : cur.measures)
            if (!target.measure(m.column))
                names.push_back(m.column);
        for (const auto& name : names)
            if (present_measures(tree_records(cur)).count(name))
                emit(UnitKind::RemoveMeasure, {{"measure", name}}, {op::RemoveWhere{{{kMeasureColumn, name}}}});
    }

    // Values of leaves keyed by path; used to compare trees with equal levels.
    static std::map<std::string, double> leaf_values(const ChartTree& t)
    {
        std::map<std::string, double> out;
        for (const auto& r : tree_records(t))
            out[path_key(r.coords)] = r.value;
        return out;
    }

    static bool agrees(const ChartTree& candidate, const std::map<std::string, double>& reference)
    {
        std::size_t common = 0;
        for (const auto& [k, v] : leaf_values(candidate)) {
            auto it = reference.find(k);
            if (it == reference.end())
                continue;
            if (!nearly_equal(v, it->second))
                return false;
            ++common;
        }
        return common > 0;
    }

    // When dropping `column` is really a filter down to one of its labels,
    // returns the label that stays.
    std::optional<std::string> series_filter(const std::string& column) const
    {
        if (cur.has_raw() || target.has_raw())
            return std::nullopt;
        auto depth = cur.level_of(column);
        std::vector<std::string> labels = labels_at(cur, *depth);
        if (labels.size() < 2)
            return std::nullopt;
        ChartTree reduced = cur;
        apply_op(reduced, op::RemoveLevel{column}, target);
        std::vector<Record> projected;
        std::set<std::string> measures = present_measures(tree_records(cur));
        for (const auto& r : tree_records(target)) {
            const std::string* m = r.coord(kMeasureColumn);
            if (m && measures.count(*m))
                projected.push_back(r);
        }
        auto reference = leaf_values(group_records(projected, reduced.levels, reduced.measures));
        if (agrees(reduced, reference))
            return std::nullopt;
        std::optional<std::string> keep;
        for (const auto& label : labels) {
            ChartTree only = cur;
            std::vector<Record> records = tree_records(only);
            std::erase_if(records, [&](const Record& r) { return *r.coord(column) != label; });
            rebuild(only, records, target);
            apply_op(only, op::RemoveLevel{column}, target);
            if (agrees(only, reference)) {
                if (keep)
                    return std::nullopt;
                keep = label;
            }
        }
        return keep;
    }

    void remove_subtrees(std::size_t shared)
    {
        if (cur.has_raw() && !target.has_raw())
            emit(UnitKind::AggregateDataItem, {{"column", kRawColumn}}, {op::RemoveLevel{kRawColumn}});
        std::vector<std::string> dims = cur.dimensions();
        for (std::size_t i = dims.size(); i-- > shared;) {
            const std::string& column = dims[i];
            std::size_t count = cur.dimension_count();
            bool lowest = i + 1 == count;
            if (lowest && count >= 2) {
                if (auto keep = series_filter(column)) {
                    std::vector<std::string> drop;
                    for (const auto& l : labels_at(cur, *cur.level_of(column)))
                        if (l != *keep)
                            drop.push_back(l);
                    for (std::size_t k = 0; k < drop.size(); ++k) {
                        Json payload{{"column", column}, {"label", drop[k]}};
                        std::vector<TreeOp> ops{op::RemoveWhere{{{column, drop[k]}}}};
                        if (k + 1 == drop.size()) {
                            payload["collapsesLevel"] = true;
                            ops.push_back(op::RemoveLevel{column});
                        }
                        emit(UnitKind::RemoveSeries, payload, ops);
                    }
                    continue;
                }
            }
            NodeEditContext ctx;
            ctx.wholeLevel = true;
            ctx.removal = true;
            ctx.dimensionCount = count;
            Classification cls = classify_node_edit(ctx);
            Json payload{{"column", column}};
            if (cls.kind == UnitKind::MergeDataItem) {
                payload["group"] = "*";
                payload["members"] = labels_at(cur, *cur.level_of(column));
            }
            emit(cls.kind, payload, {op::RemoveLevel{column}});
        }
    }

    void add_subtrees(std::size_t shared)
    {
        std::vector<std::string> dims = target.dimensions();
        for (std::size_t i = shared; i < dims.size(); ++i)
            emit(UnitKind::AddDimension, {{"column", dims[i]}}, {op::AddLevel{dims[i], i + 1}});
        if (target.has_raw() && !cur.has_raw())
            emit(UnitKind::DisaggregateDataItem, {{"column", kRawColumn}},
                 {op::AddLevel{kRawColumn, cur.levels.size() + 1}});
    }

    void add_measures()
    {
        std::set<std::string> present = present_measures(tree_records(cur));
        if (present.empty())
            return;
        for (const auto& m : target.measures)
            if (!present.count(m.column))
                emit(UnitKind::AddMeasure, {{"measure", m.column}},
                     {op::InsertFrom{{{kMeasureColumn, m.column}}, kMeasureColumn}});
    }

    void sort_and_values()
    {
        for (std::size_t d = 1; d <= cur.levels.size(); ++d) {
            bool differs = false;
            each_node_at(cur, d - 1, [&](const Constraints& path, const Node& n) {
                const Node* t = find_path(target.root, path);
                if (!t || t->children.size() != n.children.size())
                    return;
                for (std::size_t i = 0; i < n.children.size(); ++i)
                    if (n.children[i].label != t->children[i].label)
                        differs = true;
            });
            if (differs)
                emit(UnitKind::Sort, {{"column", cur.levels[d - 1].column}}, {op::SortLike{cur.levels[d - 1].column}});
        }
        op::SetValues set;
        Json changes = Json::array();
        each_node_at(cur, cur.levels.size(), [&](const Constraints& path, const Node& n) {
            const Node* t = find_path(target.root, path);
            if (!t || !t->value || !n.value || nearly_equal(*n.value, *t->value))
                return;
            set.values.emplace_back(path, *t->value);
            changes.push_back(Json{{"path", path_json(path)}, {"from", *n.value}, {"to", *t->value}});
        });
        if (!set.values.empty())
            emit(UnitKind::ValueChange, {{"changes", changes}}, {set});
    }
};

} // namespace

EditScript diff_trees(const ChartTree& a, const ChartTree& b, const DiffOptions& options, std::size_t firstId)
{
    EditScript script;
    script.alignedLevel = find_aligned_level(a, b);
    if (tree_equal(a, b))
        return script;

    Differ d{b, options, firstId, a, {}};
    d.merge_split();
    std::size_t shared = d.leading_shared_dimensions();
    // (1) node removal at the aligned levels, top-down
    d.remove_absent_measures();
    d.reconcile(true, find_aligned_level(d.cur, b));
    // (2) subtree removal, bottom-up
    d.remove_subtrees(shared);
    // (3) subtree addition, top-down
    d.add_subtrees(shared);
    // residual removals once both trees share every level
    d.reconcile(true, d.cur.levels.size());
    // (4) node addition
    d.add_measures();
    d.reconcile(false, d.cur.levels.size());
    d.sort_and_values();

    if (!tree_equal(d.cur, b))
        throw std::logic_error("edit script does not reach the target\n--- replayed\n" + dump_tree(d.cur) +
                               "--- target\n" + dump_tree(b));
    script.units = std::move(d.units);
    return script;
}

// ---------------------------------------------------------------------------
// Visual and data-dependent units

std::vector<TransitionUnit> detect_visual_units(const ChartSpec& a, const ChartSpec& b, std::size_t firstId)
{
    std::vector<TransitionUnit> out;
    auto add = [&](UnitKind kind, Json payload) {
        TransitionUnit u;
        u.id = "u" + std::to_string(firstId + out.size());
        u.kind = kind;
        u.payload = std::move(payload);
        out.push_back(std::move(u));
    };
    auto axisX = [](const ChartSpec& s) { return s.showXAxis && s.type != ChartType::Pie; };
    auto axisY = [](const ChartSpec& s) { return s.showYAxis && s.type != ChartType::Pie; };
    if (axisX(a) && !axisX(b))
        add(UnitKind::HideXAxis, Json::object());
    if (axisY(a) && !axisY(b))
        add(UnitKind::HideYAxis, Json::object());
    if (a.showLegend && !b.showLegend)
        add(UnitKind::HideLegend, Json::object());
    if (a.type != b.type)
        add(UnitKind::ChangeChartType, {{"from", to_string(a.type)}, {"to", to_string(b.type)}});
    if (!axisX(a) && axisX(b))
        add(UnitKind::ShowXAxis, Json::object());
    if (!axisY(a) && axisY(b))
        add(UnitKind::ShowYAxis, Json::object());
    if (!a.showLegend && b.showLegend)
        add(UnitKind::ShowLegend, Json::object());
    if (a.title != b.title)
        add(UnitKind::ChangeTitle, {{"from", a.title}, {"to", b.title}});
    return out;
}

ChartFrame chart_frame(const ChartTree& tree, ChartType type)
{
    ChartFrame f;
    if (type != ChartType::Pie) {
        f.x = category_domain(tree);
        f.y = value_domain(tree);
    }
    f.legend = legend_labels(tree, type);
    return f;
}

std::vector<TransitionUnit> derive_data_dependent_units(const std::vector<const TransitionUnit*>& dataUnits,
                                                        const ChartTree& source, const ChartTree& target,
                                                        ChartType sourceType, ChartType targetType,
                                                        std::size_t firstId)
{
    std::vector<TransitionUnit> out;
    ChartTree cur = source;
    auto add = [&](UnitKind kind, const TransitionUnit& trigger, Json payload) {
        TransitionUnit u;
        u.id = "u" + std::to_string(firstId + out.size());
        u.kind = kind;
        u.dependsOn = trigger.id;
        u.payload = std::move(payload);
        out.push_back(std::move(u));
    };
    for (const TransitionUnit* unit : dataUnits) {
        ChartType type = is_removal_side(unit->kind) ? sourceType : targetType;
        ChartFrame before = chart_frame(cur, type);
        for (const auto& o : unit->ops)
            apply_op(cur, o, target);
        ChartFrame after = chart_frame(cur, type);
        UnitKind k = unit->kind;
        using K = UnitKind;
        bool xEligible = k == K::AddSeries || k == K::RemoveSeries || k == K::AddDataItem || k == K::RemoveDataItem ||
                         k == K::MergeDataItem || k == K::SplitDataItem || k == K::AddDimension ||
                         k == K::RemoveDimension;
        bool yEligible = k == K::ValueChange || k == K::AddMeasure || k == K::RemoveMeasure;
        bool legendEligible = k == K::AddDimension || k == K::RemoveDimension || k == K::AddSeries ||
                              k == K::RemoveSeries || k == K::AddMeasure || k == K::RemoveMeasure;
        if (xEligible && before.x != after.x)
            add(K::RescaleXAxis, *unit, {{"from", to_json(before.x)}, {"to", to_json(after.x)}});
        if (yEligible && before.y != after.y)
            add(K::RescaleYAxis, *unit, {{"from", to_json(before.y)}, {"to", to_json(after.y)}});
        if (legendEligible && before.legend != after.legend)
            add(K::UpdateLegend, *unit, {{"from", before.legend}, {"to", after.legend}});
    }
    return out;
}

Json to_json(const TransitionUnit& unit)
{
    Json j;
    j["id"] = unit.id;
    j["kind"] = to_string(unit.kind);
    if (unit.dependsOn)
        j["dependsOn"] = *unit.dependsOn;
    j["payload"] = unit.payload;
    return j;
}

Json to_json(const CategoryDomain& domain)
{
    return Json{{"labels", domain.labels}, {"slots", domain.slots}};
}

Json to_json(const ValueDomain& domain)
{
    return Json{{"min", domain.min}, {"max", domain.max}};
}

} // namespace chartmorph
