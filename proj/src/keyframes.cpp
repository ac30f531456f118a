#include "chartmorph/keyframes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace chartmorph {

namespace {

std::vector<Point2> pad_vertices(std::vector<Point2> v, std::size_t size, const std::vector<Point2>& other)
{
    if (v.empty())
        v = other.empty() ? std::vector<Point2>{} : std::vector<Point2>{other.front()};
    while (!v.empty() && v.size() < size)
        v.push_back(v.back());
    return v;
}

} // namespace

Mark interpolate(const Mark& a, const Mark& b, double t)
{
    if (t <= 0)
        return a;
    if (t >= 1)
        return b;
    Mark m = a;
    m.glyph = interpolate(a.glyph, b.glyph, t);
    m.fill = interpolate(a.fill, b.fill, t);
    m.opacity = lerp(a.opacity, b.opacity, t);
    m.value = lerp(a.value, b.value, t);
    std::size_t n = std::max(a.vertices.size(), b.vertices.size());
    auto va = pad_vertices(a.vertices, n, b.vertices);
    auto vb = pad_vertices(b.vertices, n, a.vertices);
    m.vertices.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        m.vertices[i] = {lerp(va[i].x, vb[i].x, t), lerp(va[i].y, vb[i].y, t)};
    return m;
}

ChromeItem interpolate(const ChromeItem& a, const ChromeItem& b, double t)
{
    if (t <= 0)
        return a;
    if (t >= 1)
        return b;
    ChromeItem c = a;
    c.x = lerp(a.x, b.x, t);
    c.y = lerp(a.y, b.y, t);
    c.x2 = lerp(a.x2, b.x2, t);
    c.y2 = lerp(a.y2, b.y2, t);
    c.fontSize = lerp(a.fontSize, b.fontSize, t);
    c.strokeWidth = lerp(a.strokeWidth, b.strokeWidth, t);
    c.fill = interpolate(a.fill, b.fill, t);
    c.opacity = lerp(a.opacity, b.opacity, t);
    return c;
}

std::vector<Glyph> subdivide(const Glyph& g, const std::vector<double>& fractions)
{
    std::vector<Glyph> out;
    double cum = 0;
    if (is_sector(g)) {
        Sector s = to_sector(g);
        double start = s.midAngle - s.sweep / 2;
        for (double f : fractions) {
            Sector p = s;
            p.sweep = s.sweep * f;
            p.midAngle = start + s.sweep * (cum + f / 2);
            out.push_back(from_sector(p));
            cum += f;
        }
        return out;
    }
    double tx = -std::sin(g.phi), ty = std::cos(g.phi);
    for (double f : fractions) {
        Glyph p = g;
        double offset = (cum + f / 2 - 0.5) * g.wid;
        p.mx = g.mx + tx * offset;
        p.my = g.my + ty * offset;
        p.wid = g.wid * f;
        out.push_back(p);
        cum += f;
    }
    return out;
}

std::vector<SceneGraph> stage_boundary_scenes(const TransitionPlan& plan, const ChartTree& sourceTree,
                                              const ChartSpec& sourceSpec, const ChartTree& targetTree,
                                              const ChartSpec& targetSpec, const Canvas& canvas)
{
    std::vector<SceneGraph> scenes;
    scenes.push_back(layout_chart(sourceTree, sourceSpec, canvas));
    if (plan.stages.empty())
        return scenes;
    bool showX = false, showY = false;
    for (const auto& u : plan.units) {
        showX = showX || u.kind == UnitKind::ShowXAxis;
        showY = showY || u.kind == UnitKind::ShowYAxis;
    }
    ChartTree tree = sourceTree;
    ChartSpec display = sourceSpec;
    LayoutOptions lenient;
    lenient.strict = false;
    for (std::size_t i = 0; i < plan.stages.size(); ++i) {
        for (const auto& id : plan.stages[i].unitIds) {
            const TransitionUnit* u = plan.unit(id);
            if (!u)
                throw ChartError(ErrorCode::MissingCorrespondence, "stage refers to unknown unit " + id);
            for (const auto& o : u->ops)
                apply_op(tree, o, targetTree);
            switch (u->kind) {
            case UnitKind::ChangeChartType:
                display.type = targetSpec.type;
                if (showX)
                    display.showXAxis = false;
                if (showY)
                    display.showYAxis = false;
                break;
            case UnitKind::HideXAxis: display.showXAxis = false; break;
            case UnitKind::ShowXAxis: display.showXAxis = true; break;
            case UnitKind::HideYAxis: display.showYAxis = false; break;
            case UnitKind::ShowYAxis: display.showYAxis = true; break;
            case UnitKind::HideLegend: display.showLegend = false; break;
            case UnitKind::ShowLegend: display.showLegend = true; break;
            case UnitKind::ChangeTitle: display.title = targetSpec.title; break;
            default: break;
            }
        }
        if (i + 1 == plan.stages.size())
            scenes.push_back(layout_chart(targetTree, targetSpec, canvas));
        else
            scenes.push_back(layout_chart(tree, spec_for_tree(tree, display), canvas, lenient));
    }
    return scenes;
}

namespace {

using LabelMap = std::map<std::string, std::map<std::string, std::string>>; // column -> member -> group

bool covers(const Mark& parent, const Mark& child, const LabelMap& groups)
{
    if (parent.path.empty() || child.path.empty() || parent.path == child.path)
        return false;
    for (const auto& [col, label] : parent.path) {
        auto it = std::find_if(child.path.begin(), child.path.end(), [&](const auto& p) { return p.first == col; });
        if (it == child.path.end())
            return false;
        if (it->second == label)
            continue;
        auto g = groups.find(col);
        if (g == groups.end())
            return false;
        auto m = g->second.find(it->second);
        if (m == g->second.end() || m->second != label)
            return false;
    }
    return true;
}

Point2 glyph_center(const Glyph& g)
{
    if (is_sector(g))
        return {g.mx, g.my};
    return {g.mx + std::cos(g.phi) * g.len / 2, g.my + std::sin(g.phi) * g.len / 2};
}

Point2 glyph_tip(const Glyph& g)
{
    return {g.mx + std::cos(g.phi) * g.len, g.my + std::sin(g.phi) * g.len};
}

double point_radius(const Glyph& g)
{
    return is_sector(g) ? to_sector(g).r1 : 4.0;
}

// Flat square of side 2r centred on the tip of `bar`, oriented like it.
Glyph tip_square(const Glyph& bar, double r)
{
    Point2 tip = glyph_tip(bar);
    Glyph sq = bar;
    sq.kappa = 0;
    sq.len = 2 * r;
    sq.wid = 2 * r;
    sq.mx = tip.x - std::cos(bar.phi) * r;
    sq.my = tip.y - std::sin(bar.phi) * r;
    return sq;
}

std::vector<Glyph> morph_waypoints(const Glyph& g0, const Glyph& g1, const std::vector<MorphStep>& plan)
{
    std::vector<Glyph> w{g0};
    if (plan.size() == 1) {
        w.push_back(g1);
        return w;
    }
    if (plan.front() == MorphStep::Morph) {
        Glyph shifted = g1;
        Point2 c0 = glyph_center(g0), c1 = glyph_center(g1);
        shifted.mx += c0.x - c1.x;
        shifted.my += c0.y - c1.y;
        w.push_back(shifted);
    } else if (plan.front() == MorphStep::ShrinkWidth) {
        double r = point_radius(g1);
        Glyph thin = g0;
        thin.wid = 2 * r;
        w.push_back(thin);
        w.push_back(tip_square(g0, r));
    } else {
        double r = point_radius(g0);
        w.push_back(tip_square(g1, r));
        Glyph line = g1;
        line.wid = 2 * r;
        w.push_back(line);
    }
    w.push_back(g1);
    return w;
}

Mark collapsed(Mark m)
{
    if (m.shape == MarkShape::Polyline) {
        m.opacity = 0;
        return m;
    }
    if (!is_sector(m.glyph)) {
        m.glyph.len = 0;
        return m;
    }
    Sector s = to_sector(m.glyph);
    if (m.shape == MarkShape::Arc) {
        s.sweep = 0;
    } else {
        s.r0 = 0;
        s.r1 = s.r1 * 1e-3;
    }
    m.glyph = from_sector(s);
    return m;
}

Mark wiped(Mark m)
{
    if (m.shape == MarkShape::Polyline || is_sector(m.glyph))
        return collapsed(std::move(m));
    m.glyph.wid = 0;
    return m;
}

Mark shifted(Mark m, double dx)
{
    m.glyph.mx += dx;
    for (auto& v : m.vertices)
        v.x += dx;
    return m;
}

Mark exit_end(const Mark& m, EffectId effect, double width)
{
    switch (effect) {
    case EffectId::Shrink: return collapsed(m);
    case EffectId::FlyOut: return shifted(m, width);
    default: {
        Mark out = m;
        out.opacity = 0;
        return out;
    }
    }
}

Mark enter_start(const Mark& m, EffectId effect, double width)
{
    switch (effect) {
    case EffectId::Grow: return collapsed(m);
    case EffectId::Wipe: return wiped(m);
    case EffectId::FlyIn: return shifted(m, -width);
    default: {
        Mark out = m;
        out.opacity = 0;
        return out;
    }
    }
}

std::vector<double> value_fractions(const std::vector<const Mark*>& marks)
{
    double total = 0;
    for (const Mark* m : marks)
        total += std::abs(m->value);
    std::vector<double> out;
    for (const Mark* m : marks)
        out.push_back(total > 0 ? std::abs(m->value) / total : 1.0 / static_cast<double>(marks.size()));
    return out;
}

struct StageContext {
    const Stage* stage = nullptr;
    std::optional<EffectId> effect;
    std::vector<MorphStep> morph;
    LabelMap groups;
    // Series filter: column collapsed by the stage and the labels it drops.
    std::optional<std::string> filterColumn;
    std::set<std::string> dropped;
    double width = 640;
};

StageContext stage_context(const TransitionPlan& plan, const Stage& stage, double width)
{
    StageContext c;
    c.stage = &stage;
    c.width = width;
    if (!stage.unitIds.empty()) {
        auto it = stage.effects.find(stage.unitIds.front());
        if (it != stage.effects.end())
            c.effect = it->second;
    }
    for (const auto& id : stage.unitIds) {
        const TransitionUnit* u = plan.unit(id);
        if (!u)
            continue;
        if (u->kind == UnitKind::ChangeChartType) {
            auto from = parse_chart_type(u->payload.value("from", std::string()));
            auto to = parse_chart_type(u->payload.value("to", std::string()));
            if (from && to)
                c.morph = plan_mark_morph(*from, *to);
        }
        if ((u->kind == UnitKind::MergeDataItem || u->kind == UnitKind::SplitDataItem) &&
            u->payload.contains("members")) {
            const std::string column = u->payload.value("column", std::string());
            const std::string group = u->payload.value("group", std::string());
            for (const auto& m : u->payload["members"])
                c.groups[column][m.get<std::string>()] = group;
        }
        if (u->kind == UnitKind::RemoveSeries) {
            c.dropped.insert(u->payload.value("label", std::string()));
            if (u->payload.value("collapsesLevel", false))
                c.filterColumn = u->payload.value("column", std::string());
        }
    }
    return c;
}

// The kept series' mark minus the collapsed column is its successor.
bool filter_successor(const StageContext& c, const Mark& before, const Mark& after)
{
    if (!c.filterColumn || before.path.size() != after.path.size() + 1)
        return false;
    std::vector<std::pair<std::string, std::string>> rest;
    for (const auto& p : before.path) {
        if (p.first != *c.filterColumn)
            rest.push_back(p);
        else if (c.dropped.count(p.second))
            return false;
    }
    return rest == after.path;
}

std::vector<MarkState> mark_states(const StageContext& c, const Mark* m0, const Mark* m1,
                                   const std::vector<const Mark*>& exits, const std::vector<const Mark*>& enters)
{
    const int n = std::max(1, c.stage->steps);
    std::vector<MarkState> states(static_cast<std::size_t>(n) + 1);
    auto frac = [&](int k, int over) { return over <= 0 ? 1.0 : static_cast<double>(k) / over; };
    if (!m0 && !m1)
        return states;

    if (m0 && m1) {
        bool morph = !c.morph.empty() && static_cast<int>(c.morph.size()) == n && m0->shape != MarkShape::Polyline &&
                     m1->shape != MarkShape::Polyline;
        if (morph) {
            auto w = morph_waypoints(m0->glyph, m1->glyph, c.morph);
            for (int k = 0; k <= n; ++k) {
                Mark m = interpolate(*m0, *m1, frac(k, n));
                m.glyph = w[static_cast<std::size_t>(k)];
                if (k == n)
                    m = *m1;
                states[static_cast<std::size_t>(k)] = {true, k == 0 ? *m0 : m};
            }
        } else {
            for (int k = 0; k <= n; ++k)
                states[static_cast<std::size_t>(k)] = {true, interpolate(*m0, *m1, frac(k, n))};
        }
        return states;
    }

    if (m0) {
        for (const Mark* e : enters)
            if (filter_successor(c, *m0, *e))
                return states;
        const bool filteredOut = c.filterColumn && std::any_of(m0->path.begin(), m0->path.end(), [&](const auto& p) {
            return p.first == *c.filterColumn && c.dropped.count(p.second);
        });
        for (const Mark* e : filteredOut ? std::vector<const Mark*>{} : enters)
            if (covers(*m0, *e, c.groups))
                return states; // replaced by its pieces from the stage start
        for (const Mark* s : enters) {
            if (filteredOut || !covers(*s, *m0, c.groups))
                continue;
            std::vector<const Mark*> siblings;
            std::size_t index = 0;
            for (const Mark* e : exits)
                if (covers(*s, *e, c.groups)) {
                    if (e == m0)
                        index = siblings.size();
                    siblings.push_back(e);
                }
            Mark piece = *m0;
            piece.glyph = subdivide(s->glyph, value_fractions(siblings))[index];
            const int moveSteps = std::max(1, n - 1);
            for (int k = 0; k <= n; ++k)
                if (k <= moveSteps)
                    states[static_cast<std::size_t>(k)] = {true, interpolate(*m0, piece, frac(k, moveSteps))};
            return states;
        }
        EffectId effect = c.effect && category_of(*c.effect) == EffectCategory::Exit ? *c.effect : EffectId::FadeOut;
        Mark end = exit_end(*m0, effect, c.width);
        for (int k = 0; k <= n; ++k)
            states[static_cast<std::size_t>(k)] = {true, interpolate(*m0, end, frac(k, n))};
        return states;
    }

    for (const Mark* e : exits) {
        if (!filter_successor(c, *e, *m1))
            continue;
        for (int k = 0; k <= n; ++k)
            states[static_cast<std::size_t>(k)] = {true, k == 0 ? *e : interpolate(*e, *m1, frac(k, n))};
        return states;
    }
    for (const Mark* e : exits) {
        if (!covers(*m1, *e, c.groups))
            continue;
        const int appear = std::max(1, n - 1);
        for (int k = appear; k <= n; ++k)
            states[static_cast<std::size_t>(k)] = {true, *m1};
        return states;
    }
    for (const Mark* a : exits) {
        if (!covers(*a, *m1, c.groups))
            continue;
        std::vector<const Mark*> siblings;
        std::size_t index = 0;
        for (const Mark* e : enters)
            if (covers(*a, *e, c.groups)) {
                if (e == m1)
                    index = siblings.size();
                siblings.push_back(e);
            }
        Mark start = *m1;
        start.glyph = subdivide(a->glyph, value_fractions(siblings))[index];
        start.fill = a->fill;
        start.opacity = a->opacity;
        const int hold = n >= 2 ? 1 : 0;
        for (int k = 0; k <= n; ++k)
            states[static_cast<std::size_t>(k)] = {true, k <= hold ? start : interpolate(start, *m1, frac(k - hold, n - hold))};
        return states;
    }
    EffectId effect = c.effect && category_of(*c.effect) == EffectCategory::Entrance ? *c.effect : EffectId::FadeIn;
    Mark start = enter_start(*m1, effect, c.width);
    for (int k = 0; k <= n; ++k)
        states[static_cast<std::size_t>(k)] = {true, interpolate(start, *m1, frac(k, n))};
    return states;
}

std::vector<ChromeState> chrome_states(int n, const ChromeItem* a, const ChromeItem* b)
{
    std::vector<ChromeState> states(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        double t = static_cast<double>(k) / n;
        if (a && b) {
            states[static_cast<std::size_t>(k)] = {true, interpolate(*a, *b, t)};
        } else if (a) {
            ChromeItem end = *a;
            end.opacity = 0;
            states[static_cast<std::size_t>(k)] = {true, interpolate(*a, end, t)};
        } else if (b) {
            ChromeItem start = *b;
            start.opacity = 0;
            states[static_cast<std::size_t>(k)] = {true, interpolate(start, *b, t)};
        }
    }
    return states;
}

} // namespace

KeyframeTimeline synthesize_keyframes(const TransitionPlan& plan, const std::vector<SceneGraph>& boundaries)
{
    KeyframeTimeline tl;
    tl.source = boundaries.front();
    tl.target = boundaries.back();
    tl.total = static_cast<double>(plan.total);
    if (boundaries.size() != plan.stages.size() + 1 && !plan.stages.empty())
        throw ChartError(ErrorCode::MissingCorrespondence, "boundary scene count does not match the stage count");

    std::map<std::string, std::size_t> markIndex, chromeIndex;
    for (const auto& scene : boundaries) {
        for (const auto& m : scene.marks)
            if (markIndex.try_emplace(m.id, tl.marks.size()).second)
                tl.marks.push_back({m.id, {}});
        for (const auto& c : scene.chrome)
            if (chromeIndex.try_emplace(c.id, tl.chrome.size()).second)
                tl.chrome.push_back({c.id, {}});
    }

    for (std::size_t si = 0; si < plan.stages.size(); ++si) {
        const Stage& stage = plan.stages[si];
        const SceneGraph& s0 = boundaries[si];
        const SceneGraph& s1 = boundaries[si + 1];
        StageContext ctx = stage_context(plan, stage, s0.width);
        const int n = std::max(1, stage.steps);

        std::vector<const Mark*> exits, enters;
        for (const auto& m : s0.marks)
            if (!s1.find_mark(m.id))
                exits.push_back(&m);
        for (const auto& m : s1.marks)
            if (!s0.find_mark(m.id))
                enters.push_back(&m);

        double t = static_cast<double>(stage.start);
        for (int k = 0; k <= n; ++k) {
            if (k > 0)
                t += static_cast<double>(stage.stepDurations[static_cast<std::size_t>(k - 1)]);
            if (!tl.times.empty()) {
                tl.easing.push_back(k == 0 ? Easing::Linear : stage.easing);
                tl.hold.push_back(k == 0);
            }
            tl.times.push_back(t);
        }
        for (auto& track : tl.marks) {
            auto st = mark_states(ctx, s0.find_mark(track.id), s1.find_mark(track.id), exits, enters);
            track.states.insert(track.states.end(), st.begin(), st.end());
        }
        for (auto& track : tl.chrome) {
            auto st = chrome_states(n, s0.find_chrome(track.id), s1.find_chrome(track.id));
            track.states.insert(track.states.end(), st.begin(), st.end());
        }
        // Same instant again holding the boundary scene itself; standing time samples it.
        tl.times.push_back(t);
        tl.easing.push_back(Easing::Linear);
        tl.hold.push_back(false);
        for (auto& track : tl.marks) {
            const Mark* m1 = s1.find_mark(track.id);
            track.states.push_back(m1 ? MarkState{true, *m1} : MarkState{});
        }
        for (auto& track : tl.chrome) {
            const ChromeItem* c1 = s1.find_chrome(track.id);
            track.states.push_back(c1 ? ChromeState{true, *c1} : ChromeState{});
        }
    }
    return tl;
}

} // namespace chartmorph
