// One line per primary acceptance criterion; exit status 1 if any fails.

#include "support.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace chartmorph;
using namespace testsupport;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Expected order per preference row, majority choice of the user study:
// (first, second) pairs.
const std::vector<std::pair<std::vector<UnitKind>, std::vector<UnitKind>>> kStudyOrder = {
    {{UnitKind::RemoveDataItem}, {UnitKind::AddDataItem}},
    {{UnitKind::AddDataItem, UnitKind::RemoveDataItem}, {UnitKind::AddDimension}},
    {{UnitKind::RemoveDimension}, {UnitKind::AddDataItem, UnitKind::RemoveDataItem}},
    {{UnitKind::AddDataItem, UnitKind::RemoveDataItem}, {UnitKind::AddMeasure}},
    {{UnitKind::RemoveMeasure}, {UnitKind::AddDataItem, UnitKind::RemoveDataItem}},
    {{UnitKind::AddDataItem, UnitKind::RemoveDataItem}, {UnitKind::AddSeries}},
    {{UnitKind::RemoveSeries}, {UnitKind::AddDataItem, UnitKind::RemoveDataItem}},
};

Outcome priority_suite()
{
    auto t0 = std::chrono::steady_clock::now();
    int rowsOk = 0;
    for (const auto& [first, second] : kStudyOrder) {
        bool ok = true;
        for (UnitKind a : first)
            for (UnitKind b : second) {
                // Canonical order deliberately reversed.
                TransitionUnit ub = make_unit("u0", b), ua = make_unit("u1", a);
                auto sorted = sort_data_units({&ub, &ua}, PriorityTable::defaults());
                ok = ok && sorted.size() == 2 && sorted[0]->kind == a && sorted[1]->kind == b;
                // Already in order stays in order.
                auto kept = sort_data_units({&ua, &ub}, PriorityTable::defaults());
                ok = ok && kept[0]->kind == a;
            }
        rowsOk += ok;
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream d;
    d << rowsOk << "/7 rows in preferred order, " << ms << " ms";
    return {rowsOk == 7 && ms < 1000, d.str()};
}

std::size_t max_children(const Node& n)
{
    std::size_t m = n.children.size();
    for (const auto& c : n.children)
        m = std::max(m, max_children(c));
    return m;
}

Outcome fuzz_replay()
{
    std::mt19937 rng(20240917);
    const int cases = 1500;
    int ok = 0, shapeOk = 0;
    std::string firstFailure;
    for (int i = 0; i < cases; ++i) {
        ChartPair p = random_pair(rng);
        try {
            ChartTree a = build_tree(p.source.table, p.source.chart);
            ChartTree b = build_tree(p.target.table, p.target.chart);
            if (a.depth() <= 4 && b.depth() <= 4 && max_children(a.root) <= 6 && max_children(b.root) <= 6)
                ++shapeOk;
            DiffOptions options;
            options.labelMap = p.target.chart.labelMap;
            EditScript s = diff_trees(a, b, options);
            if (tree_equal(replay(a, s, b), b))
                ++ok;
            else if (firstFailure.empty())
                firstFailure = "case " + std::to_string(i) + ": replay differs";
        } catch (const std::exception& e) {
            if (firstFailure.empty())
                firstFailure = "case " + std::to_string(i) + ": " + e.what();
        }
    }
    std::ostringstream d;
    d << ok << "/" << cases << " replays equal target, " << shapeOk << "/" << cases << " within depth 4 / 6 children";
    if (!firstFailure.empty())
        d << "; first failure " << firstFailure;
    return {ok == cases && shapeOk == cases, d.str()};
}

Outcome fig5_golden()
{
    PlanBundle b = plan_fixture("fig5_composition");
    std::multiset<UnitKind> data;
    for (const auto& u : b.script.units)
        data.insert(u.kind);
    const std::multiset<UnitKind> want = {UnitKind::RemoveSeries, UnitKind::AddDataItem, UnitKind::AddDimension};

    bool rescaleEach = true, noRescaleY = true;
    std::map<std::string, std::set<UnitKind>> riders;
    for (const auto& u : b.plan.units) {
        if (u.kind == UnitKind::RescaleYAxis)
            noRescaleY = false;
        if (u.dependsOn)
            riders[*u.dependsOn].insert(u.kind);
    }
    for (const auto& u : b.script.units)
        rescaleEach = rescaleEach && riders[u.id].count(UnitKind::RescaleXAxis);

    const std::vector<std::vector<std::string>> stages = {
        {"RemoveSeries", "RescaleXAxis", "UpdateLegend"},
        {"AddDataItem", "RescaleXAxis"},
        {"AddDimension", "RescaleXAxis", "UpdateLegend"},
        {"ChangeTitle"},
    };
    std::vector<std::vector<std::string>> got;
    for (const auto& s : b.plan.stages)
        got.push_back(stage_kinds(s));
    bool ok = data == want && rescaleEach && noRescaleY && got == stages;
    std::ostringstream d;
    d << "data units " << (data == want ? "match" : "differ") << ", RescaleXAxis on each "
      << (rescaleEach ? "yes" : "no") << ", RescaleYAxis absent " << (noRescaleY ? "yes" : "no") << ", "
      << got.size() << " stages " << (got == stages ? "as expected" : "differ");
    return {ok, d.str()};
}

const Stage* stage_with(const TransitionPlan& plan, UnitKind kind)
{
    for (const auto& s : plan.stages)
        if (std::find(s.kinds.begin(), s.kinds.end(), kind) != s.kinds.end())
            return &s;
    return nullptr;
}

Outcome timing_arithmetic()
{
    std::vector<std::string> bad;
    PlanBundle sorted = plan_fixture("fig7b_sort");
    const Stage* sort = stage_with(sorted.plan, UnitKind::Sort);
    if (!sort || sort->duration != 500 || sort->steps != 1)
        bad.push_back("sort stage");
    PlanBundle d2 = plan_fixture("fig7d2_barv_to_barh");
    const Stage* morph = stage_with(d2.plan, UnitKind::ChangeChartType);
    if (!morph || morph->duration != 1000 || morph->steps != 2)
        bad.push_back("chart type stage");

    // Standing times: 1000 before data stages, 500 before the type change, 0 otherwise.
    PlanBundle e = plan_fixture("fig7e_drilldown");
    for (const auto& s : e.plan.stages) {
        UnitKind first = e.plan.unit(s.unitIds.front())->kind;
        std::int64_t want = is_data_change(first) ? 1000 : first == UnitKind::ChangeChartType ? 500 : 0;
        if (s.standingBefore != want)
            bad.push_back("standing " + s.id);
    }
    // Animation mode: start = previous end + standing, duration = 500 x steps.
    std::int64_t clock = 0;
    for (const auto& s : e.plan.stages) {
        clock += s.standingBefore;
        if (s.start != clock || s.duration != 500 * s.steps)
            bad.push_back("animation " + s.id);
        clock += s.duration;
    }
    if (e.plan.total != clock)
        bad.push_back("animation total");

    // Fixed mode: 2000 ms over all steps, remainder on the last one.
    PlanConfig fixed;
    fixed.timing = parse_timing("fixed:2000");
    PlanBundle f = plan_fixture("fig7e_drilldown", fixed);
    std::int64_t steps = 0, animated = 0, standing = 0;
    for (const auto& s : f.plan.stages)
        steps += s.steps;
    const std::int64_t per = 2000 / steps;
    std::int64_t seen = 0;
    for (const auto& s : f.plan.stages) {
        for (std::size_t k = 0; k < s.stepDurations.size(); ++k) {
            ++seen;
            std::int64_t want = seen == steps ? 2000 - per * (steps - 1) : per;
            if (s.stepDurations[k] != want)
                bad.push_back("fixed step " + s.id);
        }
        animated += s.duration;
        standing += s.standingBefore;
    }
    if (animated != 2000 || f.plan.total != 2000 + standing)
        bad.push_back("fixed total");
    std::ostringstream d;
    d << "sort " << (sort ? sort->duration : -1) << " ms, chart type " << (morph ? morph->duration : -1)
      << " ms, fixed:2000 animated " << animated << " ms + standing " << standing << " ms";
    for (const auto& b : bad)
        d << "; bad " << b;
    return {bad.empty(), d.str()};
}

ChartDocument simple_chart(ChartType type)
{
    std::string text = R"({"data": {"columns": [{"name": "Brand", "role": "dimension", "valueType": "categorical"},
        {"name": "Sales", "role": "measure", "valueType": "numeric"}],
        "rows": [{"Brand": "Audi", "Sales": 42}, {"Brand": "BMW", "Sales": 51}, {"Brand": "Ford", "Sales": 38},
                 {"Brand": "Honda", "Sales": 33}]},
        "chart": {"type": "barV", "x": "Brand", "measures": [{"column": "Sales", "aggregate": "sum"}]}})";
    ChartDocument d = parse_chart_document(std::string_view(text));
    d.chart.type = type;
    return d;
}

bool contains_run(const std::vector<MorphStep>& plan, const std::vector<MorphStep>& run)
{
    return std::search(plan.begin(), plan.end(), run.begin(), run.end()) != plan.end();
}

Outcome morph_totality()
{
    int pairs = 0, ok = 0;
    std::string failure;
    for (ChartType from : kAllChartTypes)
        for (ChartType to : kAllChartTypes) {
            if (from == to)
                continue;
            ++pairs;
            try {
                if (plan_mark_morph(from, to).empty())
                    throw std::runtime_error("empty morph plan");
                PlanBundle b = build_plan({simple_chart(from), simple_chart(to)}, {});
                KeyframeTimeline tl = build_timeline(b);
                for (int k = 0; k <= 20; ++k)
                    render_svg(sample_scene(tl, static_cast<double>(b.plan.total) * k / 20));
                ++ok;
            } catch (const std::exception& e) {
                if (failure.empty())
                    failure = std::string(to_string(from)) + "->" + to_string(to) + ": " + e.what();
            }
        }
    using M = MorphStep;
    bool barScatter = contains_run(plan_mark_morph(ChartType::BarV, ChartType::Scatter),
                                   {M::ShrinkWidth, M::ShrinkToPoints, M::MoveToPositions});
    bool scatterPie = plan_mark_morph(ChartType::Scatter, ChartType::Pie) == std::vector<M>{M::DirectMorphPointsToArcs};
    std::ostringstream d;
    d << ok << "/" << pairs << " ordered pairs plan and render, bar->scatter staged " << (barScatter ? "yes" : "no")
      << ", scatter->pie direct " << (scatterPie ? "yes" : "no");
    if (!failure.empty())
        d << "; " << failure;
    return {pairs == 20 && ok == 20 && barScatter && scatterPie, d.str()};
}

std::vector<std::vector<std::string>> stage_list(const TransitionPlan& p)
{
    std::vector<std::vector<std::string>> out;
    for (const auto& s : p.stages)
        out.push_back(stage_kinds(s));
    return out;
}

Outcome gallery()
{
    using V = std::vector<std::vector<std::string>>;
    std::vector<std::string> bad;

    PlanBundle a = plan_fixture("fig7a_filter");
    if (stage_list(a.plan) != V{{"RemoveDataItem", "RescaleXAxis"}})
        bad.push_back("(a) stages");
    {
        KeyframeTimeline tl = build_timeline(a);
        const Stage& s = a.plan.stages.front();
        std::size_t before = sample_scene(tl, static_cast<double>(s.start)).marks.size();
        std::size_t after = sample_scene(tl, static_cast<double>(s.start + s.duration)).marks.size();
        if (!(after < before))
            bad.push_back("(a) mark count");
    }

    PlanBundle b = plan_fixture("fig7b_sort");
    if (stage_list(b.plan) != V{{"Sort"}})
        bad.push_back("(b) stages");
    auto files = export_files(b.plan, build_timeline(b), 30, ExportFormat::Gif);
    bool gif = std::any_of(files.begin(), files.end(), [](const auto& f) {
        return f.first == "animation.gif" && f.second.rfind("GIF89a", 0) == 0;
    });
    if (!gif)
        bad.push_back("(b) gif");

    if (stage_list(plan_fixture("fig7c_timestep").plan) != V{{"ValueChange", "RescaleYAxis"}})
        bad.push_back("(c) stages");

    using M = MorphStep;
    PlanBundle d = plan_fixture("fig7d_scatter_to_bar");
    const Stage* dm = stage_with(d.plan, UnitKind::ChangeChartType);
    if (!dm || plan_mark_morph(ChartType::Scatter, ChartType::BarV) !=
                   std::vector<M>{M::MoveToPositions, M::ExtendToLines, M::ExpandToBars} || dm->steps != 3)
        bad.push_back("(d) scatter->bar");
    PlanBundle d2 = plan_fixture("fig7d2_barv_to_barh");
    if (stage_list(d2.plan) != V{{"ChangeChartType"}} ||
        plan_mark_morph(ChartType::BarV, ChartType::BarH) != std::vector<M>{M::Morph, M::Move})
        bad.push_back("(d) barV->barH");

    PlanBundle e = plan_fixture("fig7e_drilldown");
    std::vector<UnitKind> firsts;
    for (const auto& s : e.plan.stages)
        if (!is_visual_related(e.plan.unit(s.unitIds.front())->kind) ||
            e.plan.unit(s.unitIds.front())->kind == UnitKind::ChangeChartType)
            firsts.push_back(e.plan.unit(s.unitIds.front())->kind);
    const Stage* merge = stage_with(e.plan, UnitKind::MergeDataItem);
    bool mergeMoves = merge && merge->effects.at(merge->unitIds.front()) == EffectId::Move;
    if (firsts != std::vector<UnitKind>{UnitKind::MergeDataItem, UnitKind::ChangeChartType, UnitKind::AddDimension} ||
        !mergeMoves)
        bad.push_back("(e) drill-down");

    std::ostringstream out;
    out << "(a)-(e) " << (bad.empty() ? "stage structures as described" : "mismatch");
    for (const auto& x : bad)
        out << "; " << x;
    return {bad.empty(), out.str()};
}

Outcome endpoint_exactness()
{
    int ok = 0, total = 0;
    std::string failure;
    for (const auto& name : fixture_names()) {
        ++total;
        try {
            PlanBundle b = plan_fixture(name);
            KeyframeTimeline tl = build_timeline(b);
            auto run1 = export_files(b.plan, tl, 30, ExportFormat::Gif);
            PlanBundle b2 = plan_fixture(name);
            auto run2 = export_files(b2.plan, build_timeline(b2), 30, ExportFormat::Gif);
            std::string first, last;
            for (const auto& [path, bytes] : run1)
                if (path.rfind("frames/", 0) == 0) {
                    if (first.empty())
                        first = bytes;
                    last = bytes;
                }
            std::string src = render_svg(layout_chart(b.sourceTree, b.pair.source.chart));
            std::string tgt = render_svg(layout_chart(b.targetTree, b.pair.target.chart));
            if (first == src && last == tgt && run1 == run2)
                ++ok;
            else if (failure.empty())
                failure = name + (first != src ? " first frame" : last != tgt ? " last frame" : " nondeterministic");
        } catch (const std::exception& e) {
            if (failure.empty())
                failure = name + ": " + e.what();
        }
    }
    std::ostringstream d;
    d << ok << "/" << total << " fixtures exact at both ends and deterministic";
    if (!failure.empty())
        d << "; " << failure;
    return {ok == total && total >= 10, d.str()};
}

Outcome numerical_invariants()
{
    double worst = 0;
    int samples = 0;
    std::vector<std::pair<ChartType, ChartType>> morphs = {{ChartType::BarV, ChartType::Pie},
                                                           {ChartType::Pie, ChartType::BarV},
                                                           {ChartType::BarH, ChartType::Pie},
                                                           {ChartType::Pie, ChartType::BarH}};
    for (auto [from, to] : morphs) {
        PlanBundle b = build_plan({simple_chart(from), simple_chart(to)}, {});
        KeyframeTimeline tl = build_timeline(b);
        const Stage* s = stage_with(b.plan, UnitKind::ChangeChartType);
        for (int k = 0; k <= 100; ++k) {
            double t = static_cast<double>(s->start) + static_cast<double>(s->duration) * k / 100.0;
            double sum = 0;
            for (const auto& m : sample_scene(tl, t).marks)
                if (is_sector(m.glyph))
                    sum += std::abs(to_sector(m.glyph).sweep);
            worst = std::max(worst, sum);
            ++samples;
        }
    }
    bool pieOk = worst <= 2 * kPi + 1e-9;

    bool easingOk = true;
    for (Easing e : {Easing::Linear, Easing::SlowInSlowOut}) {
        double prev = -1;
        easingOk = easingOk && ease(e, 0.0) == 0.0 && ease(e, 1.0) == 1.0;
        for (int i = 0; i <= 1000; ++i) {
            double v = ease(e, i / 1000.0);
            easingOk = easingOk && v >= prev && v >= 0 && v <= 1;
            prev = v;
        }
    }
    easingOk = easingOk && std::abs(ease(Easing::SlowInSlowOut, 0.25) - 0.0625) < 1e-12;
    std::ostringstream d;
    d << "max sweep sum " << worst << " over " << samples << " samples (2pi = " << 2 * kPi << "), easing grid "
      << (easingOk ? "monotone with exact endpoints" : "violated");
    return {pieOk && easingOk, d.str()};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"priority-order suite", priority_suite},
        {"edit-script round-trip fuzz", fuzz_replay},
        {"golden composition plan", fig5_golden},
        {"timing arithmetic", timing_arithmetic},
        {"morph totality", morph_totality},
        {"gallery stage structures", gallery},
        {"endpoint exactness", endpoint_exactness},
        {"numerical invariants", numerical_invariants},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    }
    return failed ? 1 : 0;
}
