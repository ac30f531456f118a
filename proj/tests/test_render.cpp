#include "support.hpp"

#include <doctest.h>

#include <filesystem>
#include <regex>

using namespace testsupport;

namespace {

TransitionPlan plan_of_length(std::int64_t total)
{
    TransitionPlan p;
    p.total = total;
    return p;
}

std::size_t expected_frames(std::int64_t total, int fps)
{
    return static_cast<std::size_t>(total * fps / 1000) + 1;
}

ChartDocument three_by_two()
{
    return parse_chart_document(std::string_view(R"({
      "data": {"columns": [{"name": "Year", "role": "dimension", "valueType": "categorical"},
                           {"name": "Brand", "role": "dimension", "valueType": "categorical"},
                           {"name": "Sales", "role": "measure", "valueType": "numeric"}],
               "rows": [{"Year": "2019", "Brand": "A", "Sales": 10}, {"Year": "2019", "Brand": "B", "Sales": 20},
                        {"Year": "2020", "Brand": "A", "Sales": 30}, {"Year": "2020", "Brand": "B", "Sales": 40},
                        {"Year": "2021", "Brand": "A", "Sales": 50}, {"Year": "2021", "Brand": "B", "Sales": 45}]},
      "chart": {"type": "barV", "x": "Year", "legend": "Brand", "measures": [{"column": "Sales", "aggregate": "sum"}]}
    })"));
}

} // namespace

TEST_SUITE("render")
{
    TEST_CASE("frame counts")
    {
        CHECK(frame_times(plan_of_length(2000), 30).size() == 61);
        CHECK(frame_times(plan_of_length(3000), 1).size() == 4);
        CHECK(frame_times(plan_of_length(0), 30).size() == 1);
        for (std::int64_t total : {1, 999, 1001, 4567})
            for (int fps : {1, 12, 24, 30, 60})
                CHECK(frame_times(plan_of_length(total), fps).size() == expected_frames(total, fps));
    }

    TEST_CASE("last frame sits on the total")
    {
        auto f = frame_times(plan_of_length(1234), 30);
        CHECK(f.front().time == 0);
        CHECK(f.back().time == 1234);
        for (std::size_t i = 1; i < f.size(); ++i)
            CHECK(f[i].time > f[i - 1].time);
    }

    TEST_CASE("three by two clusters land on hand-computed bands")
    {
        // Plot 56..616: band 560/3, inner 80%, slot a third of 149.333.
        ChartDocument d = three_by_two();
        SceneGraph s = layout_chart(build_tree(d.table, d.chart), d.chart);
        std::string svg = render_svg(s);
        std::regex rect("<rect data-id=");
        auto n = std::distance(std::sregex_iterator(svg.begin(), svg.end(), rect), std::sregex_iterator());
        REQUIRE(s.marks.size() == 6);
        CHECK(n == 6);
        const double centers[] = {112, 186.6666667, 298.6666667, 373.3333333, 485.3333333, 560};
        for (std::size_t i = 0; i < 6; ++i) {
            CAPTURE(s.marks[i].id);
            CHECK(s.marks[i].glyph.mx == doctest::Approx(centers[i]));
            CHECK(s.marks[i].glyph.wid == doctest::Approx(74.6666667));
        }
    }

    TEST_CASE("svg is deterministic with three decimals")
    {
        ChartDocument d = three_by_two();
        SceneGraph s = layout_chart(build_tree(d.table, d.chart), d.chart);
        std::string a = render_svg(s), b = render_svg(s);
        CHECK(a == b);
        CHECK_FALSE(std::regex_search(a, std::regex(R"(\d\.\d{4,})")));
    }

    TEST_CASE("empty scene renders")
    {
        std::string svg = render_svg(SceneGraph{});
        CHECK(svg.find("<svg") != std::string::npos);
        CHECK(svg.find("</svg>") != std::string::npos);
    }

    TEST_CASE("lzw round trip")
    {
        std::mt19937 rng(3);
        for (int minCode : {2, 4, 8}) {
            std::vector<std::uint8_t> idx(5000);
            std::uniform_int_distribution<int> dist(0, (1 << minCode) - 1);
            for (std::size_t i = 0; i < idx.size(); ++i)
                idx[i] = static_cast<std::uint8_t>(i % 7 < 4 ? dist(rng) : 1);
            CHECK(gif_lzw_decode(gif_lzw(idx, minCode), minCode) == idx);
        }
        CHECK(gif_lzw_decode(gif_lzw({}, 2), 2).empty());
    }

    TEST_CASE("gif header and trailer")
    {
        ChartDocument d = three_by_two();
        Raster r = rasterize(layout_chart(build_tree(d.table, d.chart), d.chart));
        CHECK(r.width == 640);
        CHECK(r.height == 400);
        auto gif = encode_gif({r, r}, 3, {0, 1});
        REQUIRE(gif.size() > 13);
        CHECK(std::string(gif.begin(), gif.begin() + 6) == "GIF89a");
        CHECK(gif[6] == 640 % 256);
        CHECK(gif[7] == 640 / 256);
        CHECK(gif.back() == 0x3B);
    }

    TEST_CASE("tar layout")
    {
        std::string tar = make_tar({{"plan.json", "{}"}, {"frames/f00000.svg", "<svg/>"}});
        CHECK(tar.size() % 512 == 0);
        CHECK(tar.substr(0, 9) == "plan.json");
        CHECK(tar.substr(257, 5) == "ustar");
        CHECK(tar.substr(512, 2) == "{}");
    }

    TEST_CASE("planOnly writes only the plan")
    {
        PlanBundle b = plan_fixture("fig7b_sort");
        auto files = export_files(b.plan, build_timeline(b), 30, ExportFormat::PlanOnly);
        REQUIRE(files.size() == 1);
        CHECK(files[0].first == "plan.json");
    }

    TEST_CASE("identical charts give one frame")
    {
        PlanBundle b = plan_fixture("identical");
        auto files = export_files(b.plan, build_timeline(b), 30, ExportFormat::Frames);
        auto frames = std::count_if(files.begin(), files.end(), [](const auto& f) { return f.first.rfind("frames/", 0) == 0; });
        CHECK(frames == 1);
    }

    TEST_CASE("export writes the documented tree")
    {
        PlanBundle b = plan_fixture("fig7b_sort");
        auto dir = std::filesystem::temp_directory_path() / "chartmorph_render_test";
        std::filesystem::remove_all(dir);
        ExportResult r = export_animation(b.plan, build_timeline(b), 10, ExportFormat::Gif, dir);
        CHECK(std::filesystem::exists(dir / "plan.json"));
        CHECK(std::filesystem::exists(dir / "manifest.json"));
        CHECK(std::filesystem::exists(dir / "frames" / "f00000.svg"));
        CHECK(std::filesystem::exists(dir / "animation.gif"));
        CHECK(r.manifest["frames"].size() == expected_frames(b.plan.total, 10));
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("unknown format name")
    {
        CHECK_FALSE(parse_export_format("mp4"));
        CHECK(parse_export_format("gif") == ExportFormat::Gif);
        CHECK(parse_export_format("planOnly") == ExportFormat::PlanOnly);
    }
}
