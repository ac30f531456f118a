#include "support.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <sys/wait.h>

using namespace testsupport;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

fs::path scratch()
{
    fs::path d = fs::temp_directory_path() / ("chartmorph_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

Run cli(const std::string& args)
{
    fs::path out = scratch() / "stdout.txt";
    std::string cmd = std::string(CHARTMORPH_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_text(out.string())};
}

std::string pair_args(const std::string& name)
{
    return fixtures_dir() + "/" + name + "/source.json " + fixtures_dir() + "/" + name + "/target.json";
}

void write(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("plan prints the same document as the service")
    {
        Run r = cli("plan " + pair_args("fig5_composition"));
        CHECK(r.code == 0);
        CHECK(r.out == handle_request("POST", "/plan", fixture_request("fig5_composition").dump()).body);
    }

    TEST_CASE("identical inputs give zero stages")
    {
        Run r = cli("plan " + pair_args("identical"));
        REQUIRE(r.code == 0);
        Json p = Json::parse(r.out);
        CHECK(p["stages"].empty());
        CHECK(p["total"] == 0);
    }

    TEST_CASE("fixed timing totals the budget plus standing")
    {
        Run r = cli("plan " + pair_args("fig7e_drilldown") + " --timing fixed:2000");
        REQUIRE(r.code == 0);
        Json p = Json::parse(r.out);
        std::int64_t animated = 0, standing = 0;
        for (const auto& s : p["stages"]) {
            animated += s["duration"].get<std::int64_t>();
            standing += s["standingBefore"].get<std::int64_t>();
        }
        CHECK(animated == 2000);
        CHECK(p["total"] == 2000 + standing);
    }

    TEST_CASE("flags override the config file")
    {
        fs::path cfg = scratch() / "config.json";
        write(cfg, R"({"timing": "fixed:3000", "easing": "in-out"})");
        Json fromFile = Json::parse(cli("plan " + pair_args("fig7b_sort") + " --config " + cfg.string()).out);
        CHECK(fromFile["config"]["timing"] == "fixed:3000");
        CHECK(fromFile["config"]["easing"] == "slowInSlowOut");
        Json flagged =
            Json::parse(cli("plan " + pair_args("fig7b_sort") + " --config " + cfg.string() + " --easing linear").out);
        CHECK(flagged["config"]["timing"] == "fixed:3000");
        CHECK(flagged["config"]["easing"] == "linear");
        Json plain = Json::parse(cli("plan " + pair_args("fig7b_sort")).out);
        CHECK(plain["config"]["timing"] == "animation");
    }

    TEST_CASE("effect flags")
    {
        Run ok = cli("plan " + pair_args("fig7a_filter") + " --effect RemoveDataItem=fadeOut");
        REQUIRE(ok.code == 0);
        CHECK(ok.out.find("\"fadeOut\"") != std::string::npos);
        CHECK(cli("plan " + pair_args("fig7a_filter") + " --effect RemoveDataItem=grow").code == 1);
        CHECK(cli("plan " + pair_args("fig7a_filter") + " --effect nonsense").code == 1);
    }

    TEST_CASE("validation failures exit 1")
    {
        fs::path bad = scratch() / "bad.json";
        write(bad, "{\"data\": ");
        CHECK(cli("plan " + bad.string() + " " + bad.string()).code == 1);
        CHECK(cli("plan /nonexistent/a.json /nonexistent/b.json").code == 1);
        CHECK(cli("plan").code == 1);
        CHECK(cli("frobnicate").code == 1);
        CHECK(cli("plan " + pair_args("fig7b_sort") + " --timing fixed:0").code == 1);
    }

    TEST_CASE("render writes frames and a gif")
    {
        fs::path out = scratch() / "render";
        fs::remove_all(out);
        Run r = cli("render " + pair_args("fig7b_sort") + " --fps 1 --format gif --out " + out.string());
        REQUIRE(r.code == 0);
        Json plan = Json::parse(read_text((out / "plan.json").string()));
        std::size_t frames = 0;
        for (const auto& e : fs::directory_iterator(out / "frames"))
            frames += e.path().extension() == ".svg";
        CHECK(frames == static_cast<std::size_t>(plan["total"].get<std::int64_t>() / 1000) + 1);
        CHECK(fs::exists(out / "animation.gif"));
        CHECK(fs::exists(out / "manifest.json"));
    }

    TEST_CASE("planOnly writes no frames")
    {
        fs::path out = scratch() / "planonly";
        fs::remove_all(out);
        REQUIRE(cli("render " + pair_args("fig7b_sort") + " --format planOnly --out " + out.string()).code == 0);
        CHECK(fs::exists(out / "plan.json"));
        CHECK_FALSE(fs::exists(out / "frames"));
    }

    TEST_CASE("render from a plan with embedded inputs")
    {
        fs::path dir = scratch();
        fs::path plan = dir / "embedded.json";
        REQUIRE(cli("plan " + pair_args("fig7a_filter") + " --embed-inputs --out " + plan.string()).code == 0);
        fs::path out = dir / "from_plan";
        fs::remove_all(out);
        CHECK(cli("render --plan " + plan.string() + " --fps 2 --out " + out.string()).code == 0);
        CHECK(read_text((out / "plan.json").string()) == read_text(plan.string()));
        fs::path bare = dir / "bare.json";
        REQUIRE(cli("plan " + pair_args("fig7a_filter") + " --out " + bare.string()).code == 0);
        CHECK(cli("render --plan " + bare.string() + " --out " + (dir / "nope").string()).code == 1);
    }
}
