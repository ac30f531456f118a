#include "support.hpp"

#include <doctest.h>
#include <httplib.h>

#include <future>
#include <thread>

using namespace testsupport;

namespace {

HttpResponse post(const std::string& path, const Json& body)
{
    return handle_request("POST", path, body.dump());
}

} // namespace

TEST_SUITE("service")
{
    TEST_CASE("defaults list bindings, morph plans and config")
    {
        HttpResponse r = handle_request("GET", "/defaults", "");
        REQUIRE(r.status == 200);
        Json d = Json::parse(r.body);
        CHECK(d["morphPlans"].size() == 20);
        CHECK(d["bindings"].size() == kUnitKindCount);
        CHECK(d["bindings"]["AddDataItem"]["barV"] == "grow");
        CHECK(d["bindings"]["Sort"]["scatter"].is_null());
        CHECK(d["priority"].size() == 7);
        CHECK(d["config"]["timing"] == "animation");
        CHECK(d["config"]["fps"] == 30);
        CHECK(d["configSchema"]["type"] == "object");
    }

    TEST_CASE("plan endpoint equals the library serialization")
    {
        HttpResponse r = post("/plan", fixture_request("fig5_composition"));
        REQUIRE(r.status == 200);
        CHECK(r.body == serialize_plan(plan_fixture("fig5_composition").plan));
    }

    TEST_CASE("plan endpoint applies config")
    {
        HttpResponse r = post("/plan", fixture_request("fig7e_drilldown", Json{{"timing", "fixed:2000"}}));
        REQUIRE(r.status == 200);
        Json p = Json::parse(r.body);
        CHECK(p["config"]["timing"] == "fixed:2000");
    }

    TEST_CASE("malformed body gives 400 with violations")
    {
        HttpResponse r = handle_request("POST", "/plan", "{not json");
        CHECK(r.status == 400);
        Json e = Json::parse(r.body);
        CHECK(e["error"] == "MalformedDocument");
        CHECK_FALSE(e["violations"].empty());
    }

    TEST_CASE("invalid documents list violations with paths")
    {
        Json req = fixture_request("fig7b_sort");
        req["source"]["chart"]["x"] = "Nope";
        req["target"]["chart"]["type"] = "donut";
        HttpResponse r = post("/plan", req);
        CHECK(r.status == 400);
        Json e = Json::parse(r.body);
        bool src = false, tgt = false;
        for (const auto& v : e["violations"]) {
            src = src || v["path"].get<std::string>().rfind("source", 0) == 0;
            tgt = tgt || v["path"].get<std::string>().rfind("target", 0) == 0;
            CHECK(v.contains("code"));
            CHECK(v.contains("message"));
        }
        CHECK(src);
        CHECK(tgt);
    }

    TEST_CASE("missing documents and bad config")
    {
        CHECK(post("/plan", Json::object()).status == 400);
        CHECK(post("/plan", fixture_request("fig7b_sort", Json{{"easing", "bounce"}})).status == 400);
        HttpResponse r = post("/plan", fixture_request("fig7b_sort", Json{{"effects", {{"Sort", "fadeIn"}}}}));
        CHECK(r.status == 400);
        CHECK(Json::parse(r.body)["error"] == "UnsupportedCombination");
    }

    TEST_CASE("unknown route")
    {
        CHECK(handle_request("GET", "/nope", "").status == 404);
        CHECK(handle_request("GET", "/plan", "").status == 404);
    }

    TEST_CASE("frames endpoint samples the whole timeline")
    {
        Json req = fixture_request("fig7b_sort");
        req["fps"] = 10;
        HttpResponse r = post("/frames", req);
        REQUIRE(r.status == 200);
        Json f = Json::parse(r.body);
        PlanBundle b = plan_fixture("fig7b_sort");
        CHECK(f["total"] == b.plan.total);
        CHECK(f["frames"].size() == static_cast<std::size_t>(b.plan.total * 10 / 1000) + 1);
        CHECK(f["frames"][0]["svg"] == render_svg(layout_chart(b.sourceTree, b.pair.source.chart)));
        CHECK(f["frames"].back()["svg"] == render_svg(layout_chart(b.targetTree, b.pair.target.chart)));
        CHECK(f["frames"][0]["scene"]["marks"].size() == b.sourceTree.root.children.size());
        CHECK_FALSE(f.contains("timeline"));
    }

    TEST_CASE("frames endpoint takes a range, explicit times and a plan")
    {
        PlanConfig c;
        c.embedInputs = true;
        Json plan = Json::parse(serialize_plan(plan_fixture("fig7a_filter", c).plan));
        Json req{{"plan", plan}, {"from", 1000}, {"to", 1500}, {"fps", 10}, {"keyframes", true}};
        HttpResponse r = post("/frames", req);
        REQUIRE(r.status == 200);
        Json f = Json::parse(r.body);
        CHECK(f["frames"].size() == 6);
        CHECK(f.contains("timeline"));
        HttpResponse t = post("/frames", Json{{"plan", plan}, {"times", {0, 1250}}});
        REQUIRE(t.status == 200);
        Json tf = Json::parse(t.body);
        CHECK(tf["frames"].size() == 2);
        CHECK(tf["frames"][1]["stage"] == "s0");
        CHECK(post("/frames", Json{{"plan", plan}, {"from", -5}}).status == 400);
    }

    TEST_CASE("export returns a tar, or a gif when asked")
    {
        HttpResponse tar = post("/export", fixture_request("fig7b_sort", Json{{"fps", 5}}));
        REQUIRE(tar.status == 200);
        CHECK(tar.contentType == "application/x-tar");
        CHECK(tar.body.substr(0, 9) == "plan.json");
        CHECK(tar.body.size() % 512 == 0);
        HttpResponse gif = post("/export", fixture_request("fig7b_sort", Json{{"fps", 5}, {"format", "gif"}}));
        REQUIRE(gif.status == 200);
        CHECK(gif.contentType == "image/gif");
        CHECK(gif.body.rfind("GIF89a", 0) == 0);
    }

    TEST_CASE("concurrent requests match serial ones")
    {
        std::vector<std::string> names = {"fig5_composition", "fig7e_drilldown", "fig3_swap", "split_quarters"};
        std::vector<std::string> serial;
        for (const auto& n : names)
            serial.push_back(post("/plan", fixture_request(n)).body);
        std::vector<std::future<std::string>> jobs;
        for (int round = 0; round < 4; ++round)
            for (const auto& n : names)
                jobs.push_back(std::async(std::launch::async, [n] { return post("/plan", fixture_request(n)).body; }));
        for (std::size_t i = 0; i < jobs.size(); ++i)
            CHECK(jobs[i].get() == serial[i % names.size()]);
    }

    TEST_CASE("http server routes and CORS")
    {
        const int port = 18000 + static_cast<int>(::getpid() % 1000);
        std::thread server([port] { serve("127.0.0.1", port); });
        httplib::Client client("127.0.0.1", port);
        httplib::Result r;
        for (int i = 0; i < 100 && !r; ++i) {
            r = client.Get("/defaults");
            if (!r)
                std::this_thread::sleep_for(std::chrono::milliseconds(20));
        }
        REQUIRE(r);
        CHECK(r->status == 200);
        CHECK(r->get_header_value("Access-Control-Allow-Origin") == "*");
        auto p = client.Post("/plan", fixture_request("fig5_composition").dump(), "application/json");
        REQUIRE(p);
        CHECK(p->status == 200);
        CHECK(p->body == serialize_plan(plan_fixture("fig5_composition").plan));
        auto bad = client.Post("/plan", "[]", "application/json");
        REQUIRE(bad);
        CHECK(bad->status == 400);
        auto opt = client.Options("/plan");
        REQUIRE(opt);
        CHECK(opt->status == 204);
        stop_service();
        server.join();
    }
}
