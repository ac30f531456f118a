#include "chartmorph/service.hpp"

#include <httplib.h>

#include <atomic>
#include <memory>
#include <mutex>

namespace chartmorph {

namespace {

Json point_json(const Point2& p)
{
    return Json::array({p.x, p.y});
}

Json glyph_json(const Glyph& g)
{
    return Json{{"mx", g.mx}, {"my", g.my}, {"phi", g.phi}, {"kappa", g.kappa}, {"len", g.len}, {"wid", g.wid}};
}

Json mark_json(const Mark& m)
{
    Json j{{"id", m.id}, {"shape", to_string(m.shape)}, {"value", m.value}};
    if (m.shape == MarkShape::Polyline) {
        Json pts = Json::array();
        for (const auto& p : m.vertices)
            pts.push_back(point_json(p));
        j["vertices"] = pts;
    } else {
        j["glyph"] = glyph_json(m.glyph);
    }
    j["fill"] = to_hex(m.fill);
    j["opacity"] = m.opacity;
    return j;
}

Json chrome_json(const ChromeItem& c)
{
    Json j{{"id", c.id}, {"kind", c.kind == ChromeKind::Text ? "text" : "rule"}};
    if (c.kind == ChromeKind::Text) {
        j["text"] = c.text;
        j["x"] = c.x;
        j["y"] = c.y;
        j["anchor"] = c.anchor;
        j["fontSize"] = c.fontSize;
    } else {
        j["x1"] = c.x;
        j["y1"] = c.y;
        j["x2"] = c.x2;
        j["y2"] = c.y2;
        j["strokeWidth"] = c.strokeWidth;
    }
    j["fill"] = to_hex(c.fill);
    j["opacity"] = c.opacity;
    return j;
}

Json violations_json(const std::vector<Violation>& vs)
{
    Json out = Json::array();
    for (const auto& v : vs)
        out.push_back(Json{{"code", to_string(v.code)}, {"rule", v.rule}, {"path", v.path}, {"message", v.message}});
    return out;
}

HttpResponse json_response(int status, const Json& j)
{
    return {status, "application/json", j.dump(2) + "\n"};
}

Json parse_body(const std::string& body)
{
    try {
        Json j = Json::parse(body);
        if (!j.is_object())
            throw InputError({{ErrorCode::SchemaViolation, "WrongType", "$", "request body must be an object"}});
        return j;
    } catch (const Json::parse_error& e) {
        throw InputError({{ErrorCode::MalformedDocument, "Syntax", "$", e.what()}});
    }
}

// Body with source/target/config, or a plan document with embedded inputs.
PlanBundle bundle_from_request(const Json& body, PlanConfig& config)
{
    if (body.contains("plan")) {
        if (body.contains("config"))
            apply_config_json(config, body["config"]);
        PlanBundle b = bundle_from_plan(body["plan"]);
        apply_config_json(config, body["plan"].value("config", Json::object()), "plan.config");
        return b;
    }
    std::vector<Violation> missing;
    for (const char* key : {"source", "target"})
        if (!body.contains(key))
            missing.push_back({ErrorCode::SchemaViolation, "Required", key, std::string("missing '") + key + "'"});
    if (!missing.empty())
        throw InputError(missing);
    if (body.contains("config"))
        apply_config_json(config, body["config"]);
    return build_plan(parse_pair_json(body["source"], body["target"]), config);
}

HttpResponse post_plan(const Json& body)
{
    PlanConfig config;
    PlanBundle b = bundle_from_request(body, config);
    return {200, "application/json", serialize_plan(b.plan)};
}

double number_field(const Json& body, const char* key, double fallback)
{
    if (!body.contains(key))
        return fallback;
    if (!body[key].is_number())
        throw InputError({{ErrorCode::SchemaViolation, "WrongType", key, std::string(key) + " must be a number"}});
    return body[key].get<double>();
}

HttpResponse post_frames(const Json& body)
{
    PlanConfig config;
    PlanBundle b = bundle_from_request(body, config);
    KeyframeTimeline timeline = build_timeline(b);
    int fps = config.fps;
    if (body.contains("fps")) {
        if (!body["fps"].is_number_integer() || body["fps"].get<int>() <= 0)
            throw InputError({{ErrorCode::SchemaViolation, "Range", "fps", "fps must be a positive integer"}});
        fps = body["fps"].get<int>();
    }
    const double total = static_cast<double>(b.plan.total);
    Json frames = Json::array();
    auto emit = [&](std::size_t index, double t, const std::string& stage) {
        SceneGraph scene = sample_scene(timeline, t);
        frames.push_back(Json{{"index", index}, {"time", t}, {"stage", stage}, {"svg", render_svg(scene)},
                              {"scene", to_json(scene)}});
    };
    if (body.contains("times")) {
        if (!body["times"].is_array())
            throw InputError({{ErrorCode::SchemaViolation, "WrongType", "times", "times must be an array"}});
        std::size_t i = 0;
        for (const auto& t : body["times"]) {
            if (!t.is_number())
                throw InputError({{ErrorCode::SchemaViolation, "WrongType", "times", "times must hold numbers"}});
            double v = t.get<double>();
            std::string stage;
            for (const auto& s : b.plan.stages)
                if (v >= static_cast<double>(s.start - s.standingBefore))
                    stage = s.id;
            emit(i++, v, stage);
        }
    } else {
        double from = number_field(body, "from", 0), to = number_field(body, "to", total);
        if (from < 0 || to > total || from > to)
            throw ChartError(ErrorCode::OutOfRange, "time range must lie within [0, total]");
        for (const auto& f : frame_times(b.plan, fps))
            if (f.time >= from && f.time <= to)
                emit(f.index, f.time, f.stage);
    }
    Json out{{"total", b.plan.total}, {"fps", fps}, {"frames", frames}};
    if (body.value("keyframes", false))
        out["timeline"] = to_json(timeline);
    return json_response(200, out);
}

HttpResponse post_export(const Json& body)
{
    PlanConfig config;
    PlanBundle b = bundle_from_request(body, config);
    KeyframeTimeline timeline = build_timeline(b);
    auto files = export_files(b.plan, timeline, config.fps, config.format);
    if (config.format == ExportFormat::Gif)
        for (const auto& [name, bytes] : files)
            if (name == "animation.gif")
                return {200, "image/gif", bytes};
    return {200, "application/x-tar", make_tar(files)};
}

bool is_client_error(ErrorCode code)
{
    return code != ErrorCode::IoFailure && code != ErrorCode::MissingCorrespondence &&
           code != ErrorCode::AmbiguousClassification;
}

std::mutex serverMutex;
std::shared_ptr<httplib::Server> activeServer;

} // namespace

Json to_json(const SceneGraph& scene)
{
    Json marks = Json::array(), chrome = Json::array();
    for (const auto& m : scene.marks)
        marks.push_back(mark_json(m));
    for (const auto& c : scene.chrome)
        chrome.push_back(chrome_json(c));
    return Json{{"width", scene.width}, {"height", scene.height}, {"marks", marks}, {"chrome", chrome}};
}

Json to_json(const KeyframeTimeline& timeline)
{
    Json easing = Json::array();
    for (Easing e : timeline.easing)
        easing.push_back(to_string(e));
    Json marks = Json::array();
    for (const auto& track : timeline.marks) {
        Json states = Json::array();
        for (const auto& s : track.states)
            states.push_back(s.present ? mark_json(s.mark) : Json());
        marks.push_back(Json{{"id", track.id}, {"states", states}});
    }
    Json chrome = Json::array();
    for (const auto& track : timeline.chrome) {
        Json states = Json::array();
        for (const auto& s : track.states)
            states.push_back(s.present ? chrome_json(s.item) : Json());
        chrome.push_back(Json{{"id", track.id}, {"states", states}});
    }
    return Json{{"total", timeline.total}, {"times", timeline.times}, {"easing", easing},
                {"marks", marks},          {"chrome", chrome}};
}

Json defaults_document()
{
    Json bindings = Json::object(), allowed = Json::object();
    for (std::size_t i = 0; i < kUnitKindCount; ++i) {
        auto kind = static_cast<UnitKind>(i);
        Json perType = Json::object();
        for (ChartType t : kAllChartTypes) {
            try {
                perType[to_string(t)] = to_string(default_binding(kind, t));
            } catch (const ChartError&) {
                perType[to_string(t)] = nullptr;
            }
        }
        bindings[to_string(kind)] = perType;
        Json effects = Json::array();
        for (EffectId e : allowed_effects(kind))
            effects.push_back(to_string(e));
        allowed[to_string(kind)] = effects;
    }
    Json morphs = Json::array();
    for (ChartType from : kAllChartTypes)
        for (ChartType to : kAllChartTypes) {
            if (from == to)
                continue;
            Json steps = Json::array();
            for (MorphStep s : plan_mark_morph(from, to))
                steps.push_back(to_string(s));
            morphs.push_back(Json{{"from", to_string(from)}, {"to", to_string(to)}, {"steps", steps}});
        }
    PlanConfig defaults;
    Json config = config_echo(defaults);
    config["fps"] = defaults.fps;
    config["format"] = to_string(defaults.format);
    config["embedInputs"] = defaults.embedInputs;
    return Json{{"bindings", bindings},
                {"allowedEffects", allowed},
                {"morphPlans", morphs},
                {"priority", to_json(PriorityTable::defaults())},
                {"config", config},
                {"configSchema", config_schema()}};
}

HttpResponse handle_request(const std::string& method, const std::string& path, const std::string& body)
{
    try {
        if (method == "GET" && path == "/defaults")
            return json_response(200, defaults_document());
        if (method == "POST" && path == "/plan")
            return post_plan(parse_body(body));
        if (method == "POST" && path == "/frames")
            return post_frames(parse_body(body));
        if (method == "POST" && path == "/export")
            return post_export(parse_body(body));
        return json_response(404, Json{{"error", "NotFound"}, {"message", method + " " + path}});
    } catch (const InputError& e) {
        return json_response(400, Json{{"error", to_string(e.code())}, {"violations", violations_json(e.violations())}});
    } catch (const ChartError& e) {
        Json j{{"error", to_string(e.code())}, {"message", e.what()}};
        return json_response(is_client_error(e.code()) ? 400 : 500, j);
    } catch (const std::exception& e) {
        return json_response(500, Json{{"error", "Internal"}, {"message", e.what()}});
    }
}

void serve(const std::string& host, int port)
{
    auto server = std::make_shared<httplib::Server>();
    auto route = [](const httplib::Request& req, httplib::Response& res) {
        HttpResponse r = handle_request(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, r.contentType);
        res.set_header("Access-Control-Allow-Origin", "*");
    };
    server->Get("/defaults", route);
    server->Post("/plan", route);
    server->Post("/frames", route);
    server->Post("/export", route);
    server->Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.status = 204;
    });
    {
        std::lock_guard lock(serverMutex);
        activeServer = server;
    }
    if (!server->listen(host, port))
        throw ChartError(ErrorCode::IoFailure, "cannot listen on " + host + ":" + std::to_string(port));
}

void stop_service()
{
    std::lock_guard lock(serverMutex);
    if (activeServer)
        activeServer->stop();
    activeServer.reset();
}

} // namespace chartmorph
