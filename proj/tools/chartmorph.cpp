#include "chartmorph/service.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace chartmorph;

namespace {

struct Flags {
    std::string source, target, configFile, planFile, out;
    std::optional<std::string> timing, easing, format;
    std::optional<std::int64_t> stepMs;
    std::optional<int> fps;
    std::optional<std::size_t> flip;
    std::vector<std::string> effects;
    bool embedInputs = false;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ChartError(ErrorCode::IoFailure, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_json(const std::string& path)
{
    std::string text = read_file(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError({{ErrorCode::MalformedDocument, "Syntax", path, e.what()}});
    }
}

// defaults < --config file < flags
PlanConfig resolve_config(const Flags& f)
{
    PlanConfig config;
    if (!f.configFile.empty())
        apply_config_json(config, read_json(f.configFile), f.configFile);
    Json overlay = Json::object();
    if (f.stepMs)
        overlay["stepMs"] = *f.stepMs;
    if (f.timing)
        overlay["timing"] = *f.timing;
    if (f.easing)
        overlay["easing"] = *f.easing;
    if (f.fps)
        overlay["fps"] = *f.fps;
    if (f.format)
        overlay["format"] = *f.format;
    if (f.flip)
        overlay["flipPreference"] = *f.flip;
    if (f.embedInputs)
        overlay["embedInputs"] = true;
    if (!f.effects.empty()) {
        Json effects = Json::object();
        for (const auto& e : f.effects) {
            auto eq = e.find('=');
            if (eq == std::string::npos)
                throw InputError({{ErrorCode::SchemaViolation, "EffectFlag", "--effect", "expected <kind>=<effect>, got " + e}});
            effects[e.substr(0, eq)] = e.substr(eq + 1);
        }
        overlay["effects"] = effects;
    }
    // A timing flag without --step-ms keeps the file's step length.
    if (overlay.contains("timing") && !overlay.contains("stepMs"))
        overlay["stepMs"] = config.timing.stepMs;
    apply_config_json(config, overlay, "flags");
    return config;
}

void add_config_flags(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--config", f.configFile, "JSON config file");
    cmd->add_option("--timing", f.timing, "animation | fixed:<ms>");
    cmd->add_option("--step-ms", f.stepMs, "duration of one animation step");
    cmd->add_option("--easing", f.easing, "linear | in-out");
    cmd->add_option("--effect", f.effects, "<unitKind>=<effectId>, repeatable");
    cmd->add_option("--flip-preference", f.flip, "reverse one priority row (1-7)");
}

void print_error(const ChartError& e)
{
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    if (const auto* input = dynamic_cast<const InputError*>(&e))
        for (const auto& v : input->violations())
            std::cerr << "  " << v.path << ": " << to_string(v.code) << " (" << v.rule << ") " << v.message << "\n";
}

int cmd_plan(const Flags& f)
{
    PlanConfig config = resolve_config(f);
    PlanBundle b = build_plan(parse_chart_pair(read_file(f.source), read_file(f.target)), config);
    std::string doc = serialize_plan(b.plan);
    if (f.out.empty() || f.out == "-") {
        std::cout << doc;
    } else {
        std::ofstream out(f.out, std::ios::binary);
        out << doc;
        if (!out)
            throw ChartError(ErrorCode::IoFailure, "cannot write " + f.out);
    }
    return 0;
}

int cmd_render(const Flags& f)
{
    PlanBundle b;
    PlanConfig config;
    if (!f.planFile.empty()) {
        Json doc = read_json(f.planFile);
        b = bundle_from_plan(doc);
        apply_config_json(config, doc.value("config", Json::object()), "plan.config");
        Flags rest;
        rest.fps = f.fps;
        rest.format = f.format;
        PlanConfig overlay = resolve_config(rest);
        config.fps = overlay.fps;
        config.format = overlay.format;
    } else {
        if (f.source.empty() || f.target.empty())
            throw InputError({{ErrorCode::SchemaViolation, "Required", "render",
                               "render needs <source> <target> or --plan"}});
        config = resolve_config(f);
        b = build_plan(parse_chart_pair(read_file(f.source), read_file(f.target)), config);
    }
    std::string out = f.out.empty() ? "out" : f.out;
    ExportResult r = export_animation(b.plan, build_timeline(b), config.fps, config.format, out);
    std::cout << "wrote " << r.files.size() << " files to " << out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Animated transitions between two charts"};
    app.require_subcommand(1);
    Flags f;
    std::string host = "127.0.0.1";
    int port = 8080;

    auto* plan = app.add_subcommand("plan", "compute the transition plan");
    plan->add_option("source", f.source, "source chart document")->required();
    plan->add_option("target", f.target, "target chart document")->required();
    plan->add_option("--out", f.out, "plan file (stdout when omitted)");
    plan->add_flag("--embed-inputs", f.embedInputs, "store both documents in the plan");
    add_config_flags(plan, f);

    auto* render = app.add_subcommand("render", "synthesize and export frames");
    render->add_option("source", f.source, "source chart document");
    render->add_option("target", f.target, "target chart document");
    render->add_option("--plan", f.planFile, "plan document with embedded inputs");
    render->add_option("--out", f.out, "output directory")->default_str("out");
    render->add_option("--fps", f.fps, "frames per second");
    render->add_option("--format", f.format, "frames | gif | planOnly");
    render->add_flag("--embed-inputs", f.embedInputs, "store both documents in plan.json");
    add_config_flags(render, f);

    auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
    serve_cmd->add_option("--host", host, "bind address");
    serve_cmd->add_option("--port", port, "port");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*plan)
            return cmd_plan(f);
        if (*render)
            return cmd_render(f);
        std::cerr << "listening on " << host << ":" << port << "\n";
        serve(host, port);
        return 0;
    } catch (const ChartError& e) {
        print_error(e);
        bool internal = e.code() == ErrorCode::MissingCorrespondence || e.code() == ErrorCode::AmbiguousClassification;
        return internal ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
