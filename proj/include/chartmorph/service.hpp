#ifndef CHARTMORPH_SERVICE_HPP
#define CHARTMORPH_SERVICE_HPP

#include "chartmorph/pipeline.hpp"

#include <string>

namespace chartmorph {

struct HttpResponse {
    int status = 200;
    std::string contentType = "application/json";
    std::string body;
};

// Routes one request. Pure function of its arguments:
//   POST /plan     {source, target, config?}                 -> plan document
//   POST /frames   {plan | source+target+config?, fps?, from?, to?, times?, keyframes?}
//   POST /export   {source, target, config?}                 -> tar, or gif when config.format = gif
//   GET  /defaults                                           -> bindings, effects, morph plans, config schema
HttpResponse handle_request(const std::string& method, const std::string& path, const std::string& body);

Json defaults_document();
Json to_json(const SceneGraph& scene);
Json to_json(const KeyframeTimeline& timeline);

// Blocks until stop_service() or process exit.
void serve(const std::string& host, int port);
void stop_service();

} // namespace chartmorph

#endif
