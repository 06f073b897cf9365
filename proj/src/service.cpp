#include "textweave/service.hpp"

#include <cstdlib>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "textweave/annotate.hpp"
#include "textweave/pipeline.hpp"

namespace textweave {

namespace {

void respond_json(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json; charset=utf-8");
}

void respond_error(httplib::Response& res, int status, const std::string& message) {
    respond_json(res, status, nlohmann::ordered_json{{"error", message}});
}

}  // namespace

std::size_t max_body_bytes_from_env(std::size_t fallback) {
    const char* raw = std::getenv("CONVERT_MAX_BODY_BYTES");
    if (!raw || !*raw) return fallback;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || value == 0) return fallback;
    return static_cast<std::size_t>(value);
}

void configure_service(httplib::Server& server, ServiceConfig config) {
    auto shared = std::make_shared<const ServiceConfig>(std::move(config));
    auto registry = std::make_shared<const PostprocessorRegistry>(PostprocessorRegistry::built_in());

    server.set_payload_max_length(shared->max_body_bytes);

    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("OK", "text/plain; charset=utf-8");
    });

    server.Post("/get_text", [shared, registry](const httplib::Request& req,
                                                httplib::Response& res) {
        if (req.body.size() > shared->max_body_bytes) {
            respond_error(res, 413, "request body too large");
            return;
        }
        nlohmann::json body;
        try {
            body = nlohmann::json::parse(req.body);
        } catch (const nlohmann::json::parse_error& e) {
            respond_error(res, 400, std::string("invalid JSON body: ") + e.what());
            return;
        }
        if (!body.is_object() || !body.contains("html") || !body["html"].is_string()) {
            respond_error(res, 400, "body must be a JSON object with a string 'html' field");
            return;
        }

        ConversionRequest request;
        request.html = body["html"].get<std::string>();
        if (body.contains("postprocessor")) {
            if (!body["postprocessor"].is_string()) {
                respond_error(res, 400, "'postprocessor' must be a string");
                return;
            }
            request.postprocessor = body["postprocessor"].get<std::string>();
        }
        if (body.contains("annotation_rules") && !body["annotation_rules"].is_null()) {
            if (!body["annotation_rules"].is_object()) {
                respond_error(res, 400, "'annotation_rules' must be a JSON object");
                return;
            }
            request.annotation_rules_json = body["annotation_rules"].dump();
        }

        ConversionResult result;
        try {
            result = convert(request, shared->profile, *registry);
        } catch (const FormatError& e) {
            respond_error(res, 400, e.what());
            return;
        } catch (const RuleError& e) {
            respond_error(res, 400, e.what());
            return;
        }

        if (request.postprocessor == "xml" || request.postprocessor == "html") {
            respond_json(res, 200, nlohmann::ordered_json{{"output", result.output}});
            return;
        }
        nlohmann::ordered_json spans = nlohmann::ordered_json::array();
        for (const Annotation& ann : result.document.annotations)
            spans.push_back({ann.start, ann.end, ann.label});
        respond_json(res, 200,
                     nlohmann::ordered_json{{"text", result.document.text},
                                            {"annotations", std::move(spans)}});
    });
}

}  // namespace textweave
