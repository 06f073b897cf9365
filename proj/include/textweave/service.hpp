#pragma once

#include <cstddef>
#include <httplib.h>

#include "textweave/style.hpp"

namespace textweave {

struct ServiceConfig {
    StyleProfile profile = default_profile();
    std::size_t max_body_bytes = std::size_t{16} * 1024 * 1024;
};

/// Body-size limit: CONVERT_MAX_BODY_BYTES from the environment when set
/// and parseable, otherwise `fallback`.
std::size_t max_body_bytes_from_env(std::size_t fallback);

/// Wires the conversion endpoints onto a server:
///   POST /get_text  {"html", "annotation_rules"?, "postprocessor"?}
///   GET  /health    -> "OK"
/// Handlers share only the immutable config; requests convert independently.
void configure_service(httplib::Server& server, ServiceConfig config);

}  // namespace textweave
