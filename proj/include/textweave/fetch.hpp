#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>

namespace textweave {

struct FetchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FetchResult {
    std::string body;
    std::optional<std::string> charset;  // from the Content-Type header, lowercase
};

/// HTTP GET with redirect following. Throws FetchError on DNS/connect/
/// timeout errors, HTTP status >= 400, or more than `max_redirects` hops.
FetchResult fetch_url(const std::string& url,
                      std::chrono::seconds timeout = std::chrono::seconds(30),
                      long max_redirects = 5);

}  // namespace textweave
