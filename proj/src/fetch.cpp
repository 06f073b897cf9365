#include "textweave/fetch.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>

#include <curl/curl.h>

namespace textweave {

namespace {

constexpr const char* user_agent = "textweave-convert/0.1";

void global_init_once() {
    static std::once_flag flag;
    std::call_once(flag, [] { curl_global_init(CURL_GLOBAL_DEFAULT); });
}

std::size_t write_body(char* data, std::size_t size, std::size_t nmemb, void* userdata) {
    auto* body = static_cast<std::string*>(userdata);
    body->append(data, size * nmemb);
    return size * nmemb;
}

std::optional<std::string> charset_from_content_type(const char* content_type) {
    if (!content_type) return std::nullopt;
    std::string value(content_type);
    std::transform(value.begin(), value.end(), value.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    const std::size_t pos = value.find("charset=");
    if (pos == std::string::npos) return std::nullopt;
    std::size_t i = pos + 8;
    if (i < value.size() && (value[i] == '"' || value[i] == '\'')) ++i;
    std::size_t start = i;
    while (i < value.size() && value[i] != ';' && value[i] != '"' && value[i] != '\'' &&
           !std::isspace(static_cast<unsigned char>(value[i])))
        ++i;
    if (i == start) return std::nullopt;
    return value.substr(start, i - start);
}

}  // namespace

FetchResult fetch_url(const std::string& url, std::chrono::seconds timeout, long max_redirects) {
    if (url.rfind("http://", 0) != 0 && url.rfind("https://", 0) != 0)
        throw FetchError("unsupported URL scheme: " + url);
    global_init_once();

    CURL* curl = curl_easy_init();
    if (!curl) throw FetchError("could not initialize HTTP client");

    FetchResult result;
    char error_buffer[CURL_ERROR_SIZE] = {0};
    curl_easy_setopt(curl, CURLOPT_URL, url.c_str());
    curl_easy_setopt(curl, CURLOPT_WRITEFUNCTION, write_body);
    curl_easy_setopt(curl, CURLOPT_WRITEDATA, &result.body);
    curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(curl, CURLOPT_MAXREDIRS, max_redirects);
    curl_easy_setopt(curl, CURLOPT_TIMEOUT, static_cast<long>(timeout.count()));
    curl_easy_setopt(curl, CURLOPT_USERAGENT, user_agent);
    curl_easy_setopt(curl, CURLOPT_ERRORBUFFER, error_buffer);
    curl_easy_setopt(curl, CURLOPT_ACCEPT_ENCODING, "");  // allow compressed transfer

    const CURLcode code = curl_easy_perform(curl);
    if (code != CURLE_OK) {
        std::string cause = error_buffer[0] ? error_buffer : curl_easy_strerror(code);
        curl_easy_cleanup(curl);
        throw FetchError("fetch failed for " + url + ": " + cause);
    }
    long status = 0;
    curl_easy_getinfo(curl, CURLINFO_RESPONSE_CODE, &status);
    if (status >= 400) {
        curl_easy_cleanup(curl);
        throw FetchError("fetch failed for " + url + ": HTTP status " + std::to_string(status));
    }
    char* content_type = nullptr;
    curl_easy_getinfo(curl, CURLINFO_CONTENT_TYPE, &content_type);
    result.charset = charset_from_content_type(content_type);
    curl_easy_cleanup(curl);
    return result;
}

}  // namespace textweave
