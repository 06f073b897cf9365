#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "textweave/flow.hpp"
#include "textweave/postprocess.hpp"

namespace textweave {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One conversion: raw HTML bytes in, rendered document + formatted output.
struct ConversionRequest {
    std::string html;  // raw bytes
    std::optional<std::string> encoding;
    std::optional<std::string> annotation_rules_json;
    std::string postprocessor = "plain";
    std::optional<std::string> profile_json;
};

struct ConversionResult {
    RenderedDocument document;
    std::string output;
};

/// Runs the full pipeline. Throws RuleError / ProfileError / FormatError
/// for invalid rules, profile overrides, or an unknown postprocessor;
/// never fails on the HTML itself.
ConversionResult convert(const ConversionRequest& request);

/// Same, against a caller-owned profile and registry (the service reuses
/// both across requests).
ConversionResult convert(const ConversionRequest& request, const StyleProfile& base_profile,
                         const PostprocessorRegistry& registry);

}  // namespace textweave
