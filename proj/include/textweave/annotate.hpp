#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "textweave/dom.hpp"

namespace textweave {

/// A labeled half-open character span over the final output text.
/// Offsets count Unicode code points.
struct Annotation {
    std::size_t start = 0;
    std::size_t end = 0;
    std::string label;

    friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct RuleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// User annotation rules, compiled from a JSON object
/// {"selector": ["label", ...]} where selector is `tag` or `tag#attr=value`.
class CompiledRules {
public:
    CompiledRules() = default;

    /// Throws RuleError on malformed JSON (with position), invalid
    /// selectors, or empty/non-string label lists.
    static CompiledRules compile(std::string_view json_text);

    bool empty() const { return by_tag_.empty(); }

    /// All labels whose rule matches the element, in rule order.
    std::vector<std::string> match(const Node& element) const;

private:
    struct AttributeCondition {
        std::string name;   // lowercase
        std::string value;  // trimmed, compared case-sensitively
    };
    struct Rule {
        std::optional<AttributeCondition> condition;
        std::vector<std::string> labels;
    };
    std::unordered_map<std::string, std::vector<Rule>> by_tag_;
};

inline CompiledRules compile_rules(std::string_view json_text) {
    return CompiledRules::compile(json_text);
}

/// Stable sort by (start asc, end desc, label asc).
void sort_annotations(std::vector<Annotation>& annotations);

}  // namespace textweave
