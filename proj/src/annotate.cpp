#include "textweave/annotate.hpp"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

namespace textweave {

namespace {

std::string_view trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

bool valid_tag_name(std::string_view tag) {
    if (tag.empty()) return false;
    for (char c : tag) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':')
            continue;
        return false;
    }
    return true;
}

}  // namespace

CompiledRules CompiledRules::compile(std::string_view json_text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw RuleError(std::string("annotation rules: ") + e.what());
    }
    if (!doc.is_object())
        throw RuleError("annotation rules: top level must be a JSON object");

    CompiledRules compiled;
    for (const auto& [selector, value] : doc.items()) {
        Rule rule;
        std::string tag;
        const std::size_t hash = selector.find('#');
        if (hash == std::string::npos) {
            tag = lower(trim(selector));
        } else {
            tag = lower(trim(selector.substr(0, hash)));
            const std::string condition = selector.substr(hash + 1);
            const std::size_t eq = condition.find('=');
            if (eq == std::string::npos)
                throw RuleError("annotation rules: selector '" + selector +
                                "' needs the form tag#attr=value");
            AttributeCondition cond;
            cond.name = lower(trim(condition.substr(0, eq)));
            cond.value = std::string(trim(condition.substr(eq + 1)));
            if (!valid_tag_name(cond.name))
                throw RuleError("annotation rules: bad attribute name in selector '" + selector +
                                "'");
            rule.condition = std::move(cond);
        }
        if (!valid_tag_name(tag))
            throw RuleError("annotation rules: bad tag in selector '" + selector + "'");

        if (!value.is_array() || value.empty())
            throw RuleError("annotation rules: labels for '" + selector +
                            "' must be a non-empty list");
        for (const auto& label : value) {
            if (!label.is_string())
                throw RuleError("annotation rules: labels for '" + selector + "' must be strings");
            const std::string text = label.get<std::string>();
            if (text.empty() || text.find('\n') != std::string::npos)
                throw RuleError("annotation rules: bad label for '" + selector + "'");
            rule.labels.push_back(text);
        }
        compiled.by_tag_[tag].push_back(std::move(rule));
    }
    return compiled;
}

std::vector<std::string> CompiledRules::match(const Node& element) const {
    std::vector<std::string> labels;
    if (!element.is_element()) return labels;
    auto it = by_tag_.find(element.tag);
    if (it == by_tag_.end()) return labels;
    for (const Rule& rule : it->second) {
        if (rule.condition) {
            const std::string* value = element.find_attribute(rule.condition->name);
            if (!value || trim(*value) != rule.condition->value) continue;
        }
        labels.insert(labels.end(), rule.labels.begin(), rule.labels.end());
    }
    return labels;
}

void sort_annotations(std::vector<Annotation>& annotations) {
    std::stable_sort(annotations.begin(), annotations.end(),
                     [](const Annotation& a, const Annotation& b) {
                         if (a.start != b.start) return a.start < b.start;
                         if (a.end != b.end) return a.end > b.end;
                         return a.label < b.label;
                     });
}

}  // namespace textweave
