#include "textweave/pipeline.hpp"

#include "textweave/annotate.hpp"
#include "textweave/dom.hpp"

namespace textweave {

ConversionResult convert(const ConversionRequest& request, const StyleProfile& base_profile,
                         const PostprocessorRegistry& registry) {
    const Postprocessor* post = registry.find(request.postprocessor);
    if (!post)
        throw FormatError("unknown postprocessor '" + request.postprocessor + "'");

    CompiledRules rules;
    if (request.annotation_rules_json) rules = compile_rules(*request.annotation_rules_json);

    const StyleProfile* profile = &base_profile;
    StyleProfile overridden;
    if (request.profile_json) {
        overridden = base_profile;
        apply_profile_overrides(overridden, *request.profile_json);
        profile = &overridden;
    }

    const ElementTree tree = parse_html(request.html, request.encoding);
    ConversionResult result;
    result.document = render(tree, *profile, rules);
    result.output = (*post)(result.document);
    return result;
}

ConversionResult convert(const ConversionRequest& request) {
    return convert(request, default_profile(), PostprocessorRegistry::built_in());
}

}  // namespace textweave
