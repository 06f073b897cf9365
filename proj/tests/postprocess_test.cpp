#include <doctest.h>

#include <nlohmann/json.hpp>
#include <string>

#include "support/oracles.hpp"
#include "textweave/dom.hpp"
#include "textweave/postprocess.hpp"
#include "textweave/utf8.hpp"

using namespace textweave;
using testsupport::Rng;

namespace {

RenderedDocument doc_of(std::string text, std::vector<Annotation> anns = {}) {
    return RenderedDocument{std::move(text), std::move(anns)};
}

}  // namespace

TEST_CASE("to_plain is the identity on text") {
    CHECK(to_plain(doc_of("a\n")) == "a\n");
    CHECK(to_plain(doc_of("")) == "");
    CHECK(to_plain(doc_of("a\n", {{0, 1, "x"}})) == "a\n");
}

TEST_CASE("to_xml wraps spans in label elements") {
    CHECK(to_xml(doc_of("bold\n", {{0, 4, "emphasis"}})) ==
          "<document><emphasis>bold</emphasis>\n</document>");
    CHECK(to_xml(doc_of("a\n")) == "<document>a\n</document>");
    CHECK(to_xml(doc_of("a&b\n")) == "<document>a&amp;b\n</document>");
    CHECK(to_xml(doc_of("1<2>0\n")) == "<document>1&lt;2&gt;0\n</document>");
}

TEST_CASE("to_xml splits overlapping spans into a well-formed tree") {
    const std::string xml =
        to_xml(doc_of("abcdefgh\n", {{0, 5, "A"}, {3, 8, "B"}}));
    CHECK(xml == "<document><A>abc<B>de</B></A><B>fgh</B>\n</document>");
    CHECK(testsupport::xml_unwrap(xml) == "abcdefgh\n");
}

TEST_CASE("to_xml sanitizes labels into XML names") {
    const std::string xml = to_xml(doc_of("x\n", {{0, 1, "1 bad label!"}}));
    CHECK(xml.find("<__bad_label_>") != std::string::npos);
    CHECK(testsupport::xml_unwrap(xml) == "x\n");
}

TEST_CASE("to_xml unwraps to the exact text on nested and touching spans") {
    const std::string text = "one two three\n";
    const std::vector<Annotation> anns = {
        {0, 13, "all"}, {0, 3, "w1"}, {4, 7, "w2"}, {4, 7, "w2b"}, {8, 13, "w3"}};
    const std::string xml = to_xml(doc_of(text, anns));
    CHECK(testsupport::xml_unwrap(xml) == text);
}

TEST_CASE("to_surface_html highlights spans inside a pre block") {
    const std::string page = to_surface_html(doc_of("Heading\nbody\n", {{0, 7, "heading"}}));
    CHECK(page.find("<pre>") != std::string::npos);
    CHECK(page.find("class=\"label-heading\"") != std::string::npos);
    CHECK(page.find("title=\"heading\"") != std::string::npos);
    CHECK(page.find(".label-heading { background-color: #") != std::string::npos);
}

TEST_CASE("to_surface_html without annotations is just the text") {
    const std::string page = to_surface_html(doc_of("plain < text\n"));
    CHECK(page.find("<span") == std::string::npos);
    CHECK(page.find("plain &lt; text") != std::string::npos);
}

TEST_CASE("to_surface_html emits one style rule per distinct label") {
    const std::string page =
        to_surface_html(doc_of("ab\n", {{0, 1, "first"}, {1, 2, "second"}}));
    CHECK(page.find(".label-first {") != std::string::npos);
    CHECK(page.find(".label-second {") != std::string::npos);
}

TEST_CASE("surface html colors are deterministic") {
    const std::string a = to_surface_html(doc_of("x\n", {{0, 1, "k"}}));
    const std::string b = to_surface_html(doc_of("x\n", {{0, 1, "k"}}));
    CHECK(a == b);
}

TEST_CASE("to_jsonl emits one doccano line") {
    CHECK(to_jsonl(doc_of("bold\n", {{0, 4, "emphasis"}})) ==
          "{\"text\":\"bold\\n\",\"label\":[[0,4,\"emphasis\"]]}\n");
    CHECK(to_jsonl(doc_of("a\n")) == "{\"text\":\"a\\n\",\"label\":[]}\n");
}

TEST_CASE("jsonl lines reparse and revalidate") {
    const RenderedDocument doc =
        doc_of("pay 5 EUR now\n", {{0, 3, "verb"}, {4, 9, "amount"}});
    const std::string line = to_jsonl(doc);
    REQUIRE(line.back() == '\n');
    const nlohmann::json parsed = nlohmann::json::parse(line);
    CHECK(parsed["text"].get<std::string>() == doc.text);
    const std::size_t text_len = utf8::decode(doc.text).size();
    for (const auto& span : parsed["label"]) {
        const std::size_t s = span[0].get<std::size_t>();
        const std::size_t e = span[1].get<std::size_t>();
        CHECK(s < e);
        CHECK(e <= text_len);
    }
}

TEST_CASE("registry finds built-ins and accepts extensions") {
    PostprocessorRegistry registry = PostprocessorRegistry::built_in();
    CHECK(registry.find("plain"));
    CHECK(registry.find("xml"));
    CHECK(registry.find("html"));
    CHECK(registry.find("jsonl"));
    CHECK(!registry.find("bogus"));
    CHECK(registry.names() == std::vector<std::string>{"html", "jsonl", "plain", "xml"});

    registry.register_format("upper", [](const RenderedDocument& doc) {
        std::string out = doc.text;
        for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return out;
    });
    const Postprocessor* upper = registry.find("upper");
    REQUIRE(upper);
    CHECK((*upper)(doc_of("ab\n")) == "AB\n");
}

TEST_CASE("exporters are pure and agree with random annotated documents") {
    Rng rng(5150);
    const StyleProfile profile = default_profile();
    const CompiledRules rules =
        compile_rules(R"({"b": ["b-label"], "h1": ["title"], "td": ["cell"], "li": ["item"]})");
    for (int round = 0; round < 80; ++round) {
        std::string html;
        const int n = 1 + rng.below(5);
        for (int i = 0; i < n; ++i) {
            switch (rng.below(5)) {
                case 0: html += "<h1>" + rng.messy_text(1 + rng.below(3)) + "</h1>"; break;
                case 1: html += "<p>" + rng.messy_text(rng.below(4)) + "<b>" +
                                rng.messy_text(1) + "</b></p>"; break;
                case 2: html += "<ul><li>" + rng.word(1, 6) + "</li><li>" + rng.word(1, 6) +
                                "</li></ul>"; break;
                case 3: html += "<table><tr><td>" + rng.word(1, 8) + "</td><td><b>" +
                                rng.word(1, 4) + "</b></td></tr></table>"; break;
                default: html += rng.messy_text(rng.below(4));
            }
        }
        const RenderedDocument doc = render(parse_html(html), profile, rules);

        const std::string xml = to_xml(doc);
        CHECK_MESSAGE(testsupport::xml_unwrap(xml) == doc.text, "html: ", html);
        CHECK(to_xml(doc) == xml);  // byte-identical on the same input

        const nlohmann::json line = nlohmann::json::parse(to_jsonl(doc));
        CHECK(line["text"].get<std::string>() == doc.text);
        CHECK(line["label"].size() == doc.annotations.size());

        // The highlighted page reparses with the project's own parser; at
        // least one span element per annotation survives.
        const ElementTree page = parse_html(to_surface_html(doc));
        CHECK(testsupport::count_elements(page.root, "span") >= doc.annotations.size());
        CHECK(testsupport::count_elements(page.root, "pre") == 1);
    }
}
