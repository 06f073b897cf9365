#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <string>
#include <thread>

#include "support/subprocess.hpp"

using nlohmann::json;
using testsupport::BackgroundProcess;
using testsupport::ProcessResult;
using testsupport::run_process;

namespace {

const std::string convert_bin = CONVERT_BIN;
const std::string service_bin = CONVERT_SERVICE_BIN;

class TempFile {
public:
    TempFile(const std::string& name, const std::string& content)
        : path_("/tmp/textweave_clitest_" + name) {
        std::ofstream out(path_, std::ios::binary);
        out << content;
    }
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

}  // namespace

TEST_CASE("stdin is the default input and stdout the default output") {
    const ProcessResult r = run_process({convert_bin}, "<p>hello</p>");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "hello\n");
    CHECK(r.err.empty());
}

TEST_CASE("explicit dash reads stdin") {
    const ProcessResult r = run_process({convert_bin, "-"}, "<b>x</b>");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "x\n");
}

TEST_CASE("file input renders to stdout") {
    TempFile page("page.html", "<h1>Title</h1><p>Body</p>");
    const ProcessResult r = run_process({convert_bin, page.path()}, "");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "Title\n\nBody\n");
}

TEST_CASE("missing input file exits 1 with a diagnostic on stderr") {
    const ProcessResult r = run_process({convert_bin, "/nonexistent/nope.html"}, "");
    CHECK(r.exit_code == 1);
    CHECK(r.out.empty());
    CHECK(!r.err.empty());
}

TEST_CASE("unknown postprocessor is a usage error, exit 2") {
    const ProcessResult r = run_process({convert_bin, "--postprocessor", "bogus"}, "<p>x</p>");
    CHECK(r.exit_code == 2);
    CHECK(r.out.empty());
    CHECK(!r.err.empty());
}

TEST_CASE("unknown flags exit 2") {
    const ProcessResult r = run_process({convert_bin, "--frobnicate"}, "");
    CHECK(r.exit_code == 2);
}

TEST_CASE("version flag prints and exits 0") {
    const ProcessResult r = run_process({convert_bin, "--version"}, "");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("convert") != std::string::npos);
}

TEST_CASE("output file receives the exact bytes") {
    TempFile page("o_in.html", "<p>a</p>");
    const std::string out_path = "/tmp/textweave_clitest_out.txt";
    const ProcessResult r = run_process({convert_bin, page.path(), "-o", out_path}, "");
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    std::ifstream in(out_path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "a\n");
    std::remove(out_path.c_str());
}

TEST_CASE("unwritable output path exits 1") {
    const ProcessResult r =
        run_process({convert_bin, "-o", "/nonexistent/dir/out.txt"}, "<p>x</p>");
    CHECK(r.exit_code == 1);
}

TEST_CASE("annotation rules drive the annotated formats") {
    TempFile rules("rules.json", R"({"h1": ["heading"]})");
    const ProcessResult jsonl = run_process(
        {convert_bin, "--annotation-rules", rules.path(), "--postprocessor", "jsonl"},
        "<h1>T</h1>");
    CHECK(jsonl.exit_code == 0);
    CHECK(jsonl.out == "{\"text\":\"T\\n\",\"label\":[[0,1,\"heading\"]]}\n");

    const ProcessResult xml = run_process(
        {convert_bin, "--annotation-rules", rules.path(), "--postprocessor", "xml"},
        "<h1>T</h1>");
    CHECK(xml.out == "<document><heading>T</heading>\n</document>");

    const ProcessResult html = run_process(
        {convert_bin, "--annotation-rules", rules.path(), "--postprocessor", "html"},
        "<h1>T</h1>");
    CHECK(html.out.find("label-heading") != std::string::npos);
}

TEST_CASE("invalid rule files exit 2, unreadable ones exit 1") {
    TempFile bad("bad_rules.json", R"({"": ["x"]})");
    const ProcessResult invalid =
        run_process({convert_bin, "--annotation-rules", bad.path()}, "<p>x</p>");
    CHECK(invalid.exit_code == 2);
    CHECK(!invalid.err.empty());

    const ProcessResult missing =
        run_process({convert_bin, "--annotation-rules", "/nonexistent/rules.json"}, "<p>x</p>");
    CHECK(missing.exit_code == 1);
}

TEST_CASE("profile overrides load from a file") {
    TempFile profile("profile.json", R"({"div": {"margin-before": 1, "margin-after": 1}})");
    const ProcessResult r =
        run_process({convert_bin, "--profile", profile.path()}, "<div>a</div><div>b</div>");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "a\n\nb\n");

    TempFile bad("bad_profile.json", "nope");
    const ProcessResult invalid =
        run_process({convert_bin, "--profile", bad.path()}, "<p>x</p>");
    CHECK(invalid.exit_code == 2);
}

TEST_CASE("encoding flag decodes legacy inputs") {
    TempFile page("latin1.html", "gr\xFCn");
    const ProcessResult r =
        run_process({convert_bin, page.path(), "--encoding", "iso-8859-1"}, "");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "grün\n");
}

TEST_CASE("http inputs are fetched, with charset from the response header") {
    httplib::Server server;
    server.Get("/page", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("<p>gr\xFCn</p>", "text/html; charset=iso-8859-1");
    });
    server.Get("/missing", [](const httplib::Request&, httplib::Response& res) {
        res.status = 404;
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread listener([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    const std::string base = "http://127.0.0.1:" + std::to_string(port);

    const ProcessResult ok = run_process({convert_bin, base + "/page"}, "");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out == "grün\n");

    const ProcessResult missing = run_process({convert_bin, base + "/missing"}, "");
    CHECK(missing.exit_code == 1);
    CHECK(missing.err.find("404") != std::string::npos);

    server.stop();
    listener.join();
}

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("sample document matches its golden outputs") {
    const std::string data = TESTDATA_DIR;
    const std::string input = data + "/cli/sample.html";
    const std::string rules = data + "/cli/sample.rules.json";

    const ProcessResult plain = run_process({convert_bin, input}, "");
    CHECK(plain.exit_code == 0);
    CHECK(plain.out == slurp(data + "/cli/sample.plain.golden"));

    const ProcessResult jsonl = run_process(
        {convert_bin, input, "--annotation-rules", rules, "--postprocessor", "jsonl"}, "");
    CHECK(jsonl.exit_code == 0);
    CHECK(jsonl.out == slurp(data + "/cli/sample.jsonl.golden"));
    const json line = json::parse(jsonl.out);  // still a valid doccano line
    CHECK(line["text"].get<std::string>() == plain.out);

    const ProcessResult xml = run_process(
        {convert_bin, input, "--annotation-rules", rules, "--postprocessor", "xml"}, "");
    CHECK(xml.exit_code == 0);
    CHECK(xml.out == slurp(data + "/cli/sample.xml.golden"));
}

TEST_CASE("service binary serves conversions until terminated") {
    const int port = 18000 + static_cast<int>(getpid() % 4000);
    BackgroundProcess service(
        {service_bin, "--host", "127.0.0.1", "--port", std::to_string(port)});

    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(1, 0);
    bool ready = false;
    for (int attempt = 0; attempt < 50 && !ready; ++attempt) {
        auto res = client.Get("/health");
        if (res && res->status == 200) ready = true;
        else std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    REQUIRE_MESSAGE(ready, "service did not come up on port ", port);

    auto res = client.Post("/get_text", R"({"html": "<p>from service</p>"})",
                           "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(json::parse(res->body)["text"] == "from service\n");

    // Parity: the CLI produces byte-identical text for the same input.
    const ProcessResult cli = run_process({convert_bin}, "<p>from service</p>");
    CHECK(cli.out == json::parse(res->body)["text"].get<std::string>());
}
