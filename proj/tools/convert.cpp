#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "textweave/fetch.hpp"
#include "textweave/pipeline.hpp"

namespace {

constexpr const char* version_string = "convert 0.1.0";

bool is_http_url(const std::string& input) {
    return input.rfind("http://", 0) == 0 || input.rfind("https://", 0) == 0;
}

std::string read_stream(std::istream& in) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// exit 1 on I/O problems, per the documented exit codes
std::string read_file_or_die(const std::string& path, const char* what) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        std::cerr << "convert: cannot open " << what << " '" << path << "'\n";
        std::exit(1);
    }
    std::string data = read_stream(file);
    if (file.bad()) {
        std::cerr << "convert: error reading " << what << " '" << path << "'\n";
        std::exit(1);
    }
    return data;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Layout-aware HTML to plain text conversion"};
    app.set_version_flag("--version", version_string);

    std::string input = "-";
    std::string output_path;
    std::string encoding;
    std::string rules_path;
    std::string postprocessor = "plain";
    std::string profile_path;
    long timeout_seconds = 30;

    app.add_option("INPUT", input,
                   "Input file, '-' for stdin (default), or an http(s):// URL");
    app.add_option("-o,--output", output_path, "Write output to FILE instead of stdout");
    app.add_option("--encoding", encoding, "Character encoding of the input");
    app.add_option("--annotation-rules", rules_path, "JSON file with annotation rules");
    app.add_option("--postprocessor", postprocessor, "Output format")
        ->check(CLI::IsMember({"plain", "xml", "html", "jsonl"}));
    app.add_option("--profile", profile_path, "JSON file with style profile overrides");
    app.add_option("--timeout", timeout_seconds, "HTTP fetch timeout in seconds")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version exit 0, bad flags exit 2
    }

    textweave::ConversionRequest request;
    request.postprocessor = postprocessor;
    if (!encoding.empty()) request.encoding = encoding;

    if (input == "-") {
        request.html = read_stream(std::cin);
        if (std::cin.bad()) {
            std::cerr << "convert: error reading stdin\n";
            return 1;
        }
    } else if (is_http_url(input)) {
        try {
            textweave::FetchResult fetched =
                textweave::fetch_url(input, std::chrono::seconds(timeout_seconds));
            request.html = std::move(fetched.body);
            if (!request.encoding && fetched.charset) request.encoding = fetched.charset;
        } catch (const textweave::FetchError& e) {
            std::cerr << "convert: " << e.what() << "\n";
            return 1;
        }
    } else {
        request.html = read_file_or_die(input, "input file");
    }

    if (!rules_path.empty()) request.annotation_rules_json = read_file_or_die(rules_path, "rules file");
    if (!profile_path.empty()) request.profile_json = read_file_or_die(profile_path, "profile file");

    textweave::ConversionResult result;
    try {
        result = textweave::convert(request);
    } catch (const textweave::RuleError& e) {
        std::cerr << "convert: " << e.what() << "\n";
        return 2;
    } catch (const textweave::ProfileError& e) {
        std::cerr << "convert: " << e.what() << "\n";
        return 2;
    } catch (const textweave::FormatError& e) {
        std::cerr << "convert: " << e.what() << "\n";
        return 2;
    }

    if (output_path.empty()) {
        std::cout << result.output;
        std::cout.flush();
        if (!std::cout) {
            std::cerr << "convert: error writing to stdout\n";
            return 1;
        }
        return 0;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) {
        std::cerr << "convert: cannot open output file '" << output_path << "'\n";
        return 1;
    }
    out << result.output;
    out.flush();
    if (!out) {
        std::cerr << "convert: error writing output file '" << output_path << "'\n";
        return 1;
    }
    return 0;
}
