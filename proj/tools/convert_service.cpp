#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "textweave/service.hpp"

namespace {

httplib::Server* running_server = nullptr;

void handle_signal(int) {
    if (running_server) running_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HTML to text conversion service"};
    app.set_version_flag("--version", "convert-service 0.1.0");

    std::string host = "127.0.0.1";
    int port = 8080;
    std::string profile_path;
    std::size_t max_body = textweave::max_body_bytes_from_env(std::size_t{16} * 1024 * 1024);

    app.add_option("--host", host, "Bind address");
    app.add_option("--port", port, "Port to listen on")->check(CLI::Range(0, 65535));
    app.add_option("--profile", profile_path, "JSON file with style profile overrides");
    app.add_option("--max-body-bytes", max_body, "Request body size limit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    textweave::ServiceConfig config;
    config.max_body_bytes = max_body;
    if (!profile_path.empty()) {
        std::ifstream file(profile_path, std::ios::binary);
        if (!file) {
            std::cerr << "convert-service: cannot open profile '" << profile_path << "'\n";
            return 1;
        }
        std::ostringstream buffer;
        buffer << file.rdbuf();
        try {
            textweave::apply_profile_overrides(config.profile, buffer.str());
        } catch (const textweave::ProfileError& e) {
            std::cerr << "convert-service: " << e.what() << "\n";
            return 2;
        }
    }

    httplib::Server server;
    textweave::configure_service(server, std::move(config));

    running_server = &server;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);

    int bound_port = port;
    if (port == 0) {
        bound_port = server.bind_to_any_port(host);
        if (bound_port < 0) {
            std::cerr << "convert-service: cannot bind to " << host << "\n";
            return 1;
        }
        std::cerr << "convert-service: listening on " << host << ":" << bound_port << "\n";
        if (!server.listen_after_bind()) {
            std::cerr << "convert-service: server stopped with an error\n";
            return 1;
        }
        return 0;
    }
    std::cerr << "convert-service: listening on " << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
        std::cerr << "convert-service: cannot listen on " << host << ":" << port << "\n";
        return 1;
    }
    return 0;
}
