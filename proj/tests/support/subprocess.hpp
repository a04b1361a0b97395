#pragma once

// Minimal harness for driving the installed CLI binary from tests.

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace subprocess {

struct Result {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline Result run_cli(const std::string& args) {
    static int call_counter = 0;
    std::ostringstream err_path;
    err_path << "/tmp/nakasec_test_err_" << ::getpid() << "_" << call_counter++;

    const std::string cmd = std::string(NAKASEC_CLI_BIN) + " " + args + " 2>" + err_path.str();
    Result result;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) return result;

    std::array<char, 4096> buffer{};
    std::size_t n = 0;
    while ((n = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        result.out.append(buffer.data(), n);
    }
    const int status = ::pclose(pipe);
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);

    std::ifstream err_file(err_path.str());
    std::stringstream err_stream;
    err_stream << err_file.rdbuf();
    result.err = err_stream.str();
    std::remove(err_path.str().c_str());
    return result;
}

} // namespace subprocess
