#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "common.hpp"

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(PSH_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("mass on the green exhaustion with a resolved config header") {
    auto r = run("mass --exhaustion green");
    CHECK(r.code == 0);
    REQUIRE(r.out.rfind("# {", 0) == 0);
    auto header = nlohmann::json::parse(r.out.substr(2, r.out.find('\n') - 2));
    CHECK(header["exhaustion"] == "green");
    CHECK(header["grid"] == 4096);
    CHECK(r.out.find("ma_mass,raw_mass\n1,6.2831853071795862\n") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run("").code == 1);
    CHECK(run("mass --bogus").code == 1);
    CHECK(run("norm --exhaustion green").code == 1);
    CHECK(run("norm --f 'pow(' --exhaustion green").code == 1);
    CHECK(run("reproduce --case nope").code == 1);
    CHECK(run("--help").code == 0);
}

TEST_CASE("compose-check --expect mismatch exits 2") {
    // paper-u default: the rotation moves the blow-up of beta
    auto r = run("compose-check --symbol rot:pi/2 --grid 1024 --expect bounded");
    CHECK(r.code == 2);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["result"]["verdict"]["outcome"] == "Fails");
    CHECK(j["result"]["witness"]["sound"] == true);
    CHECK(run("compose-check --symbol rot:pi/2 --exhaustion green --expect bounded").code == 0);
    CHECK(run("compose-check --symbol rot:pi/2 --exhaustion green --expect unbounded").code == 2);
}

TEST_CASE("norm output is deterministic") {
    const std::string args = "norm --f '1/(2-z)' --p 2 --exhaustion green --route boundary";
    auto a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("0.5773502691895") != std::string::npos);
}

TEST_CASE("membership over a q grid as JSON") {
    auto r = run("membership --family 'pow(1-z,-2*q)' --q-grid 0.1:0.3:0.1 --exhaustion green --format json");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["rows"].size() == 3);
    CHECK(j["config"]["q_grid"][2] == 0.3);
}
