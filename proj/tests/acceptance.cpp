// Acceptance run: one block per criterion, a PASS/FAIL line per check.
#include <cstdio>
#include <string>

#include "psh/reproduce.hpp"

int main(int argc, char** argv) {
    psh::ReproduceOptions opts;
    if (argc > 1) opts.grid = std::stoul(argv[1]);
    psh::ReproduceContext ctx(opts);
    int failed = 0;
    for (const auto& id : psh::case_ids()) {
        psh::CaseResult r;
        try {
            r = psh::run_case(id, ctx);
        } catch (const std::exception& e) {
            std::printf("AC? %-24s FAIL  error: %s\n", id.c_str(), e.what());
            ++failed;
            continue;
        }
        std::printf("AC%d %-24s %s  (%.1f s)  %s\n", r.criterion, r.id.c_str(), r.pass() ? "PASS" : "FAIL", r.seconds,
                    r.title.c_str());
        for (const auto& c : r.checks)
            std::printf("    [%s] %s%s%s\n", c.pass ? "pass" : "FAIL", c.label.c_str(), c.detail.empty() ? "" : ": ",
                        c.detail.c_str());
        std::fflush(stdout);
        failed += !r.pass();
    }
    std::printf("%d of %zu criteria failed\n", failed, psh::case_ids().size());
    return failed ? 1 : 0;
}
