// Acceptance gate: runs the numbered verification criteria and prints one
// pass/fail line each. With no arguments all criteria run; otherwise each
// argument selects one criterion id. Exit status is the number of failures.
// DECOLAB_CLI_PATH points the determinism criterion at the built tool.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "decolab/verify.hpp"

#ifndef DECOLAB_CLI_PATH
#define DECOLAB_CLI_PATH ""
#endif

int main(int argc, char** argv) {
    std::vector<int> ids;
    if (argc > 1) {
        for (int i = 1; i < argc; ++i) {
            const int id = std::atoi(argv[i]);
            if (id < 1 || id > static_cast<int>(decolab::verify::criteria_names().size())) {
                std::fprintf(stderr, "unknown criterion id '%s'\n", argv[i]);
                return 64;
            }
            ids.push_back(id);
        }
    } else {
        for (const auto& [id, name] : decolab::verify::criteria_names()) ids.push_back(id);
    }

    int failures = 0;
    for (int id : ids) {
        const auto t0 = std::chrono::steady_clock::now();
        decolab::verify::CriterionResult r;
        try {
            r = decolab::verify::run_criterion(id, DECOLAB_CLI_PATH);
        } catch (const std::exception& e) {
            std::printf("%d,exception,0,0,0,FAIL,%s\n", id, e.what());
            ++failures;
            continue;
        }
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s  [%.2f s]\n", decolab::verify::format_line(r).c_str(), dt);
        if (!r.pass) ++failures;
    }
    if (ids.size() > 1)
        std::printf("%zu/%zu criteria passed\n", ids.size() - static_cast<std::size_t>(failures),
                    ids.size());
    return failures;
}
