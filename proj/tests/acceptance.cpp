// Prints one PASS/FAIL line per acceptance criterion; exit status is the
// number of failures.
#include <cstdio>

#include "abatement/verify.hpp"

int main() {
    int failures = 0;
    for (const auto& r : abatement::run_acceptance()) {
        std::printf("%s\n", abatement::format_result(r).c_str());
        if (!r.pass) ++failures;
    }
    std::printf("%d criteria failed\n", failures);
    return failures;
}
