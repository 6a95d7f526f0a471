// One PASS/FAIL line per acceptance criterion; tolerances and sizes as fixed in checks.hpp.
// Exit status is 0 only when every criterion passes.

#include <cstdio>
#include <functional>
#include <vector>

#include "checks.hpp"

using namespace kudla;

int main() {
    const std::vector<std::function<checks::Result()>> criteria = {
        [] { return checks::class_group(-200); },
        [] { return checks::theta_fe({-3, -4, -7}, 25, 1e-20); },
        [] { return checks::shimura(-7, 11, 6, 3, 10, 1e-15); },
        [] { return checks::multiplicity({5, 13}); },
        [] { return checks::cosets({{5, -3}, {3, -4}, {2, -7}, {5, -7}}, {1, 2, 3, 5}); },
        [] { return checks::euler({6, 8, 10}); },
        [] { return checks::never_ordinary({6, 8, 10}); },
        [] { return checks::xi({{-11, 5}, {-7, 11}}, 5); },
        [] { return checks::main_theorem({}); },
        [] { return checks::serre(-11, 5, 4); },
    };
    int failed = 0;
    for (const auto& c : criteria) {
        auto r = c();
        failed += !r.pass;
        std::printf("%s  %-30s %s [%.2f s of %.0f s]\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(),
                    r.seconds, r.budget);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
