// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Criteria with stated runtime budgets fail when the budget is exceeded.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "wreathlab/checks.hpp"

using namespace wreathlab;

namespace {

constexpr uint64_t kSeed = 7;

struct Criterion {
    int id;
    std::string title;
    double time_budget_s;  // 0 = none stated
    std::vector<CheckResult> (*run)();
};

std::vector<CheckResult> c1() { return check_two_oracle(kSeed, 100); }
std::vector<CheckResult> c2() { return check_conjugacy_oracle(kSeed, 2000); }
std::vector<CheckResult> c3() { return check_thoma_classical(); }
std::vector<CheckResult> c4() { return check_gram_psd(kSeed); }
std::vector<CheckResult> c5() { return check_alternating(); }
std::vector<CheckResult> c6() { return check_omega(); }
std::vector<CheckResult> c7() { return check_moments(); }
std::vector<CheckResult> c8() { return check_factorization(); }
std::vector<CheckResult> c9() { return check_cosets(kSeed); }
std::vector<CheckResult> c10() { return check_type3(kSeed); }

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "two-oracle character equality (evaluate vs matrix_element)", 60.0, c1},
        {2, "conjugacy invariant completeness in Z2 wr S4", 30.0, c2},
        {3, "thoma single-cycle values, l = 2..6", 0.0, c3},
        {4, "gram positivity and centrality", 0.0, c4},
        {5, "alternating-sum identities, exact arithmetic", 0.0, c5},
        {6, "separator factorization identity, exact", 0.0, c6},
        {7, "okounkov moments q = 1,2 at n = 16, 32", 120.0, c7},
        {8, "cycle factorization residual trend, n = 8,16,32", 0.0, c8},
        {9, "coset diagram calculus", 0.0, c9},
        {10, "type-III laboratory", 60.0, c10},
    };
    bool all_ok = true;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        auto checks = c.run();
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool pass = true;
        double worst_ratio = 0.0;
        std::string failing;
        for (const auto& r : checks) {
            if (r.tolerance > 0.0) worst_ratio = std::max(worst_ratio, r.measured / r.tolerance);
            if (!r.pass) {
                pass = false;
                failing += (failing.empty() ? "" : ", ") + r.name + " (measured " +
                           std::to_string(r.measured) + " > tol " + std::to_string(r.tolerance) +
                           ")";
            }
        }
        bool in_budget = c.time_budget_s == 0.0 || elapsed <= c.time_budget_s;
        pass = pass && in_budget;
        all_ok = all_ok && pass;
        std::printf("[%s] criterion %2d: %s  (%zu checks, %.1fs%s)\n", pass ? "PASS" : "FAIL",
                    c.id, c.title.c_str(), checks.size(), elapsed,
                    c.time_budget_s > 0.0
                        ? (" / budget " + std::to_string(static_cast<int>(c.time_budget_s)) + "s")
                              .c_str()
                        : "");
        if (!failing.empty()) std::printf("       failing: %s\n", failing.c_str());
        if (!in_budget) std::printf("       runtime budget exceeded\n");
    }
    std::printf("%s\n", all_ok ? "acceptance: all criteria passed" : "acceptance: FAILURES");
    return all_ok ? 0 : 1;
}
