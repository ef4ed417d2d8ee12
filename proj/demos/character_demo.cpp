// Evaluates one character on a handful of elements and cross-checks the
// values against the tensor realization.

#include <cstdio>

#include "wreathlab/fock.hpp"
#include "wreathlab/thoma.hpp"

using namespace wreathlab;

int main() {
    GroupTable z2 = make_cyclic(2);
    ThomaParams params(z2, {{0.5, *z2.irrep_by_name("sign")}},
                       {{0.25, *z2.irrep_by_name("trivial")}}, Tr0Spec::regular());

    const char* elements[] = {
        "e", "(1 2)", "(1 2 3)", "(1 2 3)[1:g]", "e[1:g]", "(1 2)(3 4 5)[3:g]",
    };
    std::printf("%-22s %12s %12s\n", "element", "formula", "realization");
    for (const char* text : elements) {
        auto g = parse_element(text, z2);
        double a = evaluate(params, g).real();
        double b = matrix_element(params, g, 5).real();
        std::printf("%-22s %12.6f %12.6f\n", text, a, b);
    }

    // restriction to plain permutations matches the classical values
    std::printf("\nsingle cycles, classical row values:\n");
    for (long l = 2; l <= 6; ++l)
        std::printf("  l = %ld: %10.6f\n", l, thoma_classical(params, {l}));
    return 0;
}
