// Builds the two generator diagrams of the coset semigroup at level n and
// prints their (commuting) product as Graphviz DOT.

#include <cstdio>

#include "wreathlab/cosets.hpp"

using namespace wreathlab;

int main() {
    GroupTable g = make_symmetric3();
    int n = 3, i = 2;
    GPair transposition{WreathElement::identity(g),
                        WreathElement(g, Permutation::transposition(i, n + 1), {})};
    GammaTuple t;
    t.set(1, *g.element_by_name("r"), g);
    t.set(2, *g.element_by_name("s"), g);
    WreathElement diag(g, {}, t);
    GPair tuple_pair{diag, diag};

    auto a = theta(transposition, n);
    auto b = theta(tuple_pair, n);
    auto ab = mult_diagram(a, b);
    auto ba = mult_diagram(b, a);
    std::printf("products agree: %s\n", ab.same_diagram(ba) ? "yes" : "NO");
    std::printf("%s", to_dot(ab).c_str());
    return 0;
}
