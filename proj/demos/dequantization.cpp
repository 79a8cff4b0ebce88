// Prints a ⊕ b for a sweep of bases, showing the smoothed addition
// collapsing onto max(a, b) as the base grows, together with the
// guaranteed log_h(2) envelope.

#include "tropical/scalar.hpp"

#include <cmath>
#include <cstdio>

int main() {
    using namespace tropical;

    const double pairs[][2] = {{0.0, 0.0}, {1.0, 2.0}, {3.0, -1.0}, {5.0, 5.0}};
    const double bases[] = {3.0, 10.0, 100.0, 1e4, 1e8};

    std::printf("%10s %6s %6s %22s %12s %12s\n", "base", "a", "b", "a (+) b", "gap to max", "log_h(2)");
    for (const auto& p : pairs) {
        const TropicalScalar a(p[0]), b(p[1]);
        const double m = std::max(p[0], p[1]);
        for (double h : bases) {
            const HbarParam hbar = HbarParam::finite(h);
            const double s = t_add(a, b, hbar).v;
            std::printf("%10.0f %6.1f %6.1f %22.15f %12.3e %12.3e\n", h, p[0], p[1], s, s - m,
                        std::log(2.0) / hbar.log_value());
        }
        const double exact = t_add(a, b, HbarParam::infinity()).v;
        std::printf("%10s %6.1f %6.1f %22.15f %12.3e\n\n", "limit", p[0], p[1], exact, exact - m);
    }
    return 0;
}
