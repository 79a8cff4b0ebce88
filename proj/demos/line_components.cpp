// Labels the complement of the tropical line max{x, y, 0} on a square
// grid and prints an ASCII picture of the three regions it cuts out.

#include "tropical/polynomial.hpp"
#include "tropical/topology.hpp"

#include <cstdio>
#include <vector>

int main() {
    using namespace tropical;

    const TropicalPolynomial line(2, {{TropicalScalar(0.0), {1, 0}},
                                      {TropicalScalar(0.0), {0, 1}},
                                      {TropicalScalar(0.0), {0, 0}}});
    const GridSpec grid({-2.0, -2.0}, {2.0, 2.0}, {41, 41});
    const ComponentLabeling labeling = label_components(line, grid);

    std::printf("components: %d\n\n", labeling.num_components);
    for (int row = grid.cells(1) - 1; row >= 0; --row) {
        for (int col = 0; col < grid.cells(0); ++col) {
            const int label = labeling.labels[grid.cell_index({col, row})];
            std::putchar(label < 0 ? '#' : static_cast<char>('a' + label % 26));
        }
        std::putchar('\n');
    }
    return 0;
}
