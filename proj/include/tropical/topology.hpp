// Connected components of a zero locus' complement on a sampled grid:
// classification is read off H0. Zero cells come either from a sign test
// on a real-valued field or from the argmax-switch locus of a tropical
// polynomial; components are labeled by flood fill with face adjacency.

#pragma once

#include "tropical/grid.hpp"
#include "tropical/polynomial.hpp"
#include "tropical/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tropical {

using ScalarField = std::function<double(const std::vector<double>&)>;

struct ComponentLabeling {
    GridSpec grid;
    std::vector<int> labels; // per cell, row-major; -1 on zero cells
    int num_components = 0;
};

// Flood fill over unmarked cells, 2n-connectivity (faces only, no
// diagonals: conservative against leaks across thin loci). Labels are
// assigned in row-major first-visit order, so the labeling is
// deterministic.
inline ComponentLabeling label_components(const CellMask& zero_mask) {
    const GridSpec& grid = zero_mask.grid;
    grid.validate();
    if (zero_mask.marked.size() != grid.num_cells())
        throw std::invalid_argument("label_components: mask size mismatch");

    constexpr int kUnvisited = -2;
    ComponentLabeling out{grid, std::vector<int>(grid.num_cells(), kUnvisited), 0};
    for (std::size_t i = 0; i < out.labels.size(); ++i)
        if (zero_mask.marked[i]) out.labels[i] = -1;

    const std::size_t d = grid.dims();
    std::vector<int> cells(d);
    for (std::size_t a = 0; a < d; ++a) cells[a] = grid.cells(a);

    auto decode = [&](std::size_t flat, std::vector<int>& idx) {
        for (std::size_t a = d; a-- > 0;) {
            idx[a] = static_cast<int>(flat % cells[a]);
            flat /= cells[a];
        }
    };

    std::vector<int> idx(d), nidx(d);
    std::queue<std::size_t> frontier;
    for (std::size_t start = 0; start < out.labels.size(); ++start) {
        if (out.labels[start] != kUnvisited) continue;
        const int label = out.num_components++;
        out.labels[start] = label;
        frontier.push(start);
        while (!frontier.empty()) {
            const std::size_t cur = frontier.front();
            frontier.pop();
            decode(cur, idx);
            for (std::size_t a = 0; a < d; ++a) {
                for (int dir = -1; dir <= 1; dir += 2) {
                    nidx = idx;
                    nidx[a] += dir;
                    if (nidx[a] < 0 || nidx[a] >= cells[a]) continue;
                    const std::size_t flat = grid.cell_index(nidx);
                    if (out.labels[flat] != kUnvisited) continue;
                    out.labels[flat] = label;
                    frontier.push(flat);
                }
            }
        }
    }
    return out;
}

// Zero-cell test for a real-valued field. A cell is marked when adjacent
// corners change sign (a crossing is certain by continuity) or the
// smallest corner magnitude falls below the tolerance. The default
// tolerance is per-cell: a corner-difference Lipschitz estimate times the
// cell diagonal; pass zero_tol to override it with a flat threshold.
inline CellMask classical_zero_mask(const ScalarField& f, const GridSpec& grid,
                                    std::optional<double> zero_tol = std::nullopt) {
    grid.validate();
    const std::size_t d = grid.dims();
    if (d < 1 || d > 3) throw std::invalid_argument("classical_zero_mask: only 1 to 3 dimensions supported");
    if (zero_tol && !(*zero_tol >= 0.0))
        throw std::invalid_argument("classical_zero_mask: tolerance must be >= 0");

    std::vector<double> values(grid.num_nodes());
    std::vector<double> x(d);
    detail::for_each_index(grid.resolution, [&](const std::vector<int>& idx) {
        for (std::size_t a = 0; a < d; ++a) x[a] = grid.node_coord(a, idx[a]);
        values[grid.node_index(idx)] = f(x);
    });

    double diag = 0.0;
    for (std::size_t a = 0; a < d; ++a) diag += grid.step(a) * grid.step(a);
    diag = std::sqrt(diag);

    CellMask mask{grid, std::vector<std::uint8_t>(grid.num_cells(), 0)};
    std::vector<int> cell_dims(d);
    for (std::size_t a = 0; a < d; ++a) cell_dims[a] = grid.cells(a);

    const std::size_t corners = std::size_t{1} << d;
    std::vector<double> v(corners);
    std::vector<int> corner_idx(d);
    detail::for_each_index(cell_dims, [&](const std::vector<int>& cidx) {
        for (std::size_t c = 0; c < corners; ++c) {
            for (std::size_t a = 0; a < d; ++a)
                corner_idx[a] = cidx[a] + static_cast<int>((c >> a) & 1u);
            v[c] = values[grid.node_index(corner_idx)];
        }
        double min_abs = std::abs(v[0]);
        for (std::size_t c = 1; c < corners; ++c) min_abs = std::min(min_abs, std::abs(v[c]));

        bool crossing = false;
        double lipschitz = 0.0;
        for (std::size_t c = 0; c < corners && !crossing; ++c) {
            for (std::size_t a = 0; a < d; ++a) {
                if ((c >> a) & 1u) continue;
                const double w = v[c | (std::size_t{1} << a)];
                if ((v[c] < 0.0 && w > 0.0) || (v[c] > 0.0 && w < 0.0)) {
                    crossing = true;
                    break;
                }
                lipschitz = std::max(lipschitz, std::abs(v[c] - w) / grid.step(a));
            }
        }
        const double tol = zero_tol ? *zero_tol : lipschitz * diag;
        if (crossing || min_abs <= tol) mask.marked[grid.cell_index(cidx)] = 1;
    });
    return mask;
}

inline ComponentLabeling label_components(const ScalarField& f, const GridSpec& grid,
                                          std::optional<double> zero_tol = std::nullopt) {
    return label_components(classical_zero_mask(f, grid, zero_tol));
}

inline ComponentLabeling label_components(const TropicalPolynomial& p, const GridSpec& grid) {
    return label_components(corner_locus_grid(p, grid));
}

// Label of the cell containing x. Zero cells and points outside the grid
// do not classify; they throw instead of returning a label.
inline int classify(const ComponentLabeling& labeling, const std::vector<double>& x) {
    const std::size_t flat = labeling.grid.cell_index(labeling.grid.cell_of(x));
    const int label = labeling.labels[flat];
    if (label < 0) throw std::domain_error("classify: point lies on a zero cell");
    return label;
}

struct EquivalenceReport {
    bool equivalent = false;
    // Pairs (i, j) witnessing a broken biconditional: same class but
    // different components, or different classes in one component.
    std::vector<std::pair<std::size_t, std::size_t>> violations;
    // Points that failed to classify (zero cell or out of bounds).
    std::vector<std::size_t> unclassifiable;
};

// Checks class(x) = class(y) <=> component(x) = component(y) over all
// pairs of classifiable points.
inline EquivalenceReport check_classification_equivalence(const std::vector<std::vector<double>>& points,
                                                          const std::vector<int>& classes,
                                                          const ComponentLabeling& labeling) {
    if (points.size() != classes.size())
        throw std::invalid_argument("check_classification_equivalence: point/class count mismatch");
    EquivalenceReport report;
    std::vector<int> component(points.size(), -1);
    std::vector<bool> ok(points.size(), false);
    for (std::size_t i = 0; i < points.size(); ++i) {
        try {
            component[i] = classify(labeling, points[i]);
            ok[i] = true;
        } catch (const std::exception&) {
            report.unclassifiable.push_back(i);
        }
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!ok[i]) continue;
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (!ok[j]) continue;
            const bool same_class = classes[i] == classes[j];
            const bool same_component = component[i] == component[j];
            if (same_class != same_component) report.violations.emplace_back(i, j);
        }
    }
    report.equivalent = report.violations.empty() && report.unclassifiable.empty();
    return report;
}

// --- log-coordinate stability -----------------------------------------------------

// g(u) = f(h^{u_1}, ..., h^{u_n}): the field seen through the inverse of
// the coordinate-wise log_h map.
inline ScalarField log_pushforward(ScalarField f, const HbarParam& hbar) {
    if (hbar.is_infinite()) throw std::domain_error("log_pushforward: requires a finite hbar");
    return [f = std::move(f), hbar](const std::vector<double>& u) {
        std::vector<double> x(u.size());
        for (std::size_t a = 0; a < u.size(); ++a) x[a] = quantize(TropicalScalar(u[a]), hbar);
        return f(x);
    };
}

// The image of a positive-cone grid under coordinate-wise log_h: same
// resolution, bounds mapped through the (monotone) log.
inline GridSpec log_grid(const GridSpec& original, const HbarParam& hbar) {
    original.validate();
    if (hbar.is_infinite()) throw std::domain_error("log_grid: requires a finite hbar");
    GridSpec out = original;
    for (std::size_t a = 0; a < original.dims(); ++a) {
        if (!(original.lower[a] > 0.0))
            throw std::domain_error("log_grid: lower bound on axis " + std::to_string(a) +
                                    " is not strictly positive");
        out.lower[a] = std::log(original.lower[a]) / hbar.log_value();
        out.upper[a] = std::log(original.upper[a]) / hbar.log_value();
    }
    return out;
}

struct StabilityReport {
    std::size_t original_count = 0;
    std::vector<std::pair<double, std::size_t>> counts; // (hbar, component count)

    bool all_match() const {
        for (const auto& [h, c] : counts)
            if (c != original_count) return false;
        return true;
    }
};

// Component counts of the complement, in the original coordinates and in
// log_h coordinates for each listed hbar. The locus and the grid are both
// pushed through the same map, so matching counts are the desk-scale
// version of the loci being homeomorphic.
inline StabilityReport component_count_stability(const ScalarField& f,
                                                 const std::vector<HbarParam>& hbar_list,
                                                 const GridSpec& grid,
                                                 std::optional<double> zero_tol = std::nullopt) {
    if (hbar_list.empty()) throw std::invalid_argument("component_count_stability: empty hbar list");
    StabilityReport report;
    report.original_count =
        static_cast<std::size_t>(label_components(f, grid, zero_tol).num_components);
    for (const auto& hbar : hbar_list) {
        const GridSpec gu = log_grid(grid, hbar);
        const ComponentLabeling labeling = label_components(log_pushforward(f, hbar), gu, zero_tol);
        report.counts.emplace_back(hbar.value(), static_cast<std::size_t>(labeling.num_components));
    }
    return report;
}

} // namespace tropical
