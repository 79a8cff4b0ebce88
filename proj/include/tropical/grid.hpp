// Regular sampling grids in 1 to 3 dimensions: endpoint-inclusive node
// lattices, the cell lattice between them, and the argmax-switch mask
// used for corner-locus detection.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace tropical {

// An axis-aligned box sampled at `resolution` nodes per axis (endpoints
// included); cells are the boxes between adjacent nodes.
struct GridSpec {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<int> resolution; // nodes per axis, >= 2

    GridSpec() = default;
    GridSpec(std::vector<double> lo, std::vector<double> hi, std::vector<int> res)
        : lower(std::move(lo)), upper(std::move(hi)), resolution(std::move(res)) {
        validate();
    }

    void validate() const {
        const std::size_t n = lower.size();
        if (n == 0 || upper.size() != n || resolution.size() != n)
            throw std::invalid_argument("GridSpec: inconsistent axis counts");
        for (std::size_t a = 0; a < n; ++a) {
            if (!(lower[a] < upper[a])) throw std::invalid_argument("GridSpec: lower must be < upper");
            if (resolution[a] < 2) throw std::invalid_argument("GridSpec: resolution must be >= 2");
        }
    }

    std::size_t dims() const { return lower.size(); }

    double step(std::size_t axis) const { return (upper[axis] - lower[axis]) / (resolution[axis] - 1); }

    double node_coord(std::size_t axis, int i) const { return lower[axis] + i * step(axis); }

    int cells(std::size_t axis) const { return resolution[axis] - 1; }

    std::size_t num_nodes() const {
        std::size_t n = 1;
        for (std::size_t a = 0; a < dims(); ++a) n *= static_cast<std::size_t>(resolution[a]);
        return n;
    }
    std::size_t num_cells() const {
        std::size_t n = 1;
        for (std::size_t a = 0; a < dims(); ++a) n *= static_cast<std::size_t>(cells(a));
        return n;
    }

    // Row-major flattening, last axis fastest.
    std::size_t node_index(const std::vector<int>& idx) const {
        std::size_t flat = 0;
        for (std::size_t a = 0; a < dims(); ++a) flat = flat * resolution[a] + idx[a];
        return flat;
    }
    std::size_t cell_index(const std::vector<int>& idx) const {
        std::size_t flat = 0;
        for (std::size_t a = 0; a < dims(); ++a) flat = flat * cells(a) + idx[a];
        return flat;
    }

    // Cell containing a point; the upper boundary belongs to the last cell.
    // Throws if the point is outside the box.
    std::vector<int> cell_of(const std::vector<double>& x) const {
        if (x.size() != dims()) throw std::invalid_argument("GridSpec: point dimension mismatch");
        std::vector<int> idx(dims());
        for (std::size_t a = 0; a < dims(); ++a) {
            if (x[a] < lower[a] || x[a] > upper[a])
                throw std::out_of_range("GridSpec: point outside grid bounds");
            int c = static_cast<int>((x[a] - lower[a]) / step(a));
            if (c >= cells(a)) c = cells(a) - 1;
            idx[a] = c;
        }
        return idx;
    }

    std::vector<double> cell_center(const std::vector<int>& idx) const {
        std::vector<double> x(dims());
        for (std::size_t a = 0; a < dims(); ++a) x[a] = lower[a] + (idx[a] + 0.5) * step(a);
        return x;
    }
};

// Flat 0/1 mask over the cells of a grid.
struct CellMask {
    GridSpec grid;
    std::vector<std::uint8_t> marked; // row-major over cells

    std::size_t count_marked() const {
        std::size_t n = 0;
        for (auto m : marked) n += m;
        return n;
    }
};

namespace detail {

// Visit all multi-indices in [0, dims[a]) per axis, row-major.
inline void for_each_index(const std::vector<int>& dims, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> idx(dims.size(), 0);
    while (true) {
        fn(idx);
        std::size_t a = dims.size();
        while (a > 0) {
            --a;
            if (++idx[a] < dims[a]) break;
            idx[a] = 0;
            if (a == 0) return;
        }
    }
}

} // namespace detail

// Per-node labels for a piecewise-affine field: which affine piece attains
// the maximum at each node (lowest index on ties), plus whether the value
// there is -inf. Cells whose corners disagree — or touch a -inf node —
// are marked: the locus where the field is not locally affine passes
// through them. Over-approximates the true locus by at most one cell.
struct NodeArgmax {
    std::size_t winner;
    bool is_neg_inf;

    friend bool operator==(const NodeArgmax& a, const NodeArgmax& b) {
        return a.winner == b.winner && a.is_neg_inf == b.is_neg_inf;
    }
};

inline CellMask argmax_switch_mask(const std::function<NodeArgmax(const std::vector<double>&)>& node_argmax,
                                   const GridSpec& grid) {
    if (grid.dims() < 1 || grid.dims() > 3)
        throw std::invalid_argument("argmax_switch_mask: only 1 to 3 dimensions supported");

    std::vector<NodeArgmax> nodes(grid.num_nodes());
    std::vector<double> x(grid.dims());
    detail::for_each_index(grid.resolution, [&](const std::vector<int>& idx) {
        for (std::size_t a = 0; a < grid.dims(); ++a) x[a] = grid.node_coord(a, idx[a]);
        nodes[grid.node_index(idx)] = node_argmax(x);
    });

    CellMask mask{grid, std::vector<std::uint8_t>(grid.num_cells(), 0)};
    std::vector<int> cell_dims(grid.dims());
    for (std::size_t a = 0; a < grid.dims(); ++a) cell_dims[a] = grid.cells(a);

    const std::size_t corners = std::size_t{1} << grid.dims();
    std::vector<int> corner_idx(grid.dims());
    detail::for_each_index(cell_dims, [&](const std::vector<int>& cidx) {
        bool mark = false;
        NodeArgmax first{};
        for (std::size_t c = 0; c < corners && !mark; ++c) {
            for (std::size_t a = 0; a < grid.dims(); ++a)
                corner_idx[a] = cidx[a] + static_cast<int>((c >> a) & 1u);
            const NodeArgmax& node = nodes[grid.node_index(corner_idx)];
            if (node.is_neg_inf) mark = true;
            else if (c == 0) first = node;
            else if (!(node == first)) mark = true;
        }
        if (mark) mask.marked[grid.cell_index(cidx)] = 1;
    });
    return mask;
}

} // namespace tropical
