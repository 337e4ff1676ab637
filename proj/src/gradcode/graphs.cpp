#include "gradcode/graphs.hpp"

#include <queue>

namespace codedlab::gc {

namespace {

Matrix zeros01(size_t n) { return Matrix(n, n, Field::Real); }

void add_edge(Matrix& adj, size_t a, size_t b) {
    adj.at(a, b) = 1.0;
    adj.at(b, a) = 1.0;
}

}  // namespace

Matrix petersen_graph() {
    Matrix adj = zeros01(10);
    for (size_t i = 0; i < 5; ++i) {
        add_edge(adj, i, (i + 1) % 5);          // outer cycle
        add_edge(adj, i, i + 5);                // spokes
        add_edge(adj, i + 5, 5 + (i + 2) % 5);  // inner pentagram
    }
    return adj;
}

Matrix complete_graph(size_t n) {
    require(n >= 2, ErrorKind::InvalidParameter, "complete graph needs n >= 2");
    Matrix adj = zeros01(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) add_edge(adj, i, j);
    return adj;
}

Matrix cycle_graph(size_t n) {
    require(n >= 3, ErrorKind::InvalidParameter, "cycle graph needs n >= 3");
    Matrix adj = zeros01(n);
    for (size_t i = 0; i < n; ++i) add_edge(adj, i, (i + 1) % n);
    return adj;
}

Matrix random_regular_graph(size_t n, size_t degree, uint64_t seed) {
    require(degree >= 1 && degree < n, ErrorKind::InvalidParameter,
            "degree must lie in [1, n)");
    require(n * degree % 2 == 0, ErrorKind::InvalidParameter,
            "n * degree must be even for a regular graph");
    Rng rng = Rng::from_seed(seed).substream("random-regular-graph");
    for (size_t attempt = 0; attempt < 2000; ++attempt) {
        // pairing model: shuffle half-edge stubs, pair consecutively
        std::vector<size_t> stubs;
        stubs.reserve(n * degree);
        for (size_t v = 0; v < n; ++v)
            for (size_t d = 0; d < degree; ++d) stubs.push_back(v);
        for (size_t i = stubs.size(); i > 1; --i)
            std::swap(stubs[i - 1], stubs[rng.next_index(i)]);
        Matrix adj = zeros01(n);
        bool ok = true;
        for (size_t i = 0; i + 1 < stubs.size() && ok; i += 2) {
            const size_t a = stubs[i];
            const size_t b = stubs[i + 1];
            if (a == b || adj.at(a, b) != Complex(0.0, 0.0)) ok = false;
            else add_edge(adj, a, b);
        }
        if (ok && is_connected(adj)) return adj;
    }
    fail(ErrorKind::InvalidParameter,
         "could not realize a connected simple regular graph; adjust n or degree");
}

bool is_connected(const Matrix& adjacency) {
    const size_t n = adjacency.rows();
    if (n == 0) return false;
    std::vector<bool> seen(n, false);
    std::queue<size_t> todo;
    todo.push(0);
    seen[0] = true;
    size_t visited = 1;
    while (!todo.empty()) {
        const size_t v = todo.front();
        todo.pop();
        for (size_t u = 0; u < n; ++u) {
            if (!seen[u] && adjacency.at(v, u) != Complex(0.0, 0.0)) {
                seen[u] = true;
                ++visited;
                todo.push(u);
            }
        }
    }
    return visited == n;
}

void validate_regular_graph(const Matrix& adjacency, size_t degree) {
    const size_t n = adjacency.rows();
    require(n >= 2 && adjacency.cols() == n, ErrorKind::InvalidGraph,
            "adjacency must be square");
    for (size_t i = 0; i < n; ++i) {
        size_t row_sum = 0;
        for (size_t j = 0; j < n; ++j) {
            const Complex v = adjacency.at(i, j);
            require(v == Complex(0.0, 0.0) || v == Complex(1.0, 0.0), ErrorKind::InvalidGraph,
                    "adjacency entries must be 0/1");
            require(adjacency.at(j, i) == v, ErrorKind::InvalidGraph,
                    "adjacency must be symmetric");
            if (v == Complex(1.0, 0.0)) ++row_sum;
        }
        require(adjacency.at(i, i) == Complex(0.0, 0.0), ErrorKind::InvalidGraph,
                "self-loops are not allowed");
        require(row_sum == degree, ErrorKind::InvalidGraph, "graph is not degree-regular");
    }
    require(is_connected(adjacency), ErrorKind::InvalidGraph, "graph must be connected");
}

Matrix fano_plane() {
    // lines of PG(2,2) over points 1..7
    static const size_t lines[7][3] = {{1, 2, 3}, {1, 4, 5}, {1, 6, 7}, {2, 4, 6},
                                       {2, 5, 7}, {3, 4, 7}, {3, 5, 6}};
    Matrix inc(7, 7, Field::Real);
    for (size_t b = 0; b < 7; ++b)
        for (size_t t = 0; t < 3; ++t) inc.at(lines[b][t] - 1, b) = 1.0;
    return inc;
}

Matrix complete_pair_design(size_t v) {
    require(v >= 3, ErrorKind::InvalidParameter, "pair design needs v >= 3");
    const size_t b = v * (v - 1) / 2;
    Matrix inc(v, b, Field::Real);
    size_t col = 0;
    for (size_t i = 0; i < v; ++i) {
        for (size_t j = i + 1; j < v; ++j) {
            inc.at(i, col) = 1.0;
            inc.at(j, col) = 1.0;
            ++col;
        }
    }
    return inc;
}

BibdParams validate_bibd(const Matrix& incidence, size_t pair_lambda) {
    const size_t v = incidence.rows();
    const size_t b = incidence.cols();
    require(v >= 2 && b >= 1, ErrorKind::InvalidDesign, "incidence matrix too small");
    for (const Complex& e : incidence.data())
        require(e == Complex(0.0, 0.0) || e == Complex(1.0, 0.0), ErrorKind::InvalidDesign,
                "incidence entries must be 0/1");

    size_t replication = 0;
    for (size_t i = 0; i < v; ++i) {
        size_t row_sum = 0;
        for (size_t j = 0; j < b; ++j)
            if (incidence.at(i, j) == Complex(1.0, 0.0)) ++row_sum;
        if (i == 0) replication = row_sum;
        require(row_sum == replication, ErrorKind::InvalidDesign,
                "points must have a constant replication number");
    }
    size_t block_size = 0;
    for (size_t j = 0; j < b; ++j) {
        size_t col_sum = 0;
        for (size_t i = 0; i < v; ++i)
            if (incidence.at(i, j) == Complex(1.0, 0.0)) ++col_sum;
        if (j == 0) block_size = col_sum;
        require(col_sum == block_size, ErrorKind::InvalidDesign,
                "blocks must have a constant size");
    }
    for (size_t i = 0; i < v; ++i) {
        for (size_t i2 = i + 1; i2 < v; ++i2) {
            size_t common = 0;
            for (size_t j = 0; j < b; ++j)
                if (incidence.at(i, j) == Complex(1.0, 0.0) &&
                    incidence.at(i2, j) == Complex(1.0, 0.0))
                    ++common;
            require(common == pair_lambda, ErrorKind::InvalidDesign,
                    "pairwise intersection count differs from lambda");
        }
    }
    require(replication >= 1 && block_size >= 1, ErrorKind::InvalidDesign,
            "degenerate design");
    return BibdParams{v, b, replication, block_size, pair_lambda};
}

}  // namespace codedlab::gc
