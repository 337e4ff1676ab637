#ifndef CODEDLAB_GRADCODE_GRAPHS_HPP
#define CODEDLAB_GRADCODE_GRAPHS_HPP

#include "core/matrix.hpp"
#include "core/rng.hpp"

namespace codedlab::gc {

// 0/1 adjacency matrices of the regular graphs used as AGC encodings.
Matrix petersen_graph();
Matrix complete_graph(size_t n);
Matrix cycle_graph(size_t n);
// Pairing-model sample, retried until simple and connected.
Matrix random_regular_graph(size_t n, size_t degree, uint64_t seed);

bool is_connected(const Matrix& adjacency);
void validate_regular_graph(const Matrix& adjacency, size_t degree);

// Incidence matrices (points x blocks) of the built-in block designs.
Matrix fano_plane();
Matrix complete_pair_design(size_t v);

struct BibdParams {
    size_t points;          // v = n
    size_t blocks;          // b = k
    size_t replication;     // constant row weight
    size_t block_size;      // constant column weight
    size_t pair_lambda;     // common pairwise row intersection
};

// Checks constant row/column sums and the pairwise intersection count;
// InvalidDesign otherwise.
BibdParams validate_bibd(const Matrix& incidence, size_t pair_lambda);

}  // namespace codedlab::gc

#endif
