#ifndef CODEDLAB_GRADCODE_SCHEMES_HPP
#define CODEDLAB_GRADCODE_SCHEMES_HPP

#include <optional>
#include <vector>

#include "core/matrix.hpp"
#include "core/rng.hpp"
#include "sketch/sampling.hpp"

namespace codedlab::gc {

enum class GcDecoder { ExactFrc, ExactBrs, OneStep, OptimalLsq, Expander, Weighted };

const char* to_string(GcDecoder d);

// Encoding matrix plus per-server assignments and the decoder family. The
// decode target row is all-ones except for weighted schemes, where it is the
// sampled weight vector.
struct GcScheme {
    size_t n = 0;  // servers
    size_t k = 0;  // data partitions (encoding columns)
    size_t s = 0;  // design straggler tolerance
    Matrix g;      // n x k encoding matrix
    std::vector<std::vector<size_t>> assignments;  // support J_i per server
    GcDecoder decoder = GcDecoder::OptimalLsq;
    std::vector<double> target;  // length k

    size_t row_weight = 0;  // w, 0 when rows are unbalanced
    size_t col_weight = 0;  // d~, 0 when columns are unbalanced

    // BRS / weighted extras
    EvalPoints points;
    Matrix h;  // n x k Vandermonde factor
    Matrix p;  // k x k polynomial coefficients, first row all ones

    // one-step decoders
    double rho = 0.0;

    // expander extras
    double degree = 0.0;
    double lambda = 0.0;

    size_t threshold() const { return n - s; }
    double expander_bound(size_t stragglers) const;
    void validate_responders(const std::vector<size_t>& responders) const;
};

struct DecodingVector {
    std::vector<Complex> a;  // length n, zero outside the responding set
    std::vector<size_t> responders;
};

// Decoding vector for the scheme's decoder family on responder set I
// (|I| = n - s for the fixed-threshold families).
DecodingVector decoding_vector(const GcScheme& scheme, const std::vector<size_t>& responders);

// Best a for ||a^T G_I - target||_2 via the pseudoinverse of G_I.
DecodingVector optimal_decoder(const Matrix& g, const std::vector<size_t>& responders,
                               const std::vector<double>& target);

// BRS decoding through an explicit k-subset of the responders.
DecodingVector brs_decoding_vector(const GcScheme& scheme, const std::vector<size_t>& responders,
                                   const std::vector<size_t>& chosen);

// ||a_I^T G_I - target||_2 for the scheme's decoder.
double gc_error(const GcScheme& scheme, const std::vector<size_t>& responders);
double gc_error(const GcScheme& scheme, const DecodingVector& dv);

struct MaxErrorResult {
    double value = 0.0;
    std::vector<size_t> worst_stragglers;
    bool exhaustive = true;
    size_t sets_evaluated = 0;
};

// Worst-case error over straggler sets of size s: exhaustive while
// C(n,s) <= exhaustive_budget, otherwise over `samples` seeded random sets
// (flagged via `exhaustive = false`).
MaxErrorResult gc_max_error(const GcScheme& scheme, size_t s,
                            uint64_t exhaustive_budget = 100000, size_t samples = 10000,
                            uint64_t sample_seed = 0x5eed);

// Cyclic balanced 0/1 mask: column j occupies rows (j*d~ + t) mod n.
Matrix balanced_mask(size_t n, size_t k, size_t col_weight);

// Replication scheme: partition j lives on servers j(s+1)..(j+1)(s+1)-1,
// decoded by selecting the lowest-index responder per partition.
GcScheme frc_scheme(size_t n, size_t s);

// Balanced Reed-Solomon scheme over the given evaluation points.
GcScheme brs_scheme(size_t n, size_t k, size_t s, const EvalPoints& points);

// Normalized adjacency encoding with the constant n/(n-s) decoder.
GcScheme expander_scheme(const Matrix& adjacency, size_t degree, size_t s);

// Random 0/1 encoding with entries Bern(s/k); optimal-lsq decoding.
GcScheme bernoulli_scheme(size_t n, size_t k, size_t s, uint64_t seed);

// Incidence encoding of a validated BIBD; one-step decoding at the
// closed-form rho = w / (w + lambda (n - s - 1)) with w the replication.
GcScheme bibd_scheme(const Matrix& incidence, size_t pair_lambda, size_t s);

GcScheme with_one_step(GcScheme scheme, double rho);
GcScheme with_optimal(GcScheme scheme);

// Weighted scheme: block leverage sampling until r distinct blocks, BRS code
// over r columns with G~ = G diag(w~) and decode target w~.
struct WeightedGcResult {
    GcScheme scheme;
    Matrix compressed_a;            // q x d, rescaled sampled blocks
    Matrix compressed_b;            // q x 1
    std::vector<uint64_t> weights;  // w~ in assembly order
    std::vector<size_t> blocks;     // sampled distinct block indices
    sketch::SamplingDistribution scores;
    size_t block_rows = 0;  // tau
};

WeightedGcResult weighted_gc(const Matrix& a, const Matrix& b, size_t k, size_t r, size_t s,
                             const EvalPoints& points, uint64_t seed);

}  // namespace codedlab::gc

#endif
