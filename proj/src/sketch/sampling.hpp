#ifndef CODEDLAB_SKETCH_SAMPLING_HPP
#define CODEDLAB_SKETCH_SAMPLING_HPP

#include <vector>

#include "core/matrix.hpp"
#include "core/rng.hpp"

namespace codedlab::sketch {

enum class DistKind { CrRows, Leverage, BlockCr, BlockLeverage, Uniform, UserSupplied };

struct SamplingDistribution {
    std::vector<double> probs;
    DistKind kind = DistKind::UserSupplied;
    double beta = 1.0;  // lower-bound fidelity for approximate distributions

    size_t size() const { return probs.size(); }
    size_t support_size() const;
    void validate() const;

    static SamplingDistribution user(std::vector<double> weights, double beta = 1.0);
};

SamplingDistribution uniform_distribution(size_t n);

// Column-row pair probabilities p_i ~ ||A^(i)|| * ||B_(i)|| for A (L x N),
// B (N x M).
SamplingDistribution cr_distribution(const Matrix& a, const Matrix& b);

// Row scores p_i = ||U_(i)||^2 / d from an orthonormal basis U of col(A).
SamplingDistribution leverage_distribution(const Matrix& a);

// Block scores Pi_i = ||U_i||_F^2 / d over k row blocks.
SamplingDistribution block_leverage_distribution(const Matrix& a, size_t k);

enum class BlockCrPower { Plain, Squared };

// Block-pair probabilities over the k inner-split pairs; Plain uses
// ||A^i||_F * ||B_i||_F products, Squared the squared products.
SamplingDistribution block_cr_distribution(const Matrix& a, const Matrix& b, size_t k,
                                           BlockCrPower power);

struct WeightedSample {
    std::vector<size_t> indices;    // distinct, in first-appearance order
    std::vector<uint64_t> weights;  // draw counts per index
    uint64_t trials = 0;            // total draws T

    void validate() const;
};

// Draws with replacement until r distinct indices have been seen.
WeightedSample sample_until_r_distinct(const SamplingDistribution& dist, size_t r, Rng rng);

// Exact E[T] for the stopping rule above, by inclusion-exclusion over
// subsets of fewer than r support atoms.
double expected_trials_until_r_distinct(const SamplingDistribution& dist, size_t r);

}  // namespace codedlab::sketch

#endif
