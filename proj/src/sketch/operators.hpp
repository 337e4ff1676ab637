#ifndef CODEDLAB_SKETCH_OPERATORS_HPP
#define CODEDLAB_SKETCH_OPERATORS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "core/matrix.hpp"
#include "core/rng.hpp"
#include "sketch/sampling.hpp"

namespace codedlab::sketch {

enum class SketchVariant { RowSampling, CountSketch, Gaussian, Srht };

// A materialized q x N sketching matrix together with its structured
// description (which part is populated depends on the variant).
struct SketchOperator {
    SketchVariant variant;
    size_t q = 0;
    size_t ambient = 0;  // N
    Matrix realization;  // q x N, real

    std::vector<size_t> sampled_indices;  // row-sampling: i_j per sketch row; srht: selected rows
    std::vector<double> sampled_scales;   // row-sampling: 1/sqrt(q*pi)
    std::vector<size_t> buckets;          // countsketch: bucket per input row
    std::vector<int> signs;               // countsketch / srht diagonal

    Matrix apply(const Matrix& x) const;          // S * x
    Matrix apply_adjoint(const Matrix& x) const;  // S^T * x
    Matrix gram() const;                          // S^T * S
};

SketchOperator row_sampling_sketch(const SamplingDistribution& dist, size_t q, uint64_t seed);
SketchOperator row_sampling_sketch(const SamplingDistribution& dist, size_t q, Rng rng);

std::pair<Matrix, SketchOperator> countsketch(const Matrix& a, size_t q, uint64_t seed);
SketchOperator countsketch_operator(size_t ambient, size_t q, Rng rng);
// Collision-free all-plus CountSketch with q = ambient; the exactness anchor.
SketchOperator identity_countsketch_operator(size_t ambient);

SketchOperator gaussian_sketch(size_t q, size_t ambient, uint64_t seed);
SketchOperator gaussian_sketch(size_t q, size_t ambient, Rng rng);

// Subsampled randomized Hadamard transform; non-power-of-two ambient
// dimensions are zero-padded to the next power of two before sampling.
SketchOperator srht(size_t q, size_t ambient, uint64_t seed);
SketchOperator srht(size_t q, size_t ambient, Rng rng);

// CR sampling estimate of AB for A (L x N), B (N x M): A S^T S B with S row
// sampled from the column-row norm-product distribution.
Matrix basic_matrix_multiplication(const Matrix& a, const Matrix& b, size_t q, uint64_t seed);
Matrix basic_matrix_multiplication(const Matrix& a, const Matrix& b, size_t q, Rng rng);

// Subspace-embedding deviation ||I - (SU)^H (SU)||_2 for U a basis of col(A).
double se_error(const SketchOperator& s, const Matrix& a);

enum class NormKind { Spectral, Frobenius };

// Residual ||AB - A S^T S B|| in the requested norm.
double amm_error(const Matrix& a, const Matrix& b, const SketchOperator& s, NormKind norm);

struct Theorem1Report {
    struct GridPoint {
        size_t q;
        double frequency;
    };
    std::vector<GridPoint> points;
    double epsilon = 0.0;
    double delta = 0.0;
    size_t trials = 0;
    bool nondecreasing_within_noise = false;
    std::optional<size_t> crossing_q;  // first q with frequency >= 1 - delta
};

// Empirical check of the normalized spectral-error tail event over a q grid.
Theorem1Report theorem1_validate(const Matrix& a, const Matrix& b, double epsilon, double delta,
                                 const std::vector<size_t>& q_grid, size_t trials, uint64_t seed);

}  // namespace codedlab::sketch

#endif
