#include "sketch/operators.hpp"

#include <bit>
#include <cmath>

#include "core/linalg.hpp"
#include "core/parallel.hpp"

namespace codedlab::sketch {

Matrix SketchOperator::apply(const Matrix& x) const { return realization * x; }

Matrix SketchOperator::apply_adjoint(const Matrix& x) const {
    return realization.transpose() * x;
}

Matrix SketchOperator::gram() const { return realization.transpose() * realization; }

SketchOperator row_sampling_sketch(const SamplingDistribution& dist, size_t q, uint64_t seed) {
    return row_sampling_sketch(dist, q, Rng::from_seed(seed).substream("row-sampling"));
}

SketchOperator row_sampling_sketch(const SamplingDistribution& dist, size_t q, Rng rng) {
    dist.validate();
    require(q >= 1, ErrorKind::InvalidParameter, "sketch dimension must be positive");
    const size_t n = dist.size();
    SketchOperator op;
    op.variant = SketchVariant::RowSampling;
    op.q = q;
    op.ambient = n;
    op.realization = Matrix(q, n, Field::Real);
    op.sampled_indices.reserve(q);
    op.sampled_scales.reserve(q);
    for (size_t j = 0; j < q; ++j) {
        const size_t i = rng.next_categorical(dist.probs);
        const double scale = 1.0 / std::sqrt(static_cast<double>(q) * dist.probs[i]);
        op.realization.at(j, i) = scale;
        op.sampled_indices.push_back(i);
        op.sampled_scales.push_back(scale);
    }
    return op;
}

SketchOperator countsketch_operator(size_t ambient, size_t q, Rng rng) {
    require(q >= 1 && ambient >= 1, ErrorKind::InvalidParameter,
            "countsketch needs positive dimensions");
    SketchOperator op;
    op.variant = SketchVariant::CountSketch;
    op.q = q;
    op.ambient = ambient;
    op.realization = Matrix(q, ambient, Field::Real);
    op.buckets.reserve(ambient);
    op.signs.reserve(ambient);
    for (size_t i = 0; i < ambient; ++i) {
        const size_t bucket = rng.next_index(q);
        const int sign = rng.next_sign();
        op.realization.at(bucket, i) = static_cast<double>(sign);
        op.buckets.push_back(bucket);
        op.signs.push_back(sign);
    }
    return op;
}

SketchOperator identity_countsketch_operator(size_t ambient) {
    SketchOperator op;
    op.variant = SketchVariant::CountSketch;
    op.q = ambient;
    op.ambient = ambient;
    op.realization = Matrix::identity(ambient);
    op.buckets.resize(ambient);
    op.signs.assign(ambient, 1);
    for (size_t i = 0; i < ambient; ++i) op.buckets[i] = i;
    return op;
}

std::pair<Matrix, SketchOperator> countsketch(const Matrix& a, size_t q, uint64_t seed) {
    SketchOperator op =
        countsketch_operator(a.rows(), q, Rng::from_seed(seed).substream("countsketch"));
    return {op.apply(a), std::move(op)};
}

SketchOperator gaussian_sketch(size_t q, size_t ambient, uint64_t seed) {
    return gaussian_sketch(q, ambient, Rng::from_seed(seed).substream("gaussian-sketch"));
}

SketchOperator gaussian_sketch(size_t q, size_t ambient, Rng rng) {
    require(q >= 1 && ambient >= 1, ErrorKind::InvalidParameter,
            "gaussian sketch needs positive dimensions");
    SketchOperator op;
    op.variant = SketchVariant::Gaussian;
    op.q = q;
    op.ambient = ambient;
    op.realization = Matrix(q, ambient, Field::Real);
    const double scale = 1.0 / std::sqrt(static_cast<double>(q));
    for (size_t i = 0; i < q; ++i)
        for (size_t j = 0; j < ambient; ++j) op.realization.at(i, j) = scale * rng.next_normal();
    return op;
}

SketchOperator srht(size_t q, size_t ambient, uint64_t seed) {
    return srht(q, ambient, Rng::from_seed(seed).substream("srht"));
}

SketchOperator srht(size_t q, size_t ambient, Rng rng) {
    require(q >= 1 && ambient >= 1, ErrorKind::InvalidParameter,
            "srht needs positive dimensions");
    require(q <= ambient, ErrorKind::InvalidParameter, "srht needs q <= N");
    size_t padded = 1;
    while (padded < ambient) padded *= 2;

    std::vector<int> signs(padded);
    for (size_t i = 0; i < padded; ++i) signs[i] = rng.next_sign();
    const std::vector<size_t> rows = rng.next_subset(padded, q);

    SketchOperator op;
    op.variant = SketchVariant::Srht;
    op.q = q;
    op.ambient = ambient;
    op.sampled_indices = rows;
    op.signs = signs;
    op.realization = Matrix(q, ambient, Field::Real);
    // Entry of the normalized Hadamard: (-1)^<bits(i),bits(j)> / sqrt(padded);
    // row sampling contributes sqrt(padded/q); columns beyond N are dropped.
    const double scale = 1.0 / std::sqrt(static_cast<double>(q));
    for (size_t t = 0; t < q; ++t) {
        const size_t i = rows[t];
        for (size_t j = 0; j < ambient; ++j) {
            const int parity = std::popcount(i & j) & 1;
            const double h = parity ? -1.0 : 1.0;
            op.realization.at(t, j) = scale * h * static_cast<double>(signs[j]);
        }
    }
    return op;
}

Matrix basic_matrix_multiplication(const Matrix& a, const Matrix& b, size_t q, uint64_t seed) {
    return basic_matrix_multiplication(a, b, q,
                                       Rng::from_seed(seed).substream("basic-mat-mul"));
}

Matrix basic_matrix_multiplication(const Matrix& a, const Matrix& b, size_t q, Rng rng) {
    const SamplingDistribution dist = cr_distribution(a, b);
    const SketchOperator s = row_sampling_sketch(dist, q, std::move(rng));
    // (S A^H)^H (S B) written as (A S^T)(S B).
    return (a * s.realization.transpose()) * s.apply(b);
}

double se_error(const SketchOperator& s, const Matrix& a) {
    require(s.ambient == a.rows(), ErrorKind::InvalidInput,
            "sketch and matrix dimensions disagree");
    const Matrix u = orthonormal_basis(a);
    const Matrix su = s.apply(u);
    const Matrix dev = Matrix::identity(a.cols()) - su.adjoint() * su;
    const auto eigs = sym_eigenvalues(dev);
    double out = 0.0;
    for (double e : eigs) out = std::max(out, std::abs(e));
    return out;
}

double amm_error(const Matrix& a, const Matrix& b, const SketchOperator& s, NormKind norm) {
    require(a.cols() == b.rows() && s.ambient == a.cols(), ErrorKind::InvalidInput,
            "shape mismatch in amm_error");
    const Matrix residual = a * b - (a * s.realization.transpose()) * s.apply(b);
    return norm == NormKind::Frobenius ? residual.frobenius_norm() : spectral_norm(residual);
}

Theorem1Report theorem1_validate(const Matrix& a, const Matrix& b, double epsilon, double delta,
                                 const std::vector<size_t>& q_grid, size_t trials,
                                 uint64_t seed) {
    require(!q_grid.empty() && trials >= 1, ErrorKind::InvalidParameter,
            "empty grid or zero trials");
    for (size_t i = 1; i < q_grid.size(); ++i)
        require(q_grid[i] > q_grid[i - 1], ErrorKind::InvalidParameter,
                "q grid must be ascending");

    const Matrix ab = a * b;
    const double denom = spectral_norm(a) * spectral_norm(b);
    require(denom > 0.0, ErrorKind::InvalidInput, "zero operands");
    const Rng base = Rng::from_seed(seed);

    Theorem1Report report;
    report.epsilon = epsilon;
    report.delta = delta;
    report.trials = trials;
    for (size_t gi = 0; gi < q_grid.size(); ++gi) {
        const size_t q = q_grid[gi];
        std::vector<uint8_t> hit(trials, 0);
        parallel_for(trials, [&](size_t t) {
            const Matrix est =
                basic_matrix_multiplication(a, b, q, base.substream("theorem1", gi * 1000003 + t));
            hit[t] = spectral_norm(ab - est) / denom <= epsilon ? 1 : 0;
        });
        size_t count = 0;
        for (uint8_t h : hit) count += h;
        report.points.push_back({q, static_cast<double>(count) / static_cast<double>(trials)});
    }

    const auto band = [trials](double f) {
        // two-sided binomial noise, widened by 1/trials so degenerate
        // frequencies 0 and 1 keep a nonzero band
        return 2.0 * std::sqrt(std::max(f * (1.0 - f), 0.0) / static_cast<double>(trials)) +
               1.0 / static_cast<double>(trials);
    };
    report.nondecreasing_within_noise = true;
    for (size_t i = 1; i < report.points.size(); ++i) {
        const double f0 = report.points[i - 1].frequency;
        const double f1 = report.points[i].frequency;
        if (f1 < f0 - (band(f0) + band(f1))) report.nondecreasing_within_noise = false;
    }
    for (const auto& pt : report.points) {
        if (pt.frequency >= 1.0 - delta) {
            report.crossing_q = pt.q;
            break;
        }
    }
    return report;
}

}  // namespace codedlab::sketch
