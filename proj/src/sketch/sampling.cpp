#include "sketch/sampling.hpp"

#include <cmath>
#include <numeric>

#include "core/combinatorics.hpp"
#include "core/linalg.hpp"

namespace codedlab::sketch {

namespace {

std::vector<double> normalized(std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) {
        require(w >= 0.0 && std::isfinite(w), ErrorKind::InvalidInput,
                "probabilities must be finite and nonnegative");
        total += w;
    }
    require(total > 0.0, ErrorKind::DegenerateDistribution, "all sampling weights are zero");
    for (double& w : weights) w /= total;
    return weights;
}

}  // namespace

size_t SamplingDistribution::support_size() const {
    size_t n = 0;
    for (double p : probs)
        if (p > 0.0) ++n;
    return n;
}

void SamplingDistribution::validate() const {
    require(!probs.empty(), ErrorKind::InvalidInput, "empty distribution");
    double total = 0.0;
    for (double p : probs) {
        require(p >= 0.0 && std::isfinite(p), ErrorKind::InvalidInput,
                "probabilities must be finite and nonnegative");
        total += p;
    }
    require(std::abs(total - 1.0) <= 1e-12, ErrorKind::InvalidInput,
            "probabilities must sum to one");
    require(beta > 0.0 && beta <= 1.0, ErrorKind::InvalidParameter, "beta must lie in (0,1]");
}

SamplingDistribution SamplingDistribution::user(std::vector<double> weights, double beta) {
    SamplingDistribution d{normalized(std::move(weights)), DistKind::UserSupplied, beta};
    d.validate();
    return d;
}

SamplingDistribution uniform_distribution(size_t n) {
    require(n >= 1, ErrorKind::InvalidParameter, "uniform distribution needs n >= 1");
    SamplingDistribution d;
    d.probs.assign(n, 1.0 / static_cast<double>(n));
    d.kind = DistKind::Uniform;
    return d;
}

SamplingDistribution cr_distribution(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), ErrorKind::InvalidInput,
            "cr_distribution pairs columns of A with rows of B");
    const size_t n = a.cols();
    std::vector<double> w(n);
    for (size_t i = 0; i < n; ++i) w[i] = a.col_norm(i) * b.row_norm(i);
    const double phi = std::accumulate(w.begin(), w.end(), 0.0);
    require(phi > 0.0, ErrorKind::DegenerateDistribution,
            "both operands vanish; sampling distribution undefined");
    for (double& x : w) x /= phi;
    SamplingDistribution d{std::move(w), DistKind::CrRows, 1.0};
    return d;
}

SamplingDistribution leverage_distribution(const Matrix& a) {
    require(a.rows() >= a.cols() && a.cols() >= 1, ErrorKind::InvalidInput,
            "leverage scores need a tall matrix");
    const Matrix u = orthonormal_basis(a);  // raises RankDeficient when rank < d
    const size_t n = a.rows();
    const double d = static_cast<double>(a.cols());
    std::vector<double> p(n);
    for (size_t i = 0; i < n; ++i) {
        const double li = u.row_norm(i);
        p[i] = li * li / d;
    }
    SamplingDistribution dist{std::move(p), DistKind::Leverage, 1.0};
    return dist;
}

SamplingDistribution block_leverage_distribution(const Matrix& a, size_t k) {
    require(k >= 1 && a.rows() % k == 0, ErrorKind::InvalidParameter,
            "block count must divide the row count");
    const SamplingDistribution rows = leverage_distribution(a);
    const size_t h = a.rows() / k;
    std::vector<double> p(k, 0.0);
    for (size_t i = 0; i < a.rows(); ++i) p[i / h] += rows.probs[i];
    SamplingDistribution d{std::move(p), DistKind::BlockLeverage, 1.0};
    return d;
}

SamplingDistribution block_cr_distribution(const Matrix& a, const Matrix& b, size_t k,
                                           BlockCrPower power) {
    require(a.cols() == b.rows(), ErrorKind::InvalidInput, "inner dimensions disagree");
    const auto ab = split_cols(a, k);
    const auto bb = split_rows(b, k);
    std::vector<double> w(k);
    for (size_t i = 0; i < k; ++i) {
        const double prod = ab[i].frobenius_norm() * bb[i].frobenius_norm();
        w[i] = power == BlockCrPower::Plain ? prod : prod * prod;
    }
    const double phi = std::accumulate(w.begin(), w.end(), 0.0);
    require(phi > 0.0, ErrorKind::DegenerateDistribution,
            "both operands vanish; sampling distribution undefined");
    for (double& x : w) x /= phi;
    SamplingDistribution d{std::move(w), DistKind::BlockCr, 1.0};
    return d;
}

void WeightedSample::validate() const {
    require(!indices.empty() && indices.size() == weights.size(), ErrorKind::InvalidInput,
            "weighted sample shape mismatch");
    uint64_t total = 0;
    for (size_t i = 0; i < indices.size(); ++i) {
        require(weights[i] >= 1, ErrorKind::InvalidInput, "weights must be positive");
        for (size_t j = i + 1; j < indices.size(); ++j)
            require(indices[i] != indices[j], ErrorKind::InvalidInput,
                    "sampled indices must be distinct");
        total += weights[i];
    }
    require(total == trials && trials >= indices.size(), ErrorKind::InvalidInput,
            "trial count inconsistent with weights");
}

WeightedSample sample_until_r_distinct(const SamplingDistribution& dist, size_t r, Rng rng) {
    dist.validate();
    require(r >= 1, ErrorKind::InvalidParameter, "need r >= 1");
    require(dist.support_size() >= r, ErrorKind::UnreachableTarget,
            "distribution has fewer nonzero atoms than requested distinct draws");
    WeightedSample out;
    std::vector<uint64_t> counts(dist.size(), 0);
    while (out.indices.size() < r) {
        const size_t i = rng.next_categorical(dist.probs);
        ++out.trials;
        if (counts[i] == 0) out.indices.push_back(i);
        ++counts[i];
    }
    out.weights.reserve(r);
    for (size_t i : out.indices) out.weights.push_back(counts[i]);
    out.validate();
    return out;
}

double expected_trials_until_r_distinct(const SamplingDistribution& dist, size_t r) {
    dist.validate();
    std::vector<size_t> support;
    std::vector<double> p;
    for (size_t i = 0; i < dist.size(); ++i) {
        if (dist.probs[i] > 0.0) {
            support.push_back(i);
            p.push_back(dist.probs[i]);
        }
    }
    const size_t k = support.size();
    require(k >= r && r >= 1, ErrorKind::UnreachableTarget,
            "distribution has fewer nonzero atoms than requested distinct draws");

    // E[T] = sum_{j<r} d_j * sum_{|S|=j} 1/(1-p(S)) with
    // d_j = sum_{m=j}^{r-1} (-1)^{m-j} C(k-j, m-j).
    uint64_t subsets = 0;
    for (size_t j = 0; j < r; ++j) subsets += binomial(k, j);
    require(subsets <= 2000000, ErrorKind::BudgetExceeded,
            "subset enumeration too large for exact expected-trial count");

    double expected = 0.0;
    for (size_t j = 0; j < r; ++j) {
        double d = 0.0;
        double binom = 1.0;  // C(k-j, m-j) built incrementally
        double sign = 1.0;
        for (size_t m = j; m < r; ++m) {
            d += sign * binom;
            binom = binom * static_cast<double>(k - j - (m - j)) / static_cast<double>(m - j + 1);
            sign = -sign;
        }
        double inner = 0.0;
        for_each_combination(k, j, [&](const std::vector<size_t>& comb) {
            double mass = 0.0;
            for (size_t i : comb) mass += p[i];
            inner += 1.0 / (1.0 - mass);
        });
        expected += d * inner;
    }
    return expected;
}

}  // namespace codedlab::sketch
