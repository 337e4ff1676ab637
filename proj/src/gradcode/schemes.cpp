#include "gradcode/schemes.hpp"

#include <algorithm>
#include <cmath>

#include "core/combinatorics.hpp"
#include "core/linalg.hpp"
#include "gradcode/graphs.hpp"

namespace codedlab::gc {

namespace {

std::vector<std::vector<size_t>> supports_of(const Matrix& g, double tol = 1e-12) {
    std::vector<std::vector<size_t>> out(g.rows());
    for (size_t i = 0; i < g.rows(); ++i)
        for (size_t j = 0; j < g.cols(); ++j)
            if (std::abs(g.at(i, j)) > tol) out[i].push_back(j);
    return out;
}

Matrix rows_of(const Matrix& g, const std::vector<size_t>& rows) {
    Matrix out(rows.size(), g.cols(), g.field());
    for (size_t t = 0; t < rows.size(); ++t)
        for (size_t j = 0; j < g.cols(); ++j) out.at(t, j) = g.at(rows[t], j);
    return out;
}

}  // namespace

const char* to_string(GcDecoder d) {
    switch (d) {
        case GcDecoder::ExactFrc: return "exact-frc";
        case GcDecoder::ExactBrs: return "exact-brs";
        case GcDecoder::OneStep: return "one-step";
        case GcDecoder::OptimalLsq: return "optimal-lsq";
        case GcDecoder::Expander: return "expander";
        case GcDecoder::Weighted: return "weighted";
    }
    return "?";
}

double GcScheme::expander_bound(size_t stragglers) const {
    require(decoder == GcDecoder::Expander, ErrorKind::InvalidInput,
            "bound only defined for expander schemes");
    require(stragglers < n, ErrorKind::InvalidParameter, "need s < n");
    const double nn = static_cast<double>(n);
    const double ss = static_cast<double>(stragglers);
    return lambda / degree * std::sqrt(nn * ss / (nn - ss));
}

void GcScheme::validate_responders(const std::vector<size_t>& responders) const {
    require(!responders.empty(), ErrorKind::InvalidParameter, "empty responder set");
    for (size_t i = 0; i < responders.size(); ++i) {
        require(responders[i] < n, ErrorKind::InvalidParameter, "responder index out of range");
        if (i + 1 < responders.size())
            require(responders[i] < responders[i + 1], ErrorKind::InvalidParameter,
                    "responders must be strictly ascending");
    }
}

DecodingVector optimal_decoder(const Matrix& g, const std::vector<size_t>& responders,
                               const std::vector<double>& target) {
    require(target.size() == g.cols(), ErrorKind::InvalidInput, "target length mismatch");
    const Matrix gi = rows_of(g, responders);
    const Matrix pinv = pseudoinverse(gi);  // k x f
    DecodingVector dv;
    dv.responders = responders;
    dv.a.assign(g.rows(), Complex(0.0, 0.0));
    // a^T = target^T * G_I^+  (all-zero G_I yields a = 0 and the error is
    // reported by gc_error rather than thrown)
    for (size_t t = 0; t < responders.size(); ++t) {
        Complex acc(0.0, 0.0);
        for (size_t j = 0; j < g.cols(); ++j) acc += target[j] * pinv.at(j, t);
        dv.a[responders[t]] = acc;
    }
    return dv;
}

DecodingVector brs_decoding_vector(const GcScheme& scheme, const std::vector<size_t>& responders,
                                   const std::vector<size_t>& chosen) {
    scheme.validate_responders(responders);
    const size_t k = scheme.p.cols() > 0 ? scheme.p.cols() : scheme.k;
    require(chosen.size() == k, ErrorKind::InvalidParameter,
            "BRS decoding uses exactly k responders");
    for (size_t c : chosen)
        require(std::binary_search(responders.begin(), responders.end(), c),
                ErrorKind::InvalidParameter, "chosen server did not respond");
    const auto row = decoding_row(scheme.points.subset(chosen));
    DecodingVector dv;
    dv.responders = responders;
    dv.a.assign(scheme.n, Complex(0.0, 0.0));
    for (size_t t = 0; t < chosen.size(); ++t) dv.a[chosen[t]] = row[t];
    return dv;
}

DecodingVector decoding_vector(const GcScheme& scheme, const std::vector<size_t>& responders) {
    scheme.validate_responders(responders);
    DecodingVector dv;
    dv.responders = responders;
    dv.a.assign(scheme.n, Complex(0.0, 0.0));
    switch (scheme.decoder) {
        case GcDecoder::ExactFrc: {
            // lowest-index responder per partition
            for (size_t j = 0; j < scheme.k; ++j) {
                for (size_t i : responders) {
                    if (scheme.g.at(i, j) == Complex(1.0, 0.0)) {
                        dv.a[i] = 1.0;  // row weight 1: server i covers only partition j
                        break;
                    }
                }
            }
            return dv;
        }
        case GcDecoder::ExactBrs:
        case GcDecoder::Weighted: {
            const size_t k = scheme.p.cols();
            require(responders.size() >= k, ErrorKind::InvalidParameter,
                    "BRS needs at least k responders");
            std::vector<size_t> chosen(responders.begin(),
                                       responders.begin() + static_cast<std::ptrdiff_t>(k));
            return brs_decoding_vector(scheme, responders, chosen);
        }
        case GcDecoder::Expander: {
            const double value =
                static_cast<double>(scheme.n) / static_cast<double>(responders.size());
            for (size_t i : responders) dv.a[i] = value;
            return dv;
        }
        case GcDecoder::OneStep: {
            for (size_t i : responders) dv.a[i] = scheme.rho;
            return dv;
        }
        case GcDecoder::OptimalLsq:
            return optimal_decoder(scheme.g, responders, scheme.target);
    }
    fail(ErrorKind::InvalidInput, "unknown decoder");
}

double gc_error(const GcScheme& scheme, const DecodingVector& dv) {
    double err2 = 0.0;
    for (size_t j = 0; j < scheme.k; ++j) {
        Complex acc(0.0, 0.0);
        for (size_t i : dv.responders) acc += dv.a[i] * scheme.g.at(i, j);
        err2 += std::norm(acc - scheme.target[j]);
    }
    return std::sqrt(err2);
}

double gc_error(const GcScheme& scheme, const std::vector<size_t>& responders) {
    require(responders.size() == scheme.threshold(), ErrorKind::InvalidParameter,
            "responder count must equal n - s");
    return gc_error(scheme, decoding_vector(scheme, responders));
}

MaxErrorResult gc_max_error(const GcScheme& scheme, size_t s, uint64_t exhaustive_budget,
                            size_t samples, uint64_t sample_seed) {
    require(s < scheme.n, ErrorKind::InvalidParameter, "need s < n");
    GcScheme probe = scheme;
    probe.s = s;
    MaxErrorResult result;
    result.value = -1.0;
    const uint64_t total = binomial(scheme.n, s);
    auto consider = [&](const std::vector<size_t>& stragglers) {
        const auto responders = complement_set(scheme.n, stragglers);
        const double err = gc_error(probe, responders);
        ++result.sets_evaluated;
        if (err > result.value) {
            result.value = err;
            result.worst_stragglers = stragglers;
        }
    };
    if (total <= exhaustive_budget) {
        result.exhaustive = true;
        for_each_combination(scheme.n, s, consider);
    } else {
        result.exhaustive = false;
        Rng rng = Rng::from_seed(sample_seed).substream("gc-max-error");
        for (size_t t = 0; t < samples; ++t) consider(rng.next_subset(scheme.n, s));
    }
    return result;
}

Matrix balanced_mask(size_t n, size_t k, size_t col_weight) {
    require(n >= 1 && k >= 1 && col_weight >= 1 && col_weight <= n,
            ErrorKind::InvalidParameter, "mask dimensions out of range");
    require(k * col_weight % n == 0, ErrorKind::InvalidParameter,
            "k * col_weight must be divisible by n for a balanced mask");
    Matrix mask(n, k, Field::Real);
    for (size_t j = 0; j < k; ++j)
        for (size_t t = 0; t < col_weight; ++t) mask.at((j * col_weight + t) % n, j) = 1.0;
    return mask;
}

GcScheme frc_scheme(size_t n, size_t s) {
    require(n >= 1 && s + 1 >= 1 && n % (s + 1) == 0, ErrorKind::InvalidParameter,
            "(s+1) must divide n");
    const size_t k = n / (s + 1);
    GcScheme scheme;
    scheme.n = n;
    scheme.k = k;
    scheme.s = s;
    scheme.decoder = GcDecoder::ExactFrc;
    scheme.g = Matrix(n, k, Field::Real);
    for (size_t i = 0; i < n; ++i) scheme.g.at(i, i / (s + 1)) = 1.0;
    scheme.assignments = supports_of(scheme.g);
    scheme.target.assign(k, 1.0);
    scheme.row_weight = 1;
    scheme.col_weight = s + 1;
    return scheme;
}

GcScheme brs_scheme(size_t n, size_t k, size_t s, const EvalPoints& points) {
    require(points.size() == n, ErrorKind::InvalidParameter,
            "need one evaluation point per server");
    require(s <= k - 1, ErrorKind::DegreeOverflow,
            "polynomial degree s does not fit k coefficients");
    require(n >= s + k, ErrorKind::InvalidParameter,
            "decoding needs k responders among any n - s");
    const size_t col_weight = n - s;
    const Matrix mask = balanced_mask(n, k, col_weight);

    GcScheme scheme;
    scheme.n = n;
    scheme.k = k;
    scheme.s = s;
    scheme.decoder = GcDecoder::ExactBrs;
    scheme.points = points;
    scheme.col_weight = col_weight;
    scheme.row_weight = k * col_weight / n;
    scheme.h = vandermonde(points, k);
    scheme.p = Matrix(k, k, Field::Complex);
    scheme.g = Matrix(n, k, Field::Complex);

    for (size_t j = 0; j < k; ++j) {
        std::vector<Complex> roots;
        for (size_t i = 0; i < n; ++i)
            if (mask.at(i, j) == Complex(0.0, 0.0)) roots.push_back(points[i]);
        std::vector<Complex> coeffs = poly_from_roots(roots);  // degree s, s+1 coeffs
        const Complex constant = coeffs[0];                    // p_j(0)
        require(std::abs(constant) > 1e-12, ErrorKind::EvaluationPoint,
                "p_j(0) vanished; supply different evaluation points");
        for (Complex& c : coeffs) c /= constant;
        for (size_t t = 0; t < k; ++t)
            scheme.p.at(t, j) = t < coeffs.size() ? coeffs[t] : Complex(0.0, 0.0);
        for (size_t i = 0; i < n; ++i) scheme.g.at(i, j) = poly_eval(coeffs, points[i]);
    }
    scheme.assignments = supports_of(scheme.g, 1e-10);
    scheme.target.assign(k, 1.0);
    return scheme;
}

GcScheme expander_scheme(const Matrix& adjacency, size_t degree, size_t s) {
    validate_regular_graph(adjacency, degree);
    const size_t n = adjacency.rows();
    require(s < n, ErrorKind::InvalidParameter, "need s < n");
    GcScheme scheme;
    scheme.n = n;
    scheme.k = n;
    scheme.s = s;
    scheme.decoder = GcDecoder::Expander;
    scheme.degree = static_cast<double>(degree);
    scheme.g = adjacency * (1.0 / static_cast<double>(degree));
    scheme.assignments = supports_of(scheme.g);
    scheme.target.assign(n, 1.0);
    scheme.row_weight = degree;
    scheme.col_weight = degree;
    const auto eigs = sym_eigenvalues(adjacency);  // descending, eigs[0] = degree
    double lam = 0.0;
    for (size_t i = 1; i < eigs.size(); ++i) lam = std::max(lam, std::abs(eigs[i]));
    scheme.lambda = lam;
    return scheme;
}

GcScheme bernoulli_scheme(size_t n, size_t k, size_t s, uint64_t seed) {
    require(n >= 1 && k >= 1, ErrorKind::InvalidParameter, "need n, k >= 1");
    require(s >= 1 && s <= k, ErrorKind::InvalidParameter,
            "s/k must be a probability in (0,1]");
    const double prob = static_cast<double>(s) / static_cast<double>(k);
    Rng rng = Rng::from_seed(seed).substream("bernoulli-gc");
    GcScheme scheme;
    scheme.n = n;
    scheme.k = k;
    scheme.s = s;
    scheme.decoder = GcDecoder::OptimalLsq;
    scheme.g = Matrix(n, k, Field::Real);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < k; ++j)
            if (rng.next_double() < prob) scheme.g.at(i, j) = 1.0;
    scheme.assignments = supports_of(scheme.g);
    scheme.target.assign(k, 1.0);
    return scheme;
}

GcScheme bibd_scheme(const Matrix& incidence, size_t pair_lambda, size_t s) {
    const BibdParams params = validate_bibd(incidence, pair_lambda);
    require(s < params.points, ErrorKind::InvalidParameter, "need s < n");
    GcScheme scheme;
    scheme.n = params.points;
    scheme.k = params.blocks;
    scheme.s = s;
    scheme.decoder = GcDecoder::OneStep;
    scheme.g = incidence;
    scheme.assignments = supports_of(incidence);
    scheme.target.assign(params.blocks, 1.0);
    scheme.row_weight = params.replication;
    scheme.col_weight = params.block_size;
    const double w = static_cast<double>(params.replication);
    scheme.rho =
        w / (w + static_cast<double>(pair_lambda) * static_cast<double>(scheme.n - s - 1));
    return scheme;
}

GcScheme with_one_step(GcScheme scheme, double rho) {
    scheme.decoder = GcDecoder::OneStep;
    scheme.rho = rho;
    return scheme;
}

GcScheme with_optimal(GcScheme scheme) {
    scheme.decoder = GcDecoder::OptimalLsq;
    return scheme;
}

WeightedGcResult weighted_gc(const Matrix& a, const Matrix& b, size_t k, size_t r, size_t s,
                             const EvalPoints& points, uint64_t seed) {
    require(b.rows() == a.rows() && b.cols() == 1, ErrorKind::InvalidInput,
            "labels must be a column matching A");
    require(r >= 1 && r <= k, ErrorKind::InvalidParameter, "need 1 <= r <= k");
    WeightedGcResult out;
    out.scores = sketch::block_leverage_distribution(a, k);
    const auto sample = sketch::sample_until_r_distinct(
        out.scores, r, Rng::from_seed(seed).substream("weighted-gc-sampling"));
    out.weights = sample.weights;
    out.blocks = sample.indices;
    out.block_rows = a.rows() / k;

    std::vector<Matrix> ablocks, bblocks;
    for (size_t j = 0; j < r; ++j) {
        const size_t idx = sample.indices[j];
        const double scale =
            1.0 / std::sqrt(static_cast<double>(r) * out.scores.probs[idx]);
        ablocks.push_back(a.row_block(idx, k, out.block_rows) * scale);
        bblocks.push_back(b.row_block(idx, k, out.block_rows) * scale);
    }
    out.compressed_a = vcat(ablocks);
    out.compressed_b = vcat(bblocks);

    GcScheme base = brs_scheme(points.size(), r, s, points);
    base.decoder = GcDecoder::Weighted;
    base.target.assign(r, 0.0);
    for (size_t j = 0; j < r; ++j) {
        base.target[j] = static_cast<double>(sample.weights[j]);
        for (size_t i = 0; i < base.n; ++i)
            base.g.at(i, j) *= static_cast<double>(sample.weights[j]);
    }
    base.assignments = supports_of(base.g, 1e-10);
    out.scheme = std::move(base);
    return out;
}

}  // namespace codedlab::gc
