#include "codedmm/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "core/combinatorics.hpp"
#include "core/linalg.hpp"

namespace codedlab::cmm {

namespace {

// Evaluates sum_j blocks[j] * x^{exps[j]}.
Matrix eval_block_poly(const std::vector<Matrix>& blocks, const std::vector<size_t>& exps,
                       Complex x) {
    Matrix acc(blocks.front().rows(), blocks.front().cols(), Field::Complex);
    for (size_t j = 0; j < blocks.size(); ++j) {
        Complex p(1.0, 0.0);
        for (size_t e = 0; e < exps[j]; ++e) p *= x;
        acc += blocks[j] * p;
    }
    return acc;
}

Matrix maybe_real(Matrix m, bool inputs_real) {
    return inputs_real ? m.to_real_checked(1e-6) : m;
}

double product_flops(const Matrix& a, const Matrix& b) {
    return 2.0 * static_cast<double>(a.rows()) * static_cast<double>(a.cols()) *
           static_cast<double>(b.cols());
}

}  // namespace

std::vector<ServerOutput> CmmScheme::compute_all() const {
    std::vector<ServerOutput> out;
    out.reserve(n_);
    for (size_t i = 0; i < n_; ++i) out.push_back({i, task_output(i)});
    return out;
}

Matrix CmmScheme::decode_from(const std::vector<size_t>& server_ids) const {
    std::vector<ServerOutput> responses;
    responses.reserve(server_ids.size());
    for (size_t id : server_ids) {
        require(id < n_, ErrorKind::InvalidParameter, "server id out of range");
        responses.push_back({id, task_output(id)});
    }
    return decode(responses);
}

std::vector<ServerOutput> CmmScheme::canonical_responses(
    const std::vector<ServerOutput>& responses, size_t needed) const {
    std::map<size_t, const ServerOutput*> by_id;
    for (const auto& r : responses) {
        require(r.server_id < n_, ErrorKind::InvalidParameter, "server id out of range");
        by_id.emplace(r.server_id, &r);  // duplicates keep the first response
    }
    require(by_id.size() >= needed, ErrorKind::InsufficientResponses,
            "decode needs " + std::to_string(needed) + " distinct responses, got " +
                std::to_string(by_id.size()));
    std::vector<ServerOutput> out;
    out.reserve(needed);
    for (const auto& [id, resp] : by_id) {
        out.push_back(*resp);
        if (out.size() == needed) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// MatDot-style schemes: every server returns one evaluation of a product
// polynomial; decode interpolates and extracts one coefficient.

namespace {

class CoefficientScheme : public CmmScheme {
  public:
    CoefficientScheme(size_t n, size_t f, Exactness e, EvalPoints points, size_t extract,
                      bool inputs_real)
        : CmmScheme(n, f, e),
          points_(std::move(points)),
          extract_(extract),
          inputs_real_(inputs_real) {}

    Matrix task_output(size_t server) const override {
        require(server < n_, ErrorKind::InvalidParameter, "server id out of range");
        return encoded_a_[server] * encoded_b_[server];
    }

    double task_flops(size_t server) const override {
        require(server < n_, ErrorKind::InvalidParameter, "server id out of range");
        return product_flops(encoded_a_[server], encoded_b_[server]);
    }

    Matrix decode(const std::vector<ServerOutput>& responses) const override {
        const auto used = canonical_responses(responses, f_);
        std::vector<size_t> idx;
        std::vector<Matrix> values;
        for (const auto& r : used) {
            idx.push_back(r.server_id);
            values.push_back(r.w);
        }
        const auto coeffs = lagrange_interpolate(points_.subset(idx), values);
        return maybe_real(coeffs[extract_], inputs_real_);
    }

    std::vector<Matrix> encoded_a_;
    std::vector<Matrix> encoded_b_;

  private:
    EvalPoints points_;
    size_t extract_;
    bool inputs_real_;
};

std::unique_ptr<CoefficientScheme> make_matdot_like(
    const std::vector<Matrix>& ablocks, const std::vector<Matrix>& bblocks,
    const EvalPoints& points, Exactness exactness, bool inputs_real) {
    const size_t r = ablocks.size();
    const size_t n = points.size();
    const size_t f = 2 * r - 1;
    require(n >= f, ErrorKind::InfeasibleParameters,
            "need at least 2k-1 servers for MatDot decoding");
    auto scheme = std::make_unique<CoefficientScheme>(n, f, exactness, points, r - 1,
                                                      inputs_real);
    std::vector<size_t> a_exps(r), b_exps(r);
    for (size_t j = 0; j < r; ++j) {
        a_exps[j] = j;          // x^{j-1}
        b_exps[j] = r - 1 - j;  // x^{k-j}
    }
    scheme->encoded_a_.reserve(n);
    scheme->encoded_b_.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        scheme->encoded_a_.push_back(eval_block_poly(ablocks, a_exps, points[i]));
        scheme->encoded_b_.push_back(eval_block_poly(bblocks, b_exps, points[i]));
    }
    return scheme;
}

}  // namespace

std::unique_ptr<CmmScheme> matdot(const Matrix& a, const Matrix& b, size_t k,
                                  const EvalPoints& points) {
    require(k >= 1, ErrorKind::InvalidParameter, "need k >= 1");
    const auto ablocks = partition(a, k, SplitScheme::InnerDim, Operand::Left);
    const auto bblocks = partition(b, k, SplitScheme::InnerDim, Operand::Right);
    const bool real = a.is_real() && b.is_real();
    return make_matdot_like(ablocks, bblocks, points, Exactness::Exact, real);
}

std::unique_ptr<CmmScheme> entangled_example(const Matrix& a, const Matrix& b,
                                             const EvalPoints& points) {
    const auto ablocks = partition(a, 2, SplitScheme::InnerDim, Operand::Left);
    const auto bblocks = partition(b, 2, SplitScheme::InnerDim, Operand::Right);
    const size_t n = points.size();
    require(n >= 3, ErrorKind::InfeasibleParameters, "entangled example needs n >= 3");
    const bool real = a.is_real() && b.is_real();
    auto scheme =
        std::make_unique<CoefficientScheme>(n, 3, Exactness::Exact, points, 1, real);
    for (size_t i = 0; i < n; ++i) {
        // A~ = A0 + x A1, B~ = x B0 + B1; the degree-1 coefficient of the
        // product is A0 B0 + A1 B1 = AB.
        scheme->encoded_a_.push_back(eval_block_poly(ablocks, {0, 1}, points[i]));
        scheme->encoded_b_.push_back(eval_block_poly(bblocks, {1, 0}, points[i]));
    }
    return scheme;
}

// ---------------------------------------------------------------------------
// Polynomial codes: coefficients live on a designed exponent set and
// reassemble into the block grid of C.

namespace {

class PolynomialCodeScheme : public CmmScheme {
  public:
    PolynomialCodeScheme(size_t n, size_t k, EvalPoints points, bool inputs_real)
        : CmmScheme(n, k * k, Exactness::Exact),
          k_(k),
          points_(std::move(points)),
          inputs_real_(inputs_real) {}

    Matrix task_output(size_t server) const override {
        require(server < n_, ErrorKind::InvalidParameter, "server id out of range");
        return encoded_a_[server] * encoded_b_[server];
    }

    double task_flops(size_t server) const override {
        require(server < n_, ErrorKind::InvalidParameter, "server id out of range");
        return product_flops(encoded_a_[server], encoded_b_[server]);
    }

    Matrix decode(const std::vector<ServerOutput>& responses) const override {
        const auto used = canonical_responses(responses, f_);
        // Generalized Vandermonde on the exponent set.
        Matrix v(f_, f_, Field::Complex);
        Matrix rhs(f_, used.front().w.size(), Field::Complex);
        for (size_t t = 0; t < f_; ++t) {
            const Complex gamma = points_[used[t].server_id];
            for (size_t m = 0; m < exponents_.size(); ++m) {
                Complex p(1.0, 0.0);
                for (size_t e = 0; e < exponents_[m]; ++e) p *= gamma;
                v.at(t, m) = p;
            }
            for (size_t e = 0; e < used[t].w.size(); ++e) rhs.at(t, e) = used[t].w.data()[e];
        }
        const Matrix sol = solve_lu(v, rhs);
        // Reassemble C from its k x k block grid.
        const size_t br = block_rows_, bc = block_cols_;
        Matrix c(k_ * br, k_ * bc, Field::Complex);
        for (size_t m = 0; m < exponents_.size(); ++m) {
            const size_t j = coeff_row_[m], l = coeff_col_[m];
            for (size_t rr = 0; rr < br; ++rr)
                for (size_t cc = 0; cc < bc; ++cc)
                    c.at(j * br + rr, l * bc + cc) = sol.at(m, rr * bc + cc);
        }
        return maybe_real(c, inputs_real_);
    }

    size_t k_;
    std::vector<Matrix> encoded_a_;
    std::vector<Matrix> encoded_b_;
    std::vector<size_t> exponents_;  // sorted
    std::vector<size_t> coeff_row_;  // block j per exponent
    std::vector<size_t> coeff_col_;  // block l per exponent
    size_t block_rows_ = 0, block_cols_ = 0;

  private:
    EvalPoints points_;
    bool inputs_real_;
};

}  // namespace

std::unique_ptr<CmmScheme> polynomial_code(const Matrix& a, const Matrix& b, size_t k,
                                           size_t a_exp, size_t b_exp,
                                           const EvalPoints& points) {
    require(k >= 1 && a_exp >= 1 && b_exp >= 1, ErrorKind::InvalidParameter,
            "need k, a, b >= 1");
    const auto ablocks = partition(a, k, SplitScheme::OuterDim, Operand::Left);
    const auto bblocks = partition(b, k, SplitScheme::OuterDim, Operand::Right);
    const size_t n = points.size();
    require(n >= k * k, ErrorKind::InfeasibleParameters,
            "polynomial code needs n >= k^2 servers");

    // all exponents (j-1)a + (l-1)b must be distinct
    std::vector<size_t> exps;
    std::vector<size_t> rows, cols;
    for (size_t j = 0; j < k; ++j) {
        for (size_t l = 0; l < k; ++l) {
            exps.push_back(j * a_exp + l * b_exp);
            rows.push_back(j);
            cols.push_back(l);
        }
    }
    {
        std::vector<size_t> sorted = exps;
        std::sort(sorted.begin(), sorted.end());
        require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                ErrorKind::InvalidExponents, "exponent collision; choose different (a,b)");
    }

    const bool real = a.is_real() && b.is_real();
    auto scheme = std::make_unique<PolynomialCodeScheme>(n, k, points, real);
    scheme->exponents_ = exps;
    scheme->coeff_row_ = rows;
    scheme->coeff_col_ = cols;
    scheme->block_rows_ = ablocks.front().rows();
    scheme->block_cols_ = bblocks.front().cols();

    std::vector<size_t> a_exps(k), b_exps(k);
    for (size_t j = 0; j < k; ++j) {
        a_exps[j] = j * a_exp;
        b_exps[j] = j * b_exp;
    }
    for (size_t i = 0; i < n; ++i) {
        scheme->encoded_a_.push_back(eval_block_poly(ablocks, a_exps, points[i]));
        scheme->encoded_b_.push_back(eval_block_poly(bblocks, b_exps, points[i]));
    }
    return scheme;
}

// ---------------------------------------------------------------------------
// Sampling-based approximate schemes (MatDot decoding on sampled blocks).

namespace {

class SamplingScheme : public SamplingCmmScheme {
  public:
    SamplingScheme(size_t n, size_t f, EvalPoints points, bool inputs_real)
        : SamplingCmmScheme(n, f, Exactness::UnbiasedApproximate),
          inner_(std::make_unique<CoefficientScheme>(n, f, Exactness::UnbiasedApproximate,
                                                     std::move(points), (f - 1) / 2,
                                                     inputs_real)) {}

    Matrix task_output(size_t server) const override { return inner_->task_output(server); }
    double task_flops(size_t server) const override { return inner_->task_flops(server); }
    Matrix decode(const std::vector<ServerOutput>& responses) const override {
        return inner_->decode(responses);
    }

    CoefficientScheme& inner() { return *inner_; }
    void set_direct(Matrix m) { direct_ = std::move(m); }

  private:
    std::unique_ptr<CoefficientScheme> inner_;
};

std::unique_ptr<SamplingScheme> make_sampling_scheme(const std::vector<Matrix>& ablocks,
                                                     const std::vector<Matrix>& bblocks,
                                                     const EvalPoints& points,
                                                     bool inputs_real) {
    const size_t r = ablocks.size();
    const size_t f = 2 * r - 1;
    require(points.size() >= f, ErrorKind::InfeasibleParameters,
            "need at least 2r-1 servers");
    auto scheme = std::make_unique<SamplingScheme>(points.size(), f, points, inputs_real);
    std::vector<size_t> a_exps(r), b_exps(r);
    for (size_t j = 0; j < r; ++j) {
        a_exps[j] = j;
        b_exps[j] = r - 1 - j;
    }
    for (size_t i = 0; i < points.size(); ++i) {
        scheme->inner().encoded_a_.push_back(eval_block_poly(ablocks, a_exps, points[i]));
        scheme->inner().encoded_b_.push_back(eval_block_poly(bblocks, b_exps, points[i]));
    }
    return scheme;
}

}  // namespace

std::unique_ptr<SamplingCmmScheme> coded_independent_sampling(
    const Matrix& a, const Matrix& b, size_t k, size_t r,
    const sketch::SamplingDistribution& dist, const EvalPoints& points, uint64_t seed) {
    require(r >= 1, ErrorKind::InvalidParameter, "need r >= 1");
    dist.validate();
    require(dist.size() == k, ErrorKind::InvalidParameter,
            "distribution must cover the k block pairs");
    const auto ablocks = partition(a, k, SplitScheme::InnerDim, Operand::Left);
    const auto bblocks = partition(b, k, SplitScheme::InnerDim, Operand::Right);

    Rng rng = Rng::from_seed(seed).substream("coded-independent-sampling");
    std::vector<Matrix> sa, sb;
    Matrix direct(a.rows(), b.cols(), Field::Real);
    for (size_t j = 0; j < r; ++j) {
        const size_t idx = rng.next_categorical(dist.probs);
        const double scale =
            1.0 / std::sqrt(static_cast<double>(r) * dist.probs[idx]);
        sa.push_back(ablocks[idx] * scale);
        sb.push_back(bblocks[idx] * scale);
        direct += (ablocks[idx] * bblocks[idx]) *
                  (1.0 / (static_cast<double>(r) * dist.probs[idx]));
    }
    auto scheme = make_sampling_scheme(sa, sb, points, a.is_real() && b.is_real());
    scheme->set_direct(std::move(direct));
    return scheme;
}

std::unique_ptr<SamplingCmmScheme> coded_setwise_sampling(const Matrix& a, const Matrix& b,
                                                          size_t k, size_t r,
                                                          const EvalPoints& points,
                                                          uint64_t seed) {
    require(r >= 1 && r <= k, ErrorKind::InvalidParameter, "need 1 <= r <= k");
    const auto ablocks = partition(a, k, SplitScheme::InnerDim, Operand::Left);
    const auto bblocks = partition(b, k, SplitScheme::InnerDim, Operand::Right);

    Rng rng = Rng::from_seed(seed).substream("coded-setwise-sampling");
    const std::vector<size_t> subset = rng.next_subset(k, r);
    // uniform P_I = 1/C(k,r) and c = C(k,r) r/k give operand scale sqrt(k/r)
    const double scale = std::sqrt(static_cast<double>(k) / static_cast<double>(r));
    std::vector<Matrix> sa, sb;
    Matrix direct(a.rows(), b.cols(), Field::Real);
    for (size_t idx : subset) {
        sa.push_back(ablocks[idx] * scale);
        sb.push_back(bblocks[idx] * scale);
        direct += (ablocks[idx] * bblocks[idx]) *
                  (static_cast<double>(k) / static_cast<double>(r));
    }
    auto scheme = make_sampling_scheme(sa, sb, points, a.is_real() && b.is_real());
    scheme->set_direct(std::move(direct));
    return scheme;
}

std::unique_ptr<SamplingCmmScheme> weighted_cr_cmm(const Matrix& a, const Matrix& b, size_t k,
                                                   size_t r, const EvalPoints& points,
                                                   uint64_t seed) {
    require(r >= 1 && r <= k, ErrorKind::InvalidParameter, "need 1 <= r <= k");
    const auto dist = sketch::block_cr_distribution(a, b, k, sketch::BlockCrPower::Squared);
    const auto sample = sketch::sample_until_r_distinct(
        dist, r, Rng::from_seed(seed).substream("weighted-cr-sampling"));
    // Wald normalization: scaling by the exact E[T] of the stopping rule keeps
    // sum_j w~_j A^j B_j / (E[T] p_j) exactly unbiased.
    const double expected_trials = sketch::expected_trials_until_r_distinct(dist, r);

    const auto ablocks = partition(a, k, SplitScheme::InnerDim, Operand::Left);
    const auto bblocks = partition(b, k, SplitScheme::InnerDim, Operand::Right);
    std::vector<Matrix> sa, sb;
    Matrix direct(a.rows(), b.cols(), Field::Real);
    for (size_t j = 0; j < r; ++j) {
        const size_t idx = sample.indices[j];
        const double w = static_cast<double>(sample.weights[j]);
        const double base = expected_trials * dist.probs[idx];
        // sqrt(w~) from the weighted encoding, 1/sqrt(E[T] p) from importance
        // scaling; both fold into the stored blocks.
        const double scale = std::sqrt(w) / std::sqrt(base);
        sa.push_back(ablocks[idx] * scale);
        sb.push_back(bblocks[idx] * scale);
        direct += (ablocks[idx] * bblocks[idx]) * (w / base);
    }
    auto scheme = make_sampling_scheme(sa, sb, points, a.is_real() && b.is_real());
    scheme->set_direct(std::move(direct));
    return scheme;
}

// ---------------------------------------------------------------------------
// OverSketch

namespace {

class OverSketchSchemeImpl : public CmmScheme {
  public:
    OverSketchSchemeImpl(Matrix asketch, Matrix bsketch, size_t block, size_t redundancy)
        : CmmScheme(0, 0, Exactness::SketchApproximate),
          asketch_(std::move(asketch)),
          bsketch_(std::move(bsketch)),
          block_(block),
          redundancy_(redundancy) {
        grid_rows_ = asketch_.rows() / block_;
        grid_cols_ = bsketch_.cols() / block_;
        depth_ = asketch_.cols() / block_;
        require(depth_ > redundancy_, ErrorKind::InvalidParameter,
                "redundancy must stay below the task depth q/b");
        n_ = grid_rows_ * grid_cols_ * depth_;
        f_ = n_ - redundancy_;
    }

    size_t depth() const { return depth_; }
    size_t block() const { return block_; }
    size_t effective_width() const { return (depth_ - redundancy_) * block_; }

    // server id layout: ((u * grid_cols + v) * depth + t)
    Matrix task_output(size_t server) const override {
        const auto [u, v, t] = split_id(server);
        const Matrix arow = asketch_.block(u * block_, t * block_, block_, block_);
        const Matrix bcol = bsketch_.block(t * block_, v * block_, block_, block_);
        return arow * bcol;
    }

    double task_flops(size_t server) const override {
        (void)server;
        return 2.0 * static_cast<double>(block_) * static_cast<double>(block_) *
               static_cast<double>(block_);
    }

    Matrix decode(const std::vector<ServerOutput>& responses) const override {
        const size_t need = depth_ - redundancy_;
        std::map<size_t, const ServerOutput*> by_id;
        for (const auto& r : responses) {
            require(r.server_id < n_, ErrorKind::InvalidParameter, "server id out of range");
            by_id.emplace(r.server_id, &r);
        }
        Matrix c(grid_rows_ * block_, grid_cols_ * block_, Field::Real);
        for (size_t u = 0; u < grid_rows_; ++u) {
            for (size_t v = 0; v < grid_cols_; ++v) {
                size_t used = 0;
                Matrix acc(block_, block_, Field::Real);
                for (size_t t = 0; t < depth_ && used < need; ++t) {
                    const auto it = by_id.find((u * grid_cols_ + v) * depth_ + t);
                    if (it == by_id.end()) continue;
                    acc += it->second->w;
                    ++used;
                }
                require(used == need, ErrorKind::InsufficientResponses,
                        "output block (" + std::to_string(u) + "," + std::to_string(v) +
                            ") is short of tasks");
                for (size_t rr = 0; rr < block_; ++rr)
                    for (size_t cc = 0; cc < block_; ++cc)
                        c.at(u * block_ + rr, v * block_ + cc) = acc.at(rr, cc);
            }
        }
        return c;
    }

  private:
    std::tuple<size_t, size_t, size_t> split_id(size_t server) const {
        require(server < n_, ErrorKind::InvalidParameter, "server id out of range");
        const size_t t = server % depth_;
        const size_t uv = server / depth_;
        return {uv / grid_cols_, uv % grid_cols_, t};
    }

    Matrix asketch_;  // L x q
    Matrix bsketch_;  // q x M
    size_t block_;
    size_t redundancy_;
    size_t grid_rows_ = 0, grid_cols_ = 0, depth_ = 0;
};

}  // namespace

std::unique_ptr<CmmScheme> oversketch_with_operator(const Matrix& a, const Matrix& b,
                                                    const sketch::SketchOperator& op,
                                                    size_t block, size_t redundancy) {
    require(a.cols() == b.rows(), ErrorKind::InvalidInput, "inner dimensions disagree");
    require(op.ambient == a.cols(), ErrorKind::InvalidInput,
            "sketch must act on the inner dimension");
    require(block >= 1 && op.q % block == 0 && a.rows() % block == 0 && b.cols() % block == 0,
            ErrorKind::InvalidParameter, "b must divide q and the outer dimensions");
    const Matrix asketch = a * op.realization.transpose();  // L x q
    const Matrix bsketch = op.apply(b);                     // q x M
    return std::make_unique<OverSketchSchemeImpl>(asketch, bsketch, block, redundancy);
}

std::unique_ptr<CmmScheme> oversketch(const Matrix& a, const Matrix& b, size_t q, size_t block,
                                      size_t redundancy, uint64_t seed) {
    const auto op = sketch::countsketch_operator(
        a.cols(), q, Rng::from_seed(seed).substream("oversketch-countsketch"));
    return oversketch_with_operator(a, b, op, block, redundancy);
}

size_t oversketch_effective_width(const CmmScheme& scheme) {
    const auto* impl = dynamic_cast<const OverSketchSchemeImpl*>(&scheme);
    require(impl != nullptr, ErrorKind::InvalidInput, "not an OverSketch scheme");
    return impl->effective_width();
}

}  // namespace codedlab::cmm
