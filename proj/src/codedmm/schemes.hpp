#ifndef CODEDLAB_CODEDMM_SCHEMES_HPP
#define CODEDLAB_CODEDMM_SCHEMES_HPP

#include <memory>
#include <vector>

#include "core/matrix.hpp"
#include "sketch/operators.hpp"
#include "sketch/sampling.hpp"

namespace codedlab::cmm {

enum class Exactness { Exact, UnbiasedApproximate, SketchApproximate };

struct ServerOutput {
    size_t server_id = 0;
    Matrix w;
};

// Encode/compute/decode triple with a declared recovery threshold f: decode
// succeeds from any f of the n server products and fails loudly with fewer.
// Responses may arrive in any order and may contain duplicates (first per
// server id wins); when more than f usable responses are present the decoder
// uses the lowest server ids.
class CmmScheme {
  public:
    virtual ~CmmScheme() = default;

    size_t servers() const { return n_; }
    size_t threshold() const { return f_; }
    Exactness exactness() const { return exactness_; }

    virtual Matrix task_output(size_t server) const = 0;
    virtual double task_flops(size_t server) const = 0;
    virtual Matrix decode(const std::vector<ServerOutput>& responses) const = 0;

    std::vector<ServerOutput> compute_all() const;
    Matrix decode_from(const std::vector<size_t>& server_ids) const;

  protected:
    CmmScheme(size_t n, size_t f, Exactness e) : n_(n), f_(f), exactness_(e) {}

    // Deduplicates by server id, checks the threshold, picks the lowest f ids.
    std::vector<ServerOutput> canonical_responses(const std::vector<ServerOutput>& responses,
                                                  size_t needed) const;

    size_t n_;
    size_t f_;
    Exactness exactness_;
};

// MatDot: inner-split blocks on a product polynomial whose middle coefficient
// is AB; threshold 2k-1.
std::unique_ptr<CmmScheme> matdot(const Matrix& a, const Matrix& b, size_t k,
                                  const EvalPoints& points);

// (a,b)-polynomial code on outer-split blocks; threshold k^2.
std::unique_ptr<CmmScheme> polynomial_code(const Matrix& a, const Matrix& b, size_t k,
                                           size_t a_exp, size_t b_exp, const EvalPoints& points);

// Two-block entangled example; threshold 3.
std::unique_ptr<CmmScheme> entangled_example(const Matrix& a, const Matrix& b,
                                             const EvalPoints& points);

class SamplingCmmScheme : public CmmScheme {
  public:
    // The uncoded-path value the coded pipeline must reproduce per seed.
    const Matrix& direct_estimate() const { return direct_; }

  protected:
    using CmmScheme::CmmScheme;
    Matrix direct_;
};

// r i.i.d. block pairs with importance rescaling 1/sqrt(r P); MatDot decode.
std::unique_ptr<SamplingCmmScheme> coded_independent_sampling(
    const Matrix& a, const Matrix& b, size_t k, size_t r,
    const sketch::SamplingDistribution& dist, const EvalPoints& points, uint64_t seed);

// Uniform r-subset of the k pairs; estimator (k/r) sum of sampled products.
std::unique_ptr<SamplingCmmScheme> coded_setwise_sampling(const Matrix& a, const Matrix& b,
                                                          size_t k, size_t r,
                                                          const EvalPoints& points,
                                                          uint64_t seed);

// Squared-norm block-pair sampling until r distinct; weights fold into the
// encodings as sqrt(w~), importance scaling 1/sqrt(E[T] p) folded into the
// assembled blocks so the decoded estimator is exactly unbiased.
std::unique_ptr<SamplingCmmScheme> weighted_cr_cmm(const Matrix& a, const Matrix& b, size_t k,
                                                   size_t r, const EvalPoints& points,
                                                   uint64_t seed);

// CountSketch the inner dimension to width q, tile into b x b blocks, one
// server per block product; per output block any d - e of its d = q/b tasks
// decode by plain summation.
class OverSketchScheme;
std::unique_ptr<CmmScheme> oversketch(const Matrix& a, const Matrix& b, size_t q, size_t block,
                                      size_t redundancy, uint64_t seed);
std::unique_ptr<CmmScheme> oversketch_with_operator(const Matrix& a, const Matrix& b,
                                                    const sketch::SketchOperator& op,
                                                    size_t block, size_t redundancy);

// Effective sketch width (d - e) * b reported alongside OverSketch decoding.
size_t oversketch_effective_width(const CmmScheme& scheme);

}  // namespace codedlab::cmm

#endif
