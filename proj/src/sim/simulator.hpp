#ifndef CODEDLAB_SIM_SIMULATOR_HPP
#define CODEDLAB_SIM_SIMULATOR_HPP

#include <functional>
#include <optional>
#include <vector>

#include "codedmm/schemes.hpp"
#include "core/matrix.hpp"
#include "gradcode/schemes.hpp"

namespace codedlab::sim {

enum class DelayModel { Deterministic, ShiftedExponential, Empirical };

struct ServerModel {
    size_t n = 0;
    DelayModel delay = DelayModel::ShiftedExponential;
    double shift = 1.0;
    double rate = 1.0;
    std::vector<double> deterministic;  // per-server (or single broadcast) delays
    std::vector<double> empirical;      // pool sampled uniformly per round
    std::vector<double> heterogeneity;  // per-server scale factors, default 1

    void validate() const;
    double scale_of(size_t server) const;
    // Per-unit-cost delay draw for one server in one round.
    double sample_delay(size_t server, double cost_units, Rng& rng) const;
};

enum class StragglerMode { DelayOrder, FixedSet, AdversarialExhaustive };

struct StragglerPolicy {
    StragglerMode mode = StragglerMode::DelayOrder;
    size_t s = 0;
    std::vector<size_t> fixed_set;  // used by FixedSet

    void validate(size_t n) const;
};

struct Arrival {
    size_t server_id;
    double time;
};

struct RoundTrace {
    std::vector<Arrival> arrivals;  // non-straggler arrivals sorted by time
    std::vector<size_t> straggler_set;
    size_t threshold = 0;
    bool recovered = false;
    double decode_time = 0.0;
    Matrix output;
    double abs_error = 0.0;
    double rel_error = 0.0;
};

// One distributed round: n independent tasks, threshold-triggered decode and
// the exact target for error metering.
struct RoundJob {
    size_t n = 0;
    size_t threshold = 0;
    std::vector<double> flops;  // per-task cost units
    std::function<Matrix(size_t)> output;
    std::function<Matrix(const std::vector<size_t>&)> decode;  // first-f arrival ids
    Matrix exact_target;
};

RoundJob gc_round_job(const gc::GcScheme& scheme, const Matrix& a, const Matrix& b,
                      const Matrix& x);
RoundJob weighted_gc_round_job(const gc::WeightedGcResult& wgc, const Matrix& x);
RoundJob cmm_round_job(const cmm::CmmScheme& scheme, const Matrix& exact);

// Samples delays from per-(seed, server) substreams, removes stragglers,
// decodes at the threshold-th arrival; later arrivals are recorded but unused.
RoundTrace run_round(const RoundJob& job, const ServerModel& model,
                     const StragglerPolicy& policy, uint64_t seed);

// Row-partition partial gradients g_j = 2 A_j^T (A_j x - b_j).
std::vector<Matrix> partial_gradients(const Matrix& a, const Matrix& b, size_t k,
                                      const Matrix& x);
Matrix full_gradient(const Matrix& a, const Matrix& b, const Matrix& x);

struct GdConfig {
    double step = 0.0;  // <= 0 requests the default 0.25 / ||A^T A||_2
    size_t iterations = 100;
};

struct GdIterate {
    size_t iteration;
    double loss;
    double gradient_error;  // relative to the exact gradient at the iterate
    double decode_time;
};

struct GdHistory {
    std::vector<GdIterate> iterates;
    Matrix x_final;
    bool completed = false;
    bool step_size_warning = false;
    double step_used = 0.0;
    double final_loss = 0.0;
};

// Distributed gradient descent through a GC scheme.
GdHistory gradient_descent(const Matrix& a, const Matrix& b, const GdConfig& gd,
                           const gc::GcScheme& scheme, const ServerModel& model,
                           const StragglerPolicy& policy, uint64_t seed);

// Centralized reference trajectory with the same step rule.
GdHistory centralized_gradient_descent(const Matrix& a, const Matrix& b, const GdConfig& gd);

// Block replication plan for the decoding-free scheme: each block gets at
// least one server, the remaining servers apportioned by largest remainder of
// the block leverage scores.
struct ReplicationPlan {
    std::vector<size_t> multiplicity;  // per block, sums to n
    std::vector<size_t> server_block;  // block handled by each server
    std::vector<double> block_scale;   // gradient scale c_i = n / (f m_i)
    size_t k = 0;
    size_t n = 0;
    size_t threshold = 0;  // f
};

ReplicationPlan leverage_replication_plan(const Matrix& a, size_t k, size_t n, size_t threshold);

// Aggregate of the given servers' rescaled partial gradients; equals the
// gradient of the sketched objective induced by that arrival set.
Matrix sketched_gradient(const Matrix& a, const Matrix& b, const ReplicationPlan& plan,
                         const std::vector<size_t>& servers, const Matrix& x);

// Decoding-free iterative sketching: per iteration the first f arrivals are
// summed, no decoding vector.
GdHistory iterative_sketching_gc(const Matrix& a, const Matrix& b, size_t k,
                                 const ReplicationPlan& plan, const GdConfig& gd,
                                 const ServerModel& model, uint64_t seed);

// x ~ argmin ||S(Ax - b)||_2 for a fixed sketch; the biased baseline.
Matrix sketch_and_solve(const Matrix& a, const Matrix& b, const sketch::SketchOperator& s);

struct AdversarialResult {
    std::vector<size_t> worst_set;
    double worst_error = 0.0;
    size_t sets_evaluated = 0;
};

// Exact argmax of gc_error over straggler sets; BudgetExceeded past C(n,s) > budget.
AdversarialResult adversarial_straggler_search(const gc::GcScheme& scheme, size_t s,
                                               uint64_t budget = 100000);

}  // namespace codedlab::sim

#endif
