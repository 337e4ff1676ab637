#include "sim/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "core/combinatorics.hpp"
#include "core/linalg.hpp"

namespace codedlab::sim {

void ServerModel::validate() const {
    require(n >= 1, ErrorKind::InvalidParameter, "server model needs n >= 1");
    if (!heterogeneity.empty()) {
        require(heterogeneity.size() == n, ErrorKind::InvalidParameter,
                "heterogeneity factors must cover all servers");
        for (double h : heterogeneity)
            require(h > 0.0, ErrorKind::InvalidParameter, "scale factors must be positive");
    }
    switch (delay) {
        case DelayModel::Deterministic:
            require(deterministic.size() == 1 || deterministic.size() == n,
                    ErrorKind::InvalidParameter,
                    "deterministic delays need one value or one per server");
            for (double d : deterministic)
                require(d >= 0.0, ErrorKind::InvalidParameter, "delays must be nonnegative");
            break;
        case DelayModel::ShiftedExponential:
            require(shift >= 0.0, ErrorKind::InvalidParameter, "shift must be nonnegative");
            require(rate > 0.0, ErrorKind::InvalidParameter, "rate must be positive");
            break;
        case DelayModel::Empirical:
            require(!empirical.empty(), ErrorKind::InvalidParameter,
                    "empirical delay pool is empty");
            for (double d : empirical)
                require(d >= 0.0, ErrorKind::InvalidParameter, "delays must be nonnegative");
            break;
    }
}

double ServerModel::scale_of(size_t server) const {
    return heterogeneity.empty() ? 1.0 : heterogeneity[server];
}

double ServerModel::sample_delay(size_t server, double cost_units, Rng& rng) const {
    double base = 0.0;
    switch (delay) {
        case DelayModel::Deterministic:
            base = deterministic.size() == 1 ? deterministic[0] : deterministic[server];
            break;
        case DelayModel::ShiftedExponential:
            base = shift + rng.next_exponential(rate);
            break;
        case DelayModel::Empirical:
            base = empirical[rng.next_index(empirical.size())];
            break;
    }
    return scale_of(server) * cost_units * base;
}

void StragglerPolicy::validate(size_t n) const {
    require(s < n, ErrorKind::InvalidParameter, "straggler count must stay below n");
    if (mode == StragglerMode::FixedSet) {
        require(fixed_set.size() == s, ErrorKind::InvalidParameter,
                "fixed straggler set size must equal s");
        for (size_t i = 0; i < fixed_set.size(); ++i) {
            require(fixed_set[i] < n, ErrorKind::InvalidParameter,
                    "straggler id out of range");
            if (i + 1 < fixed_set.size())
                require(fixed_set[i] < fixed_set[i + 1], ErrorKind::InvalidParameter,
                        "fixed straggler set must be strictly ascending");
        }
    }
}

namespace {

double mean_flops(const std::vector<double>& flops) {
    double total = 0.0;
    for (double f : flops) total += f;
    return flops.empty() ? 1.0 : std::max(total / static_cast<double>(flops.size()), 1e-300);
}

}  // namespace

RoundJob gc_round_job(const gc::GcScheme& scheme, const Matrix& a, const Matrix& b,
                      const Matrix& x) {
    const auto partials = partial_gradients(a, b, scheme.k, x);
    const size_t d = x.rows();
    Matrix exact(d, 1, Field::Real);
    for (const Matrix& g : partials) exact += g;

    RoundJob job;
    job.n = scheme.n;
    job.threshold = scheme.threshold();
    job.exact_target = exact;
    job.flops.resize(scheme.n);
    const double per_partition =
        2.0 * static_cast<double>(a.rows() / scheme.k) * static_cast<double>(d);
    for (size_t i = 0; i < scheme.n; ++i)
        job.flops[i] = per_partition * static_cast<double>(scheme.assignments[i].size());

    // server i returns sum_j G_ij g_j
    auto g = scheme.g;
    job.output = [g, partials, d](size_t server) {
        Matrix out(d, 1, Field::Complex);
        for (size_t j = 0; j < partials.size(); ++j) {
            const Complex c = g.at(server, j);
            if (c != Complex(0.0, 0.0)) out += partials[j] * c;
        }
        return out;
    };
    const gc::GcScheme scheme_copy = scheme;
    job.decode = [scheme_copy, partials, d](const std::vector<size_t>& arrived) {
        std::vector<size_t> responders = arrived;
        std::sort(responders.begin(), responders.end());
        const auto dv = gc::decoding_vector(scheme_copy, responders);
        Matrix out(d, 1, Field::Complex);
        for (size_t i : responders) {
            if (dv.a[i] == Complex(0.0, 0.0)) continue;
            Matrix contribution(d, 1, Field::Complex);
            for (size_t j = 0; j < partials.size(); ++j) {
                const Complex c = scheme_copy.g.at(i, j);
                if (c != Complex(0.0, 0.0)) contribution += partials[j] * c;
            }
            out += contribution * dv.a[i];
        }
        return out.to_real_checked(1e-6);
    };
    return job;
}

RoundJob weighted_gc_round_job(const gc::WeightedGcResult& wgc, const Matrix& x) {
    // Servers hold the rescaled sampled blocks; the decode target is the
    // weighted sketched-objective gradient.
    const size_t r = wgc.weights.size();
    const auto partials = partial_gradients(wgc.compressed_a, wgc.compressed_b, r, x);
    const size_t d = x.rows();
    Matrix exact(d, 1, Field::Real);
    for (size_t j = 0; j < r; ++j)
        exact += partials[j] * static_cast<double>(wgc.weights[j]);

    RoundJob job;
    job.n = wgc.scheme.n;
    job.threshold = wgc.scheme.threshold();
    job.exact_target = exact;
    job.flops.resize(wgc.scheme.n);
    const double per_block = 2.0 * static_cast<double>(wgc.block_rows) * static_cast<double>(d);
    for (size_t i = 0; i < wgc.scheme.n; ++i)
        job.flops[i] = per_block * static_cast<double>(wgc.scheme.assignments[i].size());

    const gc::GcScheme scheme = wgc.scheme;
    job.output = [scheme, partials, d](size_t server) {
        Matrix out(d, 1, Field::Complex);
        for (size_t j = 0; j < partials.size(); ++j) {
            const Complex c = scheme.g.at(server, j);
            if (c != Complex(0.0, 0.0)) out += partials[j] * c;
        }
        return out;
    };
    job.decode = [scheme, partials, d](const std::vector<size_t>& arrived) {
        std::vector<size_t> responders = arrived;
        std::sort(responders.begin(), responders.end());
        const auto dv = gc::decoding_vector(scheme, responders);
        Matrix out(d, 1, Field::Complex);
        for (size_t i : responders) {
            if (dv.a[i] == Complex(0.0, 0.0)) continue;
            Matrix contribution(d, 1, Field::Complex);
            for (size_t j = 0; j < partials.size(); ++j) {
                const Complex c = scheme.g.at(i, j);
                if (c != Complex(0.0, 0.0)) contribution += partials[j] * c;
            }
            out += contribution * dv.a[i];
        }
        return out.to_real_checked(1e-6);
    };
    return job;
}

RoundJob cmm_round_job(const cmm::CmmScheme& scheme, const Matrix& exact) {
    RoundJob job;
    job.n = scheme.servers();
    job.threshold = scheme.threshold();
    job.exact_target = exact;
    job.flops.resize(job.n);
    for (size_t i = 0; i < job.n; ++i) job.flops[i] = scheme.task_flops(i);
    const cmm::CmmScheme* ptr = &scheme;
    job.output = [ptr](size_t server) { return ptr->task_output(server); };
    job.decode = [ptr](const std::vector<size_t>& arrived) {
        return ptr->decode_from(arrived);
    };
    return job;
}

RoundTrace run_round(const RoundJob& job, const ServerModel& model,
                     const StragglerPolicy& policy, uint64_t seed) {
    model.validate();
    require(model.n == job.n, ErrorKind::InvalidParameter,
            "server model does not match the job size");
    policy.validate(job.n);
    require(policy.mode != StragglerMode::AdversarialExhaustive, ErrorKind::InvalidParameter,
            "resolve adversarial policies to a fixed set before running a round");

    const Rng base = Rng::from_seed(seed);
    const double unit = mean_flops(job.flops);
    std::vector<double> delays(job.n);
    for (size_t i = 0; i < job.n; ++i) {
        Rng stream = base.substream("server-delay", i);
        delays[i] = model.sample_delay(i, job.flops[i] / unit, stream);
    }

    std::vector<size_t> order(job.n);
    for (size_t i = 0; i < job.n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
        return delays[x] != delays[y] ? delays[x] < delays[y] : x < y;
    });

    RoundTrace trace;
    trace.threshold = job.threshold;
    std::vector<bool> straggler(job.n, false);
    if (policy.mode == StragglerMode::FixedSet) {
        trace.straggler_set = policy.fixed_set;
    } else {
        // slowest s by sampled delay
        for (size_t t = 0; t < policy.s; ++t) trace.straggler_set.push_back(order[job.n - 1 - t]);
        std::sort(trace.straggler_set.begin(), trace.straggler_set.end());
    }
    for (size_t i : trace.straggler_set) straggler[i] = true;

    for (size_t i : order)
        if (!straggler[i]) trace.arrivals.push_back({i, delays[i]});

    if (trace.arrivals.size() < job.threshold) {
        trace.recovered = false;
        return trace;
    }
    std::vector<size_t> first_f;
    first_f.reserve(job.threshold);
    for (size_t t = 0; t < job.threshold; ++t) first_f.push_back(trace.arrivals[t].server_id);
    trace.decode_time = trace.arrivals[job.threshold - 1].time;
    trace.output = job.decode(first_f);
    trace.recovered = true;
    const double target_norm = job.exact_target.frobenius_norm();
    trace.abs_error = (trace.output - job.exact_target).frobenius_norm();
    trace.rel_error = trace.abs_error / std::max(target_norm, 1e-300);
    return trace;
}

std::vector<Matrix> partial_gradients(const Matrix& a, const Matrix& b, size_t k,
                                      const Matrix& x) {
    require(b.rows() == a.rows() && b.cols() == 1, ErrorKind::InvalidInput,
            "labels must be a column matching A");
    require(x.rows() == a.cols() && x.cols() == 1, ErrorKind::InvalidInput,
            "parameter vector shape mismatch");
    require(k >= 1 && a.rows() % k == 0, ErrorKind::InvalidParameter,
            "partition count must divide the sample count");
    const size_t h = a.rows() / k;
    std::vector<Matrix> out;
    out.reserve(k);
    for (size_t j = 0; j < k; ++j) {
        const Matrix aj = a.block(j * h, 0, h, a.cols());
        const Matrix bj = b.block(j * h, 0, h, 1);
        out.push_back(aj.transpose() * (aj * x - bj) * 2.0);
    }
    return out;
}

Matrix full_gradient(const Matrix& a, const Matrix& b, const Matrix& x) {
    return a.transpose() * (a * x - b) * 2.0;
}

namespace {

double default_step(const Matrix& a) { return 0.25 / spectral_norm(a.transpose() * a); }

double loss_of(const Matrix& a, const Matrix& b, const Matrix& x) {
    const Matrix r = a * x - b;
    const double n = r.frobenius_norm();
    return n * n;
}

}  // namespace

GdHistory gradient_descent(const Matrix& a, const Matrix& b, const GdConfig& gd,
                           const gc::GcScheme& scheme, const ServerModel& model,
                           const StragglerPolicy& policy, uint64_t seed) {
    require(gd.iterations >= 1, ErrorKind::InvalidParameter, "need at least one iteration");
    GdHistory history;
    const double ata_norm = spectral_norm(a.transpose() * a);
    history.step_used = gd.step > 0.0 ? gd.step : default_step(a);
    history.step_size_warning = history.step_used >= 2.0 / ata_norm;

    StragglerPolicy resolved = policy;
    if (policy.mode == StragglerMode::AdversarialExhaustive) {
        const auto adv = adversarial_straggler_search(scheme, policy.s);
        resolved.mode = StragglerMode::FixedSet;
        resolved.fixed_set = adv.worst_set;
    }

    const Rng base = Rng::from_seed(seed);
    Matrix x(a.cols(), 1, Field::Real);
    for (size_t t = 0; t < gd.iterations; ++t) {
        const RoundJob job = gc_round_job(scheme, a, b, x);
        Rng round_rng = base.substream("gd-round", t);
        const RoundTrace trace = run_round(job, model, resolved, round_rng.next_u64());
        if (!trace.recovered) {
            history.completed = false;
            history.x_final = x;
            history.final_loss = loss_of(a, b, x);
            return history;
        }
        const Matrix exact_g = full_gradient(a, b, x);
        const double gerr = (trace.output - exact_g).frobenius_norm() /
                            std::max(exact_g.frobenius_norm(), 1e-300);
        x -= trace.output * history.step_used;
        history.iterates.push_back({t, loss_of(a, b, x), gerr, trace.decode_time});
    }
    history.completed = true;
    history.x_final = x;
    history.final_loss = history.iterates.back().loss;
    return history;
}

GdHistory centralized_gradient_descent(const Matrix& a, const Matrix& b, const GdConfig& gd) {
    require(gd.iterations >= 1, ErrorKind::InvalidParameter, "need at least one iteration");
    GdHistory history;
    const double ata_norm = spectral_norm(a.transpose() * a);
    history.step_used = gd.step > 0.0 ? gd.step : default_step(a);
    history.step_size_warning = history.step_used >= 2.0 / ata_norm;
    Matrix x(a.cols(), 1, Field::Real);
    for (size_t t = 0; t < gd.iterations; ++t) {
        x -= full_gradient(a, b, x) * history.step_used;
        history.iterates.push_back({t, loss_of(a, b, x), 0.0, 0.0});
    }
    history.completed = true;
    history.x_final = x;
    history.final_loss = history.iterates.back().loss;
    return history;
}

ReplicationPlan leverage_replication_plan(const Matrix& a, size_t k, size_t n,
                                          size_t threshold) {
    require(n >= k, ErrorKind::InvalidParameter,
            "every block needs at least one server");
    require(threshold >= 1 && threshold <= n, ErrorKind::InvalidParameter,
            "threshold must lie in [1, n]");
    const auto scores = sketch::block_leverage_distribution(a, k);

    ReplicationPlan plan;
    plan.k = k;
    plan.n = n;
    plan.threshold = threshold;
    plan.multiplicity.assign(k, 1);
    // Largest-remainder apportionment of the n - k extra servers.
    const size_t extra = n - k;
    std::vector<double> quota(k);
    size_t assigned = 0;
    for (size_t i = 0; i < k; ++i) {
        quota[i] = static_cast<double>(extra) * scores.probs[i];
        plan.multiplicity[i] += static_cast<size_t>(std::floor(quota[i]));
        assigned += static_cast<size_t>(std::floor(quota[i]));
    }
    std::vector<size_t> by_remainder(k);
    for (size_t i = 0; i < k; ++i) by_remainder[i] = i;
    std::sort(by_remainder.begin(), by_remainder.end(), [&](size_t x, size_t y) {
        const double rx = quota[x] - std::floor(quota[x]);
        const double ry = quota[y] - std::floor(quota[y]);
        return rx != ry ? rx > ry : x < y;
    });
    for (size_t t = 0; t < extra - assigned; ++t) ++plan.multiplicity[by_remainder[t]];

    plan.block_scale.resize(k);
    for (size_t i = 0; i < k; ++i) {
        // c_i = 1 / (f * m_i / n): unbiased under uniform arrival order
        plan.block_scale[i] = static_cast<double>(n) /
                              (static_cast<double>(threshold) *
                               static_cast<double>(plan.multiplicity[i]));
    }
    plan.server_block.reserve(n);
    for (size_t i = 0; i < k; ++i)
        for (size_t c = 0; c < plan.multiplicity[i]; ++c) plan.server_block.push_back(i);
    return plan;
}

Matrix sketched_gradient(const Matrix& a, const Matrix& b, const ReplicationPlan& plan,
                         const std::vector<size_t>& servers, const Matrix& x) {
    const auto partials = partial_gradients(a, b, plan.k, x);
    Matrix out(x.rows(), 1, Field::Real);
    for (size_t s : servers) {
        require(s < plan.n, ErrorKind::InvalidParameter, "server id out of range");
        const size_t block = plan.server_block[s];
        out += partials[block] * plan.block_scale[block];
    }
    return out;
}

GdHistory iterative_sketching_gc(const Matrix& a, const Matrix& b, size_t k,
                                 const ReplicationPlan& plan, const GdConfig& gd,
                                 const ServerModel& model, uint64_t seed) {
    require(plan.k == k && plan.n == model.n, ErrorKind::InvalidParameter,
            "plan does not match the model");
    require(gd.iterations >= 1, ErrorKind::InvalidParameter, "need at least one iteration");
    model.validate();

    GdHistory history;
    const double ata_norm = spectral_norm(a.transpose() * a);
    history.step_used = gd.step > 0.0 ? gd.step : default_step(a);
    history.step_size_warning = history.step_used >= 2.0 / ata_norm;

    const Rng base = Rng::from_seed(seed);
    Matrix x(a.cols(), 1, Field::Real);
    for (size_t t = 0; t < gd.iterations; ++t) {
        Rng round = base.substream("sketch-round", t);
        std::vector<double> delays(plan.n);
        for (size_t i = 0; i < plan.n; ++i) {
            // one equal-sized block per server: unit task cost
            Rng stream = round.substream("server-delay", i);
            delays[i] = model.sample_delay(i, 1.0, stream);
        }
        std::vector<size_t> order(plan.n);
        for (size_t i = 0; i < plan.n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t xa, size_t xb) {
            return delays[xa] != delays[xb] ? delays[xa] < delays[xb] : xa < xb;
        });
        std::vector<size_t> arrived(order.begin(),
                                    order.begin() + static_cast<std::ptrdiff_t>(plan.threshold));
        const Matrix ghat = sketched_gradient(a, b, plan, arrived, x);
        const Matrix exact_g = full_gradient(a, b, x);
        const double gerr = (ghat - exact_g).frobenius_norm() /
                            std::max(exact_g.frobenius_norm(), 1e-300);
        x -= ghat * history.step_used;
        history.iterates.push_back(
            {t, loss_of(a, b, x), gerr, delays[order[plan.threshold - 1]]});
    }
    history.completed = true;
    history.x_final = x;
    history.final_loss = history.iterates.back().loss;
    return history;
}

Matrix sketch_and_solve(const Matrix& a, const Matrix& b, const sketch::SketchOperator& s) {
    const Matrix sa = s.apply(a);
    const Matrix sb = s.apply(b);
    return solve_least_squares(sa, sb).to_real_checked(1e-8);
}

AdversarialResult adversarial_straggler_search(const gc::GcScheme& scheme, size_t s,
                                               uint64_t budget) {
    require(binomial(scheme.n, s) <= budget, ErrorKind::BudgetExceeded,
            "straggler enumeration exceeds the exhaustive budget; reduce n or s");
    const auto res = gc::gc_max_error(scheme, s, budget);
    return AdversarialResult{res.worst_stragglers, res.value, res.sets_evaluated};
}

}  // namespace codedlab::sim
