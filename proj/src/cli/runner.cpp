#include "cli/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "codedmm/schemes.hpp"
#include "core/combinatorics.hpp"
#include "core/linalg.hpp"
#include "core/parallel.hpp"
#include "gradcode/graphs.hpp"
#include "gradcode/schemes.hpp"
#include "sim/simulator.hpp"
#include "sketch/operators.hpp"

namespace codedlab::cli {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join_ids(const std::vector<size_t>& ids) {
    std::string out;
    for (size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) out += "+";
        out += std::to_string(ids[i]);
    }
    return out.empty() ? "-" : out;
}

}  // namespace

// ----- gc ------------------------------------------------------------------

gc::GcScheme build_gc_scheme(const ExperimentConfig& cfg, uint64_t seed, size_t s_value) {
    const std::string scheme = cfg.get("scheme");
    if (scheme == "frc") return gc::frc_scheme(cfg.get_u64("n"), s_value);
    if (scheme == "brs") {
        const size_t n = cfg.get_u64("n");
        return gc::brs_scheme(n, cfg.get_u64("k"), s_value, roots_of_unity(n));
    }
    if (scheme == "expander") {
        const std::string graph = cfg.get("graph");
        Matrix adj;
        size_t degree = cfg.get_u64("degree");
        if (graph == "petersen") {
            adj = gc::petersen_graph();
            degree = 3;
        } else if (graph == "complete") {
            adj = gc::complete_graph(cfg.get_u64("n"));
            degree = cfg.get_u64("n") - 1;
        } else if (graph == "cycle") {
            adj = gc::cycle_graph(cfg.get_u64("n"));
            degree = 2;
        } else {
            adj = gc::random_regular_graph(cfg.get_u64("n"), degree, seed);
        }
        return gc::expander_scheme(adj, degree, s_value);
    }
    if (scheme == "bernoulli")
        return gc::bernoulli_scheme(cfg.get_u64("n"), cfg.get_u64("k"), s_value, seed);
    if (scheme == "bibd") {
        const Matrix inc = cfg.get("design") == "fano" ? gc::fano_plane()
                                                       : gc::complete_pair_design(cfg.get_u64("v"));
        return gc::bibd_scheme(inc, 1, s_value);
    }
    fail(ErrorKind::ConfigError, "unsupported gc scheme '" + scheme + "'");
}

namespace {

void run_gc(const ExperimentConfig& cfg, RunResult& result) {
    const uint64_t seed = cfg.get_u64("seed");
    const std::string scheme_name = cfg.get("scheme");
    const std::string experiment = "gc-" + scheme_name;
    std::vector<size_t> s_values{cfg.has("s") ? cfg.get_u64("s") : 0};

    for (size_t s : s_values) {
        gc::GcScheme scheme;
        gc::WeightedGcResult weighted;
        std::string weighted_axes;
        if (scheme_name == "weighted") {
            Rng data_rng = Rng::from_seed(seed).substream("gc-data");
            const Matrix a =
                Matrix::random_gaussian(cfg.get_u64("N"), cfg.get_u64("d"), data_rng);
            const Matrix b = Matrix::random_gaussian(cfg.get_u64("N"), 1, data_rng);
            const size_t n = cfg.get_u64("n");
            weighted = gc::weighted_gc(a, b, cfg.get_u64("k"), cfg.get_u64("r"), s,
                                       roots_of_unity(n), seed);
            scheme = weighted.scheme;
        } else {
            scheme = build_gc_scheme(cfg, seed, s);
        }

        const std::string mode = cfg.get("enumerate");
        const uint64_t total = binomial(scheme.n, s);
        const bool exhaustive =
            mode == "exhaustive" || (mode == "auto" && total <= 100000);
        if (exhaustive) {
            for_each_combination(scheme.n, s, [&](const std::vector<size_t>& stragglers) {
                gc::GcScheme probe = scheme;
                probe.s = s;
                const auto responders = complement_set(scheme.n, stragglers);
                const double err = gc_error(probe, responders);
                result.rows.push_back({experiment,
                                       "s=" + std::to_string(s) + ";set=" + join_ids(stragglers),
                                       "gc_error", err, seed, 0.0});
            });
        } else {
            Rng rng = Rng::from_seed(seed).substream("gc-sampled-sets");
            const size_t samples = cfg.get_u64("samples");
            for (size_t t = 0; t < samples; ++t) {
                const auto stragglers = rng.next_subset(scheme.n, s);
                gc::GcScheme probe = scheme;
                probe.s = s;
                const auto responders = complement_set(scheme.n, stragglers);
                const double err = gc_error(probe, responders);
                result.rows.push_back({experiment,
                                       "s=" + std::to_string(s) + ";set=" + join_ids(stragglers) +
                                           ";sampled=1",
                                       "gc_error", err, seed, 0.0});
            }
        }
        if (cfg.get("summary") == "max") {
            const auto max = gc::gc_max_error(scheme, s);
            result.rows.push_back({experiment,
                                   "s=" + std::to_string(s) +
                                       ";exhaustive=" + (max.exhaustive ? "1" : "0"),
                                   "gc_max_error", max.value, seed, 0.0});
        }
    }
}

}  // namespace

// ----- cmm -----------------------------------------------------------------

std::unique_ptr<cmm::CmmScheme> build_cmm_scheme(const ExperimentConfig& cfg, const Matrix& a,
                                                 const Matrix& b, uint64_t seed) {
    const std::string scheme = cfg.get("scheme");
    const size_t k = cfg.get_u64("k");
    const size_t n = cfg.get_u64("n");
    const EvalPoints points = roots_of_unity(n);
    if (scheme == "matdot") return cmm::matdot(a, b, k, points);
    if (scheme == "polynomial")
        return cmm::polynomial_code(a, b, k, cfg.get_u64("a"), cfg.get_u64("b"), points);
    if (scheme == "entangled") return cmm::entangled_example(a, b, points);
    if (scheme == "independent") {
        const auto dist =
            sketch::block_cr_distribution(a, b, k, sketch::BlockCrPower::Plain);
        return cmm::coded_independent_sampling(a, b, k, cfg.get_u64("r"), dist, points, seed);
    }
    if (scheme == "setwise")
        return cmm::coded_setwise_sampling(a, b, k, cfg.get_u64("r"), points, seed);
    if (scheme == "weighted-cr")
        return cmm::weighted_cr_cmm(a, b, k, cfg.get_u64("r"), points, seed);
    if (scheme == "oversketch")
        return cmm::oversketch(a, b, cfg.get_u64("q"), cfg.get_u64("block"), cfg.get_u64("e"),
                               seed);
    fail(ErrorKind::ConfigError, "unsupported cmm scheme '" + scheme + "'");
}

namespace {

void run_cmm(const ExperimentConfig& cfg, RunResult& result) {
    const uint64_t seed = cfg.get_u64("seed");
    const std::string scheme_name = cfg.get("scheme");
    const std::string experiment = "cmm-" + scheme_name;
    Rng data_rng = Rng::from_seed(seed).substream("cmm-data");
    const Matrix a = Matrix::random_gaussian(cfg.get_u64("L"), cfg.get_u64("N"), data_rng);
    const Matrix b = Matrix::random_gaussian(cfg.get_u64("N"), cfg.get_u64("M"), data_rng);
    const Matrix ab = a * b;
    const double ab_norm = std::max(ab.frobenius_norm(), 1e-300);

    if (cfg.get("sweep") == "subsets") {
        const auto scheme = build_cmm_scheme(cfg, a, b, seed);
        const size_t n = scheme->servers();
        const size_t f = scheme->threshold();
        require(binomial(n, f) <= 100000, ErrorKind::BudgetExceeded,
                "response-subset enumeration too large");
        for_each_combination(n, f, [&](const std::vector<size_t>& subset) {
            const Matrix decoded = scheme->decode_from(subset);
            result.rows.push_back({experiment, "subset=" + join_ids(subset),
                                   "decode_rel_error",
                                   (decoded - ab).frobenius_norm() / ab_norm, seed, 0.0});
        });
    } else {
        const size_t trials = cfg.get_u64("trials");
        std::vector<double> rel(trials), mismatch(trials, 0.0);
        std::vector<uint8_t> has_mismatch(trials, 0);
        parallel_for(trials, [&](size_t t) {
            Rng trial_rng = Rng::from_seed(seed).substream("cmm-trial", t);
            const auto scheme = build_cmm_scheme(cfg, a, b, trial_rng.next_u64());
            std::vector<size_t> ids(scheme->servers());
            for (size_t i = 0; i < ids.size(); ++i) ids[i] = i;
            const Matrix decoded = scheme->decode_from(ids);
            rel[t] = (decoded - ab).frobenius_norm() / ab_norm;
            if (const auto* sampling = dynamic_cast<const cmm::SamplingCmmScheme*>(scheme.get())) {
                mismatch[t] = (decoded - sampling->direct_estimate()).frobenius_norm() /
                              std::max(sampling->direct_estimate().frobenius_norm(), 1e-300);
                has_mismatch[t] = 1;
            }
        });
        for (size_t t = 0; t < trials; ++t) {
            result.rows.push_back(
                {experiment, "trial=" + std::to_string(t), "rel_error", rel[t], seed, 0.0});
            if (has_mismatch[t])
                result.rows.push_back({experiment, "trial=" + std::to_string(t),
                                       "coded_vs_direct", mismatch[t], seed, 0.0});
        }
    }
}

// ----- sketch ---------------------------------------------------------------

void run_sketch(const ExperimentConfig& cfg, RunResult& result) {
    const uint64_t seed = cfg.get_u64("seed");
    const std::string variant = cfg.get("variant");
    const std::string meter = cfg.get("meter");
    const std::string experiment = "sketch-" + variant;
    const size_t trials = cfg.get_u64("trials");
    std::vector<uint64_t> grid =
        cfg.has("q_grid") ? cfg.get_u64_list("q_grid") : std::vector<uint64_t>{cfg.get_u64("q")};

    Rng data_rng = Rng::from_seed(seed).substream("sketch-data");
    Matrix a, b;
    if (meter == "amm") {
        a = Matrix::random_gaussian(cfg.get_u64("L"), cfg.get_u64("N"), data_rng);
        b = Matrix::random_gaussian(cfg.get_u64("N"), cfg.get_u64("M"), data_rng);
    } else {
        a = Matrix::random_gaussian(cfg.get_u64("N"), cfg.get_u64("d"), data_rng);
    }
    const size_t ambient = meter == "amm" ? a.cols() : a.rows();
    const sketch::NormKind norm = cfg.get("norm") == "frobenius"
                                      ? sketch::NormKind::Frobenius
                                      : sketch::NormKind::Spectral;

    for (uint64_t q : grid) {
        std::vector<double> errs(trials);
        parallel_for(trials, [&](size_t t) {
            const Rng trial_rng = Rng::from_seed(seed).substream("sketch-trial", q * 1000003 + t);
            sketch::SketchOperator op;
            if (variant == "gaussian") {
                op = sketch::gaussian_sketch(q, ambient, trial_rng);
            } else if (variant == "srht") {
                op = sketch::srht(q, ambient, trial_rng);
            } else if (variant == "countsketch") {
                op = sketch::countsketch_operator(ambient, q, trial_rng);
            } else if (variant == "cr-sample") {
                require(meter == "amm", ErrorKind::ConfigError,
                        "cr-sample requires the amm meter");
                op = sketch::row_sampling_sketch(sketch::cr_distribution(a, b), q, trial_rng);
            } else {  // leverage-sample
                const Matrix& tall = meter == "amm" ? b : a;
                op = sketch::row_sampling_sketch(sketch::leverage_distribution(tall), q,
                                                 trial_rng);
            }
            errs[t] = meter == "amm" ? sketch::amm_error(a, b, op, norm)
                                     : sketch::se_error(op, a);
        });
        std::sort(errs.begin(), errs.end());
        const double median = trials % 2 == 1
                                  ? errs[trials / 2]
                                  : 0.5 * (errs[trials / 2 - 1] + errs[trials / 2]);
        result.rows.push_back({experiment, "q=" + std::to_string(q),
                               meter == "amm" ? "amm_error_median" : "se_error_median", median,
                               seed, 0.0});
    }
}

// ----- descend ---------------------------------------------------------------

sim::ServerModel build_server_model(const ExperimentConfig& cfg, size_t n) {
    sim::ServerModel model;
    model.n = n;
    const std::string delay = cfg.get("delay");
    if (delay == "shifted-exp") {
        model.delay = sim::DelayModel::ShiftedExponential;
        model.shift = cfg.get_double("shift");
        model.rate = cfg.get_double("rate");
    } else if (delay == "deterministic") {
        model.delay = sim::DelayModel::Deterministic;
        model.deterministic = cfg.get_double_list("delays");
    } else {
        model.delay = sim::DelayModel::Empirical;
        model.empirical = cfg.get_double_list("delays");
    }
    return model;
}

void run_descend(const ExperimentConfig& cfg, RunResult& result) {
    const uint64_t seed = cfg.get_u64("seed");
    const std::string scheme_name = cfg.get("scheme");
    const std::string experiment = "descend-" + scheme_name;
    Rng data_rng = Rng::from_seed(seed).substream("descend-data");
    const Matrix a = Matrix::random_gaussian(cfg.get_u64("N"), cfg.get_u64("d"), data_rng);
    const Matrix b = Matrix::random_gaussian(cfg.get_u64("N"), 1, data_rng);

    sim::GdConfig gd;
    gd.step = cfg.get_double("step");
    gd.iterations = cfg.get_u64("iterations");

    sim::GdHistory history;
    if (scheme_name == "iterative-sketching") {
        const size_t n = cfg.get_u64("n");
        const size_t s = cfg.get_u64("s");
        const auto plan =
            sim::leverage_replication_plan(a, cfg.get_u64("k"), n, n - s);
        history = sim::iterative_sketching_gc(a, b, cfg.get_u64("k"), plan, gd,
                                              build_server_model(cfg, n), seed);
    } else {
        const gc::GcScheme scheme = build_gc_scheme(cfg, seed, cfg.get_u64("s"));
        sim::StragglerPolicy policy;
        const std::string pol = cfg.get("policy");
        policy.s = cfg.get_u64("s");
        if (pol == "fixed-set") {
            policy.mode = sim::StragglerMode::FixedSet;
            for (uint64_t v : cfg.get_u64_list("set")) policy.fixed_set.push_back(v);
        } else if (pol == "adversarial") {
            policy.mode = sim::StragglerMode::AdversarialExhaustive;
        } else {
            policy.mode = sim::StragglerMode::DelayOrder;
        }
        history =
            gradient_descent(a, b, gd, scheme, build_server_model(cfg, scheme.n), policy, seed);
    }

    for (const auto& it : history.iterates) {
        const std::string axes = "iter=" + std::to_string(it.iteration);
        result.rows.push_back({experiment, axes, "loss", it.loss, seed, it.decode_time});
        result.rows.push_back(
            {experiment, axes, "grad_error", it.gradient_error, seed, it.decode_time});
    }
    if (!history.completed) {
        result.rows.push_back({experiment,
                               "iter=" + std::to_string(history.iterates.size()),
                               "unrecoverable", 1.0, seed, 0.0});
        result.any_unrecoverable = true;
    }
    if (history.step_size_warning)
        result.rows.push_back({experiment, "-", "step_size_warning", 1.0, seed, 0.0});
}

// ----- report ----------------------------------------------------------------

void run_report(const ExperimentConfig& cfg, RunResult& result) {
    const uint64_t seed = cfg.get_u64("seed");
    Rng data_rng = Rng::from_seed(seed).substream("report-data");
    const Matrix a = Matrix::random_gaussian(cfg.get_u64("L"), cfg.get_u64("N"), data_rng);
    const Matrix b = Matrix::random_gaussian(cfg.get_u64("N"), cfg.get_u64("M"), data_rng);
    std::vector<size_t> grid;
    for (uint64_t q : cfg.get_u64_list("q_grid")) grid.push_back(q);
    const auto report = sketch::theorem1_validate(a, b, cfg.get_double("epsilon"),
                                                  cfg.get_double("delta"), grid,
                                                  cfg.get_u64("trials"), seed);
    for (const auto& pt : report.points)
        result.rows.push_back({"report-theorem1", "q=" + std::to_string(pt.q), "frequency",
                               pt.frequency, seed, 0.0});
    result.rows.push_back({"report-theorem1", "-", "nondecreasing",
                           report.nondecreasing_within_noise ? 1.0 : 0.0, seed, 0.0});
    result.rows.push_back({"report-theorem1", "-", "meets_delta",
                           report.crossing_q.has_value() ? 1.0 : 0.0, seed, 0.0});
    if (report.crossing_q.has_value())
        result.rows.push_back({"report-theorem1", "-", "crossing_q",
                               static_cast<double>(*report.crossing_q), seed, 0.0});
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
    RunResult result;
    switch (config.command) {
        case Command::Gc: run_gc(config, result); break;
        case Command::Cmm: run_cmm(config, result); break;
        case Command::Sketch: run_sketch(config, result); break;
        case Command::Descend: run_descend(config, result); break;
        case Command::Report: run_report(config, result); break;
    }
    for (const auto& row : result.rows)
        require(std::isfinite(row.value), ErrorKind::InvalidInput,
                "result rows must hold finite values");
    return result;
}

void write_csv(const RunResult& result, const ExperimentConfig& config, std::ostream& out) {
    out << "# codedlab results\n";
    out << "# command=" << to_string(config.command) << "\n";
    for (const auto& [key, value] : config.values) out << "# " << key << "=" << value << "\n";
    out << "experiment,axes,metric,value,seed,timestamp\n";
    for (const auto& row : result.rows) {
        out << csv_quote(row.experiment) << "," << csv_quote(row.axes) << ","
            << csv_quote(row.metric) << "," << fmt_double(row.value) << "," << row.seed << ","
            << fmt_double(row.timestamp) << "\n";
    }
}

void write_jsonl(const RunResult& result, const ExperimentConfig& config, std::ostream& out) {
    nlohmann::json header;
    header["command"] = to_string(config.command);
    for (const auto& [key, value] : config.values) header["config"][key] = value;
    out << header.dump() << "\n";
    for (const auto& row : result.rows) {
        nlohmann::json j;
        j["experiment"] = row.experiment;
        j["axes"] = row.axes;
        j["metric"] = row.metric;
        j["value"] = row.value;
        j["seed"] = row.seed;
        j["timestamp"] = row.timestamp;
        out << j.dump() << "\n";
    }
}

std::string write_output(const RunResult& result, const ExperimentConfig& config,
                         const std::string& path_override, const std::string& format_override) {
    const std::string path = !path_override.empty()
                                 ? path_override
                                 : (config.has("out") ? config.get("out") : std::string());
    const std::string format = !format_override.empty()
                                   ? format_override
                                   : (config.has("format") ? config.get("format") : "csv");
    require(format == "csv" || format == "jsonl", ErrorKind::ConfigError,
            "format must be csv or jsonl");

    const auto emit = [&](std::ostream& os) {
        if (format == "csv") write_csv(result, config, os);
        else write_jsonl(result, config, os);
    };
    if (path.empty()) {
        emit(std::cout);
        return "-";
    }
    std::ofstream file(path, std::ios::binary);
    require(file.good(), ErrorKind::IoError, "cannot open '" + path + "' for writing");
    emit(file);
    file.flush();
    require(file.good(), ErrorKind::IoError, "write failed for '" + path + "'");
    return path;
}

}  // namespace codedlab::cli
