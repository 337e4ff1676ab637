#include "codedlab/codedlab.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "cli/config.hpp"
#include "cli/runner.hpp"
#include "codedmm/schemes.hpp"
#include "core/matrix.hpp"
#include "gradcode/schemes.hpp"
#include "sketch/operators.hpp"

using codedlab::Complex;
using codedlab::Error;
using codedlab::ErrorKind;
using codedlab::Matrix;

struct codedlab_matrix {
    Matrix m;
};

struct codedlab_config {
    codedlab::cli::ExperimentConfig cfg;
};

struct codedlab_gc_scheme {
    codedlab::gc::GcScheme scheme;
};

struct codedlab_cmm_scheme {
    std::unique_ptr<codedlab::cmm::CmmScheme> scheme;
};

namespace {

thread_local std::string g_last_error = "";

codedlab_status status_of(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::ConfigError: return CODEDLAB_ERR_CONFIG;
        case ErrorKind::IoError: return CODEDLAB_ERR_IO;
        case ErrorKind::InsufficientResponses: return CODEDLAB_ERR_UNRECOVERABLE;
        default: return CODEDLAB_ERR_INVALID;
    }
}

template <typename Fn>
codedlab_status guarded(Fn&& fn) {
    try {
        fn();
        return CODEDLAB_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CODEDLAB_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return CODEDLAB_ERR_INTERNAL;
    }
}

codedlab_status invalid(const char* message) {
    g_last_error = message;
    return CODEDLAB_ERR_INVALID;
}

// "key=value key=value" -> full config document under the given command.
codedlab::cli::ExperimentConfig config_from_spec(const char* spec, const char* command,
                                                 const std::string& extra) {
    std::string text = std::string("[") + command + "]\n";
    std::istringstream in(spec == nullptr ? "" : spec);
    std::string token;
    while (in >> token) text += token + "\n";
    text += extra;
    return codedlab::cli::parse_config_or_throw(text);
}

}  // namespace

extern "C" {

const char* codedlab_version(void) { return "0.1.0"; }

const char* codedlab_last_error(void) { return g_last_error.c_str(); }

codedlab_status codedlab_matrix_create(size_t rows, size_t cols, const double* data,
                                       codedlab_matrix** out) {
    if (out == nullptr || data == nullptr) return invalid("null argument");
    return guarded([&] {
        Matrix m(rows, cols, codedlab::Field::Real);
        for (size_t i = 0; i < rows * cols; ++i) m.mutable_data()[i] = data[i];
        m.validate_finite();
        *out = new codedlab_matrix{std::move(m)};
    });
}

codedlab_status codedlab_matrix_create_complex(size_t rows, size_t cols, const double* real,
                                               const double* imag, codedlab_matrix** out) {
    if (out == nullptr || real == nullptr || imag == nullptr) return invalid("null argument");
    return guarded([&] {
        Matrix m(rows, cols, codedlab::Field::Complex);
        for (size_t i = 0; i < rows * cols; ++i)
            m.mutable_data()[i] = Complex(real[i], imag[i]);
        m.validate_finite();
        *out = new codedlab_matrix{std::move(m)};
    });
}

codedlab_status codedlab_matrix_random_gaussian(size_t rows, size_t cols, uint64_t seed,
                                                codedlab_matrix** out) {
    if (out == nullptr) return invalid("null argument");
    return guarded([&] {
        codedlab::Rng rng = codedlab::Rng::from_seed(seed).substream("capi-random-matrix");
        *out = new codedlab_matrix{Matrix::random_gaussian(rows, cols, rng)};
    });
}

void codedlab_matrix_free(codedlab_matrix* m) { delete m; }

codedlab_status codedlab_matrix_shape(const codedlab_matrix* m, size_t* rows, size_t* cols) {
    if (m == nullptr || rows == nullptr || cols == nullptr) return invalid("null argument");
    *rows = m->m.rows();
    *cols = m->m.cols();
    return CODEDLAB_OK;
}

codedlab_status codedlab_matrix_get(const codedlab_matrix* m, size_t row, size_t col,
                                    double* real, double* imag) {
    if (m == nullptr || real == nullptr) return invalid("null argument");
    if (row >= m->m.rows() || col >= m->m.cols()) return invalid("index out of range");
    const Complex v = m->m.at(row, col);
    *real = v.real();
    if (imag != nullptr) *imag = v.imag();
    return CODEDLAB_OK;
}

codedlab_status codedlab_matrix_copy_real(const codedlab_matrix* m, double* out) {
    if (m == nullptr || out == nullptr) return invalid("null argument");
    for (size_t i = 0; i < m->m.size(); ++i) out[i] = m->m.data()[i].real();
    return CODEDLAB_OK;
}

codedlab_status codedlab_matrix_multiply(const codedlab_matrix* a, const codedlab_matrix* b,
                                         codedlab_matrix** out) {
    if (a == nullptr || b == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] { *out = new codedlab_matrix{a->m * b->m}; });
}

codedlab_status codedlab_matrix_frobenius(const codedlab_matrix* m, double* out) {
    if (m == nullptr || out == nullptr) return invalid("null argument");
    *out = m->m.frobenius_norm();
    return CODEDLAB_OK;
}

codedlab_status codedlab_approximate_product(const codedlab_matrix* a, const codedlab_matrix* b,
                                             size_t q, uint64_t seed, codedlab_matrix** out) {
    if (a == nullptr || b == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] {
        *out = new codedlab_matrix{
            codedlab::sketch::basic_matrix_multiplication(a->m, b->m, q, seed)};
    });
}

codedlab_status codedlab_gc_create(const char* spec, codedlab_gc_scheme** out) {
    if (out == nullptr) return invalid("null argument");
    return guarded([&] {
        const auto cfg = config_from_spec(spec, "gc", "");
        codedlab::require(cfg.get("scheme") != "weighted", ErrorKind::ConfigError,
                          "weighted schemes carry data; build them through the C++ core");
        *out = new codedlab_gc_scheme{codedlab::cli::build_gc_scheme(
            cfg, cfg.get_u64("seed"), cfg.has("s") ? cfg.get_u64("s") : 0)};
    });
}

void codedlab_gc_free(codedlab_gc_scheme* scheme) { delete scheme; }

codedlab_status codedlab_gc_shape(const codedlab_gc_scheme* scheme, size_t* n, size_t* k,
                                  size_t* s) {
    if (scheme == nullptr) return invalid("null argument");
    if (n != nullptr) *n = scheme->scheme.n;
    if (k != nullptr) *k = scheme->scheme.k;
    if (s != nullptr) *s = scheme->scheme.s;
    return CODEDLAB_OK;
}

codedlab_status codedlab_gc_encoding(const codedlab_gc_scheme* scheme, codedlab_matrix** out) {
    if (scheme == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] { *out = new codedlab_matrix{scheme->scheme.g}; });
}

codedlab_status codedlab_gc_error(const codedlab_gc_scheme* scheme, const size_t* stragglers,
                                  size_t count, double* out) {
    if (scheme == nullptr || out == nullptr || (stragglers == nullptr && count > 0))
        return invalid("null argument");
    return guarded([&] {
        std::vector<size_t> set(stragglers, stragglers + count);
        std::sort(set.begin(), set.end());
        codedlab::gc::GcScheme probe = scheme->scheme;
        probe.s = count;
        const auto responders = codedlab::complement_set(probe.n, set);
        *out = codedlab::gc::gc_error(probe, responders);
    });
}

codedlab_status codedlab_gc_max_error(const codedlab_gc_scheme* scheme, size_t s, double* out,
                                      int* exhaustive) {
    if (scheme == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] {
        const auto res = codedlab::gc::gc_max_error(scheme->scheme, s);
        *out = res.value;
        if (exhaustive != nullptr) *exhaustive = res.exhaustive ? 1 : 0;
    });
}

codedlab_status codedlab_cmm_create(const char* spec, const codedlab_matrix* a,
                                    const codedlab_matrix* b, codedlab_cmm_scheme** out) {
    if (a == nullptr || b == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] {
        // expose the real operand shapes to validation
        std::string extra = "L=" + std::to_string(a->m.rows()) +
                            "\nN=" + std::to_string(a->m.cols()) +
                            "\nM=" + std::to_string(b->m.cols()) + "\n";
        const auto cfg = config_from_spec(spec, "cmm", extra);
        *out = new codedlab_cmm_scheme{
            codedlab::cli::build_cmm_scheme(cfg, a->m, b->m, cfg.get_u64("seed"))};
    });
}

void codedlab_cmm_free(codedlab_cmm_scheme* scheme) { delete scheme; }

codedlab_status codedlab_cmm_servers(const codedlab_cmm_scheme* scheme, size_t* out) {
    if (scheme == nullptr || out == nullptr) return invalid("null argument");
    *out = scheme->scheme->servers();
    return CODEDLAB_OK;
}

codedlab_status codedlab_cmm_threshold(const codedlab_cmm_scheme* scheme, size_t* out) {
    if (scheme == nullptr || out == nullptr) return invalid("null argument");
    *out = scheme->scheme->threshold();
    return CODEDLAB_OK;
}

codedlab_status codedlab_cmm_task(const codedlab_cmm_scheme* scheme, size_t server,
                                  codedlab_matrix** out) {
    if (scheme == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] { *out = new codedlab_matrix{scheme->scheme->task_output(server)}; });
}

codedlab_status codedlab_cmm_decode(const codedlab_cmm_scheme* scheme, const size_t* servers,
                                    size_t count, codedlab_matrix** out) {
    if (scheme == nullptr || out == nullptr || (servers == nullptr && count > 0))
        return invalid("null argument");
    return guarded([&] {
        std::vector<size_t> ids(servers, servers + count);
        *out = new codedlab_matrix{scheme->scheme->decode_from(ids)};
    });
}

codedlab_status codedlab_config_parse(const char* text, codedlab_config** out) {
    if (text == nullptr || out == nullptr) return invalid("null argument");
    return guarded(
        [&] { *out = new codedlab_config{codedlab::cli::parse_config_or_throw(text)}; });
}

codedlab_status codedlab_config_parse_file(const char* path, codedlab_config** out) {
    if (path == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] {
        std::ifstream in(path, std::ios::binary);
        codedlab::require(in.good(), ErrorKind::IoError,
                          std::string("cannot read config '") + path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        *out = new codedlab_config{codedlab::cli::parse_config_or_throw(text.str())};
    });
}

void codedlab_config_free(codedlab_config* config) { delete config; }

codedlab_status codedlab_config_command(const codedlab_config* config, const char** out) {
    if (config == nullptr || out == nullptr) return invalid("null argument");
    *out = codedlab::cli::to_string(config->cfg.command);
    return CODEDLAB_OK;
}

codedlab_status codedlab_config_set(codedlab_config* config, const char* key,
                                    const char* value) {
    if (config == nullptr || key == nullptr || value == nullptr)
        return invalid("null argument");
    return guarded([&] { config->cfg.set(key, value); });
}

codedlab_status codedlab_run_to_file(const codedlab_config* config, const char* path,
                                     const char* format) {
    if (config == nullptr) return invalid("null argument");
    bool unrecoverable = false;
    const codedlab_status status = guarded([&] {
        const auto result = codedlab::cli::run(config->cfg);
        codedlab::cli::write_output(result, config->cfg, path == nullptr ? "" : path,
                                    format == nullptr ? "" : format);
        unrecoverable = result.any_unrecoverable;
    });
    if (status != CODEDLAB_OK) return status;
    if (unrecoverable) {
        g_last_error = "one or more rounds were unrecoverable";
        return CODEDLAB_ERR_UNRECOVERABLE;
    }
    return CODEDLAB_OK;
}

}  // extern "C"
