#include "core/error.hpp"

namespace codedlab {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParameter: return "invalid-parameter";
        case ErrorKind::InvalidInput: return "invalid-input";
        case ErrorKind::SingularSystem: return "singular-system";
        case ErrorKind::DegenerateDistribution: return "degenerate-distribution";
        case ErrorKind::RankDeficient: return "rank-deficiency";
        case ErrorKind::UnreachableTarget: return "unreachable-target";
        case ErrorKind::InvalidGraph: return "invalid-graph";
        case ErrorKind::InvalidDesign: return "invalid-design";
        case ErrorKind::InfeasibleParameters: return "infeasible-parameters";
        case ErrorKind::InsufficientResponses: return "insufficient-responses";
        case ErrorKind::InvalidExponents: return "invalid-exponents";
        case ErrorKind::DegreeOverflow: return "degree-overflow";
        case ErrorKind::EvaluationPoint: return "evaluation-point-failure";
        case ErrorKind::BudgetExceeded: return "budget-exceeded";
        case ErrorKind::ConfigError: return "config-error";
        case ErrorKind::IoError: return "io-error";
    }
    return "unknown-error";
}

}  // namespace codedlab
