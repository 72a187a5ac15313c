#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace omcool {

enum class ErrorKind {
    domain,                 // argument outside an operation's domain
    config,                 // malformed or invalid run configuration
    unstable_system,        // drift matrix has an eigenvalue with Re >= 0
    out_of_regime,          // formula used outside its stated validity range
    fit_failure,            // Lorentzian fit precondition or quality check failed
    no_minimum,             // optimisation bracket holds no interior minimum
    insufficient_coverage,  // spectrum grid does not cover its resonances
    singular_matrix,        // susceptibility solve failed
    eigensolver,            // eigenvalue iteration did not converge
    numerical_failure,      // any other numerical sanity check
};

constexpr std::string_view kind_name(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::domain: return "domain_error";
    case ErrorKind::config: return "config_error";
    case ErrorKind::unstable_system: return "unstable_system";
    case ErrorKind::out_of_regime: return "out_of_regime";
    case ErrorKind::fit_failure: return "fit_failure";
    case ErrorKind::no_minimum: return "no_minimum";
    case ErrorKind::insufficient_coverage: return "insufficient_coverage";
    case ErrorKind::singular_matrix: return "singular_matrix";
    case ErrorKind::eigensolver: return "eigensolver_failure";
    case ErrorKind::numerical_failure: return "numerical_failure";
    }
    return "unknown";
}

// Process exit status used by the command line tool for each error kind.
constexpr int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::domain:
    case ErrorKind::config:
        return 1;
    case ErrorKind::unstable_system:
    case ErrorKind::out_of_regime:
    case ErrorKind::fit_failure:
    case ErrorKind::no_minimum:
    case ErrorKind::insufficient_coverage:
        return 2;
    case ErrorKind::singular_matrix:
    case ErrorKind::eigensolver:
    case ErrorKind::numerical_failure:
        return 3;
    }
    return 3;
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace omcool
