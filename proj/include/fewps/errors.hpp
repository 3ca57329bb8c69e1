#ifndef FEWPS_ERRORS_HPP
#define FEWPS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fewps {

// Error kinds map to CLI exit codes: config -> 2, numerical -> 3.
enum class ErrorKind {
    contract,      // precondition / dimension mismatch
    lookup,        // unknown parameter name
    domain,        // state outside a beta family's domain
    singularity,   // degenerate constraint gradient (P.P below threshold)
    projection,    // Newton projection failed to converge
    divergence,    // non-convergent phase-space integral
    config,        // bad configuration document
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

    const char* kind_name() const noexcept {
        switch (kind_) {
            case ErrorKind::contract:    return "contract_violation";
            case ErrorKind::lookup:      return "lookup_error";
            case ErrorKind::domain:      return "domain_error";
            case ErrorKind::singularity: return "singularity_error";
            case ErrorKind::projection:  return "projection_failure";
            case ErrorKind::divergence:  return "divergence_error";
            case ErrorKind::config:      return "config_error";
        }
        return "error";
    }

private:
    ErrorKind kind_;
};

struct ContractViolation : Error {
    explicit ContractViolation(const std::string& m) : Error(ErrorKind::contract, m) {}
};
struct LookupError : Error {
    explicit LookupError(const std::string& m) : Error(ErrorKind::lookup, m) {}
};
struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error(ErrorKind::domain, m) {}
};
struct SingularityError : Error {
    explicit SingularityError(const std::string& m) : Error(ErrorKind::singularity, m) {}
};
struct ProjectionFailure : Error {
    explicit ProjectionFailure(const std::string& m) : Error(ErrorKind::projection, m) {}
};
struct DivergenceError : Error {
    explicit DivergenceError(const std::string& m) : Error(ErrorKind::divergence, m) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error(ErrorKind::config, m) {}
};

} // namespace fewps

#endif
