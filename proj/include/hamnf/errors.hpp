#ifndef HAMNF_ERRORS_HPP
#define HAMNF_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace hamnf {

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Frequency vector failed the exact non-resonance check; carries the witness.
struct ResonantFrequency : std::runtime_error {
    std::vector<long> witness;
    explicit ResonantFrequency(std::vector<long> j)
        : std::runtime_error("resonant frequency vector"), witness(std::move(j)) {}
};

struct ResonantDivisor : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PoleProximity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PoleAtOrigin : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonPositiveOrder : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WindowUnderflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct JacobianSingular : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConsistencyFailure : std::runtime_error {
    std::string first_mismatch;
    ConsistencyFailure(const std::string& msg, std::string mismatch)
        : std::runtime_error(msg), first_mismatch(std::move(mismatch)) {}
};

struct NewtonDiverged : std::runtime_error {
    int truncation;
    explicit NewtonDiverged(int n)
        : std::runtime_error("Newton iteration exceeded the step cap at truncation " +
                             std::to_string(n)),
          truncation(n) {}
};

struct PoleCollision : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hamnf

#endif
