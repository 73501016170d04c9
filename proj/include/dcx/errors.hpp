#ifndef DCX_ERRORS_HPP
#define DCX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dcx {

/// Bad arguments supplied by the caller (wrong sizes, negative radii, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A point was evaluated outside the domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A caller-certified precondition was falsified by sampling.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The question is not decidable for the given set kinds.
class UndecidableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical machinery failed (non-convergence, infeasible LP where one is guaranteed).
class InternalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dcx

#endif
