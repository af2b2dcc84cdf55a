#pragma once

#include <stdexcept>
#include <string>

namespace meanscope {

// Malformed inputs: wrong dimensions, non-finite entries, bad parameters.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Spectrum falls outside the domain of a scalar function (sqrt of a
// negative eigenvalue, log of zero, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// An inversion hit an eigenvalue below the relative cutoff.
struct SingularError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A declared object failed its own consistency checks (f(1) != 1,
// non-concave sample grid, V*V > I, ...).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Both bound boxes collapsed to a point: the chord interval is empty.
struct DegenerateBoundsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Chord slope numerically zero (constant representing function).
struct DegenerateSlopeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An inequality was asked to run on an instance that does not satisfy
// its hypotheses (wrong mean, missing submultiplicativity, bad map).
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace meanscope
