#pragma once

#include <stdexcept>
#include <string>

namespace deliverai {

/// Input data (city file, config, flags) violates a documented contract.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A greedy walk over a Q-table revisited a hotspot before reaching its
/// destination. Usually means the table is undertrained.
class CycleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A simulation result is missing completions.
class IncompleteTraceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Internal defect: an invariant the engine maintains constructively was broken.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace deliverai
