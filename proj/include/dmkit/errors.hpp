#pragma once

#include <stdexcept>
#include <string>

namespace dmkit {

// Input that violates an operation's preconditions (bad prime, ring
// mismatch, malformed presentation, ...).
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Working precision N is insufficient for the requested computation.
// Callers should rebuild the ring with at least `suggested_precision`.
struct precision_error : std::runtime_error {
    int suggested_precision;
    precision_error(const std::string& msg, int suggested)
        : std::runtime_error(msg + " (retry with precision >= " +
                             std::to_string(suggested) + ")"),
          suggested_precision(suggested) {}
};

// A configured work bound was exceeded (kernel counts, cycle searches).
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An identity that must hold by construction failed. Always a bug.
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace dmkit
