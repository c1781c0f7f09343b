#pragma once

#include <stdexcept>
#include <string>

namespace srae {

// Base class for all toolkit errors.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Renyi order outside the validity window of an analytic formula.
struct window_error : error {
    explicit window_error(const std::string& what) : error(what) {}
};

// Invalid quantum state (bad normalization, non-Hermitian, non-PSD, bad file).
struct state_error : error {
    explicit state_error(const std::string& what) : error(what) {}
};

// A mixed-state squared concurrence was needed but neither supplied nor derivable.
struct missing_concurrence_error : error {
    explicit missing_concurrence_error(const std::string& what) : error(what) {}
};

} // namespace srae
