#pragma once

#include <stdexcept>
#include <string>

namespace chemoblow {

// Thrown by the energy functionals when a density has a non-positive entry:
// the u*ln(u) term is undefined there. Callers that tolerate clipped
// densities apply a floor before evaluating (see energy.hpp).
struct NonPositiveDensity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by make_bump when sigma is too small for the grid: fewer than
// four cell centers fall inside one sigma, so the profile is aliased.
struct UnresolvedBump : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration errors carry the dotted path of the offending key so the
// CLI can point at the exact field.
struct ConfigError : std::runtime_error {
    std::string path;
    ConfigError(std::string path_, const std::string& what_)
        : std::runtime_error(path_ + ": " + what_), path(std::move(path_)) {}
};

} // namespace chemoblow
