#pragma once

#include <string>

#include "chemoblow/dynamics.hpp"
#include "chemoblow/grid.hpp"

namespace chemoblow {

// Gaussian bump C (exp(-r^2 / (2 sigma^2)) + 1e-6), scaled so the ball
// integral equals mass. Throws UnresolvedBump when fewer than four cell
// centers fall inside one sigma.
RadialField make_bump(double mass, double sigma, const RadialGrid& g);

// base + amplitude ((r^2 + core^2)^{-kappa/2} - (R^2 + core^2)^{-kappa/2}).
// A bounded power spike: for kappa < (n-2)/2 its W^{1,2} norm stays O(1)
// as core -> 0 while the peak value grows like core^{-kappa}.
RadialField make_spike(double base, double amplitude, double kappa, double core,
                       const RadialGrid& g);

struct MembershipReport {
    double mass = 0.0;
    double a_norm = 0.0;   // ||chi v0 - xi w0||_{W^{1,2}}
    double g_value = 0.0;  // energy of the initial data (NaN when undefined)
    bool positivity_u = false;
    bool positivity_z = false;
    bool satisfies = false;
    double m = 0.0, A = 0.0, K = 0.0;  // thresholds echoed back
};

// Checks the blow-up class conditions: mass m (to 1e-8 relative), a_norm
// <= A, energy <= -K, and strict pointwise positivity of u0 and
// chi v0 - xi w0. Reports, never throws, on failed criteria.
MembershipReport check_membership(const RadialField& u0, const RadialField& v0,
                                  const RadialField& w0, const Params& p, const RadialGrid& g,
                                  double m, double A, double K);

// Same conditions stated directly on the reduced pair (u0, z0).
MembershipReport check_membership_reduced(const RadialField& u0, const RadialField& z0,
                                          const Params& p, const RadialGrid& g, double m, double A,
                                          double K);

struct DriveOptions {
    double m = 1.0;
    double A = 10.0;
    double K = 1.0;
    double eps = 1.0;
    double p = 1.1;  // must lie in (1, 2n/(n+2))
    bool sharpen_v = true;
    double lambda_cap = 0.5;
    double sigma0 = 0.0;  // 0 -> R/8
    int max_halvings = 60;
};

struct DriveResult {
    bool success = false;
    RadialField u0, v0, w0;
    double sigma = 0.0;
    double lambda = 0.0;
    double mu = 0.0;
    double g_value = 0.0;   // best energy reached
    double distance = 0.0;  // L^p + W^{1,2} + W^{1,2} distance from the input
    MembershipReport report;
    std::string message;
};

// Searches for mass-preserving data in the blow-up class within eps of
// the input: mixes in a shrinking-mass concentration of u and, when
// sharpen_v is set, a bounded power spike on v. Success is re-certified
// through check_membership; failure reports the best (sigma, G) pair.
DriveResult drive_to_class(const RadialField& u0, const RadialField& v0, const RadialField& w0,
                           const Params& p, const RadialGrid& g, const DriveOptions& opt);

} // namespace chemoblow
