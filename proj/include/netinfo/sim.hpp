#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "netinfo/codes.hpp"

// Exact induced distributions, exact and Monte Carlo error probability, and
// the phase-transition experiment.

namespace netinfo {

std::string axis_name_w(int node);                 // "W3"
std::string axis_name_what(int source, int sink);  // "V1d3" (estimate of W_1 at node 3)

// Exact joint induced by the code over (W_I, X_I^n, Y_I^n, W-hat); with a cut
// supplied, the marginal over (X_I^n, Y_{T^c}^n) instead. The tensor respects
// the per-slot memorylessness factorization by construction.
JointPmf induced_distribution(const NetworkSpec& spec, const Code& code,
                              const std::optional<Cut>& marginal_cut = std::nullopt,
                              std::size_t cell_budget = 1000000,
                              std::size_t trajectory_budget = 50000000);

// Exact average probability of decoding error (union over source-destination
// pairs) by enumeration of positive-probability trajectories.
double exact_error_probability(const NetworkSpec& spec, const Code& code,
                               std::size_t trajectory_budget = 50000000);

// Number of trajectory leaves exact enumeration would visit (upper bound).
double exact_enumeration_cost(const NetworkSpec& spec, const Code& code);

struct ErrorEstimate {
    double point = 0.0;
    double half_width = 0.0;  // 95% normal-approximation half width
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

ErrorEstimate monte_carlo_error(const NetworkSpec& spec, const Code& code,
                                std::uint64_t trials, std::uint64_t seed);

struct ExperimentCell {
    double rate_bits = 0.0;
    int n = 0;
    std::string method;  // "exact" or "mc"
    double error = 0.0;
    double ci_half_width = 0.0;
    std::uint64_t seed = 0;  // seed of the best code found
    double runtime_ms = 0.0;
    bool skipped = false;
};

// For each (rate, n) cell: best (smallest) error over seeded random ML codes,
// exact when the enumeration fits the budget, Monte Carlo otherwise.
std::vector<ExperimentCell> phase_transition_experiment(
    const NetworkSpec& spec, const std::vector<double>& rates, const std::vector<int>& ns,
    const std::vector<std::uint64_t>& seeds, std::uint64_t trials,
    std::size_t exact_budget = 20000000);

// Fraction of message tuples that share a codeword with a smaller-index one;
// a lower bound on the error of any decoder (counting bound). Exact for
// feedback-blind codes.
double distinct_codeword_error_floor(const NetworkSpec& spec, const Code& code);

}  // namespace netinfo
