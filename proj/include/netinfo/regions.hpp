#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netinfo/network.hpp"
#include "netinfo/pmf.hpp"

// Rate-region machinery: cut enumeration, conditional-MI maximization over
// input distributions, per-link capacities, and membership oracles. Regions
// are never materialized as polytopes; per-cut suprema determine membership.

namespace netinfo {

struct RateTuple {
    std::vector<double> bits;  // one entry per node, R_i = 0 off-source
};

void validate_rates(const NetworkSpec& spec, const RateTuple& rates);
double sum_rates_in(const RateTuple& rates, const Cut& cut);

// All cuts T with T^c intersecting the destinations, ordered by bitmask.
std::vector<Cut> enumerate_cuts(const NetworkSpec& spec);

// I(X_T ; Y_{T^c} | X_{T^c}) in bits under input p (over the X_I axes).
double cut_value(const NetworkSpec& spec, const Cut& cut, const JointPmf& p);

enum class InputMode { AllInputs, ProductInputs };

struct CutBound {
    Cut cut;
    double value_bits = 0.0;
    JointPmf argmax_input;
    InputMode mode = InputMode::AllInputs;
    double penalty_bits = 0.0;  // H(Y_T | X_I, Y_{T^c}), used by the inner bound
    bool converged = true;
    std::optional<double> oracle_bits;  // grid-oracle value when it ran
};

struct OptimizerOptions {
    int restarts = 16;
    int max_iters = 400;
    std::uint64_t seed = 0x5EEDF00Dull;
    int grid_resolution = 32;
    std::size_t grid_max_points = 200000;
    bool use_grid_oracle = true;
    double oracle_discrepancy_tol = 1e-3;
    std::vector<JointPmf> extra_starts;  // optional warm starts (over X_I axes)
};

// Supremum of the cut objective. AllInputs runs projected-gradient ascent
// over the joint input simplex with seeded multi-restart (the objective is
// concave), certified against a coarse grid oracle on small alphabets.
// ProductInputs runs block-coordinate ascent over per-node simplices.
CutBound max_cut_value(const NetworkSpec& spec, const Cut& cut, InputMode mode,
                       const OptimizerOptions& opts = {});

// Exhaustive grid over the joint simplex at the given resolution; nullopt
// when the point count exceeds max_points.
std::optional<double> grid_oracle_max(const NetworkSpec& spec, const Cut& cut,
                                      int resolution, std::size_t max_points);

struct DmcCapacity {
    double capacity_bits = 0.0;
    std::vector<double> input;  // attaining distribution over the input alphabet
};

// Capacity of a single DMC via alternating maximization, iterated until the
// duality gap max_x D(q_x || m) - I(p) drops below gap_tol bits.
DmcCapacity dmc_capacity(const std::vector<double>& matrix, std::size_t input_size,
                         std::size_t output_size, double gap_tol = 1e-9);

struct LinkCapacities {
    struct Entry {
        int from = 0;
        int to = 0;
        double capacity_bits = 0.0;
        std::vector<double> input;
    };
    std::vector<Entry> entries;

    double capacity(int from, int to) const;  // 0 for absent links
};

LinkCapacities link_capacities(const LinkChannelTable& links, double gap_tol = 1e-9);

// Per-cut crossing-capacity bounds: sum of C_{i,j} over (i,j) in T x T^c.
std::vector<CutBound> rprime_bounds(const LinkCapacities& caps, const NetworkSpec& spec,
                                    const std::vector<Cut>& cuts);

enum class Region { Rout, RoutStar, Rin, Rcutset, Rprime };

std::string region_name(Region r);

struct CutRecord {
    Cut cut;
    double bound_bits = 0.0;
    double slack_bits = 0.0;
    double penalty_bits = 0.0;
    JointPmf argmax_input;
    std::string verdict;  // member | boundary | non-member
};

struct MembershipReport {
    Region region;
    std::string verdict;
    double boundary_tol = 0.0;
    std::vector<CutRecord> cuts;
};

// Rin and Rcutset require a caller-supplied input distribution (a product
// one for Rin); Rprime requires an independent-DMC network. Slacks within
// the boundary tolerance yield the verdict "boundary".
MembershipReport membership_report(const NetworkSpec& spec, const RateTuple& rates,
                                   Region region,
                                   const std::optional<JointPmf>& input = std::nullopt,
                                   const OptimizerOptions& opts = {});

struct DominanceRecord {
    Cut cut;
    double value_at_pstar = 0.0;
    double max_bits = 0.0;
    double slack_bits = 0.0;
    std::optional<double> oracle_bits;
};

struct DominanceReport {
    bool dominated = false;
    double tolerance = 0.0;
    std::vector<DominanceRecord> cuts;
};

// Compares the per-cut value at a product distribution p_star against the
// all-inputs supremum; dominated iff every slack stays within tolerance.
DominanceReport check_product_dominance(const NetworkSpec& spec, const JointPmf& p_star,
                                        const std::vector<Cut>& cuts,
                                        int oracle_resolution = 32, double tolerance = 1e-3,
                                        const OptimizerOptions& opts = {});

bool is_product_form(const JointPmf& p, double tol = 1e-9);

}  // namespace netinfo
