#pragma once

#include <vector>

#include "netinfo/network.hpp"
#include "netinfo/pmf.hpp"

// The lambda-tilted per-letter distributions attached to a code's induced
// law. Time k = 1 anchors at the true input marginal; each later step
// reweights the input conditionals by a tilting of the history likelihoods
// (channel to the power lambda against the running tilted kernel to the
// power lambda - 1). At lambda = 1 the construction reproduces the induced
// per-time joints.

namespace netinfo {

enum class SubstitutionPolicy {
    Uniform,      // undefined conditional rows become uniform
    FirstSymbol,  // undefined rows put all mass on symbol 0
};
// Zero-mass histories carry zero tilt weight, so the choice cannot move any
// computed value; tests assert agreement between the two policies.

struct TiltedSequence {
    double lambda = 1.0;
    Cut cut;
    int n = 0;

    std::vector<JointPmf> per_time_input;   // s_{X_I,k}, single-letter X axes
    std::vector<JointPmf> per_time_joint;   // composed with q_{Y_{T^c}|X_I}
    std::vector<CondKernel> tilted_kernel;  // s_k(y_{T^c} | x_{T^c}), total
    // log2 of the tilt-weight ratio sum_f_k / sum_f_{k-1} per step
    std::vector<double> log2_step_normalizer;

    JointPmf aggregate_input;  // uniform time-share of the per-letter inputs
    JointPmf aggregate_joint;

    std::size_t substituted_history_rows = 0;
    std::size_t substituted_kernel_rows = 0;

    // Sum over k of D_lambda(q || s_k | p_k) in bits, via the normalizers;
    // requires lambda > 1.
    double single_letter_sum_bits() const;
};

// induced must be the code-induced marginal over (X_I^n, Y_{T^c}^n) with
// time-indexed axes; it is checked against the per-slot memorylessness
// factorization (residual <= 1e-9) before tilting.
TiltedSequence build_tilted_sequence(const NetworkSpec& spec, const JointPmf& induced,
                                     const Cut& cut, double lambda, int n,
                                     SubstitutionPolicy policy = SubstitutionPolicy::Uniform,
                                     std::size_t history_budget = 10000000);

// Direct (non-incremental, linear-domain) evaluation of the per-letter input
// at time k from its defining ratio of history sums, given the tilted
// kernels of earlier steps. Serves as an independent oracle for the
// incremental log-domain bookkeeping.
JointPmf tilted_input_direct(const NetworkSpec& spec, const JointPmf& induced, const Cut& cut,
                             double lambda, int k,
                             const std::vector<CondKernel>& earlier_kernels);

// log2 of the full-horizon tilt weight sum, evaluated directly against the
// induced tensor: log2 sum_cells M(cell) * prod_k (q/s_k)^(lambda-1).
double log2_tilt_weight_direct(const NetworkSpec& spec, const JointPmf& induced,
                               const Cut& cut, double lambda,
                               const std::vector<CondKernel>& kernels);

// Max over time slots of the memorylessness factorization residual of an
// (X_I^n, Y_{T^c}^n) tensor.
double memorylessness_residual(const NetworkSpec& spec, const JointPmf& induced,
                               const Cut& cut, int n);

}  // namespace netinfo
