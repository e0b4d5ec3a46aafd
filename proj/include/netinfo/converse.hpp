#pragma once

#include <string>
#include <vector>

#include "netinfo/codes.hpp"
#include "netinfo/tilting.hpp"

// Executable verification of the strong-converse machinery: the
// Fano-analogue lower bound, the small-lambda approximation of the
// conditional Renyi divergence, the simulating distribution and its five
// structural properties, and the end-to-end single-letterization chain that
// ties a code's rate and error probability to a per-letter conditional
// Renyi divergence.

namespace netinfo {

struct Prop2Result {
    double lhs_bits = 0.0;
    double rhs_bits = 0.0;
    double alpha = 0.0;
    double log_w_bits = 0.0;
    bool holds = false;  // lhs >= rhs - 1e-9
};

// p_uv over axes {u_name, v_name} on a common alphabet with p_U uniform;
// q_v over {v_name}. Requires lambda > 1 and alpha = Pr{U != V} < 1.
Prop2Result prop2_bound(const JointPmf& p_uv, const std::string& u_name,
                        const std::string& v_name, const JointPmf& q_v, double lambda);

struct Prop3Result {
    double d_lambda_bits = 0.0;
    double d_one_bits = 0.0;
    double remainder_bits = 0.0;
    bool holds = false;  // d_lambda <= d_one + remainder + 1e-9
};

// D_lambda(p_{X,Y|Z} || p_{X|Z} p_{Y|Z} | p_Z) against its lambda = 1 value
// plus the remainder 8 (lambda-1) (|X||Y|)^5; lambda in (1, 5/4].
Prop3Result prop3_gap(const JointPmf& p, const std::vector<std::string>& x,
                      const std::vector<std::string>& y, const std::vector<std::string>& z,
                      double lambda);

struct SimulatingDistribution {
    JointPmf s;  // over the same axes as the full induced joint
    TiltedSequence tilt;
    std::size_t substituted_kernel_rows = 0;
};

// The lambda-simulating distribution neglecting T: the true marginal of the
// T-side variables, an independently rebuilt T^c-side process driven by the
// tilted kernels, and the true decoder kernel for the T-to-T^c estimates.
SimulatingDistribution build_simulating_distribution(const NetworkSpec& spec, const Code& code,
                                                     const Cut& cut, double lambda,
                                                     std::size_t cell_budget = 1000000);

struct Lemma1Report {
    double dev_messages = 0.0;        // (i)   L1(s_{W_I}, p_{W_I})
    double dev_decoder_kernel = 0.0;  // (ii)  max row L1, common-support cells
    double dev_markov = 0.0;          // (iii) max Markov residual over k
    double dev_channel_kernel = 0.0;  // (iv)  max row L1 vs tilted kernel
    double dev_input_kernel = 0.0;    // (v)   max row L1, common-support cells
    double dev_lambda_one = 0.0;      // lambda = 1: per-time joints vs induced
    std::size_t unmatched_rows = 0;   // s-supported rows with no p-mass (reported, not compared)

    double worst() const;
    bool pass(double tol = 1e-9) const { return worst() <= tol; }
};

Lemma1Report verify_lemma1(const NetworkSpec& spec, const Code& code,
                           const JointPmf& induced_full, const SimulatingDistribution& sim,
                           const Cut& cut, double lambda);

struct Certificate {
    Cut cut;
    int d = 0;
    double lambda = 0.0;
    int n = 0;
    double eps_bar = 0.0;
    double alpha = 0.0;  // exact Pr{W_T != What_{T x {d}}}

    double rate_bound_bits = 0.0;  // sum_T n R_i + lambda/(lambda-1) log(1 - eps_bar)
    double lhs_bits = 0.0;         // D_lambda(p_{W_T, What} || p_{W_T} s_{What})

    struct Step {
        std::string name;
        double bits = 0.0;
    };
    std::vector<Step> chain;   // every intermediate value, in chain order
    std::vector<Step> slacks;  // one entry per asserted inequality

    double min_inequality_slack_bits = 0.0;
    double max_equality_dev_bits = 0.0;  // telescoping / tilt identities
    double tilt_identity_l1 = 0.0;       // per-letter direct vs incremental joints

    bool holds(double tol = 1e-9) const {
        return min_inequality_slack_bits >= -tol && max_equality_dev_bits <= tol &&
               tilt_identity_l1 <= tol;
    }
};

// Evaluates the full chain: rate bound <= lhs <= DPI steps <= single-letter
// sum = per-letter sum <= n * aggregate divergence, reporting every value.
// Requires d in T^c and destinations, lambda > 1, eps_bar in [exact error, 1).
Certificate single_letter_certificate(const NetworkSpec& spec, const Code& code,
                                      const Cut& cut, int d, double lambda, double eps_bar,
                                      std::size_t cell_budget = 1000000);

struct LambdaSchedule {
    double lambda = 0.0;
    bool prop3_applicable = false;  // n >= 16, i.e. lambda <= 5/4
};

// lambda_n = 1 + 1/sqrt(n)
LambdaSchedule lambda_schedule(int n);

}  // namespace netinfo
