#pragma once

#include "netinfo/pmf.hpp"

// Information measures on finite-alphabet tensors. All outputs are in bits
// (base-2 logs), with the conventions 0*log 0 = 0 and 0*log(0/0) = 0.
// Support violations yield +infinity, which propagates through comparisons.

namespace netinfo {

// H(target | given); both are disjoint subsets of p's axes.
double conditional_entropy(const JointPmf& p, const std::vector<std::string>& target,
                           const std::vector<std::string>& given);

double entropy(const JointPmf& p);

// I(a ; b | given); pairwise disjoint axis sets.
double conditional_mutual_information(const JointPmf& p, const std::vector<std::string>& a,
                                      const std::vector<std::string>& b,
                                      const std::vector<std::string>& given);

// D(p || q); same axes.
double relative_entropy(const JointPmf& p, const JointPmf& q);

// D(p_{target|given} || q_{target|given} | r), with r the weighting
// distribution over the given axes.
double conditional_relative_entropy(const JointPmf& p, const JointPmf& q,
                                    const std::vector<std::string>& target,
                                    const std::vector<std::string>& given,
                                    const JointPmf& r);

// Renyi divergence of order lambda >= 1; lambda = 1 falls back to
// relative_entropy exactly.
double renyi_divergence(const JointPmf& p, const JointPmf& q, double lambda);

// Conditional Renyi divergence between two kernels sharing from/to axes,
// weighted by r over the from-axes. Rows with zero weight are skipped.
double conditional_renyi_divergence(const CondKernel& p, const CondKernel& q,
                                    const JointPmf& r, double lambda);

// Max over cells of |p(x,y,z) p(y) - p(x,y) p(y,z)|; zero iff X -> Y -> Z
// holds under p (factorization criterion). Axis sets must be disjoint and
// jointly form a subset of p's axes.
double markov_residual(const JointPmf& p, const std::vector<std::string>& x,
                       const std::vector<std::string>& y,
                       const std::vector<std::string>& z);

}  // namespace netinfo
