#include "netinfo/info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace netinfo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_disjoint(std::initializer_list<const std::vector<std::string>*> groups) {
    std::set<std::string> seen;
    for (const auto* g : groups)
        for (const std::string& n : *g)
            if (!seen.insert(n).second)
                throw axis_overlap_error("axis '" + n + "' appears in two groups");
}

std::vector<std::string> concat(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

double neg_sum_plogp(const JointPmf& p) {
    double h = 0.0;
    for (double v : p.values())
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

// Renyi sum Sum p^lambda / q^(lambda-1) over paired values; +inf on support
// violation, 0-cells of p contribute nothing.
double renyi_sum(const double* p, const double* q, std::size_t n, double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) return kInf;
        s += std::pow(p[i], lambda) / std::pow(q[i], lambda - 1.0);
    }
    return s;
}

double kl_sum(const double* p, const double* q, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) return kInf;
        s += p[i] * std::log2(p[i] / q[i]);
    }
    return s;
}

}  // namespace

double entropy(const JointPmf& p) { return neg_sum_plogp(p); }

double conditional_entropy(const JointPmf& p, const std::vector<std::string>& target,
                           const std::vector<std::string>& given) {
    require_disjoint({&target, &given});
    double h_joint = neg_sum_plogp(marginalize(p, concat(target, given)));
    if (given.empty()) return h_joint;
    return h_joint - neg_sum_plogp(marginalize(p, given));
}

double conditional_mutual_information(const JointPmf& p, const std::vector<std::string>& a,
                                      const std::vector<std::string>& b,
                                      const std::vector<std::string>& given) {
    require_disjoint({&a, &b, &given});
    if (a.empty() || b.empty()) return 0.0;
    // I(a;b|z) = H(a,z) + H(b,z) - H(a,b,z) - H(z)
    double h_az = neg_sum_plogp(marginalize(p, concat(a, given)));
    double h_bz = neg_sum_plogp(marginalize(p, concat(b, given)));
    double h_abz = neg_sum_plogp(marginalize(p, concat(concat(a, b), given)));
    double h_z = given.empty() ? 0.0 : neg_sum_plogp(marginalize(p, given));
    return h_az + h_bz - h_abz - h_z;
}

double relative_entropy(const JointPmf& p, const JointPmf& q) {
    require_same_axes(p, q);
    return kl_sum(p.values().data(), q.values().data(), p.size());
}

double conditional_relative_entropy(const JointPmf& p, const JointPmf& q,
                                    const std::vector<std::string>& target,
                                    const std::vector<std::string>& given,
                                    const JointPmf& r) {
    require_same_axes(p, q);
    require_disjoint({&target, &given});
    JointPmf pm = marginalize(p, concat(target, given));
    JointPmf qm = marginalize(q, concat(target, given));
    CondKernel pk = condition(pm, given);
    CondKernel qk = condition(qm, given);
    return conditional_renyi_divergence(pk, qk, r, 1.0);
}

double renyi_divergence(const JointPmf& p, const JointPmf& q, double lambda) {
    if (lambda < 1.0) throw invalid_lambda_error("lambda must be >= 1");
    require_same_axes(p, q);
    if (lambda == 1.0) return relative_entropy(p, q);
    double s = renyi_sum(p.values().data(), q.values().data(), p.size(), lambda);
    if (s == kInf) return kInf;
    return std::log2(s) / (lambda - 1.0);
}

double conditional_renyi_divergence(const CondKernel& p, const CondKernel& q,
                                    const JointPmf& r, double lambda) {
    if (lambda < 1.0) throw invalid_lambda_error("lambda must be >= 1");
    if (p.from_axes() != q.from_axes() || p.to_axes() != q.to_axes())
        throw axis_mismatch_error("kernels are over different axes");
    if (r.axes() != p.from_axes())
        throw axis_mismatch_error("weighting distribution must live on the from-axes");

    std::size_t cols = p.to_count();
    if (lambda == 1.0) {
        double total = 0.0;
        for (std::size_t row = 0; row < p.from_count(); ++row) {
            double w = r.value(row);
            if (w <= 0.0) continue;
            if (!p.row_defined(row) || !q.row_defined(row))
                throw invalid_probability_error("weighted row is undefined");
            double d = kl_sum(&p.rows()[row * cols], &q.rows()[row * cols], cols);
            if (d == kInf) return kInf;
            total += w * d;
        }
        return total;
    }
    double s = 0.0;
    for (std::size_t row = 0; row < p.from_count(); ++row) {
        double w = r.value(row);
        if (w <= 0.0) continue;
        if (!p.row_defined(row) || !q.row_defined(row))
            throw invalid_probability_error("weighted row is undefined");
        double inner = renyi_sum(&p.rows()[row * cols], &q.rows()[row * cols], cols, lambda);
        if (inner == kInf) return kInf;
        s += w * inner;
    }
    return std::log2(s) / (lambda - 1.0);
}

double markov_residual(const JointPmf& p, const std::vector<std::string>& x,
                       const std::vector<std::string>& y,
                       const std::vector<std::string>& z) {
    require_disjoint({&x, &y, &z});
    JointPmf pxyz = marginalize(p, concat(concat(x, y), z));
    JointPmf py = marginalize(pxyz, y);
    JointPmf pxy = marginalize(pxyz, concat(x, y));
    JointPmf pyz = marginalize(pxyz, concat(y, z));

    AxisGroup gy = pxyz.group(y);
    AxisGroup gxy = pxyz.group(concat(x, y));
    AxisGroup gyz = pxyz.group(concat(y, z));

    double worst = 0.0;
    for_each_coord(pxyz.sizes(), [&](std::size_t flat, const std::vector<std::size_t>& c) {
        double lhs = pxyz.value(flat) * py.value(gy.index_of(c));
        double rhs = pxy.value(gxy.index_of(c)) * pyz.value(gyz.index_of(c));
        worst = std::max(worst, std::abs(lhs - rhs));
    });
    return worst;
}

}  // namespace netinfo
