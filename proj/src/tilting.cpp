#include "netinfo/tilting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netinfo/info.hpp"

namespace netinfo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Addressing for an (X_I^n, Y_{T^c}^n) tensor: per-step input index (flat
// over canonical X_I axes) and output index (flat over canonical Y_{T^c}
// axes), plus step-major history indices.
struct TimeLayout {
    int n = 0;
    std::size_t a = 1;  // |X_I|
    std::size_t b = 1;  // |Y_{T^c}|
    // groups (in canonical single-letter order) per step
    std::vector<AxisGroup> x_at, y_at;

    TimeLayout(const NetworkSpec& spec, const JointPmf& m, const Cut& cut, int n_steps) {
        n = n_steps;
        Cut tc = cut.complement(spec.node_count);
        std::vector<Axis> xa = spec.input_axes();
        std::vector<Axis> ya = spec.output_axes(tc.members(spec.node_count));
        a = cell_count(xa);
        b = cell_count(ya);
        for (int k = 1; k <= n; ++k) {
            std::vector<std::size_t> xpos, ypos;
            for (const Axis& ax : xa) {
                std::string nm = ax.name + "k" + std::to_string(k);
                xpos.push_back(m.axis_pos(nm));
            }
            for (const Axis& ax : ya) {
                std::string nm = ax.name + "k" + std::to_string(k);
                ypos.push_back(m.axis_pos(nm));
            }
            x_at.emplace_back(xpos, m.axes());
            y_at.emplace_back(ypos, m.axes());
        }
    }

    // history of the first k steps as a step-major flat index
    std::size_t hist_index(const std::vector<std::size_t>& coord, int k) const {
        std::size_t h = 0;
        for (int l = 0; l < k; ++l)
            h = (h * a + x_at[l].index_of(coord)) * b + y_at[l].index_of(coord);
        return h;
    }
};

std::vector<Axis> expected_axes(const NetworkSpec& spec, const Cut& cut, int n) {
    Cut tc = cut.complement(spec.node_count);
    std::vector<Axis> axes;
    for (int i = 1; i <= spec.node_count; ++i)
        for (int k = 1; k <= n; ++k) {
            axes.push_back({axis_name_x(i, k), spec.input_sizes[i - 1]});
            if (tc.contains(i)) axes.push_back({axis_name_y(i, k), spec.output_sizes[i - 1]});
        }
    std::sort(axes.begin(), axes.end(),
              [](const Axis& a, const Axis& b) { return a.name < b.name; });
    return axes;
}

// per-step input conditionals p(x_k | x^{k-1}, y^{k-1}) as dense tables
// indexed [hist][x], with an undefined mask at zero-mass histories
struct StepConditional {
    std::vector<double> rows;          // hist * a + x
    std::vector<std::uint8_t> defined; // per hist
};

StepConditional extract_step_conditional(const JointPmf& m, const TimeLayout& lay, int k,
                                         SubstitutionPolicy policy, std::size_t* substituted) {
    std::size_t hist_count = 1;
    for (int l = 1; l < k; ++l) hist_count *= lay.a * lay.b;
    StepConditional sc;
    sc.rows.assign(hist_count * lay.a, 0.0);
    std::vector<double> mass(hist_count, 0.0);
    for_each_coord(m.sizes(), [&](std::size_t flat, const std::vector<std::size_t>& c) {
        double v = m.value(flat);
        if (v == 0.0) return;
        std::size_t h = lay.hist_index(c, k - 1);
        sc.rows[h * lay.a + lay.x_at[k - 1].index_of(c)] += v;
        mass[h] += v;
    });
    sc.defined.assign(hist_count, 1);
    for (std::size_t h = 0; h < hist_count; ++h) {
        if (mass[h] <= 0.0) {
            sc.defined[h] = 0;
            if (substituted) ++*substituted;
            if (policy == SubstitutionPolicy::Uniform) {
                for (std::size_t x = 0; x < lay.a; ++x)
                    sc.rows[h * lay.a + x] = 1.0 / static_cast<double>(lay.a);
            } else {
                sc.rows[h * lay.a] = 1.0;
            }
            continue;
        }
        for (std::size_t x = 0; x < lay.a; ++x) sc.rows[h * lay.a + x] /= mass[h];
    }
    return sc;
}

}  // namespace

double memorylessness_residual(const NetworkSpec& spec, const JointPmf& induced,
                               const Cut& cut, int n) {
    TimeLayout lay(spec, induced, cut, n);
    CondKernel q = marginal_channel(spec, cut);

    double worst = 0.0;
    for (int k = 1; k <= n; ++k) {
        // joint over (hist, x_k, y_k) and its (hist, x_k) margin
        std::size_t hist_count = 1;
        for (int l = 1; l < k; ++l) hist_count *= lay.a * lay.b;
        std::vector<double> hxy(hist_count * lay.a * lay.b, 0.0);
        std::vector<double> hx(hist_count * lay.a, 0.0);
        for_each_coord(induced.sizes(), [&](std::size_t flat, const std::vector<std::size_t>& c) {
            double v = induced.value(flat);
            if (v == 0.0) return;
            std::size_t h = lay.hist_index(c, k - 1);
            std::size_t x = lay.x_at[k - 1].index_of(c);
            std::size_t y = lay.y_at[k - 1].index_of(c);
            hxy[(h * lay.a + x) * lay.b + y] += v;
            hx[h * lay.a + x] += v;
        });
        for (std::size_t hx_i = 0; hx_i < hx.size(); ++hx_i) {
            std::size_t x = hx_i % lay.a;
            for (std::size_t y = 0; y < lay.b; ++y) {
                double lhs = hxy[hx_i * lay.b + y];
                double rhs = hx[hx_i] * q.value(x, y);
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
    }
    return worst;
}

TiltedSequence build_tilted_sequence(const NetworkSpec& spec, const JointPmf& induced,
                                     const Cut& cut, double lambda, int n,
                                     SubstitutionPolicy policy, std::size_t history_budget) {
    if (lambda < 1.0) throw invalid_lambda_error("lambda must be >= 1");
    if (induced.axes() != expected_axes(spec, cut, n))
        throw axis_mismatch_error("induced tensor axes do not match (X_I^n, Y_{T^c}^n)");
    if (memorylessness_residual(spec, induced, cut, n) > 1e-9)
        throw invalid_probability_error("induced tensor violates memorylessness");

    TimeLayout lay(spec, induced, cut, n);
    CondKernel q = marginal_channel(spec, cut);
    Cut tc = cut.complement(spec.node_count);
    std::vector<Axis> x_axes = spec.input_axes();
    std::vector<Axis> xtc_axes = spec.input_axes(tc.members(spec.node_count));
    std::vector<Axis> ytc_axes = spec.output_axes(tc.members(spec.node_count));

    // x -> x_{T^c} projection in flat index space
    std::vector<std::size_t> xtc_of(lay.a);
    {
        std::vector<std::size_t> pos;
        for (const Axis& ax : xtc_axes) pos.push_back(std::distance(
            x_axes.begin(),
            std::find_if(x_axes.begin(), x_axes.end(),
                         [&](const Axis& a) { return a.name == ax.name; })));
        AxisGroup g(pos, x_axes);
        std::vector<std::size_t> sizes;
        for (const Axis& a : x_axes) sizes.push_back(a.size);
        for_each_coord(sizes, [&](std::size_t f, const std::vector<std::size_t>& c) {
            xtc_of[f] = g.index_of(c);
        });
    }

    TiltedSequence out;
    out.lambda = lambda;
    out.cut = cut;
    out.n = n;

    // log-domain tilt weights over step-major histories
    std::vector<double> logf = {0.0};
    std::size_t hist_count = 1;

    for (int k = 1; k <= n; ++k) {
        StepConditional sc = extract_step_conditional(induced, lay, k, policy,
                                                      &out.substituted_history_rows);

        double shift = *std::max_element(logf.begin(), logf.end());
        if (shift == kNegInf) shift = 0.0;
        std::vector<double> w(hist_count);
        double wsum = 0.0;
        for (std::size_t h = 0; h < hist_count; ++h) {
            w[h] = logf[h] == kNegInf ? 0.0 : std::exp(logf[h] - shift);
            wsum += w[h];
        }

        std::vector<double> input(lay.a, 0.0);
        for (std::size_t h = 0; h < hist_count; ++h) {
            if (w[h] == 0.0) continue;
            for (std::size_t x = 0; x < lay.a; ++x)
                input[x] += w[h] * sc.rows[h * lay.a + x];
        }
        for (double& v : input) v /= wsum;
        JointPmf s_input = JointPmf::make(x_axes, input);
        JointPmf s_joint = compose(s_input, q);

        JointPmf s_xtc_y = marginalize(
            s_joint, [&] {
                std::vector<std::string> names;
                for (const Axis& a : xtc_axes) names.push_back(a.name);
                for (const Axis& a : ytc_axes) names.push_back(a.name);
                return names;
            }());
        std::size_t substituted = 0;
        CondKernel s_kernel = condition(s_xtc_y, [&] {
            std::vector<std::string> names;
            for (const Axis& a : xtc_axes) names.push_back(a.name);
            return names;
        }());
        if (policy == SubstitutionPolicy::Uniform) {
            s_kernel = s_kernel.with_undefined_rows_uniform(&substituted);
        } else {
            std::vector<double> first(lay.b, 0.0);
            first[0] = 1.0;
            s_kernel = s_kernel.with_undefined_rows(first, &substituted);
        }
        out.substituted_kernel_rows += substituted;

        // step normalizer: ratio of consecutive tilt-weight sums
        double zk = 0.0;
        for (std::size_t h = 0; h < hist_count; ++h) {
            if (w[h] == 0.0) continue;
            for (std::size_t x = 0; x < lay.a; ++x) {
                double px = sc.rows[h * lay.a + x];
                if (px == 0.0) continue;
                double inner = 0.0;
                for (std::size_t y = 0; y < lay.b; ++y) {
                    double qv = q.value(x, y);
                    if (qv == 0.0) continue;
                    double sv = s_kernel.value(xtc_of[x], y);
                    inner += std::pow(qv, lambda) / std::pow(sv, lambda - 1.0);
                }
                zk += w[h] * px * inner;
            }
        }
        zk /= wsum;
        out.log2_step_normalizer.push_back(std::log2(zk));

        if (k < n) {
            std::size_t next_count = hist_count * lay.a * lay.b;
            if (next_count > history_budget)
                throw budget_error("tilt history table exceeds budget");
            std::vector<double> next(next_count, kNegInf);
            for (std::size_t h = 0; h < hist_count; ++h) {
                if (logf[h] == kNegInf) continue;
                for (std::size_t x = 0; x < lay.a; ++x) {
                    double px = sc.rows[h * lay.a + x];
                    if (px == 0.0) continue;
                    for (std::size_t y = 0; y < lay.b; ++y) {
                        double qv = q.value(x, y);
                        if (qv == 0.0) continue;
                        double sv = s_kernel.value(xtc_of[x], y);
                        next[(h * lay.a + x) * lay.b + y] =
                            logf[h] + std::log(px) + lambda * std::log(qv) -
                            (lambda - 1.0) * std::log(sv);
                    }
                }
            }
            logf = std::move(next);
            hist_count = next_count;
        }

        out.per_time_input.push_back(std::move(s_input));
        out.per_time_joint.push_back(std::move(s_joint));
        out.tilted_kernel.push_back(std::move(s_kernel));
    }

    std::vector<double> agg(lay.a, 0.0);
    for (const JointPmf& p : out.per_time_input)
        for (std::size_t x = 0; x < lay.a; ++x) agg[x] += p.value(x);
    for (double& v : agg) v /= static_cast<double>(n);
    out.aggregate_input = JointPmf::make(x_axes, agg);
    out.aggregate_joint = compose(out.aggregate_input, q);
    return out;
}

double TiltedSequence::single_letter_sum_bits() const {
    if (lambda <= 1.0)
        throw invalid_lambda_error("single-letter sum via normalizers needs lambda > 1");
    double s = 0.0;
    for (double z : log2_step_normalizer) s += z;
    return s / (lambda - 1.0);
}

JointPmf tilted_input_direct(const NetworkSpec& spec, const JointPmf& induced, const Cut& cut,
                             double lambda, int k,
                             const std::vector<CondKernel>& earlier_kernels) {
    int n = k;  // only the first k steps matter; layout still needs full axes
    // infer n from the axes: count time indices of X1*
    for (int guess = 1; guess < 64; ++guess) {
        if (!induced.has_axis(axis_name_x(1, guess))) { n = guess - 1; break; }
    }
    TimeLayout lay(spec, induced, cut, n);
    CondKernel q = marginal_channel(spec, cut);
    Cut tc = cut.complement(spec.node_count);
    std::vector<Axis> x_axes = spec.input_axes();
    std::vector<Axis> xtc_axes = spec.input_axes(tc.members(spec.node_count));

    std::vector<std::size_t> xtc_of(lay.a);
    {
        std::vector<std::size_t> pos;
        for (const Axis& ax : xtc_axes) pos.push_back(std::distance(
            x_axes.begin(),
            std::find_if(x_axes.begin(), x_axes.end(),
                         [&](const Axis& a) { return a.name == ax.name; })));
        AxisGroup g(pos, x_axes);
        std::vector<std::size_t> sizes;
        for (const Axis& a : x_axes) sizes.push_back(a.size);
        for_each_coord(sizes, [&](std::size_t f, const std::vector<std::size_t>& c) {
            xtc_of[f] = g.index_of(c);
        });
    }

    // numerator[x] = sum over cells with M > 0 of M(first k steps margin
    // weight) ... assembled as M(cell) * prod_{l<k} (q/s)^{lambda-1} with the
    // x_k coordinate read off the cell; denominator likewise without the
    // x_k split. Cells differing only beyond step k contribute their mass to
    // the same history, which is exactly the prefix marginal.
    std::vector<double> num(lay.a, 0.0);
    double den = 0.0;
    for_each_coord(induced.sizes(), [&](std::size_t flat, const std::vector<std::size_t>& c) {
        double v = induced.value(flat);
        if (v == 0.0) return;
        double tiltw = 1.0;
        for (int l = 1; l < k; ++l) {
            std::size_t x = lay.x_at[l - 1].index_of(c);
            std::size_t y = lay.y_at[l - 1].index_of(c);
            tiltw *= std::pow(q.value(x, y) / earlier_kernels[l - 1].value(xtc_of[x], y),
                              lambda - 1.0);
        }
        num[lay.x_at[k - 1].index_of(c)] += v * tiltw;
        den += v * tiltw;
    });
    for (double& v : num) v /= den;
    return JointPmf::make(x_axes, num);
}

double log2_tilt_weight_direct(const NetworkSpec& spec, const JointPmf& induced,
                               const Cut& cut, double lambda,
                               const std::vector<CondKernel>& kernels) {
    int n = static_cast<int>(kernels.size());
    TimeLayout lay(spec, induced, cut, n);
    CondKernel q = marginal_channel(spec, cut);
    Cut tc = cut.complement(spec.node_count);
    std::vector<Axis> x_axes = spec.input_axes();
    std::vector<Axis> xtc_axes = spec.input_axes(tc.members(spec.node_count));

    std::vector<std::size_t> xtc_of(lay.a);
    {
        std::vector<std::size_t> pos;
        for (const Axis& ax : xtc_axes) pos.push_back(std::distance(
            x_axes.begin(),
            std::find_if(x_axes.begin(), x_axes.end(),
                         [&](const Axis& a) { return a.name == ax.name; })));
        AxisGroup g(pos, x_axes);
        std::vector<std::size_t> sizes;
        for (const Axis& a : x_axes) sizes.push_back(a.size);
        for_each_coord(sizes, [&](std::size_t f, const std::vector<std::size_t>& c) {
            xtc_of[f] = g.index_of(c);
        });
    }

    double total = 0.0;
    for_each_coord(induced.sizes(), [&](std::size_t flat, const std::vector<std::size_t>& c) {
        double v = induced.value(flat);
        if (v == 0.0) return;
        double w = v;
        for (int l = 1; l <= n; ++l) {
            std::size_t x = lay.x_at[l - 1].index_of(c);
            std::size_t y = lay.y_at[l - 1].index_of(c);
            w *= std::pow(q.value(x, y) / kernels[l - 1].value(xtc_of[x], y), lambda - 1.0);
        }
        total += w;
    });
    return std::log2(total);
}

}  // namespace netinfo
