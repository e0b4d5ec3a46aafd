#include "netinfo/regions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "netinfo/info.hpp"
#include "netinfo/rng.hpp"

namespace netinfo {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// Cut objective I(X_T; Y_{T^c} | X_{T^c}) as a concave function of the joint
// input vector, with analytic gradient. Values internally in nats.
class CutObjective {
public:
    CutObjective(const NetworkSpec& spec, const Cut& cut)
        : input_axes_(spec.input_axes()) {
        CondKernel k = marginal_channel(spec, cut);
        rows_ = k.from_count();
        cols_ = k.to_count();
        q_ = k.rows();

        Cut tc = cut.complement(spec.node_count);
        std::vector<std::string> tc_names;
        for (int i : tc.members(spec.node_count)) tc_names.push_back(axis_name_x(i));
        std::sort(tc_names.begin(), tc_names.end());

        std::vector<std::size_t> tc_pos;
        for (const std::string& nm : tc_names)
            for (std::size_t i = 0; i < input_axes_.size(); ++i)
                if (input_axes_[i].name == nm) tc_pos.push_back(i);
        std::sort(tc_pos.begin(), tc_pos.end());
        AxisGroup g(tc_pos, input_axes_);
        tc_count_ = g.count();

        std::vector<std::size_t> sizes;
        for (const Axis& a : input_axes_) sizes.push_back(a.size);
        xtc_of_.resize(rows_);
        for_each_coord(sizes, [&](std::size_t f, const std::vector<std::size_t>& c) {
            xtc_of_[f] = g.index_of(c);
        });

        row_entropy_.assign(rows_, 0.0);
        for (std::size_t x = 0; x < rows_; ++x)
            for (std::size_t y = 0; y < cols_; ++y) {
                double v = q_[x * cols_ + y];
                if (v > 0.0) row_entropy_[x] -= v * std::log(v);
            }
    }

    std::size_t dim() const { return rows_; }
    const std::vector<Axis>& input_axes() const { return input_axes_; }

    double value_nats(const std::vector<double>& p) const {
        return eval(p, nullptr);
    }
    double value_bits(const std::vector<double>& p) const { return eval(p, nullptr) / kLn2; }
    double value_grad_nats(const std::vector<double>& p, std::vector<double>& grad) const {
        grad.assign(rows_, 0.0);
        return eval(p, &grad);
    }

    JointPmf to_pmf(const std::vector<double>& p) const {
        return JointPmf::make(input_axes_, p);
    }

private:
    double eval(const std::vector<double>& p, std::vector<double>* grad) const {
        std::vector<double> m(tc_count_ * cols_, 0.0);
        std::vector<double> ptc(tc_count_, 0.0);
        for (std::size_t x = 0; x < rows_; ++x) {
            double px = p[x];
            if (px <= 0.0) continue;
            ptc[xtc_of_[x]] += px;
            double* mrow = &m[xtc_of_[x] * cols_];
            const double* qrow = &q_[x * cols_];
            for (std::size_t y = 0; y < cols_; ++y) mrow[y] += px * qrow[y];
        }
        double h_y_given_tc = 0.0;
        for (std::size_t t = 0; t < tc_count_; ++t) {
            if (ptc[t] <= 0.0) continue;
            for (std::size_t y = 0; y < cols_; ++y) {
                double v = m[t * cols_ + y];
                if (v > 0.0) h_y_given_tc -= v * std::log(v / ptc[t]);
            }
        }
        double h_y_given_x = 0.0;
        for (std::size_t x = 0; x < rows_; ++x)
            if (p[x] > 0.0) h_y_given_x += p[x] * row_entropy_[x];

        if (grad) {
            for (std::size_t x = 0; x < rows_; ++x) {
                std::size_t t = xtc_of_[x];
                if (ptc[t] <= 0.0) { (*grad)[x] = 0.0; continue; }
                const double* qrow = &q_[x * cols_];
                const double* mrow = &m[t * cols_];
                double gx = 0.0;
                for (std::size_t y = 0; y < cols_; ++y) {
                    if (qrow[y] <= 0.0) continue;
                    gx += qrow[y] * std::log(qrow[y] * ptc[t] / mrow[y]);
                }
                (*grad)[x] = gx;
            }
        }
        return h_y_given_tc - h_y_given_x;
    }

    std::vector<Axis> input_axes_;
    std::size_t rows_ = 0, cols_ = 0, tc_count_ = 0;
    std::vector<double> q_;
    std::vector<std::size_t> xtc_of_;
    std::vector<double> row_entropy_;
};

void project_to_simplex(std::vector<double>& v) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, theta = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        css += u[i];
        double t = (css - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) theta = t;
    }
    double sum = 0.0;
    for (double& x : v) {
        x = std::max(0.0, x - theta);
        sum += x;
    }
    if (sum <= 0.0) {
        std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(v.size()));
        return;
    }
    for (double& x : v) x /= sum;
}

struct AscentResult {
    std::vector<double> p;
    double value_nats = 0.0;
    bool converged = false;
};

// Projected gradient ascent with Armijo backtracking. The objective and its
// gradient are exact at boundary points (0 log 0 = 0, empty conditioning
// rows contribute nothing), so iterates may sit on simplex faces.
AscentResult projected_gradient_ascent(const CutObjective& obj, std::vector<double> p,
                                       int max_iters) {
    project_to_simplex(p);
    std::vector<double> grad, cand;
    double f = obj.value_grad_nats(p, grad);
    double step = 1.0;
    bool converged = false;
    for (int iter = 0; iter < max_iters; ++iter) {
        bool accepted = false;
        double t = std::min(step * 4.0, 1e4);
        for (int bt = 0; bt < 80 && !accepted; ++bt) {
            cand = p;
            for (std::size_t i = 0; i < cand.size(); ++i) cand[i] += t * grad[i];
            project_to_simplex(cand);
            double dir = 0.0;
            for (std::size_t i = 0; i < cand.size(); ++i) dir += grad[i] * (cand[i] - p[i]);
            if (dir <= 1e-15) { converged = true; break; }
            double fc = obj.value_nats(cand);
            if (fc >= f + 1e-4 * dir) {
                p = cand;
                f = fc;
                step = t;
                accepted = true;
            }
            t *= 0.5;
        }
        if (converged || !accepted) {
            converged = true;
            break;
        }
        f = obj.value_grad_nats(p, grad);
    }
    return {std::move(p), f, converged};
}

bool lexicographically_smaller(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

std::size_t composition_count(int resolution, std::size_t parts, std::size_t cap) {
    // C(resolution + parts - 1, parts - 1) with early exit at cap
    long double c = 1.0L;
    for (std::size_t i = 1; i < parts; ++i) {
        c = c * (resolution + i) / i;
        if (c > static_cast<long double>(cap) * 4) return cap + 1;
    }
    return static_cast<std::size_t>(c + 0.5L);
}

void enumerate_compositions(int remaining, std::size_t slot, std::vector<int>& counts,
                            const std::function<void(const std::vector<int>&)>& emit) {
    if (slot + 1 == counts.size()) {
        counts[slot] = remaining;
        emit(counts);
        return;
    }
    for (int c = 0; c <= remaining; ++c) {
        counts[slot] = c;
        enumerate_compositions(remaining - c, slot + 1, counts, emit);
    }
}

double penalty_bits(const NetworkSpec& spec, const Cut& cut, const JointPmf& p) {
    // H(Y_T | X_I, Y_{T^c}) under p composed with the full channel
    JointPmf joint = compose(p, spec.channel);
    Cut tc = cut.complement(spec.node_count);
    std::vector<std::string> y_t, rest;
    for (int i : cut.members(spec.node_count)) y_t.push_back(axis_name_y(i));
    for (int i = 1; i <= spec.node_count; ++i) rest.push_back(axis_name_x(i));
    for (int i : tc.members(spec.node_count)) rest.push_back(axis_name_y(i));
    if (y_t.empty()) return 0.0;
    return conditional_entropy(joint, y_t, rest);
}

}  // namespace

void validate_rates(const NetworkSpec& spec, const RateTuple& rates) {
    if (static_cast<int>(rates.bits.size()) != spec.node_count)
        throw shape_error("rate tuple must have one entry per node");
    for (int i = 1; i <= spec.node_count; ++i) {
        double r = rates.bits[i - 1];
        if (r < 0.0) throw invalid_probability_error("negative rate");
        if (r > 0.0 && !spec.is_source(i))
            throw invalid_probability_error("nonzero rate at non-source node " +
                                            std::to_string(i));
    }
}

double sum_rates_in(const RateTuple& rates, const Cut& cut) {
    double s = 0.0;
    for (std::size_t i = 0; i < rates.bits.size(); ++i)
        if (cut.contains(static_cast<int>(i) + 1)) s += rates.bits[i];
    return s;
}

std::vector<Cut> enumerate_cuts(const NetworkSpec& spec) {
    std::uint32_t dest_mask = 0;
    for (int d : spec.destinations) dest_mask |= 1u << (d - 1);
    std::vector<Cut> cuts;
    for (std::uint32_t mask = 0; mask < (1u << spec.node_count); ++mask) {
        std::uint32_t tc = ~mask & ((1u << spec.node_count) - 1u);
        if (tc & dest_mask) cuts.push_back(Cut{mask});
    }
    return cuts;
}

double cut_value(const NetworkSpec& spec, const Cut& cut, const JointPmf& p) {
    if (p.axes() != spec.input_axes())
        throw axis_mismatch_error("input distribution must live on the X_I axes");
    CutObjective obj(spec, cut);
    return obj.value_bits(p.values());
}

std::optional<double> grid_oracle_max(const NetworkSpec& spec, const Cut& cut,
                                      int resolution, std::size_t max_points) {
    CutObjective obj(spec, cut);
    std::size_t m = obj.dim();
    if (composition_count(resolution, m, max_points) > max_points) return std::nullopt;
    double best = 0.0;
    std::vector<int> counts(m, 0);
    std::vector<double> p(m, 0.0);
    enumerate_compositions(resolution, 0, counts, [&](const std::vector<int>& c) {
        for (std::size_t i = 0; i < m; ++i)
            p[i] = static_cast<double>(c[i]) / static_cast<double>(resolution);
        best = std::max(best, obj.value_bits(p));
    });
    return best;
}

CutBound max_cut_value(const NetworkSpec& spec, const Cut& cut, InputMode mode,
                       const OptimizerOptions& opts) {
    CutObjective obj(spec, cut);
    std::size_t m = obj.dim();

    CutBound out;
    out.cut = cut;
    out.mode = mode;

    if (cut.mask == 0) {  // empty source side: bound is identically zero
        std::vector<double> uniform(m, 1.0 / static_cast<double>(m));
        out.value_bits = 0.0;
        out.argmax_input = obj.to_pmf(uniform);
        return out;
    }

    CounterRng base(opts.seed);
    double best_nats = -1.0;
    std::vector<double> best_p;
    bool all_converged = true;

    auto consider = [&](std::vector<double> start) {
        AscentResult r = projected_gradient_ascent(obj, std::move(start), opts.max_iters);
        all_converged = all_converged && r.converged;
        if (r.value_nats > best_nats + 1e-9 * kLn2) {
            best_nats = r.value_nats;
            best_p = r.p;
        } else if (r.value_nats > best_nats - 1e-9 * kLn2 &&
                   lexicographically_smaller(r.p, best_p)) {
            best_p = r.p;
        }
    };

    if (mode == InputMode::AllInputs) {
        consider(std::vector<double>(m, 1.0 / static_cast<double>(m)));
        for (int r = 1; r < opts.restarts; ++r) {
            CounterRng rng = base.split(cut.mask).split(static_cast<std::uint64_t>(r));
            consider(rng.next_simplex(m));
        }
        for (const JointPmf& s : opts.extra_starts) {
            if (s.axes() != obj.input_axes())
                throw axis_mismatch_error("warm start has wrong axes");
            consider(s.values());
        }
        out.value_bits = best_nats / kLn2;
        out.argmax_input = obj.to_pmf(best_p);
        out.converged = all_converged;

        if (opts.use_grid_oracle) {
            std::optional<double> oracle =
                grid_oracle_max(spec, cut, opts.grid_resolution, opts.grid_max_points);
            if (oracle) {
                out.oracle_bits = oracle;
                if (*oracle > out.value_bits + opts.oracle_discrepancy_tol)
                    throw error("optimizer missed the grid oracle by " +
                                std::to_string(*oracle - out.value_bits) + " bits");
            }
        }
        return out;
    }

    // ProductInputs: block-coordinate ascent over per-node simplices.
    const std::vector<Axis>& axes = obj.input_axes();
    std::size_t nblocks = axes.size();
    std::vector<std::size_t> bsizes;
    for (const Axis& a : axes) bsizes.push_back(a.size);

    auto joint_of = [&](const std::vector<std::vector<double>>& blocks) {
        std::vector<double> joint(m, 1.0);
        std::vector<std::size_t> sizes = bsizes;
        for_each_coord(sizes, [&](std::size_t f, const std::vector<std::size_t>& c) {
            double v = 1.0;
            for (std::size_t b = 0; b < nblocks; ++b) v *= blocks[b][c[b]];
            joint[f] = v;
        });
        return joint;
    };

    auto run_product_ascent = [&](std::vector<std::vector<double>> blocks) {
        for (auto& b : blocks) {
            project_to_simplex(b);
        }
        std::vector<double> grad(m), joint;
        joint = joint_of(blocks);
        double f = obj.value_grad_nats(joint, grad);
        for (int sweep = 0; sweep < 200; ++sweep) {
            double f_before = f;
            for (std::size_t b = 0; b < nblocks; ++b) {
                if (bsizes[b] <= 1) continue;
                for (int inner = 0; inner < 40; ++inner) {
                    // block gradient: sum joint gradient against the other blocks
                    std::vector<double> bg(bsizes[b], 0.0);
                    std::vector<std::size_t> sizes = bsizes;
                    for_each_coord(sizes, [&](std::size_t fl, const std::vector<std::size_t>& c) {
                        double w = 1.0;
                        for (std::size_t o = 0; o < nblocks; ++o)
                            if (o != b) w *= blocks[o][c[o]];
                        bg[c[b]] += w * grad[fl];
                    });
                    double t = 1.0;
                    bool accepted = false;
                    for (int bt = 0; bt < 50; ++bt) {
                        std::vector<double> cand = blocks[b];
                        for (std::size_t i = 0; i < cand.size(); ++i) cand[i] += t * bg[i];
                        project_to_simplex(cand);
                        double dir = 0.0;
                        for (std::size_t i = 0; i < cand.size(); ++i)
                            dir += bg[i] * (cand[i] - blocks[b][i]);
                        if (dir <= 1e-14) break;
                        std::vector<std::vector<double>> trial = blocks;
                        trial[b] = cand;
                        std::vector<double> tj = joint_of(trial);
                        double ft = obj.value_nats(tj);
                        if (ft >= f + 1e-4 * dir) {
                            blocks[b] = cand;
                            joint = std::move(tj);
                            f = obj.value_grad_nats(joint, grad);
                            accepted = true;
                            break;
                        }
                        t *= 0.5;
                    }
                    if (!accepted) break;
                }
            }
            if (f - f_before < 1e-12) break;
        }
        return std::pair<std::vector<double>, double>(joint, f);
    };

    auto consider_blocks = [&](std::vector<std::vector<double>> blocks) {
        auto [joint, f] = run_product_ascent(std::move(blocks));
        if (f > best_nats + 1e-9 * kLn2) {
            best_nats = f;
            best_p = joint;
        } else if (f > best_nats - 1e-9 * kLn2 && lexicographically_smaller(joint, best_p)) {
            best_p = joint;
        }
    };

    {
        std::vector<std::vector<double>> uniform;
        for (std::size_t b = 0; b < nblocks; ++b)
            uniform.emplace_back(bsizes[b], 1.0 / static_cast<double>(bsizes[b]));
        consider_blocks(uniform);
    }
    for (int r = 1; r < opts.restarts; ++r) {
        CounterRng rng = base.split(0xB10C ^ cut.mask).split(static_cast<std::uint64_t>(r));
        std::vector<std::vector<double>> blocks;
        for (std::size_t b = 0; b < nblocks; ++b) blocks.push_back(rng.next_simplex(bsizes[b]));
        consider_blocks(blocks);
    }
    for (const JointPmf& s : opts.extra_starts) {
        if (s.axes() != obj.input_axes())
            throw axis_mismatch_error("warm start has wrong axes");
        // use the per-node marginals of the provided start
        std::vector<std::vector<double>> blocks;
        for (const Axis& a : axes) {
            JointPmf mg = marginalize(s, {a.name});
            blocks.push_back(mg.values());
        }
        consider_blocks(blocks);
    }

    out.value_bits = best_nats / kLn2;
    out.argmax_input = obj.to_pmf(best_p);
    out.converged = all_converged;
    return out;
}

DmcCapacity dmc_capacity(const std::vector<double>& matrix, std::size_t input_size,
                         std::size_t output_size, double gap_tol) {
    if (matrix.size() != input_size * output_size)
        throw shape_error("channel matrix does not match alphabet sizes");
    for (std::size_t x = 0; x < input_size; ++x) {
        double s = 0.0;
        for (std::size_t y = 0; y < output_size; ++y) {
            if (matrix[x * output_size + y] < 0.0)
                throw negative_mass_error("negative channel entry");
            s += matrix[x * output_size + y];
        }
        if (std::abs(s - 1.0) > kNormalizationTol)
            throw not_normalized_error("channel row not stochastic");
    }

    std::vector<double> p(input_size, 1.0 / static_cast<double>(input_size));
    std::vector<double> m(output_size), d(input_size);
    double capacity = 0.0;
    for (int iter = 0; iter < 200000; ++iter) {
        std::fill(m.begin(), m.end(), 0.0);
        for (std::size_t x = 0; x < input_size; ++x) {
            if (p[x] <= 0.0) continue;
            for (std::size_t y = 0; y < output_size; ++y)
                m[y] += p[x] * matrix[x * output_size + y];
        }
        double lower = 0.0, upper = 0.0;
        for (std::size_t x = 0; x < input_size; ++x) {
            double dx = 0.0;
            for (std::size_t y = 0; y < output_size; ++y) {
                double q = matrix[x * output_size + y];
                if (q > 0.0) dx += q * std::log(q / m[y]);
            }
            d[x] = dx;
            lower += p[x] * dx;
            upper = std::max(upper, dx);
        }
        capacity = lower / kLn2;
        if ((upper - lower) / kLn2 <= gap_tol) break;
        double dmax = *std::max_element(d.begin(), d.end());
        double z = 0.0;
        for (std::size_t x = 0; x < input_size; ++x) {
            p[x] *= std::exp(d[x] - dmax);
            z += p[x];
        }
        for (double& v : p) v /= z;
    }
    return {capacity, std::move(p)};
}

double LinkCapacities::capacity(int from, int to) const {
    for (const Entry& e : entries)
        if (e.from == from && e.to == to) return e.capacity_bits;
    return 0.0;
}

LinkCapacities link_capacities(const LinkChannelTable& links, double gap_tol) {
    LinkCapacities caps;
    for (const LinkChannel& l : links.links) {
        DmcCapacity c = dmc_capacity(l.matrix, l.input_size, l.output_size, gap_tol);
        caps.entries.push_back({l.from, l.to, c.capacity_bits, std::move(c.input)});
    }
    return caps;
}

std::vector<CutBound> rprime_bounds(const LinkCapacities& caps, const NetworkSpec& spec,
                                    const std::vector<Cut>& cuts) {
    std::vector<CutBound> out;
    for (const Cut& cut : cuts) {
        CutBound b;
        b.cut = cut;
        Cut tc = cut.complement(spec.node_count);
        for (int i : cut.members(spec.node_count))
            for (int j : tc.members(spec.node_count)) b.value_bits += caps.capacity(i, j);
        out.push_back(std::move(b));
    }
    return out;
}

std::string region_name(Region r) {
    switch (r) {
        case Region::Rout: return "R_out";
        case Region::RoutStar: return "R_out*";
        case Region::Rin: return "R_in";
        case Region::Rcutset: return "R_cut-set";
        case Region::Rprime: return "R_prime";
    }
    return "?";
}

MembershipReport membership_report(const NetworkSpec& spec, const RateTuple& rates,
                                   Region region, const std::optional<JointPmf>& input,
                                   const OptimizerOptions& opts) {
    validate_rates(spec, rates);
    std::vector<Cut> cuts = enumerate_cuts(spec);

    MembershipReport rep;
    rep.region = region;
    bool optimized = (region == Region::Rout || region == Region::RoutStar);
    rep.boundary_tol = optimized ? 1e-4 : 1e-9;

    if ((region == Region::Rin || region == Region::Rcutset) && !input)
        throw invalid_probability_error(region_name(region) +
                                        " membership needs an input distribution");
    if (region == Region::Rin && input && !is_product_form(*input))
        throw invalid_probability_error("R_in requires a product input distribution");
    if (region == Region::Rprime && !spec.links)
        throw invalid_probability_error("R_prime needs an independent-DMC network");

    std::optional<LinkCapacities> caps;
    if (region == Region::Rprime) caps = link_capacities(*spec.links);

    bool any_negative = false, any_boundary = false;
    for (const Cut& cut : cuts) {
        CutRecord rec;
        rec.cut = cut;
        switch (region) {
            case Region::Rout: {
                CutBound b = max_cut_value(spec, cut, InputMode::AllInputs, opts);
                rec.bound_bits = b.value_bits;
                rec.argmax_input = b.argmax_input;
                break;
            }
            case Region::RoutStar: {
                CutBound b = max_cut_value(spec, cut, InputMode::ProductInputs, opts);
                rec.bound_bits = b.value_bits;
                rec.argmax_input = b.argmax_input;
                break;
            }
            case Region::Rin: {
                rec.penalty_bits = penalty_bits(spec, cut, *input);
                rec.bound_bits = cut_value(spec, cut, *input) - rec.penalty_bits;
                rec.argmax_input = *input;
                break;
            }
            case Region::Rcutset: {
                rec.bound_bits = cut_value(spec, cut, *input);
                rec.argmax_input = *input;
                break;
            }
            case Region::Rprime: {
                Cut tc = cut.complement(spec.node_count);
                for (int i : cut.members(spec.node_count))
                    for (int j : tc.members(spec.node_count))
                        rec.bound_bits += caps->capacity(i, j);
                break;
            }
        }
        double in_rates = sum_rates_in(rates, cut);
        rec.slack_bits = rec.bound_bits - in_rates;
        if (rec.slack_bits < -rep.boundary_tol) {
            rec.verdict = "non-member";
            any_negative = true;
        } else if (in_rates > 0.0 && rec.slack_bits <= rep.boundary_tol) {
            // only an active constraint can sit on the boundary; cuts with no
            // source rate are vacuously satisfied
            rec.verdict = "boundary";
            any_boundary = true;
        } else {
            rec.verdict = "member";
        }
        rep.cuts.push_back(std::move(rec));
    }
    rep.verdict = any_negative ? "non-member" : (any_boundary ? "boundary" : "member");
    return rep;
}

bool is_product_form(const JointPmf& p, double tol) {
    JointPmf prod;
    bool first = true;
    for (const Axis& a : p.axes()) {
        JointPmf mg = marginalize(p, {a.name});
        prod = first ? mg : product(prod, mg);
        first = false;
    }
    return l1_distance(p, prod) <= tol;
}

DominanceReport check_product_dominance(const NetworkSpec& spec, const JointPmf& p_star,
                                        const std::vector<Cut>& cuts, int oracle_resolution,
                                        double tolerance, const OptimizerOptions& opts) {
    if (p_star.axes() != spec.input_axes())
        throw axis_mismatch_error("p_star must live on the X_I axes");
    if (!is_product_form(p_star))
        throw invalid_probability_error("p_star is not in product form");

    DominanceReport rep;
    rep.tolerance = tolerance;
    rep.dominated = true;
    for (const Cut& cut : cuts) {
        OptimizerOptions local = opts;
        local.grid_resolution = oracle_resolution;
        local.extra_starts.push_back(p_star);
        CutBound b = max_cut_value(spec, cut, InputMode::AllInputs, local);
        DominanceRecord rec;
        rec.cut = cut;
        rec.value_at_pstar = cut_value(spec, cut, p_star);
        rec.max_bits = std::max(b.value_bits, b.oracle_bits.value_or(0.0));
        rec.slack_bits = rec.max_bits - rec.value_at_pstar;
        rec.oracle_bits = b.oracle_bits;
        if (rec.slack_bits > tolerance) rep.dominated = false;
        rep.cuts.push_back(std::move(rec));
    }
    return rep;
}

}  // namespace netinfo
