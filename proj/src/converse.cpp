#include "netinfo/converse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "netinfo/info.hpp"
#include "netinfo/sim.hpp"

namespace netinfo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> names_of(const std::vector<Axis>& axes) {
    std::vector<std::string> out;
    for (const Axis& a : axes) out.push_back(a.name);
    return out;
}

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// positions of `target` axes (by name, in target order) inside `parent`
AxisGroup group_by_axes(const JointPmf& parent, const std::vector<Axis>& target) {
    std::vector<std::size_t> pos;
    for (const Axis& a : target) pos.push_back(parent.axis_pos(a.name));
    return AxisGroup(pos, parent.axes());
}

}  // namespace

Prop2Result prop2_bound(const JointPmf& p_uv, const std::string& u_name,
                        const std::string& v_name, const JointPmf& q_v, double lambda) {
    if (lambda <= 1.0) throw invalid_lambda_error("prop2 needs lambda > 1");
    if (p_uv.axes().size() != 2)
        throw shape_error("p_uv must be a two-axis distribution");
    std::size_t upos = p_uv.axis_pos(u_name);
    std::size_t vpos = p_uv.axis_pos(v_name);
    std::size_t w = p_uv.axes()[upos].size;
    if (p_uv.axes()[vpos].size != w)
        throw shape_error("U and V must share one alphabet");
    if (q_v.axes().size() != 1 || q_v.axes()[0].name != v_name || q_v.axes()[0].size != w)
        throw axis_mismatch_error("q_v must live on the V axis");

    JointPmf p_u = marginalize(p_uv, {u_name});
    for (std::size_t u = 0; u < w; ++u)
        if (std::abs(p_u.value(u) - 1.0 / static_cast<double>(w)) > 1e-9)
            throw invalid_probability_error("p_U must be uniform");

    double agree = 0.0;
    AxisGroup gu = group_by_axes(p_uv, {p_uv.axes()[upos]});
    AxisGroup gv = group_by_axes(p_uv, {p_uv.axes()[vpos]});
    for_each_coord(p_uv.sizes(), [&](std::size_t flat, const std::vector<std::size_t>& c) {
        if (gu.index_of(c) == gv.index_of(c)) agree += p_uv.value(flat);
    });
    double alpha = 1.0 - agree;
    if (alpha >= 1.0 - 1e-15) throw invalid_probability_error("alpha must be < 1");
    alpha = std::max(alpha, 0.0);

    Prop2Result res;
    res.alpha = alpha;
    res.log_w_bits = std::log2(static_cast<double>(w));
    res.lhs_bits = renyi_divergence(p_uv, product(p_u, q_v), lambda);
    res.rhs_bits =
        res.log_w_bits + lambda / (lambda - 1.0) * std::log2(1.0 - alpha);
    res.holds = res.lhs_bits >= res.rhs_bits - 1e-9;
    return res;
}

Prop3Result prop3_gap(const JointPmf& p, const std::vector<std::string>& x,
                      const std::vector<std::string>& y, const std::vector<std::string>& z,
                      double lambda) {
    if (lambda <= 1.0 || lambda > 1.25)
        throw invalid_lambda_error("prop3 needs lambda in (1, 5/4]");

    JointPmf pxyz = marginalize(p, cat(cat(std::vector<std::string>(x), y), z));
    JointPmf pz = marginalize(pxyz, z);

    // kernels z -> (x, y): the joint conditional and the product of the
    // per-block conditionals
    CondKernel pk = condition(pxyz, z);
    JointPmf pxz = marginalize(pxyz, cat(std::vector<std::string>(x), z));
    JointPmf pyz = marginalize(pxyz, cat(std::vector<std::string>(y), z));
    CondKernel px_given = condition(pxz, z);
    CondKernel py_given = condition(pyz, z);

    // assemble q(x,y|z) = p(x|z) p(y|z) in pk's column layout
    std::vector<double> rows(pk.from_count() * pk.to_count(), 0.0);
    std::vector<std::uint8_t> defined(pk.from_count(), 1);
    std::vector<std::size_t> to_sizes;
    for (const Axis& a : pk.to_axes()) to_sizes.push_back(a.size);
    AxisGroup gx([&] {
        std::vector<std::size_t> pos;
        for (const Axis& a : px_given.to_axes()) {
            for (std::size_t i = 0; i < pk.to_axes().size(); ++i)
                if (pk.to_axes()[i].name == a.name) pos.push_back(i);
        }
        return pos;
    }(), pk.to_axes());
    AxisGroup gy([&] {
        std::vector<std::size_t> pos;
        for (const Axis& a : py_given.to_axes()) {
            for (std::size_t i = 0; i < pk.to_axes().size(); ++i)
                if (pk.to_axes()[i].name == a.name) pos.push_back(i);
        }
        return pos;
    }(), pk.to_axes());
    for (std::size_t r = 0; r < pk.from_count(); ++r) {
        if (!px_given.row_defined(r) || !py_given.row_defined(r)) {
            defined[r] = 0;
            continue;
        }
        for_each_coord(to_sizes, [&](std::size_t c, const std::vector<std::size_t>& coord) {
            rows[r * pk.to_count() + c] =
                px_given.value(r, gx.index_of(coord)) * py_given.value(r, gy.index_of(coord));
        });
    }
    CondKernel qk = CondKernel::make_partial(pk.from_axes(), pk.to_axes(), std::move(rows),
                                             std::move(defined));

    Prop3Result res;
    res.d_lambda_bits = conditional_renyi_divergence(pk, qk, pz, lambda);
    res.d_one_bits = conditional_renyi_divergence(pk, qk, pz, 1.0);
    double xy = 1.0;
    for (const std::string& nm : x) xy *= static_cast<double>(p.axes()[p.axis_pos(nm)].size);
    for (const std::string& nm : y) xy *= static_cast<double>(p.axes()[p.axis_pos(nm)].size);
    res.remainder_bits = 8.0 * (lambda - 1.0) * std::pow(xy, 5.0);
    res.holds = res.d_lambda_bits <= res.d_one_bits + res.remainder_bits + 1e-9;
    return res;
}

namespace {

struct CutNames {
    std::vector<int> t_nodes, tc_nodes;
    std::vector<std::string> w_all, w_t, w_tc;
    std::vector<std::string> v_td;          // estimates of T-messages at d
    std::vector<std::string> v_ttc;         // pairs in T x T^c
    std::vector<std::string> v_rest;        // pairs outside T x T^c
    std::vector<std::string> x_all_time;    // X_{i,k} for all i, k
    std::vector<std::string> x_t_time, y_t_time;
    std::vector<std::string> x_tc_time, y_tc_time;

    CutNames(const NetworkSpec& spec, const Code& code, const Cut& cut, int d) {
        Cut tc = cut.complement(spec.node_count);
        t_nodes = cut.members(spec.node_count);
        tc_nodes = tc.members(spec.node_count);
        for (int i = 1; i <= spec.node_count; ++i) {
            w_all.push_back(axis_name_w(i));
            (cut.contains(i) ? w_t : w_tc).push_back(axis_name_w(i));
            for (int k = 1; k <= code.n; ++k) {
                x_all_time.push_back(axis_name_x(i, k));
                (cut.contains(i) ? x_t_time : x_tc_time).push_back(axis_name_x(i, k));
                (cut.contains(i) ? y_t_time : y_tc_time).push_back(axis_name_y(i, k));
            }
        }
        for (int j : spec.destinations)
            for (int i : spec.sources) {
                std::string nm = axis_name_what(i, j);
                if (cut.contains(i) && tc.contains(j)) {
                    v_ttc.push_back(nm);
                    if (j == d) v_td.push_back(nm);
                } else {
                    v_rest.push_back(nm);
                }
            }
    }

};

}  // namespace

SimulatingDistribution build_simulating_distribution(const NetworkSpec& spec, const Code& code,
                                                     const Cut& cut, double lambda,
                                                     std::size_t cell_budget) {
    validate_code(spec, code);
    JointPmf p_full = induced_distribution(spec, code, std::nullopt, cell_budget);
    JointPmf m = induced_distribution(spec, code, cut, cell_budget);
    TiltedSequence tilt = build_tilted_sequence(spec, m, cut, lambda, code.n);

    int n = code.n;
    Cut tc = cut.complement(spec.node_count);
    CutNames nm(spec, code, cut, tc.members(spec.node_count).front());

    // T-side factor: true joint of (X_T^n, Y_T^n, What outside T x T^c)
    std::vector<std::string> t_side;
    for (int i : nm.t_nodes)
        for (int k = 1; k <= n; ++k) {
            t_side.push_back(axis_name_x(i, k));
            t_side.push_back(axis_name_y(i, k));
        }
    t_side = cat(t_side, nm.v_rest);
    JointPmf a_part = marginalize(p_full, t_side);

    // T^c-side process: messages, encoder-driven inputs, tilted outputs, and
    // the true decoders for the T x T^c estimates.
    std::vector<Axis> r_axes;
    for (int i = 1; i <= spec.node_count; ++i)
        r_axes.push_back({axis_name_w(i), code.message_sizes[i - 1]});
    for (int i : nm.tc_nodes)
        for (int k = 1; k <= n; ++k) {
            r_axes.push_back({axis_name_x(i, k), spec.input_sizes[i - 1]});
            r_axes.push_back({axis_name_y(i, k), spec.output_sizes[i - 1]});
        }
    for (const std::string& v : nm.v_ttc) {
        // estimate alphabet = message alphabet of the decoded source
        int src = std::stoi(v.substr(1, v.find('d') - 1));
        r_axes.push_back({v, code.message_sizes[src - 1]});
    }
    PmfBuilder rb(r_axes);

    std::vector<Axis> xtc_axes = spec.input_axes(nm.tc_nodes);
    std::vector<Axis> ytc_axes = spec.output_axes(nm.tc_nodes);
    std::size_t ytc_count = cell_count(ytc_axes);
    // per-column output symbols per tc node
    std::vector<std::vector<std::uint32_t>> col_y(ytc_count,
                                                  std::vector<std::uint32_t>(nm.tc_nodes.size()));
    {
        std::vector<std::size_t> sizes;
        for (const Axis& a : ytc_axes) sizes.push_back(a.size);
        std::vector<std::size_t> node_slot(ytc_axes.size());
        for (std::size_t s = 0; s < ytc_axes.size(); ++s)
            for (std::size_t t = 0; t < nm.tc_nodes.size(); ++t)
                if (ytc_axes[s].name == axis_name_y(nm.tc_nodes[t])) node_slot[s] = t;
        for_each_coord(sizes, [&](std::size_t col, const std::vector<std::size_t>& c) {
            for (std::size_t s = 0; s < sizes.size(); ++s)
                col_y[col][node_slot[s]] = static_cast<std::uint32_t>(c[s]);
        });
    }
    // x_{T^c} flat index strides per tc node (canonical x_tc axis order)
    std::vector<std::size_t> xtc_stride(nm.tc_nodes.size(), 0);
    {
        std::vector<std::size_t> strides(xtc_axes.size(), 1);
        for (std::size_t i = xtc_axes.size(); i-- > 1;)
            strides[i - 1] = strides[i] * xtc_axes[i].size;
        for (std::size_t s = 0; s < xtc_axes.size(); ++s)
            for (std::size_t t = 0; t < nm.tc_nodes.size(); ++t)
                if (xtc_axes[s].name == axis_name_x(nm.tc_nodes[t])) xtc_stride[t] = strides[s];
    }

    std::size_t tc_n = nm.tc_nodes.size();
    std::vector<std::size_t> w_stride(spec.node_count);
    for (int i = 1; i <= spec.node_count; ++i)
        w_stride[i - 1] = rb.stride(rb.axis_pos(axis_name_w(i)));
    std::vector<std::size_t> x_stride(tc_n * n), y_stride(tc_n * n);
    for (std::size_t t = 0; t < tc_n; ++t)
        for (int k = 1; k <= n; ++k) {
            x_stride[(k - 1) * tc_n + t] =
                rb.stride(rb.axis_pos(axis_name_x(nm.tc_nodes[t], k)));
            y_stride[(k - 1) * tc_n + t] =
                rb.stride(rb.axis_pos(axis_name_y(nm.tc_nodes[t], k)));
        }
    struct VExit { int source, sink; std::size_t stride; std::size_t tc_slot; };
    std::vector<VExit> vexits;
    for (const std::string& v : nm.v_ttc) {
        int src = std::stoi(v.substr(1, v.find('d') - 1));
        int snk = std::stoi(v.substr(v.find('d') + 1));
        std::size_t slot = 0;
        for (std::size_t t = 0; t < tc_n; ++t)
            if (nm.tc_nodes[t] == snk) slot = t;
        vexits.push_back({src, snk, rb.stride(rb.axis_pos(v)), slot});
    }

    std::vector<std::size_t> hist(tc_n, 0);

    // DFS over the tilted T^c trajectory tree for a fixed message tuple
    std::function<void(int, double, std::size_t, std::vector<std::size_t>&,
                       const std::vector<std::size_t>&)>
        walk = [&](int k, double prob, std::size_t flat, std::vector<std::size_t>& h,
                   const std::vector<std::size_t>& w) {
            if (k == n) {
                std::size_t f = flat;
                for (const VExit& ve : vexits) {
                    const Code::Decoder& dec = code.decoder(ve.source, ve.sink);
                    std::size_t yn = dec.table.size() / code.message_sizes[ve.sink - 1];
                    std::uint32_t est = dec.table[w[ve.sink - 1] * yn + h[ve.tc_slot]];
                    f += est * ve.stride;
                }
                rb.add(f, prob);
                return;
            }
            std::size_t row = 0;
            std::size_t fbase = flat;
            for (std::size_t t = 0; t < tc_n; ++t) {
                int node = nm.tc_nodes[t];
                std::uint32_t x = code.encode(node, k + 1, w[node - 1], h[t]);
                row += x * xtc_stride[t];
                fbase += x * x_stride[static_cast<std::size_t>(k) * tc_n + t];
            }
            const CondKernel& ker = tilt.tilted_kernel[k];
            std::vector<std::size_t> saved = h;
            for (std::size_t col = 0; col < ytc_count; ++col) {
                double q = ker.value(row, col);
                if (q <= 0.0) continue;
                std::size_t f = fbase;
                for (std::size_t t = 0; t < tc_n; ++t) {
                    std::uint32_t y = col_y[col][t];
                    h[t] = saved[t] * spec.output_sizes[nm.tc_nodes[t] - 1] + y;
                    f += y * y_stride[static_cast<std::size_t>(k) * tc_n + t];
                }
                walk(k + 1, prob * q, f, h, w);
            }
            h = saved;
        };

    double pw = 1.0;
    for (std::size_t msz : code.message_sizes) pw /= static_cast<double>(msz);
    {
        std::vector<std::size_t> w(code.message_sizes.size(), 0);
        std::size_t total = 1;
        for (std::size_t msz : code.message_sizes) total *= msz;
        for (std::size_t it = 0; it < total; ++it) {
            std::size_t flat = 0;
            for (int i = 0; i < spec.node_count; ++i) flat += w[i] * w_stride[i];
            std::fill(hist.begin(), hist.end(), 0);
            walk(0, pw, flat, hist, w);
            for (std::size_t i = w.size(); i-- > 0;) {
                if (++w[i] < code.message_sizes[i]) break;
                w[i] = 0;
            }
        }
    }

    SimulatingDistribution out;
    out.tilt = std::move(tilt);
    out.substituted_kernel_rows = out.tilt.substituted_kernel_rows;
    JointPmf r_part = rb.finish();
    out.s = product(a_part, r_part);
    return out;
}

double Lemma1Report::worst() const {
    return std::max({dev_messages, dev_decoder_kernel, dev_markov, dev_channel_kernel,
                     dev_input_kernel, dev_lambda_one});
}

namespace {

// max row-L1 between two kernels over rows whose conditioning mass exceeds
// the threshold under both laws; rows s-supported but p-null are counted,
// not compared.
double kernel_row_l1(const CondKernel& pk, const JointPmf& p_mass, const CondKernel& sk,
                     const JointPmf& s_mass, std::size_t* unmatched) {
    double worst = 0.0;
    for (std::size_t r = 0; r < pk.from_count(); ++r) {
        bool p_ok = p_mass.value(r) > 1e-12 && pk.row_defined(r);
        bool s_ok = s_mass.value(r) > 1e-12 && sk.row_defined(r);
        if (s_ok && !p_ok) {
            if (unmatched) ++*unmatched;
            continue;
        }
        if (!p_ok || !s_ok) continue;
        double d = 0.0;
        for (std::size_t c = 0; c < pk.to_count(); ++c)
            d += std::abs(pk.value(r, c) - sk.value(r, c));
        worst = std::max(worst, d);
    }
    return worst;
}

}  // namespace

Lemma1Report verify_lemma1(const NetworkSpec& spec, const Code& code,
                           const JointPmf& induced_full, const SimulatingDistribution& sim,
                           const Cut& cut, double lambda) {
    Lemma1Report rep;
    int n = code.n;
    Cut tc = cut.complement(spec.node_count);
    CutNames nm(spec, code, cut, tc.members(spec.node_count).front());
    const JointPmf& s = sim.s;

    // (i) message marginal preserved
    rep.dev_messages = l1_distance(marginalize(s, nm.w_all), marginalize(induced_full, nm.w_all));

    // (ii) decoder kernel for the T x T^c estimates
    if (!nm.v_ttc.empty()) {
        std::vector<std::string> given = cat(std::vector<std::string>(nm.w_tc), nm.y_tc_time);
        std::vector<std::string> all = cat(std::vector<std::string>(given), nm.v_ttc);
        JointPmf pm = marginalize(induced_full, all);
        JointPmf sm = marginalize(s, all);
        rep.dev_decoder_kernel =
            kernel_row_l1(condition(pm, given), marginalize(pm, given), condition(sm, given),
                          marginalize(sm, given), &rep.unmatched_rows);
    }

    // (iii) per-slot Markov chains under s
    for (int k = 1; k <= n; ++k) {
        std::vector<std::string> past = nm.w_all;
        for (int i : nm.tc_nodes)
            for (int l = 1; l < k; ++l) {
                past.push_back(axis_name_x(i, l));
                past.push_back(axis_name_y(i, l));
            }
        std::vector<std::string> xk, yk;
        for (int i : nm.tc_nodes) {
            xk.push_back(axis_name_x(i, k));
            yk.push_back(axis_name_y(i, k));
        }
        rep.dev_markov = std::max(rep.dev_markov, markov_residual(s, past, xk, yk));
    }

    // (iv) per-time channel kernel equals the tilted kernel
    for (int k = 1; k <= n; ++k) {
        std::vector<std::string> xk, yk;
        for (int i : nm.tc_nodes) {
            xk.push_back(axis_name_x(i, k));
            yk.push_back(axis_name_y(i, k));
        }
        JointPmf joint = marginalize(s, cat(std::vector<std::string>(xk), yk));
        CondKernel got = condition(joint, xk);
        JointPmf mass = marginalize(joint, xk);
        const CondKernel& want = sim.tilt.tilted_kernel[k - 1];
        for (std::size_t r = 0; r < got.from_count(); ++r) {
            if (mass.value(r) <= 1e-12 || !got.row_defined(r)) continue;
            double d = 0.0;
            for (std::size_t c = 0; c < got.to_count(); ++c)
                d += std::abs(got.value(r, c) - want.value(r, c));
            rep.dev_channel_kernel = std::max(rep.dev_channel_kernel, d);
        }
    }

    // (v) input conditionals: p given the full past equals s given the
    // T^c past
    for (int k = 1; k <= n; ++k) {
        std::vector<std::string> xk;
        for (int i : nm.tc_nodes) xk.push_back(axis_name_x(i, k));

        std::vector<std::string> p_given = nm.w_all;
        for (int i = 1; i <= spec.node_count; ++i)
            for (int l = 1; l < k; ++l) p_given.push_back(axis_name_x(i, l));
        for (int i : nm.tc_nodes)
            for (int l = 1; l < k; ++l) p_given.push_back(axis_name_y(i, l));

        std::vector<std::string> s_given = nm.w_tc;
        for (int i : nm.tc_nodes)
            for (int l = 1; l < k; ++l) {
                s_given.push_back(axis_name_x(i, l));
                s_given.push_back(axis_name_y(i, l));
            }

        JointPmf pm = marginalize(induced_full, cat(std::vector<std::string>(p_given), xk));
        JointPmf sm = marginalize(s, cat(std::vector<std::string>(s_given), xk));
        CondKernel pk = condition(pm, p_given);
        CondKernel sk = condition(sm, s_given);
        JointPmf p_mass = marginalize(pm, p_given);
        JointPmf s_mass = marginalize(sm, s_given);

        // map p-rows onto s-rows by dropping the T-side coordinates
        std::vector<std::size_t> from_sizes;
        for (const Axis& a : pk.from_axes()) from_sizes.push_back(a.size);
        std::vector<std::size_t> s_pos;
        for (const Axis& a : sk.from_axes()) {
            for (std::size_t i = 0; i < pk.from_axes().size(); ++i)
                if (pk.from_axes()[i].name == a.name) s_pos.push_back(i);
        }
        AxisGroup to_s(s_pos, pk.from_axes());
        for_each_coord(from_sizes, [&](std::size_t r, const std::vector<std::size_t>& coord) {
            if (p_mass.value(r) <= 1e-12 || !pk.row_defined(r)) return;
            std::size_t sr = to_s.index_of(coord);
            if (s_mass.value(sr) <= 1e-12 || !sk.row_defined(sr)) {
                ++rep.unmatched_rows;
                return;
            }
            double d = 0.0;
            for (std::size_t c = 0; c < pk.to_count(); ++c)
                d += std::abs(pk.value(r, c) - sk.value(sr, c));
            rep.dev_input_kernel = std::max(rep.dev_input_kernel, d);
        });
    }

    // lambda = 1: the tilted per-time joints reproduce the induced ones
    if (lambda == 1.0) {
        JointPmf m = induced_distribution(spec, code, cut);
        for (int k = 1; k <= n; ++k) {
            std::vector<std::string> keep;
            for (int i = 1; i <= spec.node_count; ++i) keep.push_back(axis_name_x(i, k));
            for (int i : nm.tc_nodes) keep.push_back(axis_name_y(i, k));
            JointPmf induced_k = marginalize(m, keep);
            const JointPmf& tilted_k = sim.tilt.per_time_joint[k - 1];
            double d = 0.0;
            for (std::size_t i = 0; i < induced_k.size(); ++i)
                d += std::abs(induced_k.value(i) - tilted_k.value(i));
            rep.dev_lambda_one = std::max(rep.dev_lambda_one, d);
        }
    }
    return rep;
}

LambdaSchedule lambda_schedule(int n) {
    if (n < 1) throw shape_error("blocklength must be positive");
    LambdaSchedule out;
    out.lambda = 1.0 + 1.0 / std::sqrt(static_cast<double>(n));
    out.prop3_applicable = n >= 16;
    return out;
}

Certificate single_letter_certificate(const NetworkSpec& spec, const Code& code,
                                      const Cut& cut, int d, double lambda, double eps_bar,
                                      std::size_t cell_budget) {
    if (lambda <= 1.0) throw invalid_lambda_error("certificate needs lambda > 1");
    Cut tc = cut.complement(spec.node_count);
    if (!tc.contains(d) || !spec.is_destination(d))
        throw shape_error("d must be a destination in T^c");
    if (eps_bar < 0.0 || eps_bar >= 1.0)
        throw invalid_probability_error("eps_bar must lie in [0, 1)");

    validate_code(spec, code);
    int n = code.n;
    JointPmf p_full = induced_distribution(spec, code, std::nullopt, cell_budget);
    JointPmf m = induced_distribution(spec, code, cut, cell_budget);
    SimulatingDistribution sim = build_simulating_distribution(spec, code, cut, lambda,
                                                               cell_budget);
    const TiltedSequence& tilt = sim.tilt;
    CutNames nm(spec, code, cut, d);

    Certificate cert;
    cert.cut = cut;
    cert.d = d;
    cert.lambda = lambda;
    cert.n = n;
    cert.eps_bar = eps_bar;

    // exact alpha = Pr{W_T != What_{T x {d}}}
    {
        std::vector<std::string> wt_v = cat(std::vector<std::string>(nm.w_t), nm.v_td);
        JointPmf mw = marginalize(p_full, wt_v);
        double agree = 0.0;
        std::vector<std::pair<AxisGroup, AxisGroup>> pairs;
        for (const std::string& v : nm.v_td) {
            int src = std::stoi(v.substr(1, v.find('d') - 1));
            pairs.emplace_back(group_by_axes(mw, {{axis_name_w(src),
                                                   code.message_sizes[src - 1]}}),
                               group_by_axes(mw, {{v, code.message_sizes[src - 1]}}));
        }
        for_each_coord(mw.sizes(), [&](std::size_t flat, const std::vector<std::size_t>& c) {
            for (const auto& [gw, gv] : pairs)
                if (gw.index_of(c) != gv.index_of(c)) return;
            agree += mw.value(flat);
        });
        cert.alpha = std::max(0.0, 1.0 - agree);
    }
    if (cert.alpha > eps_bar + 1e-12)
        throw invalid_probability_error("eps_bar is below the exact error of the pair");

    double sum_rates = 0.0;
    for (int i : nm.t_nodes) sum_rates += code.rates.bits[i - 1];
    cert.rate_bound_bits =
        n * sum_rates + lambda / (lambda - 1.0) * std::log2(1.0 - eps_bar);

    std::vector<Certificate::Step>& chain = cert.chain;
    chain.push_back({"rate_bound", cert.rate_bound_bits});

    // lhs and the two message/output DPI steps
    JointPmf p_wt = marginalize(p_full, nm.w_t);
    double c1 = renyi_divergence(marginalize(p_full, cat(std::vector<std::string>(nm.w_t), nm.v_td)),
                                 product(p_wt, marginalize(sim.s, nm.v_td)), lambda);
    cert.lhs_bits = c1;
    chain.push_back({"lhs", c1});

    double c2 = renyi_divergence(
        marginalize(p_full, cat(std::vector<std::string>(nm.w_all), nm.v_td)),
        product(p_wt, marginalize(sim.s, cat(std::vector<std::string>(nm.w_tc), nm.v_td))),
        lambda);
    chain.push_back({"dpi_messages", c2});

    std::vector<std::string> wyv =
        cat(cat(std::vector<std::string>(nm.w_all), nm.y_tc_time), nm.v_td);
    double c3 = renyi_divergence(
        marginalize(p_full, wyv),
        product(p_wt, marginalize(sim.s, cat(cat(std::vector<std::string>(nm.w_tc),
                                                 nm.y_tc_time),
                                             nm.v_td))),
        lambda);
    chain.push_back({"dpi_outputs", c3});

    // full-input DPI step: reference measure assembled factor by factor
    double c4;
    {
        std::vector<std::string> big_names =
            cat(cat(cat(std::vector<std::string>(nm.w_all), nm.x_all_time), nm.y_tc_time),
                nm.v_td);
        JointPmf big = marginalize(p_full, big_names);

        // per-step conditional of the T-side inputs given everything earlier
        std::vector<CondKernel> kt;
        std::vector<AxisGroup> kt_row, kt_col;
        if (!nm.t_nodes.empty()) {
            for (int k = 1; k <= n; ++k) {
                std::vector<std::string> target;
                for (int i : nm.t_nodes) target.push_back(axis_name_x(i, k));
                std::vector<std::string> given = nm.w_all;
                for (int i = 1; i <= spec.node_count; ++i)
                    for (int l = 1; l < k; ++l) given.push_back(axis_name_x(i, l));
                for (int i : nm.tc_nodes) {
                    for (int l = 1; l < k; ++l) given.push_back(axis_name_y(i, l));
                    given.push_back(axis_name_x(i, k));
                }
                JointPmf joint = marginalize(p_full, cat(std::vector<std::string>(given), target));
                CondKernel ker = condition(joint, given);
                kt_row.push_back(group_by_axes(big, ker.from_axes()));
                kt_col.push_back(group_by_axes(big, ker.to_axes()));
                kt.push_back(std::move(ker));
            }
        }

        // groups for the tilted kernels and encoder/decoder lookups
        std::vector<Axis> xtc_axes = spec.input_axes(nm.tc_nodes);
        std::vector<Axis> ytc_axes = spec.output_axes(nm.tc_nodes);
        std::vector<AxisGroup> gx_tc, gy_tc;
        for (int k = 1; k <= n; ++k) {
            std::vector<Axis> xa, ya;
            for (const Axis& a : xtc_axes) xa.push_back({a.name + "k" + std::to_string(k), a.size});
            for (const Axis& a : ytc_axes) ya.push_back({a.name + "k" + std::to_string(k), a.size});
            gx_tc.push_back(group_by_axes(big, xa));
            gy_tc.push_back(group_by_axes(big, ya));
        }
        // per-node coordinate positions for histories and messages
        std::vector<std::size_t> wpos(spec.node_count);
        for (int i = 1; i <= spec.node_count; ++i) wpos[i - 1] = big.axis_pos(axis_name_w(i));
        std::vector<std::vector<std::size_t>> xpos(spec.node_count), ypos(spec.node_count);
        for (int i : nm.tc_nodes) {
            xpos[i - 1].resize(n);
            ypos[i - 1].resize(n);
            for (int k = 1; k <= n; ++k) {
                xpos[i - 1][k - 1] = big.axis_pos(axis_name_x(i, k));
                ypos[i - 1][k - 1] = big.axis_pos(axis_name_y(i, k));
            }
        }
        std::vector<std::size_t> vpos;
        std::vector<int> vsrc;
        for (const std::string& v : nm.v_td) {
            vpos.push_back(big.axis_pos(v));
            vsrc.push_back(std::stoi(v.substr(1, v.find('d') - 1)));
        }

        double pw = 1.0;
        for (std::size_t msz : code.message_sizes) pw /= static_cast<double>(msz);

        double renyi_sum = 0.0;
        bool support_violation = false;
        for_each_coord(big.sizes(), [&](std::size_t flat, const std::vector<std::size_t>& c) {
            double pv = big.value(flat);
            if (pv == 0.0) return;
            double r = pw;
            // encoder indicators and tilted kernels along the T^c side
            for (int k = 1; k <= n && r > 0.0; ++k) {
                for (int i : nm.tc_nodes) {
                    std::size_t h = 0;
                    for (int l = 1; l < k; ++l)
                        h = h * spec.output_sizes[i - 1] + c[ypos[i - 1][l - 1]];
                    std::uint32_t x = code.encode(i, k, c[wpos[i - 1]], h);
                    if (x != c[xpos[i - 1][k - 1]]) { r = 0.0; break; }
                }
                if (r == 0.0) break;
                r *= tilt.tilted_kernel[k - 1].value(gx_tc[k - 1].index_of(c),
                                                     gy_tc[k - 1].index_of(c));
                if (!nm.t_nodes.empty()) {
                    std::size_t row = kt_row[k - 1].index_of(c);
                    if (!kt[k - 1].row_defined(row)) { r = 0.0; break; }
                    r *= kt[k - 1].value(row, kt_col[k - 1].index_of(c));
                }
            }
            // decoder indicators for the estimates at d
            if (r > 0.0) {
                for (std::size_t vi = 0; vi < vpos.size(); ++vi) {
                    const Code::Decoder& dec = code.decoder(vsrc[vi], d);
                    std::size_t h = 0;
                    for (int l = 1; l <= n; ++l)
                        h = h * spec.output_sizes[d - 1] + c[ypos[d - 1][l - 1]];
                    std::size_t yn = dec.table.size() / code.message_sizes[d - 1];
                    if (dec.table[c[wpos[d - 1]] * yn + h] != c[vpos[vi]]) { r = 0.0; break; }
                }
            }
            if (r <= 0.0) {
                support_violation = true;
                return;
            }
            renyi_sum += std::pow(pv, lambda) / std::pow(r, lambda - 1.0);
        });
        c4 = support_violation ? kInf : std::log2(renyi_sum) / (lambda - 1.0);
    }
    chain.push_back({"dpi_inputs", c4});

    double c5 = tilt.single_letter_sum_bits();
    chain.push_back({"single_letter_sum", c5});
    double c5_direct =
        log2_tilt_weight_direct(spec, m, cut, lambda, tilt.tilted_kernel) / (lambda - 1.0);
    chain.push_back({"single_letter_sum_direct", c5_direct});

    // per-letter sum from the stored joints, and the time-shared total
    std::vector<std::string> x_names = names_of(spec.input_axes());
    std::vector<std::string> xtc_names;
    for (const Axis& a : spec.input_axes(nm.tc_nodes)) xtc_names.push_back(a.name);
    auto joint_divergence = [&](const JointPmf& joint) {
        CondKernel pk = condition(joint, x_names);
        std::vector<std::string> xy = xtc_names;
        for (const Axis& a : spec.output_axes(nm.tc_nodes)) xy.push_back(a.name);
        CondKernel qk = condition(marginalize(joint, xy), xtc_names).lift(spec.input_axes());
        JointPmf r = marginalize(joint, x_names);
        return conditional_renyi_divergence(pk, qk, r, lambda);
    };
    double c6 = 0.0;
    for (int k = 1; k <= n; ++k) c6 += joint_divergence(tilt.per_time_joint[k - 1]);
    chain.push_back({"per_letter_sum", c6});
    double c7 = n * joint_divergence(tilt.aggregate_joint);
    chain.push_back({"time_shared_total", c7});

    // tilt identity: the per-letter inputs recomputed directly
    for (int k = 1; k <= n; ++k) {
        JointPmf direct = tilted_input_direct(spec, m, cut, lambda, k, tilt.tilted_kernel);
        cert.tilt_identity_l1 = std::max(
            cert.tilt_identity_l1, l1_distance(direct, tilt.per_time_input[k - 1]));
    }

    cert.slacks.push_back({"lhs_minus_rate_bound", c1 - cert.rate_bound_bits});
    cert.slacks.push_back({"dpi_messages", c2 - c1});
    cert.slacks.push_back({"dpi_outputs", c3 - c2});
    cert.slacks.push_back({"dpi_inputs", c4 - c3});
    cert.slacks.push_back({"jensen_time_share", c7 - c6});
    double min_slack = kInf;
    for (const Certificate::Step& s : cert.slacks) min_slack = std::min(min_slack, s.bits);
    cert.min_inequality_slack_bits = min_slack;

    double scale = std::max(1.0, std::abs(c5));
    cert.max_equality_dev_bits =
        std::max({std::abs(c4 - c5), std::abs(c5_direct - c5) / scale, std::abs(c6 - c5)});
    return cert;
}

}  // namespace netinfo
