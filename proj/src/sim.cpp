#include "netinfo/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "netinfo/rng.hpp"
#include "trajectory.hpp"

namespace netinfo {

std::string axis_name_w(int node) { return "W" + std::to_string(node); }
std::string axis_name_what(int source, int sink) {
    return "V" + std::to_string(source) + "d" + std::to_string(sink);
}

JointPmf induced_distribution(const NetworkSpec& spec, const Code& code,
                              const std::optional<Cut>& marginal_cut,
                              std::size_t cell_budget, std::size_t trajectory_budget) {
    validate_code(spec, code);
    int n = code.n;
    int N = spec.node_count;

    std::vector<Axis> axes;
    bool full = !marginal_cut.has_value();
    std::vector<bool> keep_y(N + 1, true);
    if (!full) {
        Cut tc = marginal_cut->complement(N);
        for (int i = 1; i <= N; ++i) keep_y[i] = tc.contains(i);
    }
    if (full) {
        if (code.any_decoder_can_fail())
            throw invalid_probability_error(
                "induced joint needs total decoders (no failure sentinel)");
        for (int i = 1; i <= N; ++i) axes.push_back({axis_name_w(i), code.message_sizes[i - 1]});
        for (int j : spec.destinations)
            for (int i : spec.sources)
                axes.push_back({axis_name_what(i, j), code.message_sizes[i - 1]});
    }
    for (int i = 1; i <= N; ++i)
        for (int k = 1; k <= n; ++k) {
            axes.push_back({axis_name_x(i, k), spec.input_sizes[i - 1]});
            if (keep_y[i]) axes.push_back({axis_name_y(i, k), spec.output_sizes[i - 1]});
        }
    if (cell_count(axes) > cell_budget)
        throw budget_error("induced joint exceeds the cell budget");

    PmfBuilder b(axes);
    // strides by (node, time)
    std::vector<std::size_t> wx(static_cast<std::size_t>(N) * n), wy(wx.size());
    std::vector<std::size_t> ws(N, 0), vs;
    for (int i = 1; i <= N; ++i)
        for (int k = 1; k <= n; ++k) {
            wx[(k - 1) * N + (i - 1)] = b.stride(b.axis_pos(axis_name_x(i, k)));
            if (keep_y[i]) wy[(k - 1) * N + (i - 1)] = b.stride(b.axis_pos(axis_name_y(i, k)));
        }
    struct Pair { int source, sink; std::size_t stride; };
    std::vector<Pair> pairs;
    if (full) {
        for (int i = 1; i <= N; ++i) ws[i - 1] = b.stride(b.axis_pos(axis_name_w(i)));
        for (int j : spec.destinations)
            for (int i : spec.sources)
                pairs.push_back({i, j, b.stride(b.axis_pos(axis_name_what(i, j)))});
    }

    detail::ChannelWalk cw(spec);
    std::size_t budget = trajectory_budget;
    detail::for_each_message_tuple(code.message_sizes, [&](const std::vector<std::size_t>& w,
                                                           double pw) {
        std::size_t wbase = 0;
        if (full)
            for (int i = 0; i < N; ++i) wbase += w[i] * ws[i];
        auto leaf = [&](double prob, const std::uint32_t* xs, const std::uint32_t* ys,
                        const std::size_t* hist) {
            std::size_t flat = wbase;
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < N; ++i) {
                    flat += xs[k * N + i] * wx[static_cast<std::size_t>(k) * N + i];
                    if (keep_y[i + 1]) flat += ys[k * N + i] * wy[static_cast<std::size_t>(k) * N + i];
                }
            if (full)
                for (const Pair& pr : pairs) {
                    const Code::Decoder& d = code.decoder(pr.source, pr.sink);
                    std::size_t yn = d.table.size() / code.message_sizes[pr.sink - 1];
                    std::uint32_t est = d.table[w[pr.sink - 1] * yn + hist[pr.sink - 1]];
                    flat += est * pr.stride;
                }
            b.add(flat, pw * prob);
        };
        detail::walk_trajectories(spec, code, cw, w, leaf, &budget);
    });
    return b.finish();
}

double exact_error_probability(const NetworkSpec& spec, const Code& code,
                               std::size_t trajectory_budget) {
    validate_code(spec, code);
    detail::ChannelWalk cw(spec);
    struct DecRef { int source, sink; const Code::Decoder* dec; std::size_t yn; };
    std::vector<DecRef> decs;
    for (int j : spec.destinations)
        for (int i : spec.sources) {
            const Code::Decoder& d = code.decoder(i, j);
            decs.push_back({i, j, &d, d.table.size() / code.message_sizes[j - 1]});
        }

    double error = 0.0;
    std::size_t budget = trajectory_budget;
    detail::for_each_message_tuple(code.message_sizes, [&](const std::vector<std::size_t>& w,
                                                           double pw) {
        auto leaf = [&](double prob, const std::uint32_t*, const std::uint32_t*,
                        const std::size_t* hist) {
            for (const DecRef& d : decs) {
                std::uint32_t est = d.dec->table[w[d.sink - 1] * d.yn + hist[d.sink - 1]];
                if (est != w[d.source - 1]) {
                    error += pw * prob;
                    return;
                }
            }
        };
        detail::walk_trajectories(spec, code, cw, w, leaf, &budget);
    });
    return error;
}

double exact_enumeration_cost(const NetworkSpec& spec, const Code& code) {
    detail::ChannelWalk cw(spec);
    double total = 1.0;
    for (std::size_t m : code.message_sizes) total *= static_cast<double>(m);
    for (int k = 0; k < code.n; ++k) total *= static_cast<double>(cw.max_row_support);
    return total;
}

ErrorEstimate monte_carlo_error(const NetworkSpec& spec, const Code& code,
                                std::uint64_t trials, std::uint64_t seed) {
    validate_code(spec, code);
    if (trials < 1) throw shape_error("need at least one trial");
    int N = spec.node_count;
    int n = code.n;
    detail::ChannelWalk cw(spec);

    CounterRng base(seed);
    std::uint64_t errors = 0;
    std::vector<std::size_t> w(N), hist(N);
    for (std::uint64_t t = 0; t < trials; ++t) {
        CounterRng rng = base.split(t);
        for (int i = 0; i < N; ++i) w[i] = rng.next_below(code.message_sizes[i]);
        std::fill(hist.begin(), hist.end(), 0);
        for (int k = 1; k <= n; ++k) {
            std::size_t row = 0;
            for (int i = 0; i < N; ++i)
                row += code.encode(i + 1, k, w[i], hist[i]) * cw.x_stride[i];
            const auto& support = cw.row_support[row];
            double u = rng.next_unit();
            std::size_t col = support.back().first;
            double acc = 0.0;
            for (const auto& [c, q] : support) {
                acc += q;
                if (u < acc) { col = c; break; }
            }
            for (int i = 0; i < N; ++i)
                hist[i] = hist[i] * cw.y_size[i] + cw.col_y[col][i];
        }
        bool wrong = false;
        for (int j : spec.destinations) {
            for (int i : spec.sources) {
                const Code::Decoder& d = code.decoder(i, j);
                std::size_t yn = d.table.size() / code.message_sizes[j - 1];
                std::uint32_t est = d.table[w[j - 1] * yn + hist[j - 1]];
                if (est != w[i - 1]) { wrong = true; break; }
            }
            if (wrong) break;
        }
        errors += wrong ? 1 : 0;
    }
    ErrorEstimate est;
    est.trials = trials;
    est.seed = seed;
    est.point = static_cast<double>(errors) / static_cast<double>(trials);
    est.half_width =
        1.96 * std::sqrt(est.point * (1.0 - est.point) / static_cast<double>(trials));
    return est;
}

double distinct_codeword_error_floor(const NetworkSpec& spec, const Code& code) {
    for (int i = 1; i <= spec.node_count; ++i)
        if (code.message_sizes[i - 1] > 1 && !spec.is_source(i)) return 0.0;
    for (const auto& per_node : code.encoders)
        for (const Code::Encoder& e : per_node)
            if (!e.feedback_blind) return 0.0;
    // destination messages would give the decoder side information; be
    // conservative and claim nothing in that case
    for (int j : spec.destinations)
        if (code.message_sizes[j - 1] > 1) return 0.0;

    std::map<std::vector<std::uint32_t>, std::size_t> seen;
    double total = 1.0;
    for (std::size_t m : code.message_sizes) total *= static_cast<double>(m);
    std::size_t duplicates = 0;
    detail::for_each_message_tuple(code.message_sizes, [&](const std::vector<std::size_t>& w,
                                                           double) {
        std::vector<std::uint32_t> cwv;
        for (int k = 1; k <= code.n; ++k)
            for (int i = 1; i <= spec.node_count; ++i)
                cwv.push_back(code.encode(i, k, w[i - 1], 0));
        auto [it, inserted] = seen.insert({std::move(cwv), 0});
        (void)it;
        if (!inserted) ++duplicates;
    });
    return static_cast<double>(duplicates) / total;
}

std::vector<ExperimentCell> phase_transition_experiment(
    const NetworkSpec& spec, const std::vector<double>& rates, const std::vector<int>& ns,
    const std::vector<std::uint64_t>& seeds, std::uint64_t trials, std::size_t exact_budget) {
    require_valid(spec);
    std::vector<ExperimentCell> cells;
    for (double rate : rates) {
        for (int n : ns) {
            ExperimentCell cell;
            cell.rate_bits = rate;
            cell.n = n;
            auto t0 = std::chrono::steady_clock::now();
            RateTuple rt;
            rt.bits.assign(spec.node_count, 0.0);
            for (int s : spec.sources) rt.bits[s - 1] = rate;
            try {
                double best = 2.0;
                std::uint64_t best_seed = seeds.empty() ? 0 : seeds.front();
                double best_hw = 0.0;
                bool exact = true;
                std::string method;
                for (std::uint64_t seed : seeds) {
                    Code code = generate_random_code(spec, rt, n, seed,
                                                     DecoderKind::MaximumLikelihood);
                    exact = exact_enumeration_cost(spec, code) <=
                            static_cast<double>(exact_budget);
                    double err;
                    double hw = 0.0;
                    if (exact) {
                        err = exact_error_probability(spec, code);
                        double floor = distinct_codeword_error_floor(spec, code);
                        if (err + 1e-9 < floor)
                            throw error("exact error fell below the counting floor");
                    } else {
                        ErrorEstimate e = monte_carlo_error(spec, code, trials, seed);
                        err = e.point;
                        hw = e.half_width;
                    }
                    if (err < best) {
                        best = err;
                        best_seed = seed;
                        best_hw = hw;
                    }
                    method = exact ? "exact" : "mc";
                }
                cell.method = method;
                cell.error = best;
                cell.ci_half_width = best_hw;
                cell.seed = best_seed;
            } catch (const budget_error&) {
                cell.skipped = true;
                cell.method = "skipped";
            }
            cell.runtime_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

}  // namespace netinfo
