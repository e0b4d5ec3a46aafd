#include "netinfo/codes.hpp"

#include <algorithm>
#include <cmath>

#include "netinfo/rng.hpp"
#include "trajectory.hpp"

namespace netinfo {

namespace detail {

ChannelWalk::ChannelWalk(const NetworkSpec& spec) {
    node_count = spec.node_count;
    x_stride.assign(node_count, 0);
    y_size.assign(node_count, 1);

    const std::vector<Axis>& from = spec.channel.from_axes();
    std::vector<std::size_t> strides(from.size(), 1);
    for (std::size_t i = from.size(); i-- > 1;) strides[i - 1] = strides[i] * from[i].size;
    for (int v = 1; v <= node_count; ++v)
        for (std::size_t i = 0; i < from.size(); ++i)
            if (from[i].name == axis_name_x(v)) x_stride[v - 1] = strides[i];

    for (int v = 1; v <= node_count; ++v) y_size[v - 1] = spec.output_sizes[v - 1];

    const std::vector<Axis>& to = spec.channel.to_axes();
    std::vector<std::size_t> to_sizes;
    for (const Axis& a : to) to_sizes.push_back(a.size);
    std::vector<std::size_t> ypos(node_count);
    for (int v = 1; v <= node_count; ++v)
        for (std::size_t i = 0; i < to.size(); ++i)
            if (to[i].name == axis_name_y(v)) ypos[v - 1] = i;

    col_y.assign(spec.channel.to_count(), std::vector<std::uint32_t>(node_count, 0));
    for_each_coord(to_sizes, [&](std::size_t col, const std::vector<std::size_t>& c) {
        for (int i = 0; i < node_count; ++i)
            col_y[col][i] = static_cast<std::uint32_t>(c[ypos[i]]);
    });

    row_support.resize(spec.channel.from_count());
    for (std::size_t r = 0; r < spec.channel.from_count(); ++r) {
        for (std::size_t c = 0; c < spec.channel.to_count(); ++c) {
            double v = spec.channel.value(r, c);
            if (v > 0.0) row_support[r].push_back({c, v});
        }
        max_row_support = std::max(max_row_support, row_support[r].size());
    }
}

}  // namespace detail

std::uint32_t Code::encode(int node, int time, std::size_t w, std::size_t y_hist) const {
    const Encoder& e = encoders[node - 1][time - 1];
    if (e.feedback_blind) return e.table[w];
    std::size_t hist_count = e.table.size() / message_sizes[node - 1];
    return e.table[w * hist_count + y_hist];
}

const Code::Decoder& Code::decoder(int source, int sink) const {
    for (const Decoder& d : decoders)
        if (d.source == source && d.sink == sink) return d;
    throw shape_error("no decoder for pair (" + std::to_string(source) + "," +
                      std::to_string(sink) + ")");
}

bool Code::any_decoder_can_fail() const {
    for (const Decoder& d : decoders)
        for (std::uint32_t v : d.table)
            if (v == kDecodeFail) return true;
    return false;
}

std::vector<std::size_t> message_sizes_for(const NetworkSpec& spec, const RateTuple& rates,
                                           int n) {
    validate_rates(spec, rates);
    std::vector<std::size_t> sizes(spec.node_count, 1);
    for (int i = 1; i <= spec.node_count; ++i) {
        double r = rates.bits[i - 1];
        if (r > 0.0) {
            // tiny downward nudge so exact powers of two survive fp rounding
            sizes[i - 1] =
                static_cast<std::size_t>(std::ceil(std::exp2(n * r) - 1e-9));
            sizes[i - 1] = std::max<std::size_t>(sizes[i - 1], 1);
        }
    }
    return sizes;
}

void validate_code(const NetworkSpec& spec, const Code& code) {
    require_valid(spec);
    if (code.n < 1) throw shape_error("blocklength must be positive");
    std::vector<std::size_t> expect = message_sizes_for(spec, code.rates, code.n);
    if (code.message_sizes != expect)
        throw shape_error("message sizes do not match ceil(2^{nR})");
    if (static_cast<int>(code.encoders.size()) != spec.node_count)
        throw shape_error("encoder table missing for some node");
    for (int i = 1; i <= spec.node_count; ++i) {
        if (static_cast<int>(code.encoders[i - 1].size()) != code.n)
            throw shape_error("encoder table missing for some time slot");
        std::size_t hist = 1;
        for (int k = 1; k <= code.n; ++k) {
            const Code::Encoder& e = code.encoders[i - 1][k - 1];
            std::size_t expect_rows =
                e.feedback_blind ? code.message_sizes[i - 1] : code.message_sizes[i - 1] * hist;
            if (e.table.size() != expect_rows)
                throw shape_error("encoder table has wrong size at node " + std::to_string(i));
            for (std::uint32_t x : e.table)
                if (x >= spec.input_sizes[i - 1])
                    throw shape_error("encoder output outside the input alphabet");
            hist *= spec.output_sizes[i - 1];
        }
    }
    for (int j : spec.destinations)
        for (int i : spec.sources) {
            const Code::Decoder& d = code.decoder(i, j);
            std::size_t hist = 1;
            for (int k = 0; k < code.n; ++k) hist *= spec.output_sizes[j - 1];
            if (d.table.size() != code.message_sizes[j - 1] * hist)
                throw shape_error("decoder table has wrong size for pair (" +
                                  std::to_string(i) + "," + std::to_string(j) + ")");
            for (std::uint32_t v : d.table)
                if (v != Code::kDecodeFail && v >= code.message_sizes[i - 1])
                    throw shape_error("decoder estimate outside the message set");
        }
}

namespace {

// ML decoder tables for a feedback-blind code: argmax over the candidate
// message of the exact likelihood of (w_sink, y_sink^n), smallest index on
// ties. Messages of other nodes are marginalized uniformly.
void build_ml_decoders(const NetworkSpec& spec, Code& code, std::size_t trajectory_budget) {
    detail::ChannelWalk cw(spec);
    for (int j : spec.destinations) {
        std::size_t yn = 1;
        for (int k = 0; k < code.n; ++k) {
            yn *= spec.output_sizes[j - 1];
            if (yn > 100000000ull) throw budget_error("decoder table too large");
        }
        std::size_t wj = code.message_sizes[j - 1];

        for (int i : spec.sources) {
            std::size_t wi = code.message_sizes[i - 1];
            std::size_t others = 1;
            for (int m = 1; m <= spec.node_count; ++m)
                if (m != i && m != j) others *= code.message_sizes[m - 1];

            Code::Decoder dec;
            dec.source = i;
            dec.sink = j;
            dec.table.assign(wj * yn, 0);

            if (others == 1) {
                // sweep candidate messages in ascending order, keeping for
                // every observation the first maximizer
                std::vector<double> best(wj * yn, -1.0);
                std::vector<double> acc(yn, 0.0);
                std::vector<std::uint64_t> stamp(yn, 0);
                std::uint64_t cur = 0;
                std::vector<std::size_t> touched;

                std::vector<std::size_t> w(spec.node_count, 0);
                for (std::size_t cand = 0; cand < wi; ++cand) {
                    for (std::size_t wsink = 0; wsink < wj; ++wsink) {
                        w.assign(spec.node_count, 0);
                        w[i - 1] = cand;
                        w[j - 1] = wsink;  // overrides when i == j
                        ++cur;
                        touched.clear();
                        std::size_t budget = trajectory_budget;
                        auto leaf = [&](double prob, const std::uint32_t*,
                                        const std::uint32_t*, const std::size_t* hist) {
                            std::size_t y = hist[j - 1];
                            if (stamp[y] != cur) {
                                stamp[y] = cur;
                                acc[y] = 0.0;
                                touched.push_back(y);
                            }
                            acc[y] += prob;
                        };
                        detail::walk_trajectories(spec, code, cw, w, leaf, &budget);
                        for (std::size_t y : touched) {
                            std::size_t slot = wsink * yn + y;
                            if (acc[y] > best[slot]) {
                                best[slot] = acc[y];
                                dec.table[slot] = static_cast<std::uint32_t>(cand);
                            }
                        }
                    }
                }
            } else {
                // dense posterior accumulation over (w_sink, y, w_i)
                if (wj * yn * wi > 50000000ull)
                    throw budget_error("ML posterior table too large");
                std::vector<double> score(wj * yn * wi, 0.0);
                detail::for_each_message_tuple(code.message_sizes, [&](const std::vector<std::size_t>& w,
                                                                       double) {
                    std::size_t budget = trajectory_budget;
                    auto leaf = [&](double prob, const std::uint32_t*, const std::uint32_t*,
                                    const std::size_t* hist) {
                        std::size_t y = hist[j - 1];
                        score[(w[j - 1] * yn + y) * wi + w[i - 1]] += prob;
                    };
                    detail::walk_trajectories(spec, code, cw, w, leaf, &budget);
                });
                for (std::size_t slot = 0; slot < wj * yn; ++slot) {
                    double bestv = -1.0;
                    std::uint32_t bestw = 0;
                    for (std::size_t cand = 0; cand < wi; ++cand) {
                        double v = score[slot * wi + cand];
                        if (v > bestv) {
                            bestv = v;
                            bestw = static_cast<std::uint32_t>(cand);
                        }
                    }
                    dec.table[slot] = bestw;
                }
            }
            code.decoders.push_back(std::move(dec));
        }
    }
}

}  // namespace

Code generate_random_code(const NetworkSpec& spec, const RateTuple& rates, int n,
                          std::uint64_t seed, DecoderKind decoder,
                          std::size_t trajectory_budget) {
    require_valid(spec);
    Code code;
    code.n = n;
    code.rates = rates;
    code.message_sizes = message_sizes_for(spec, rates, n);
    code.encoders.resize(spec.node_count);

    CounterRng base(seed);
    for (int i = 1; i <= spec.node_count; ++i) {
        code.encoders[i - 1].resize(n);
        for (int k = 1; k <= n; ++k) {
            CounterRng rng = base.split(1).split(i).split(k);
            Code::Encoder e;
            e.feedback_blind = true;
            e.table.resize(code.message_sizes[i - 1]);
            for (std::uint32_t& x : e.table)
                x = static_cast<std::uint32_t>(rng.next_below(spec.input_sizes[i - 1]));
            code.encoders[i - 1][k - 1] = std::move(e);
        }
    }

    if (decoder == DecoderKind::MaximumLikelihood) {
        build_ml_decoders(spec, code, trajectory_budget);
    } else {
        for (int j : spec.destinations)
            for (int i : spec.sources) {
                CounterRng rng = base.split(2).split(i).split(j);
                Code::Decoder d;
                d.source = i;
                d.sink = j;
                std::size_t yn = 1;
                for (int k = 0; k < n; ++k) yn *= spec.output_sizes[j - 1];
                d.table.resize(code.message_sizes[j - 1] * yn);
                for (std::uint32_t& v : d.table)
                    v = static_cast<std::uint32_t>(rng.next_below(code.message_sizes[i - 1]));
                code.decoders.push_back(std::move(d));
            }
    }
    validate_code(spec, code);
    return code;
}

Code make_bec_repetition_code(const NetworkSpec& spec, int message_bits, int copies) {
    require_valid(spec);
    if (spec.node_count != 2 || spec.sources != std::vector<int>{1} ||
        spec.destinations != std::vector<int>{2} || spec.input_sizes[0] != 2 ||
        spec.output_sizes[1] != 3)
        throw shape_error("repetition code needs a binary 2-node erasure link");

    const std::uint32_t kErasure = 2;
    int n = message_bits * copies;
    Code code;
    code.n = n;
    code.rates.bits = {static_cast<double>(message_bits) / n, 0.0};
    code.message_sizes = {std::size_t{1} << message_bits, 1};
    code.encoders.resize(2);
    code.encoders[0].resize(n);
    code.encoders[1].resize(n);
    for (int k = 1; k <= n; ++k) {
        int bit = (k - 1) / copies;
        Code::Encoder e;
        e.feedback_blind = true;
        e.table.resize(code.message_sizes[0]);
        for (std::size_t w = 0; w < code.message_sizes[0]; ++w)
            e.table[w] = static_cast<std::uint32_t>((w >> (message_bits - 1 - bit)) & 1u);
        code.encoders[0][k - 1] = std::move(e);
        code.encoders[1][k - 1] = {true, {0}};
    }

    Code::Decoder dec;
    dec.source = 1;
    dec.sink = 2;
    std::size_t yn = 1;
    for (int k = 0; k < n; ++k) yn *= 3;
    dec.table.assign(yn, 0);
    std::vector<std::uint32_t> sym(n);
    for (std::size_t y = 0; y < yn; ++y) {
        std::size_t rest = y;
        for (int k = n; k-- > 0;) {
            sym[k] = static_cast<std::uint32_t>(rest % 3);
            rest /= 3;
        }
        std::uint32_t w = 0;
        bool fail = false;
        for (int b = 0; b < message_bits && !fail; ++b) {
            bool resolved = false;
            std::uint32_t bit = 0;
            for (int c = 0; c < copies; ++c) {
                std::uint32_t s = sym[b * copies + c];
                if (s != kErasure) {
                    bit = s;
                    resolved = true;
                    break;
                }
            }
            if (!resolved)
                fail = true;  // every copy erased: declared decoding failure
            else
                w = (w << 1) | bit;
        }
        dec.table[y] = fail ? Code::kDecodeFail : w;
    }
    code.decoders.push_back(std::move(dec));
    validate_code(spec, code);
    return code;
}

Code lift_code_to_feedback(const NetworkSpec& spec, const NetworkSpec& feedback_spec,
                           const Code& code, int d) {
    validate_code(spec, code);
    for (const auto& per_node : code.encoders)
        for (const Code::Encoder& e : per_node)
            if (!e.feedback_blind)
                throw shape_error("only feedback-blind codes can be lifted unchanged");

    Code out = code;
    std::size_t yd = spec.output_sizes[d - 1];
    for (Code::Decoder& dec : out.decoders) {
        int j = dec.sink;
        std::size_t y_old = spec.output_sizes[j - 1];
        std::size_t y_new = feedback_spec.output_sizes[j - 1];
        std::size_t yn_old = 1, yn_new = 1;
        for (int k = 0; k < code.n; ++k) {
            yn_old *= y_old;
            yn_new *= y_new;
            if (yn_new > 100000000ull) throw budget_error("lifted decoder table too large");
        }
        std::size_t wj = code.message_sizes[j - 1];
        std::vector<std::uint32_t> table(wj * yn_new);
        std::vector<std::uint32_t> sym(code.n);
        for (std::size_t y = 0; y < yn_new; ++y) {
            std::size_t rest = y;
            for (int k = code.n; k-- > 0;) {
                sym[k] = static_cast<std::uint32_t>(rest % y_new);
                rest /= y_new;
            }
            std::size_t h = 0;
            for (int k = 0; k < code.n; ++k) h = h * y_old + sym[k] / yd;
            for (std::size_t w = 0; w < wj; ++w)
                table[w * yn_new + y] = dec.table[w * yn_old + h];
        }
        dec.table = std::move(table);
    }
    validate_code(feedback_spec, out);
    return out;
}

}  // namespace netinfo
