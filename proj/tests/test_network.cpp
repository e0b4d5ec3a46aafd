#include <doctest.h>

#include "netinfo/info.hpp"
#include "netinfo/json_io.hpp"
#include "netinfo/network.hpp"
#include "netinfo/regions.hpp"
#include "netinfo/rng.hpp"
#include "testutil.hpp"

using namespace netinfo;
using testutil::bec_network;
using testutil::bsc_network;
using testutil::erasure_relay3_network;
using testutil::line3_network;
using testutil::random_pmf;

TEST_CASE("validate_network diagnostics") {
    NetworkSpec spec = bsc_network(0.1);
    CHECK(validate_network(spec).empty());

    NetworkSpec broken = spec;
    std::vector<double> rows = broken.channel.rows();
    rows[0] -= 0.1;  // row now sums to 0.9
    broken.channel = CondKernel::make_partial(
        spec.channel.from_axes(), spec.channel.to_axes(), rows,
        std::vector<std::uint8_t>(spec.channel.from_count(), 0));
    // rebuild with validation off via make_partial; defined rows unchecked
    {
        std::vector<Diagnostic> d = validate_network(broken);
        REQUIRE(!d.empty());
        bool found = false;
        for (const Diagnostic& diag : d) found = found || diag.code == "NotNormalized";
        CHECK(found);
    }

    NetworkSpec no_dest = spec;
    no_dest.destinations.clear();
    bool found = false;
    for (const Diagnostic& d : validate_network(no_dest))
        found = found || d.code == "MissingDestinations";
    CHECK(found);
}

TEST_CASE("marginal_channel") {
    NetworkSpec spec = line3_network(0.1);

    // empty cut: nothing summed out
    CondKernel full = marginal_channel(spec, Cut{0});
    CHECK(full.to_count() == spec.channel.to_count());
    for (std::size_t r = 0; r < full.from_count(); ++r)
        for (std::size_t c = 0; c < full.to_count(); ++c)
            CHECK(full.value(r, c) == spec.channel.value(r, c));

    // product form: marginal onto T^c outputs equals the product of the
    // retained link kernels
    CondKernel onto23 = marginal_channel(spec, Cut{1});  // T = {1}
    // q(y2, y3 | x1, x2) should still be BSC(x1 -> y2) * BSC(x2 -> y3)
    for (std::size_t x1 = 0; x1 < 2; ++x1)
        for (std::size_t x2 = 0; x2 < 2; ++x2)
            for (std::size_t y2 = 0; y2 < 2; ++y2)
                for (std::size_t y3 = 0; y3 < 2; ++y3) {
                    double want = ((x1 == y2) ? 0.9 : 0.1) * ((x2 == y3) ? 0.9 : 0.1);
                    // channel from-axes: X1, X2, X3(singleton); to: Y2, Y3 (Y1 singleton)
                    std::size_t row = x1 * 2 + x2;
                    std::size_t col = y2 * 2 + y3;
                    CHECK(onto23.value(row, col) == doctest::Approx(want).epsilon(1e-12));
                }

    NetworkSpec p2p = bsc_network(0.1);
    CondKernel dest_only = marginal_channel(p2p, Cut{1});
    CHECK(dest_only.to_count() == 2);
}

TEST_CASE("independent-DMC networks factorize") {
    NetworkSpec line = line3_network(0.1);
    CHECK(line.node_count == 3);
    CHECK(line.input_sizes == std::vector<std::size_t>{2, 2, 1});
    CHECK(line.output_sizes == std::vector<std::size_t>{1, 2, 2});

    // cross-link independence: (X1 -> Y2) and (X2 -> Y3) do not interact
    CounterRng rng(4);
    JointPmf p = random_pmf(rng, line.input_axes());
    JointPmf joint = compose(p, line.channel);
    CHECK(markov_residual(joint, {"Y3"}, {"X2"}, {"Y2"}) <= 1e-12);

    // two parallel links from 1 to 2
    LinkChannelTable par;
    par.links.push_back({1, 2, 2, 2, {0.9, 0.1, 0.1, 0.9}});
    NetworkSpec single = build_independent_dmc_network(par, {1}, {2});
    CHECK(single.input_sizes[0] == 2);

    // degenerate point-to-point BEC
    NetworkSpec bec = bec_network(0.5);
    CHECK(bec.node_count == 2);
    CHECK(bec.output_sizes[1] == 3);
}

TEST_CASE("erasure networks") {
    // single edge: classical BEC with (redundant) pattern side info
    NetworkSpec one = build_erasure_network({{1, 2, 0.5}}, {2, 1}, {1}, {2});
    CHECK(one.output_sizes[1] == 3 * 2);  // (symbol or erasure) x pattern bit

    NetworkSpec relay = erasure_relay3_network(0.5);
    CHECK(relay.input_sizes == std::vector<std::size_t>{2, 2, 1});
    CHECK(relay.output_sizes[0] == 1);
    CHECK(relay.output_sizes[1] == 3);       // edge (1,2): {0,1,e}
    CHECK(relay.output_sizes[2] == 3 * 4);   // edge (2,3) output x 4 patterns

    // exhaustive pattern bookkeeping: for x = (0,1), enumerate the four
    // erasure patterns and check each lands on the right output cell
    std::size_t row = 0 * 2 + 1;  // x1 = 0, x2 = 1 (x3 singleton)
    double total = 0.0;
    for (std::size_t c = 0; c < relay.channel.to_count(); ++c) {
        double v = relay.channel.value(row, c);
        if (v > 0) total += v;
    }
    CHECK(total == doctest::Approx(1.0));

    // zero erasure probability: noiseless link
    NetworkSpec clean = build_erasure_network({{1, 2, 0.0}}, {2, 1}, {1}, {2});
    JointPmf pin = JointPmf::make(clean.input_axes(), {0.5, 0.5});
    JointPmf joint = compose(pin, clean.channel);
    CHECK(conditional_entropy(joint, {"Y2"}, {"X1"}) <= 1e-12);

    CHECK_THROWS_AS(build_erasure_network({{1, 2, 1.5}}, {2, 1}, {1}, {2}),
                    invalid_probability_error);
}

TEST_CASE("feedback version duplicates the destination output") {
    NetworkSpec base = bsc_network(0.1);
    NetworkSpec fb = build_feedback_version(base, 2);
    CHECK(fb.output_sizes[0] == base.output_sizes[0] * base.output_sizes[1]);
    CHECK(fb.output_sizes[1] == base.output_sizes[1] * base.output_sizes[1]);
    CHECK(fb.input_sizes == base.input_sizes);

    // marginal onto the original outputs is unchanged, and the added
    // coordinates are literal copies
    JointPmf p = JointPmf::make(base.input_axes(), {0.3, 0.7});
    JointPmf joint_fb = compose(p, fb.channel);
    // Y2-tilde = (y2, y2copy): mass only on the diagonal
    CondKernel k = condition(joint_fb, {"X1", "X2"});
    for (std::size_t r = 0; r < k.from_count(); ++r) {
        if (!k.row_defined(r)) continue;
        for (std::size_t y1t = 0; y1t < 2; ++y1t)
            for (std::size_t y2t = 0; y2t < 4; ++y2t) {
                // column layout: Y1(2) x Y2(4)
                double v = k.value(r, y1t * 4 + y2t);
                std::size_t y2 = y2t / 2, copy_at_2 = y2t % 2, copy_at_1 = y1t;
                if (copy_at_2 != y2 || copy_at_1 != copy_at_2) CHECK(v == 0.0);
            }
    }

    // the marginal law of the original outputs is unchanged
    JointPmf joint_base = compose(p, base.channel);
    std::vector<double> y2_base(2, 0.0), y2_fb(2, 0.0);
    for_each_coord(joint_base.sizes(), [&](std::size_t f, const std::vector<std::size_t>& c) {
        y2_base[c[joint_base.axis_pos("Y2")]] += joint_base.value(f);
    });
    for_each_coord(joint_fb.sizes(), [&](std::size_t f, const std::vector<std::size_t>& c) {
        y2_fb[c[joint_fb.axis_pos("Y2")] / 2] += joint_fb.value(f);
    });
    CHECK(y2_fb[0] == doctest::Approx(y2_base[0]).epsilon(1e-12));
    CHECK(y2_fb[1] == doctest::Approx(y2_base[1]).epsilon(1e-12));

    // MI across the cut is unchanged when d is on the T^c side
    NetworkSpec line = line3_network(0.1);
    NetworkSpec line_fb = build_feedback_version(line, 3);
    CounterRng rng(9);
    for (int t = 0; t < 20; ++t) {
        JointPmf pin = random_pmf(rng, line.input_axes());
        for (std::uint32_t mask : {0u, 1u, 2u, 3u}) {
            double base_v = cut_value(line, Cut{mask}, pin);
            double fb_v = cut_value(line_fb, Cut{mask}, pin);
            CHECK(fb_v == doctest::Approx(base_v).epsilon(1e-9));
        }
    }

    CHECK_THROWS_AS(build_feedback_version(erasure_relay3_network(0.5), 2), shape_error);
}

TEST_CASE("network JSON round trip") {
    NetworkSpec line = line3_network(0.1);
    NetworkSpec back = parse_network_json(network_to_json(line));
    CHECK(back.node_count == line.node_count);
    CHECK(back.input_sizes == line.input_sizes);
    CHECK(back.output_sizes == line.output_sizes);
    double worst = 0.0;
    for (std::size_t i = 0; i < line.channel.rows().size(); ++i)
        worst = std::max(worst,
                         std::abs(line.channel.rows()[i] - back.channel.rows()[i]));
    CHECK(worst <= 1e-9);

    CHECK_THROWS_AS(parse_network_json(nlohmann::json{{"nodes", 2}}), parse_error);
}

TEST_CASE("check_determinism") {
    // deterministic relay: noiseless links
    LinkChannelTable links;
    links.links.push_back({1, 2, 2, 2, {1, 0, 0, 1}});
    links.links.push_back({2, 3, 2, 2, {1, 0, 0, 1}});
    NetworkSpec det = build_independent_dmc_network(links, {1}, {3});
    std::vector<Cut> cuts = enumerate_cuts(det);
    for (bool ok : check_determinism(det, cuts)) CHECK(ok);

    // erasure network with destination side info: deterministic on region cuts
    NetworkSpec relay = erasure_relay3_network(0.5);
    for (bool ok : check_determinism(relay, enumerate_cuts(relay))) CHECK(ok);

    // BSC links are genuinely noisy
    NetworkSpec noisy = line3_network(0.1);
    std::vector<bool> res = check_determinism(noisy, enumerate_cuts(noisy));
    bool any_false = false;
    for (std::size_t i = 1; i < res.size(); ++i) any_false = any_false || !res[i];
    CHECK(any_false);
}
