#include <doctest.h>

#include <cmath>

#include "netinfo/regions.hpp"
#include "netinfo/rng.hpp"
#include "testutil.hpp"

using namespace netinfo;
using testutil::bec_network;
using testutil::bsc_network;
using testutil::erasure_relay3_network;
using testutil::hb;
using testutil::line3_network;
using testutil::random_pmf;

TEST_CASE("enumerate_cuts") {
    NetworkSpec p2p = bsc_network(0.1);
    CHECK(enumerate_cuts(p2p).size() == 2);  // T in {{}, {1}}

    NetworkSpec line = line3_network(0.1);
    CHECK(enumerate_cuts(line).size() == 4);

    LinkChannelTable links;
    links.links.push_back({1, 2, 2, 2, {1, 0, 0, 1}});
    links.links.push_back({1, 3, 2, 2, {1, 0, 0, 1}});
    NetworkSpec multi = build_independent_dmc_network(links, {1}, {2, 3});
    CHECK(enumerate_cuts(multi).size() == 6);  // all masks except {2,3} and {1,2,3}
}

TEST_CASE("cut_value") {
    NetworkSpec p2p = bsc_network(0.1);
    JointPmf uniform = JointPmf::make(p2p.input_axes(), {0.5, 0.5});
    CHECK(cut_value(p2p, Cut{0}, uniform) == doctest::Approx(0.0));
    CHECK(std::abs(cut_value(p2p, Cut{1}, uniform) - 0.5310) < 1e-4);

    LinkChannelTable clean;
    clean.links.push_back({1, 2, 2, 2, {1, 0, 0, 1}});
    NetworkSpec noiseless = build_independent_dmc_network(clean, {1}, {2});
    JointPmf u2 = JointPmf::make(noiseless.input_axes(), {0.5, 0.5});
    CHECK(cut_value(noiseless, Cut{1}, u2) == doctest::Approx(1.0));
}

TEST_CASE("cut_value concavity on random instances") {
    NetworkSpec line = line3_network(0.1);
    CounterRng rng(21);
    for (int t = 0; t < 50; ++t) {
        JointPmf p1 = random_pmf(rng, line.input_axes());
        JointPmf p2 = random_pmf(rng, line.input_axes());
        double w = rng.next_unit();
        std::vector<double> mix(p1.size());
        for (std::size_t i = 0; i < mix.size(); ++i)
            mix[i] = w * p1.value(i) + (1 - w) * p2.value(i);
        JointPmf pm = JointPmf::make(line.input_axes(), mix);
        for (std::uint32_t mask : {1u, 2u, 3u}) {
            double lhs = cut_value(line, Cut{mask}, pm);
            double rhs = w * cut_value(line, Cut{mask}, p1) +
                         (1 - w) * cut_value(line, Cut{mask}, p2);
            CHECK(lhs >= rhs - 1e-9);
        }
    }
}

TEST_CASE("max_cut_value against known capacities") {
    OptimizerOptions opts;

    CutBound bsc = max_cut_value(bsc_network(0.1), Cut{1}, InputMode::AllInputs, opts);
    CHECK(std::abs(bsc.value_bits - (1.0 - hb(0.1))) < 1e-4);
    CHECK(std::abs(bsc.argmax_input.value(0) - 0.5) < 1e-3);
    REQUIRE(bsc.oracle_bits.has_value());

    CutBound bec = max_cut_value(bec_network(0.5), Cut{1}, InputMode::AllInputs, opts);
    CHECK(std::abs(bec.value_bits - 0.5) < 1e-4);

    // Z-channel with crossover 0.5: capacity log2(1.25), non-uniform input
    LinkChannelTable z;
    z.links.push_back({1, 2, 2, 2, {1.0, 0.0, 0.5, 0.5}});
    NetworkSpec zn = build_independent_dmc_network(z, {1}, {2});
    CutBound zb = max_cut_value(zn, Cut{1}, InputMode::AllInputs, opts);
    CHECK(std::abs(zb.value_bits - std::log2(1.25)) < 1e-3);

    // product-inputs mode agrees on a point-to-point link
    CutBound zp = max_cut_value(zn, Cut{1}, InputMode::ProductInputs, opts);
    CHECK(std::abs(zp.value_bits - zb.value_bits) < 1e-3);
}

TEST_CASE("dmc_capacity") {
    DmcCapacity ident = dmc_capacity({1, 0, 0, 1}, 2, 2);
    CHECK(ident.capacity_bits == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ident.input[0] == doctest::Approx(0.5).epsilon(1e-6));

    DmcCapacity useless = dmc_capacity({0.3, 0.7, 0.3, 0.7}, 2, 2);
    CHECK(useless.capacity_bits == doctest::Approx(0.0).epsilon(1e-9));

    DmcCapacity bsc = dmc_capacity({0.9, 0.1, 0.1, 0.9}, 2, 2);
    CHECK(std::abs(bsc.capacity_bits - (1.0 - hb(0.1))) < 1e-6);

    DmcCapacity zc = dmc_capacity({1.0, 0.0, 0.5, 0.5}, 2, 2);
    CHECK(std::abs(zc.capacity_bits - std::log2(1.25)) < 1e-6);
}

TEST_CASE("rprime bounds") {
    NetworkSpec line = line3_network(0.1);
    LinkCapacities caps = link_capacities(*line.links);
    for (const LinkCapacities::Entry& e : caps.entries)
        CHECK(e.capacity_bits <= std::log2(static_cast<double>(e.input.size())) + 1e-12);
    std::vector<Cut> cuts = enumerate_cuts(line);
    std::vector<CutBound> bounds = rprime_bounds(caps, line, cuts);
    double c = 1.0 - hb(0.1);
    REQUIRE(bounds.size() == 4);
    CHECK(bounds[0].value_bits == doctest::Approx(0.0));      // T = {}
    CHECK(std::abs(bounds[1].value_bits - c) < 1e-6);         // T = {1}
    CHECK(std::abs(bounds[2].value_bits - c) < 1e-6);         // T = {2}
    CHECK(std::abs(bounds[3].value_bits - c) < 1e-6);         // T = {1,2}

    // diamond with four unit links: cut at the source crosses two of them
    LinkChannelTable diamond;
    diamond.links.push_back({1, 2, 2, 2, {1, 0, 0, 1}});
    diamond.links.push_back({1, 3, 2, 2, {1, 0, 0, 1}});
    diamond.links.push_back({2, 4, 2, 2, {1, 0, 0, 1}});
    diamond.links.push_back({3, 4, 2, 2, {1, 0, 0, 1}});
    NetworkSpec dn = build_independent_dmc_network(diamond, {1}, {4});
    LinkCapacities dcaps = link_capacities(*dn.links);
    std::vector<CutBound> db = rprime_bounds(dcaps, dn, {Cut{1}});
    CHECK(db[0].value_bits == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("membership verdicts") {
    NetworkSpec line = line3_network(0.1);
    RateTuple inside{{0.52, 0.0, 0.0}};
    RateTuple outside{{0.54, 0.0, 0.0}};
    RateTuple origin{{0.0, 0.0, 0.0}};

    CHECK(membership_report(line, inside, Region::Rprime).verdict == "member");
    CHECK(membership_report(line, outside, Region::Rprime).verdict == "non-member");
    for (Region r : {Region::Rprime, Region::Rout, Region::RoutStar})
        CHECK(membership_report(line, origin, r).verdict == "member");

    JointPmf uniform = JointPmf::make(line.input_axes(), std::vector<double>(4, 0.25));
    CHECK(membership_report(line, origin, Region::Rin, uniform).verdict == "member");
    CHECK(membership_report(line, origin, Region::Rcutset, uniform).verdict == "member");

    RateTuple bad{{0.0, 0.1, 0.0}};  // rate at a non-source node
    CHECK_THROWS_AS(membership_report(line, bad, Region::Rprime),
                    invalid_probability_error);
    CHECK_THROWS_AS(membership_report(line, inside, Region::Rin),
                    invalid_probability_error);

    // rates sitting exactly on an active bound report "boundary"
    LinkCapacities caps = link_capacities(*line.links);
    RateTuple edge{{caps.capacity(1, 2), 0.0, 0.0}};
    CHECK(membership_report(line, edge, Region::Rprime).verdict == "boundary");
}

TEST_CASE("grid oracle and dominance checks") {
    NetworkSpec p2p = bsc_network(0.1);
    std::optional<double> oracle = grid_oracle_max(p2p, Cut{1}, 32, 100000);
    REQUIRE(oracle.has_value());
    CHECK(std::abs(*oracle - (1.0 - hb(0.1))) < 1e-3);

    JointPmf uniform = JointPmf::make(p2p.input_axes(), {0.5, 0.5});
    DominanceReport rep =
        check_product_dominance(p2p, uniform, enumerate_cuts(p2p), 32, 1e-6);
    CHECK(rep.dominated);
    for (const DominanceRecord& r : rep.cuts) CHECK(r.slack_bits <= 1e-6);

    NetworkSpec relay = erasure_relay3_network(0.5);
    JointPmf u4 = JointPmf::make(relay.input_axes(), std::vector<double>(4, 0.25));
    DominanceReport drel =
        check_product_dominance(relay, u4, enumerate_cuts(relay), 64, 1e-3);
    CHECK(drel.dominated);

    // the Z-channel is not dominated by the uniform input
    LinkChannelTable z;
    z.links.push_back({1, 2, 2, 2, {1.0, 0.0, 0.5, 0.5}});
    NetworkSpec zn = build_independent_dmc_network(z, {1}, {2});
    JointPmf zu = JointPmf::make(zn.input_axes(), {0.5, 0.5});
    DominanceReport dz = check_product_dominance(zn, zu, {Cut{1}}, 64, 1e-3);
    CHECK(!dz.dominated);
    CHECK(dz.cuts[0].slack_bits > 1e-3);

    // non-product p_star is rejected
    NetworkSpec line = line3_network(0.1);
    std::vector<double> corr = {0.5, 0.0, 0.0, 0.5};
    JointPmf pc = JointPmf::make(line.input_axes(), corr);
    CHECK_THROWS_AS(check_product_dominance(line, pc, {Cut{1}}),
                    invalid_probability_error);
}

TEST_CASE("region ordering on random small networks") {
    CounterRng base(0xCAFE);
    int checked = 0;
    for (int t = 0; t < 10; ++t) {
        CounterRng rng = base.split(t);
        int n = 2 + static_cast<int>(rng.next_below(2));
        NetworkSpec spec;
        spec.node_count = n;
        spec.sources = {1};
        spec.destinations = {n};
        for (int i = 0; i < n; ++i) {
            spec.input_sizes.push_back(1 + rng.next_below(2));
            spec.output_sizes.push_back(2);
        }
        std::vector<Axis> from = spec.input_axes();
        std::vector<Axis> to = spec.output_axes();
        std::vector<double> rows;
        for (std::size_t r = 0; r < cell_count(from); ++r) {
            std::vector<double> row = rng.next_simplex(cell_count(to));
            rows.insert(rows.end(), row.begin(), row.end());
        }
        spec.channel = CondKernel::make(from, to, rows);
        if (!validate_network(spec).empty()) continue;

        // random product input for the inner bound
        JointPmf pin = [&] {
            JointPmf acc = random_pmf(rng, {from[0]});
            for (std::size_t i = 1; i < from.size(); ++i) {
                JointPmf nxt = random_pmf(rng, {from[i]});
                acc = product(acc, nxt);
            }
            return acc;
        }();

        RateTuple rates;
        rates.bits.assign(n, 0.0);
        rates.bits[0] = rng.next_unit() * 0.8;

        OptimizerOptions opts;
        opts.extra_starts.push_back(pin);
        MembershipReport rin = membership_report(spec, rates, Region::Rin, pin, opts);
        MembershipReport rstar = membership_report(spec, rates, Region::RoutStar,
                                                   std::nullopt, opts);
        MembershipReport rout = membership_report(spec, rates, Region::Rout, std::nullopt,
                                                  opts);
        for (std::size_t c = 0; c < rin.cuts.size(); ++c) {
            CHECK(rin.cuts[c].bound_bits <= rstar.cuts[c].bound_bits + 1e-6);
            CHECK(rstar.cuts[c].bound_bits <= rout.cuts[c].bound_bits + 1e-6);
        }
        if (rin.verdict == "member") CHECK(rstar.verdict != "non-member");
        if (rstar.verdict == "member") CHECK(rout.verdict != "non-member");
        ++checked;
    }
    CHECK(checked >= 8);
}
