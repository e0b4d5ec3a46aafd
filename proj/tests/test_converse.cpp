#include <doctest.h>

#include <cmath>

#include "netinfo/converse.hpp"
#include "netinfo/info.hpp"
#include "netinfo/sim.hpp"
#include "testutil.hpp"

using namespace netinfo;
using testutil::bsc_network;
using testutil::erasure_relay3_network;
using testutil::random_pmf;

namespace {

Code bsc_repetition(const NetworkSpec& spec, int n) {
    Code code = generate_random_code(spec, {{1.0 / n, 0.0}}, n, 0,
                                     DecoderKind::MaximumLikelihood);
    for (int k = 1; k <= n; ++k) code.encoders[0][k - 1].table = {0, 1};
    Code::Decoder& dec = code.decoders.front();
    for (std::size_t y = 0; y < dec.table.size(); ++y) {
        std::size_t rest = y;
        int ones = 0;
        for (int k = 0; k < n; ++k) {
            ones += static_cast<int>(rest % 2);
            rest /= 2;
        }
        dec.table[y] = ones * 2 > n ? 1 : 0;
    }
    validate_code(spec, code);
    return code;
}

Code noiseless_identity(const NetworkSpec& spec) {
    Code code;
    code.n = 1;
    code.rates.bits = {1.0, 0.0};
    code.message_sizes = {2, 1};
    code.encoders = {{{true, {0, 1}}}, {{true, {0}}}};
    Code::Decoder dec;
    dec.source = 1;
    dec.sink = 2;
    dec.table = {0, 1};
    code.decoders.push_back(dec);
    validate_code(spec, code);
    return code;
}

NetworkSpec noiseless_bit() {
    LinkChannelTable links;
    links.links.push_back({1, 2, 2, 2, {1, 0, 0, 1}});
    return build_independent_dmc_network(links, {1}, {2});
}

}  // namespace

TEST_CASE("proposition 2") {
    // constructed equality case: V = U exactly, q uniform, |W| = 2, lambda = 2
    JointPmf diag = JointPmf::make({{"U", 2}, {"V", 2}}, {0.5, 0, 0, 0.5});
    JointPmf qu = JointPmf::make({{"V", 2}}, {0.5, 0.5});
    Prop2Result eq = prop2_bound(diag, "U", "V", qu, 2.0);
    CHECK(eq.alpha == doctest::Approx(0.0));
    CHECK(eq.lhs_bits == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eq.rhs_bits == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(eq.lhs_bits - eq.rhs_bits) <= 1e-9);
    CHECK(eq.holds);

    // alpha = 1/2 on two symbols at lambda = 2: rhs = log 2 + 2 log(1/2) = -1
    JointPmf half = JointPmf::make({{"U", 2}, {"V", 2}}, {0.25, 0.25, 0.25, 0.25});
    Prop2Result r = prop2_bound(half, "U", "V", qu, 2.0);
    CHECK(r.alpha == doctest::Approx(0.5));
    CHECK(r.rhs_bits == doctest::Approx(-1.0));
    CHECK(r.lhs_bits >= -1e-12);
    CHECK(r.holds);

    // alpha = 0 makes the error term vanish
    Prop2Result z = prop2_bound(diag, "U", "V", JointPmf::make({{"V", 2}}, {0.3, 0.7}), 3.0);
    CHECK(z.rhs_bits == doctest::Approx(z.log_w_bits));

    JointPmf skew = JointPmf::make({{"U", 2}, {"V", 2}}, {0.7, 0.0, 0.0, 0.3});
    CHECK_THROWS_AS(prop2_bound(skew, "U", "V", qu, 2.0), invalid_probability_error);

    JointPmf off = JointPmf::make({{"U", 2}, {"V", 2}}, {0.0, 0.5, 0.5, 0.0});
    CHECK_THROWS_AS(prop2_bound(off, "U", "V", qu, 2.0), invalid_probability_error);

    CHECK_THROWS_AS(prop2_bound(diag, "U", "V", qu, 1.0), invalid_lambda_error);

    // randomized sweep
    CounterRng base(0xFA0);
    for (int t = 0; t < 300; ++t) {
        CounterRng rng = base.split(t);
        std::size_t w = 2 + rng.next_below(7);
        std::vector<double> rows(w * w);
        for (std::size_t u = 0; u < w; ++u) {
            std::vector<double> row = rng.next_simplex(w);
            for (std::size_t v = 0; v < w; ++v) rows[u * w + v] = row[v] / w;
        }
        JointPmf p_uv = JointPmf::make({{"U", w}, {"V", w}}, rows);
        JointPmf q_v = random_pmf(rng, {{"V", w}});
        double lambda = 1.05 + 3.0 * rng.next_unit();
        Prop2Result res = prop2_bound(p_uv, "U", "V", q_v, lambda);
        CHECK(res.holds);
    }
}

TEST_CASE("proposition 3") {
    // conditional independence: both divergences vanish
    CounterRng rng(0xFA3);
    PmfBuilder b({{"X", 2}, {"Y", 2}, {"Z", 2}});
    for (std::size_t z = 0; z < 2; ++z) {
        std::vector<double> px = rng.next_simplex(2), py = rng.next_simplex(2);
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t y = 0; y < 2; ++y)
                b.add((x * 2 + y) * 2 + z, 0.5 * px[x] * py[y]);
    }
    JointPmf ci = b.finish();
    Prop3Result r = prop3_gap(ci, {"X"}, {"Y"}, {"Z"}, 1.25);
    CHECK(r.d_lambda_bits <= 1e-9);
    CHECK(r.d_one_bits <= 1e-9);
    CHECK(r.holds);

    // remainder arithmetic: lambda = 5/4, |X| = |Y| = 2
    CHECK(r.remainder_bits == doctest::Approx(2048.0));

    CHECK_THROWS_AS(prop3_gap(ci, {"X"}, {"Y"}, {"Z"}, 1.3), invalid_lambda_error);
    CHECK_THROWS_AS(prop3_gap(ci, {"X"}, {"Y"}, {"Z"}, 1.0), invalid_lambda_error);

    CounterRng base(0xFA4);
    for (int t = 0; t < 200; ++t) {
        CounterRng r2 = base.split(t);
        std::size_t nx = 2 + r2.next_below(2), ny = 2 + r2.next_below(2),
                    nz = 1 + r2.next_below(3);
        JointPmf p = random_pmf(r2, {{"X", nx}, {"Y", ny}, {"Z", nz}});
        for (double lambda : {1.01, 1.1, 1.25})
            CHECK(prop3_gap(p, {"X"}, {"Y"}, {"Z"}, lambda).holds);
    }
}

TEST_CASE("lambda schedule") {
    LambdaSchedule s16 = lambda_schedule(16);
    CHECK(s16.lambda == 1.25);
    CHECK(s16.prop3_applicable);

    LambdaSchedule s4 = lambda_schedule(4);
    CHECK(s4.lambda == doctest::Approx(1.5));
    CHECK(!s4.prop3_applicable);

    CHECK(lambda_schedule(1000000).lambda == doctest::Approx(1.001));
}

TEST_CASE("simulating distribution on the noiseless identity code") {
    NetworkSpec spec = noiseless_bit();
    Code code = noiseless_identity(spec);
    SimulatingDistribution sim = build_simulating_distribution(spec, code, Cut{1}, 2.0);

    // hand composition: s(w, x1, y2, v) = 0.5[x1] * 0.5[w] * 0.5[y2] * 1{v = y2}
    for_each_coord(sim.s.sizes(), [&](std::size_t flat, const std::vector<std::size_t>& c) {
        std::size_t y2 = c[sim.s.axis_pos("Y2k1")];
        std::size_t v = c[sim.s.axis_pos("V1d2")];
        double want = (v == y2) ? 0.125 : 0.0;
        CHECK(sim.s.value(flat) == doctest::Approx(want).epsilon(1e-12));
    });

    // message marginal preserved and outputs deterministic given inputs
    JointPmf p_full = induced_distribution(spec, code);
    Lemma1Report rep = verify_lemma1(spec, code, p_full, sim, Cut{1}, 2.0);
    CHECK(rep.pass(1e-9));
}

TEST_CASE("lemma 1 properties on fixtures") {
    struct Case {
        NetworkSpec spec;
        double rate;
    };
    std::vector<Case> cases;
    cases.push_back({bsc_network(0.1), 0.5});
    cases.push_back({erasure_relay3_network(0.5), 0.5});

    for (Case& cs : cases) {
        RateTuple rates;
        rates.bits.assign(cs.spec.node_count, 0.0);
        rates.bits[0] = cs.rate;
        for (int n : {1, 2}) {
            Code code = generate_random_code(cs.spec, rates, n, 7,
                                             DecoderKind::MaximumLikelihood);
            JointPmf p_full = induced_distribution(cs.spec, code);
            for (const Cut& cut : enumerate_cuts(cs.spec)) {
                for (double lambda : {1.0, 1.1, 2.0}) {
                    SimulatingDistribution sim =
                        build_simulating_distribution(cs.spec, code, cut, lambda);
                    Lemma1Report rep = verify_lemma1(cs.spec, code, p_full, sim, cut, lambda);
                    CHECK(rep.pass(1e-9));
                    if (lambda == 1.0) CHECK(rep.dev_lambda_one <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("certificate on the perfect 1-bit noiseless code") {
    NetworkSpec spec = noiseless_bit();
    Code code = noiseless_identity(spec);
    Certificate cert = single_letter_certificate(spec, code, Cut{1}, 2, 2.0, 0.0);
    CHECK(cert.alpha == doctest::Approx(0.0));
    CHECK(cert.rate_bound_bits == doctest::Approx(1.0));
    CHECK(cert.lhs_bits >= 1.0 - 1e-9);
    CHECK(cert.chain.back().bits >= 1.0 - 1e-9);
    CHECK(cert.holds(1e-9));
}

TEST_CASE("certificate on a zero-rate code") {
    NetworkSpec spec = bsc_network(0.1);
    Code code = generate_random_code(spec, {{0.0, 0.0}}, 2, 1,
                                     DecoderKind::MaximumLikelihood);
    Certificate cert = single_letter_certificate(spec, code, Cut{1}, 2, 1.5, 0.25);
    CHECK(cert.rate_bound_bits <= 0.0);
    CHECK(cert.lhs_bits >= -1e-12);
    CHECK(cert.holds(1e-9));
}

TEST_CASE("certificate chain on the BSC repetition code") {
    NetworkSpec spec = bsc_network(0.1);
    Code code = bsc_repetition(spec, 2);
    double err = exact_error_probability(spec, code);
    for (double lambda : {1.1, 2.0}) {
        Certificate cert = single_letter_certificate(spec, code, Cut{1}, 2, lambda, err);
        CHECK(cert.holds(1e-9));
        CHECK(cert.min_inequality_slack_bits >= -1e-9);
        CHECK(cert.alpha == doctest::Approx(err).epsilon(1e-12));
        // chain order: rate bound below lhs, lhs below the single-letter sum
        CHECK(cert.rate_bound_bits <= cert.lhs_bits + 1e-9);
    }

    CHECK_THROWS_AS(single_letter_certificate(spec, code, Cut{1}, 1, 2.0, err),
                    shape_error);
    CHECK_THROWS_AS(single_letter_certificate(spec, code, Cut{1}, 2, 1.0, err),
                    invalid_lambda_error);
    CHECK_THROWS_AS(single_letter_certificate(spec, code, Cut{1}, 2, 2.0, err / 2),
                    invalid_probability_error);
}

TEST_CASE("certificates converge to the relative-entropy value as lambda drops") {
    NetworkSpec spec = bsc_network(0.1);
    Code code = bsc_repetition(spec, 2);
    JointPmf m = induced_distribution(spec, code, Cut{1});

    // lambda = 1 reference: sum over k of D(q || p_{Y|X_tc,k} | p_{X,k})
    TiltedSequence base = build_tilted_sequence(spec, m, Cut{1}, 1.0, 2);
    CondKernel q = marginal_channel(spec, Cut{1});
    double limit = 0.0;
    for (int k = 0; k < 2; ++k) {
        CondKernel sk = base.tilted_kernel[k].lift(spec.input_axes());
        limit += conditional_renyi_divergence(q, sk, base.per_time_input[k], 1.0);
    }

    double prev_gap = 1e9;
    for (int k = 2; k <= 10; ++k) {
        double lambda = 1.0 + std::exp2(-k);
        TiltedSequence tilt = build_tilted_sequence(spec, m, Cut{1}, lambda, 2);
        double gap = std::abs(tilt.single_letter_sum_bits() - limit);
        CHECK(gap <= prev_gap + 1e-12);
        prev_gap = gap;
    }
    CHECK(prev_gap <= 1e-2);
}
