#include <doctest.h>

#include <cmath>
#include <limits>

#include "netinfo/info.hpp"
#include "netinfo/rng.hpp"
#include "testutil.hpp"

using namespace netinfo;
using testutil::hb;
using testutil::pushforward;
using testutil::random_kernel;
using testutil::random_pmf;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

JointPmf bsc_joint(double crossover) {
    double c = crossover;
    return JointPmf::make({{"X", 2}, {"Y", 2}},
                          {0.5 * (1 - c), 0.5 * c, 0.5 * c, 0.5 * (1 - c)});
}
}  // namespace

TEST_CASE("conditional entropy") {
    JointPmf diag = JointPmf::make({{"X", 2}, {"Y", 2}}, {0.5, 0, 0, 0.5});
    CHECK(conditional_entropy(diag, {"Y"}, {"X"}) == doctest::Approx(0.0).epsilon(1e-12));

    JointPmf indep = JointPmf::make({{"X", 2}, {"Y", 2}}, {0.25, 0.25, 0.25, 0.25});
    CHECK(conditional_entropy(indep, {"Y"}, {"X"}) == doctest::Approx(1.0));

    CHECK(conditional_entropy(bsc_joint(0.1), {"Y"}, {"X"}) ==
          doctest::Approx(hb(0.1)).epsilon(1e-6));
    CHECK(std::abs(conditional_entropy(bsc_joint(0.1), {"Y"}, {"X"}) - 0.4690) < 1e-4);

    CHECK_THROWS_AS(conditional_entropy(diag, {"X"}, {"X"}), axis_overlap_error);
}

TEST_CASE("conditional mutual information") {
    JointPmf diag = JointPmf::make({{"X", 2}, {"Y", 2}}, {0.5, 0, 0, 0.5});
    JointPmf z = JointPmf::make({{"Z", 2}}, {0.5, 0.5});
    JointPmf p = product(diag, z);
    CHECK(conditional_mutual_information(p, {"X"}, {"Y"}, {"Z"}) == doctest::Approx(1.0));

    // X and Y independent given Z
    CounterRng rng(3);
    PmfBuilder b({{"X", 2}, {"Y", 2}, {"Z", 2}});
    for (std::size_t zz = 0; zz < 2; ++zz) {
        std::vector<double> px = rng.next_simplex(2), py = rng.next_simplex(2);
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t y = 0; y < 2; ++y)
                b.add((x * 2 + y) * 2 + zz, 0.5 * px[x] * py[y]);
    }
    JointPmf ci = b.finish();
    CHECK(conditional_mutual_information(ci, {"X"}, {"Y"}, {"Z"}) ==
          doctest::Approx(0.0).epsilon(1e-12));

    CHECK(std::abs(conditional_mutual_information(bsc_joint(0.1), {"X"}, {"Y"}, {}) -
                   0.5310) < 1e-4);
}

TEST_CASE("relative entropy") {
    JointPmf p = JointPmf::make({{"X", 2}}, {0.5, 0.5});
    JointPmf q = JointPmf::make({{"X", 2}}, {0.25, 0.75});
    CHECK(relative_entropy(p, p) == doctest::Approx(0.0));
    CHECK(std::abs(relative_entropy(p, q) - 0.2075) < 1e-4);

    JointPmf a = JointPmf::make({{"X", 2}}, {1.0, 0.0});
    JointPmf b = JointPmf::make({{"X", 2}}, {0.0, 1.0});
    CHECK(relative_entropy(a, b) == kInf);
}

TEST_CASE("renyi divergence") {
    JointPmf p = JointPmf::make({{"X", 2}}, {0.5, 0.5});
    JointPmf q = JointPmf::make({{"X", 2}}, {0.25, 0.75});
    CHECK(renyi_divergence(p, p, 2.0) == doctest::Approx(0.0));
    CHECK(renyi_divergence(p, q, 2.0) == doctest::Approx(std::log2(4.0 / 3.0)).epsilon(1e-9));
    CHECK(renyi_divergence(p, q, 1.0) == relative_entropy(p, q));
    CHECK_THROWS_AS(renyi_divergence(p, q, 0.5), invalid_lambda_error);

    JointPmf a = JointPmf::make({{"X", 2}}, {1.0, 0.0});
    JointPmf b = JointPmf::make({{"X", 2}}, {0.0, 1.0});
    CHECK(renyi_divergence(a, b, 2.0) == kInf);
}

TEST_CASE("conditional renyi divergence") {
    CounterRng rng(5);
    // singleton conditioning reduces to the unconditional divergence
    CondKernel pk = random_kernel(rng, {{"Z", 1}}, {{"X", 3}});
    CondKernel qk = random_kernel(rng, {{"Z", 1}}, {{"X", 3}});
    JointPmf r1 = JointPmf::make({{"Z", 1}}, {1.0});
    JointPmf pv = JointPmf::make({{"X", 3}}, {pk.value(0, 0), pk.value(0, 1), pk.value(0, 2)});
    JointPmf qv = JointPmf::make({{"X", 3}}, {qk.value(0, 0), qk.value(0, 1), qk.value(0, 2)});
    for (double lambda : {1.0, 1.5, 3.0})
        CHECK(conditional_renyi_divergence(pk, qk, r1, lambda) ==
              doctest::Approx(renyi_divergence(pv, qv, lambda)).epsilon(1e-12));

    CondKernel k = random_kernel(rng, {{"Z", 2}}, {{"X", 3}});
    JointPmf rz = JointPmf::make({{"Z", 2}}, {0.5, 0.5});
    CHECK(conditional_renyi_divergence(k, k, rz, 3.0) == doctest::Approx(0.0));

    // two-row composition matches combining per-row divergences
    CondKernel p2 = random_kernel(rng, {{"Z", 2}}, {{"X", 3}});
    CondKernel q2 = random_kernel(rng, {{"Z", 2}}, {{"X", 3}});
    double lambda = 2.5;
    auto row_pmf = [](const CondKernel& kk, std::size_t r) {
        return JointPmf::make({{"X", 3}}, {kk.value(r, 0), kk.value(r, 1), kk.value(r, 2)});
    };
    double d1 = renyi_divergence(row_pmf(p2, 0), row_pmf(q2, 0), lambda);
    double d2 = renyi_divergence(row_pmf(p2, 1), row_pmf(q2, 1), lambda);
    double want = std::log2(0.5 * std::exp2((lambda - 1) * d1) +
                            0.5 * std::exp2((lambda - 1) * d2)) /
                  (lambda - 1);
    CHECK(conditional_renyi_divergence(p2, q2, rz, lambda) ==
          doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("divergence properties on random instances") {
    const std::vector<double> lambdas = {1.0, 1.1, 2.0, 4.0};
    CounterRng base(0xD1CE);
    for (int t = 0; t < 300; ++t) {
        CounterRng rng = base.split(t);
        std::size_t m = 2 + rng.next_below(5);
        JointPmf p = random_pmf(rng, {{"X", m}});
        JointPmf q = random_pmf(rng, {{"X", m}});

        // deterministic map for the DPI
        std::size_t z = 1 + rng.next_below(m);
        std::vector<std::size_t> g(m);
        for (std::size_t i = 0; i < m; ++i) g[i] = rng.next_below(z);
        JointPmf pg = pushforward(p, g, z, "Z");
        JointPmf qg = pushforward(q, g, z, "Z");

        double prev = -1.0;
        for (double lambda : lambdas) {
            double d = renyi_divergence(p, q, lambda);
            double dg = renyi_divergence(pg, qg, lambda);
            CHECK(d >= -1e-12);                 // nonnegativity
            CHECK(dg <= d + 1e-12);             // data processing
            CHECK(d >= prev - 1e-12);           // monotone in lambda
            prev = d;
        }

        // marginal DPI on a joint
        JointPmf pj = random_pmf(rng, {{"X", 2}, {"Y", 3}});
        JointPmf qj = random_pmf(rng, {{"X", 2}, {"Y", 3}});
        for (double lambda : lambdas)
            CHECK(renyi_divergence(marginalize(pj, {"X"}), marginalize(qj, {"X"}), lambda) <=
                  renyi_divergence(pj, qj, lambda) + 1e-12);

        // continuity: |D_lambda - D_1| decreasing along lambda = 1 + 2^-k
        double d1 = relative_entropy(p, q);
        double prev_gap = kInf;
        for (int k = 1; k <= 12; ++k) {
            double gap = std::abs(renyi_divergence(p, q, 1.0 + std::exp2(-k)) - d1);
            CHECK(gap <= prev_gap + 1e-12);
            prev_gap = gap;
        }
    }
}

TEST_CASE("conditional relative entropy weights rows") {
    CounterRng rng(17);
    JointPmf p = random_pmf(rng, {{"X", 2}, {"Z", 2}});
    JointPmf q = random_pmf(rng, {{"X", 2}, {"Z", 2}});
    JointPmf r = marginalize(p, {"Z"});
    double got = conditional_relative_entropy(p, q, {"X"}, {"Z"}, r);
    CondKernel pk = condition(p, {"Z"});
    CondKernel qk = condition(q, {"Z"});
    double want = 0.0;
    for (std::size_t zz = 0; zz < 2; ++zz) {
        JointPmf pz = JointPmf::make({{"X", 2}}, {pk.value(zz, 0), pk.value(zz, 1)});
        JointPmf qz = JointPmf::make({{"X", 2}}, {qk.value(zz, 0), qk.value(zz, 1)});
        want += r.value(zz) * relative_entropy(pz, qz);
    }
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
}
