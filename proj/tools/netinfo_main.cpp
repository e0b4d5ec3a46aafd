// Command-line surface: network ingestion, per-link capacities and crossing
// bounds, region membership, verification suites, tilted-sequence dumps and
// phase-transition experiments.
//
// Exit codes: 0 success / all checks passed, 1 check failed, 2 parse error,
// 3 budget exhausted.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "netinfo/converse.hpp"
#include "netinfo/info.hpp"
#include "netinfo/json_io.hpp"
#include "netinfo/rng.hpp"

using nlohmann::json;
using namespace netinfo;

namespace {

std::vector<double> parse_double_csv(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

std::vector<int> parse_int_csv(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_double_csv(s)) out.push_back(static_cast<int>(v));
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write output file " + path);
    out << content;
}

struct Options {
    std::string network_path;
    std::string command;
    std::string lambda_csv = "1.1,2";
    std::string rates_csv;
    std::string cuts_csv;
    std::string region = "rout";
    std::string input_csv;  // input distribution for rin / rcutset
    int n = 2;
    std::uint64_t trials = 10000;
    std::string seeds_csv = "0,1,2,3,4,5,6,7,8,9";
    std::uint64_t seed = 0;
    std::string out_path;
    std::string format = "json";
    std::size_t budget_cells = 1000000;
};

Region region_from_name(const std::string& name) {
    if (name == "rout") return Region::Rout;
    if (name == "routstar") return Region::RoutStar;
    if (name == "rin") return Region::Rin;
    if (name == "rcutset") return Region::Rcutset;
    if (name == "rprime") return Region::Rprime;
    throw parse_error("unknown region '" + name + "'");
}

int run_capacity(const NetworkSpec& spec, const Options& opt) {
    if (!spec.links)
        throw parse_error("capacity command needs a product_links network");
    LinkCapacities caps = link_capacities(*spec.links);
    std::vector<CutBound> rp = rprime_bounds(caps, spec, enumerate_cuts(spec));
    if (opt.format == "csv") {
        std::string csv = "kind,from,to,cut_bitmask,value_bits\n";
        char buf[128];
        for (const auto& e : caps.entries) {
            std::snprintf(buf, sizeof(buf), "link,%d,%d,,%.12g\n", e.from, e.to,
                          e.capacity_bits);
            csv += buf;
        }
        for (const auto& b : rp) {
            std::snprintf(buf, sizeof(buf), "cut,,,%u,%.12g\n", b.cut.mask, b.value_bits);
            csv += buf;
        }
        write_output(opt.out_path, csv);
    } else {
        write_output(opt.out_path, capacity_report_to_json(caps, rp).dump(2) + "\n");
    }
    return 0;
}

int run_region(const NetworkSpec& spec, const Options& opt) {
    if (opt.rates_csv.empty()) throw parse_error("region command needs --rates");
    RateTuple rates;
    rates.bits = parse_double_csv(opt.rates_csv);
    std::optional<JointPmf> input;
    if (!opt.input_csv.empty())
        input = JointPmf::make(spec.input_axes(), parse_double_csv(opt.input_csv));
    MembershipReport rep =
        membership_report(spec, rates, region_from_name(opt.region), input);
    write_output(opt.out_path, membership_report_to_json(rep).dump(2) + "\n");
    return 0;
}

int run_tilt(const NetworkSpec& spec, const Options& opt) {
    std::vector<double> lambdas = parse_double_csv(opt.lambda_csv);
    if (lambdas.empty()) throw parse_error("tilt command needs --lambda");
    RateTuple rates;
    if (!opt.rates_csv.empty()) {
        rates.bits = parse_double_csv(opt.rates_csv);
    } else {
        rates.bits.assign(spec.node_count, 0.0);
        for (int s : spec.sources) rates.bits[s - 1] = 0.5;
    }
    std::vector<Cut> cuts;
    if (!opt.cuts_csv.empty())
        for (int mask : parse_int_csv(opt.cuts_csv))
            cuts.push_back(Cut{static_cast<std::uint32_t>(mask)});
    else
        cuts.push_back(Cut{1});
    Code code = generate_random_code(spec, rates, opt.n, opt.seed,
                                     DecoderKind::MaximumLikelihood);
    json out = json::array();
    for (const Cut& cut : cuts) {
        JointPmf m = induced_distribution(spec, code, cut, opt.budget_cells);
        for (double lambda : lambdas) {
            TiltedSequence tilt = build_tilted_sequence(spec, m, cut, lambda, opt.n);
            out.push_back(tilted_sequence_to_json(tilt));
        }
    }
    write_output(opt.out_path, out.dump(2) + "\n");
    return 0;
}

int run_verify(const NetworkSpec& spec, const Options& opt) {
    std::vector<double> lambdas = parse_double_csv(opt.lambda_csv);
    json checks = json::array();
    int failures = 0;
    auto record = [&](const std::string& name, bool passed, const json& detail) {
        json c;
        c["check"] = name;
        c["passed"] = passed;
        c["detail"] = detail;
        if (!passed) ++failures;
        checks.push_back(std::move(c));
    };

    CounterRng rng(opt.seed ^ 0xA5A5A5A5ull);

    // Proposition 2 random suite
    {
        bool ok = true;
        double worst = 1e9;
        for (int t = 0; t < 200; ++t) {
            CounterRng r = rng.split(10).split(t);
            std::size_t w = 2 + r.next_below(7);
            std::vector<double> rows(w * w);
            for (std::size_t u = 0; u < w; ++u) {
                std::vector<double> row = r.next_simplex(w);
                for (std::size_t v = 0; v < w; ++v)
                    rows[u * w + v] = row[v] / static_cast<double>(w);
            }
            JointPmf p_uv = JointPmf::make({{"U", w}, {"V", w}}, rows);
            JointPmf q_v = JointPmf::make({{"V", w}}, r.next_simplex(w));
            double lambda = 1.0 + 0.05 + 3.0 * r.next_unit();
            Prop2Result res = prop2_bound(p_uv, "U", "V", q_v, lambda);
            ok = ok && res.holds;
            worst = std::min(worst, res.lhs_bits - res.rhs_bits);
        }
        record("prop2_random", ok, {{"min_slack_bits", worst}});
    }

    // Proposition 3 random suite
    {
        bool ok = true;
        for (int t = 0; t < 100; ++t) {
            CounterRng r = rng.split(11).split(t);
            std::size_t nx = 2 + r.next_below(2), ny = 2 + r.next_below(2),
                        nz = 1 + r.next_below(3);
            JointPmf p = JointPmf::make({{"A", nx}, {"B", ny}, {"C", nz}},
                                        r.next_simplex(nx * ny * nz));
            for (double lambda : {1.01, 1.1, 1.25}) {
                Prop3Result res = prop3_gap(p, {"A"}, {"B"}, {"C"}, lambda);
                ok = ok && res.holds;
            }
        }
        record("prop3_random", ok, json::object());
    }

    // Markov factorization criterion
    {
        bool ok = true;
        for (int t = 0; t < 50; ++t) {
            CounterRng r = rng.split(12).split(t);
            std::size_t nx = 2, ny = 2 + r.next_below(2), nz = 2;
            JointPmf rxy = JointPmf::make({{"A", nx}, {"B", ny}}, r.next_simplex(nx * ny));
            std::vector<double> rows;
            for (std::size_t y = 0; y < ny; ++y) {
                std::vector<double> row = r.next_simplex(nz);
                rows.insert(rows.end(), row.begin(), row.end());
            }
            CondKernel qzy = CondKernel::make({{"B", ny}}, {{"C", nz}}, rows);
            JointPmf chain = compose(marginalize(rxy, {"B"}), qzy);
            // p(a,b,c) = r(a,b) q(c|b)
            PmfBuilder b({{"A", nx}, {"B", ny}, {"C", nz}});
            for (std::size_t a = 0; a < nx; ++a)
                for (std::size_t y = 0; y < ny; ++y)
                    for (std::size_t c = 0; c < nz; ++c)
                        b.add(a * ny * nz + y * nz + c,
                              rxy.value(a * ny + y) * qzy.value(y, c));
            JointPmf p = b.finish();
            ok = ok && markov_residual(p, {"A"}, {"B"}, {"C"}) <= 1e-12;
            (void)chain;
        }
        record("markov_factorization", ok, json::object());
    }

    // Lemma 1 and certificates on the supplied network
    {
        bool ok = true;
        double worst_dev = 0.0, worst_slack = 1e9;
        json certs = json::array();
        RateTuple rates;
        rates.bits.assign(spec.node_count, 0.0);
        for (int s : spec.sources) rates.bits[s - 1] = 0.5;
        try {
            Code code = generate_random_code(spec, rates, std::min(opt.n, 2), opt.seed,
                                             DecoderKind::MaximumLikelihood);
            double err = exact_error_probability(spec, code);
            double eps_bar = std::min(0.999, err + 1e-12);
            JointPmf pf = induced_distribution(spec, code, std::nullopt, opt.budget_cells);
            for (const Cut& cut : enumerate_cuts(spec)) {
                int dd = 0;
                Cut tcx = cut.complement(spec.node_count);
                for (int dest : spec.destinations)
                    if (tcx.contains(dest)) { dd = dest; break; }
                if (dd == 0) continue;
                for (double lambda : lambdas) {
                    if (lambda <= 1.0) continue;
                    SimulatingDistribution sim =
                        build_simulating_distribution(spec, code, cut, lambda,
                                                      opt.budget_cells);
                    Lemma1Report rep = verify_lemma1(spec, code, pf, sim, cut, lambda);
                    worst_dev = std::max(worst_dev, rep.worst());
                    ok = ok && rep.pass();
                    Certificate cert = single_letter_certificate(spec, code, cut, dd,
                                                                 lambda, eps_bar,
                                                                 opt.budget_cells);
                    worst_slack = std::min(worst_slack, cert.min_inequality_slack_bits);
                    ok = ok && cert.holds();
                    certs.push_back(certificate_to_json(cert));
                }
            }
        } catch (const budget_error& e) {
            record("lemma1_and_certificates", false, {{"error", e.what()}});
            throw;
        }
        record("lemma1_and_certificates", ok,
               {{"worst_dev", worst_dev},
                {"worst_slack_bits", worst_slack},
                {"certificates", std::move(certs)}});
    }

    json out;
    out["checks"] = std::move(checks);
    out["failures"] = failures;
    write_output(opt.out_path, out.dump(2) + "\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-alphabet network information theory toolkit"};
    Options opt;
    std::string n_csv = "2";
    app.add_option("--network", opt.network_path, "network JSON file")->required();
    app.add_option("--command", opt.command,
                   "one of: capacity, region, verify, tilt, simulate")
        ->required();
    app.add_option("--lambda", opt.lambda_csv, "comma-separated Renyi orders");
    app.add_option("--rates", opt.rates_csv,
                   "comma-separated rates (per node for region; grid for simulate)");
    app.add_option("--cuts", opt.cuts_csv, "comma-separated cut bitmasks");
    app.add_option("--region", opt.region, "rout | routstar | rin | rcutset | rprime");
    app.add_option("--input-dist", opt.input_csv,
                   "flat input distribution over X_I (rin / rcutset)");
    app.add_option("--n", n_csv, "blocklength (csv of blocklengths for simulate)");
    app.add_option("--trials", opt.trials, "Monte Carlo trials per cell");
    app.add_option("--seed", opt.seed, "base seed");
    app.add_option("--seeds", opt.seeds_csv, "seed set for simulate");
    app.add_option("--out", opt.out_path, "output file (stdout when empty)");
    app.add_option("--format", opt.format, "json | csv");
    app.add_option("--budget-cells", opt.budget_cells, "tensor cell budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (const char* env = std::getenv("NETINFO_BUDGET_CELLS")) {
        if (!app.count("--budget-cells")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(env, &end, 10);
            if (end && *end == '\0' && v > 0) opt.budget_cells = v;
        }
    }

    try {
        NetworkSpec spec = load_network_file(opt.network_path);
        std::vector<int> ns = parse_int_csv(n_csv);
        opt.n = ns.empty() ? 2 : ns.front();

        if (opt.command == "capacity") return run_capacity(spec, opt);
        if (opt.command == "region") return run_region(spec, opt);
        if (opt.command == "verify") return run_verify(spec, opt);
        if (opt.command == "tilt") return run_tilt(spec, opt);
        if (opt.command == "simulate") {
            std::vector<double> rates = parse_double_csv(opt.rates_csv);
            if (rates.empty()) throw parse_error("simulate needs --rates");
            std::vector<std::uint64_t> seeds;
            for (int s : parse_int_csv(opt.seeds_csv))
                seeds.push_back(static_cast<std::uint64_t>(s));
            std::vector<ExperimentCell> cells = phase_transition_experiment(
                spec, rates, ns, seeds, opt.trials, opt.budget_cells * 20);
            write_output(opt.out_path, experiment_to_csv(cells));
            return 0;
        }
        throw parse_error("unknown command '" + opt.command + "'");
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const budget_error& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
