#include "netinfo/json_io.hpp"

#include <cstdio>
#include <fstream>

namespace netinfo {

using nlohmann::json;

namespace {

double number_of(const json& j, const std::string& what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        try {
            std::size_t used = 0;
            double v = std::stod(j.get<std::string>(), &used);
            if (used == j.get<std::string>().size()) return v;
        } catch (...) {
        }
    }
    throw parse_error("expected a number (or decimal string) for " + what);
}

std::vector<double> number_array(const json& j, const std::string& what) {
    if (!j.is_array()) throw parse_error(what + " must be an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const json& v : j) out.push_back(number_of(v, what));
    return out;
}

std::vector<int> int_array(const json& j, const std::string& what) {
    if (!j.is_array()) throw parse_error(what + " must be an array");
    std::vector<int> out;
    for (const json& v : j) {
        if (!v.is_number_integer()) throw parse_error(what + " must hold integers");
        out.push_back(v.get<int>());
    }
    return out;
}

std::vector<std::size_t> size_array(const json& j, const std::string& what) {
    std::vector<std::size_t> out;
    for (int v : int_array(j, what)) {
        if (v < 1) throw parse_error(what + " entries must be positive");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

}  // namespace

json j12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return json(std::strtod(buf, nullptr));
}

NetworkSpec parse_network_json(const json& j) {
    if (!j.is_object()) throw parse_error("network file must hold a JSON object");
    for (const char* field : {"nodes", "sources", "destinations", "channel"})
        if (!j.contains(field)) throw parse_error(std::string("missing field '") + field + "'");

    int nodes = j.at("nodes").is_number_integer() ? j.at("nodes").get<int>() : -1;
    if (nodes < 1) throw parse_error("'nodes' must be a positive integer");
    std::vector<int> sources = int_array(j.at("sources"), "sources");
    std::vector<int> destinations = int_array(j.at("destinations"), "destinations");

    const json& ch = j.at("channel");
    if (!ch.is_object() || !ch.contains("type"))
        throw parse_error("'channel' must be an object with a 'type'");
    std::string type = ch.at("type").get<std::string>();

    NetworkSpec spec;
    if (type == "dense") {
        spec.node_count = nodes;
        spec.sources = sources;
        spec.destinations = destinations;
        spec.input_sizes = size_array(ch.at("input_sizes"), "input_sizes");
        spec.output_sizes = size_array(ch.at("output_sizes"), "output_sizes");
        if (static_cast<int>(spec.input_sizes.size()) != nodes ||
            static_cast<int>(spec.output_sizes.size()) != nodes)
            throw parse_error("alphabet arrays must have one entry per node");
        std::vector<double> probs = number_array(ch.at("probabilities"), "probabilities");
        std::vector<Axis> from = spec.input_axes();
        std::vector<Axis> to = spec.output_axes();
        if (probs.size() != cell_count(from) * cell_count(to))
            throw parse_error("probability array length does not match alphabets");
        try {
            spec.channel = CondKernel::make(from, to, std::move(probs));
        } catch (const error& e) {
            throw parse_error(std::string("invalid dense channel: ") + e.what());
        }
    } else if (type == "product_links") {
        if (!ch.contains("links") || !ch.at("links").is_array())
            throw parse_error("product_links channel needs a 'links' array");
        LinkChannelTable table;
        for (const json& lj : ch.at("links")) {
            LinkChannel l;
            l.from = lj.at("from").get<int>();
            l.to = lj.at("to").get<int>();
            if (!lj.contains("matrix") || !lj.at("matrix").is_array())
                throw parse_error("link needs a 'matrix' of rows");
            for (const json& row : lj.at("matrix")) {
                std::vector<double> r = number_array(row, "link matrix row");
                if (l.output_size == 1 && l.matrix.empty())
                    l.output_size = r.size();
                else if (r.size() != l.output_size)
                    throw parse_error("ragged link matrix");
                l.matrix.insert(l.matrix.end(), r.begin(), r.end());
            }
            l.input_size = lj.at("matrix").size();
            table.links.push_back(std::move(l));
        }
        try {
            spec = build_independent_dmc_network(table, sources, destinations);
        } catch (const error& e) {
            throw parse_error(std::string("invalid product_links channel: ") + e.what());
        }
        if (spec.node_count != nodes)
            throw parse_error("'nodes' disagrees with the link endpoints");
    } else if (type == "erasure") {
        if (!ch.contains("edges") || !ch.at("edges").is_array())
            throw parse_error("erasure channel needs an 'edges' array");
        std::vector<ErasureEdge> edges;
        for (const json& ej : ch.at("edges")) {
            ErasureEdge e;
            e.from = ej.at("from").get<int>();
            e.to = ej.at("to").get<int>();
            e.erasure_prob = number_of(ej.at("erasure_prob"), "erasure_prob");
            edges.push_back(e);
        }
        std::vector<std::size_t> input_sizes = size_array(ch.at("input_sizes"), "input_sizes");
        if (static_cast<int>(input_sizes.size()) != nodes)
            throw parse_error("input_sizes must have one entry per node");
        try {
            spec = build_erasure_network(edges, input_sizes, sources, destinations);
        } catch (const error& e) {
            throw parse_error(std::string("invalid erasure channel: ") + e.what());
        }
    } else {
        throw parse_error("unknown channel type '" + type + "'");
    }

    std::vector<Diagnostic> diags = validate_network(spec);
    if (!diags.empty())
        throw parse_error("network invalid: " + diags.front().code + ": " +
                          diags.front().message);
    return spec;
}

NetworkSpec load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open network file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("bad JSON: ") + e.what());
    }
    return parse_network_json(j);
}

json network_to_json(const NetworkSpec& spec) {
    json j;
    j["nodes"] = spec.node_count;
    j["sources"] = spec.sources;
    j["destinations"] = spec.destinations;
    json ch;
    ch["type"] = "dense";
    ch["input_sizes"] = spec.input_sizes;
    ch["output_sizes"] = spec.output_sizes;
    json probs = json::array();
    for (double v : spec.channel.rows()) probs.push_back(j12(v));
    ch["probabilities"] = std::move(probs);
    j["channel"] = std::move(ch);
    return j;
}

json membership_report_to_json(const MembershipReport& rep) {
    json j;
    j["region"] = region_name(rep.region);
    j["verdict"] = rep.verdict;
    j["boundary_tol_bits"] = j12(rep.boundary_tol);
    json cuts = json::array();
    for (const CutRecord& r : rep.cuts) {
        json c;
        c["cut_bitmask"] = r.cut.mask;
        c["bound_bits"] = j12(r.bound_bits);
        c["slack_bits"] = j12(r.slack_bits);
        if (r.penalty_bits != 0.0) c["penalty_bits"] = j12(r.penalty_bits);
        json arg = json::array();
        for (double v : r.argmax_input.values()) arg.push_back(j12(v));
        c["argmax_input"] = std::move(arg);
        c["verdict"] = r.verdict;
        cuts.push_back(std::move(c));
    }
    j["cuts"] = std::move(cuts);
    return j;
}

json capacity_report_to_json(const LinkCapacities& caps, const std::vector<CutBound>& rprime) {
    json j;
    json links = json::array();
    for (const LinkCapacities::Entry& e : caps.entries) {
        json l;
        l["from"] = e.from;
        l["to"] = e.to;
        l["capacity_bits"] = j12(e.capacity_bits);
        json arg = json::array();
        for (double v : e.input) arg.push_back(j12(v));
        l["argmax_input"] = std::move(arg);
        links.push_back(std::move(l));
    }
    j["links"] = std::move(links);
    json cuts = json::array();
    for (const CutBound& b : rprime) {
        json c;
        c["cut_bitmask"] = b.cut.mask;
        c["bound_bits"] = j12(b.value_bits);
        cuts.push_back(std::move(c));
    }
    j["rprime"] = std::move(cuts);
    return j;
}

json tilted_sequence_to_json(const TiltedSequence& tilt) {
    json j;
    j["lambda"] = j12(tilt.lambda);
    j["cut_bitmask"] = tilt.cut.mask;
    j["n"] = tilt.n;
    j["substituted_history_rows"] = tilt.substituted_history_rows;
    j["substituted_kernel_rows"] = tilt.substituted_kernel_rows;
    json per_time = json::array();
    for (int k = 0; k < tilt.n; ++k) {
        json e;
        e["k"] = k + 1;
        json input = json::array();
        for (double v : tilt.per_time_input[k].values()) input.push_back(j12(v));
        e["input"] = std::move(input);
        json joint = json::array();
        for (double v : tilt.per_time_joint[k].values()) joint.push_back(j12(v));
        e["joint"] = std::move(joint);
        json kernel = json::array();
        for (double v : tilt.tilted_kernel[k].rows()) kernel.push_back(j12(v));
        e["kernel"] = std::move(kernel);
        e["log2_step_normalizer"] = j12(tilt.log2_step_normalizer[k]);
        per_time.push_back(std::move(e));
    }
    j["per_time"] = std::move(per_time);
    json agg = json::array();
    for (double v : tilt.aggregate_input.values()) agg.push_back(j12(v));
    j["aggregate_input"] = std::move(agg);
    return j;
}

json certificate_to_json(const Certificate& cert) {
    json j;
    j["cut_bitmask"] = cert.cut.mask;
    j["d"] = cert.d;
    j["lambda"] = j12(cert.lambda);
    j["n"] = cert.n;
    j["eps_bar"] = j12(cert.eps_bar);
    j["alpha"] = j12(cert.alpha);
    j["rate_bound_bits"] = j12(cert.rate_bound_bits);
    j["lhs_bits"] = j12(cert.lhs_bits);
    json chain = json::array();
    for (const Certificate::Step& s : cert.chain) {
        json e;
        e["name"] = s.name;
        e["bits"] = j12(s.bits);
        chain.push_back(std::move(e));
    }
    j["chain"] = std::move(chain);
    json slacks = json::array();
    for (const Certificate::Step& s : cert.slacks) {
        json e;
        e["name"] = s.name;
        e["bits"] = j12(s.bits);
        slacks.push_back(std::move(e));
    }
    j["slacks"] = std::move(slacks);
    j["min_inequality_slack_bits"] = j12(cert.min_inequality_slack_bits);
    j["max_equality_dev_bits"] = j12(cert.max_equality_dev_bits);
    j["tilt_identity_l1"] = j12(cert.tilt_identity_l1);
    j["holds"] = cert.holds();
    return j;
}

std::string experiment_to_csv(const std::vector<ExperimentCell>& cells) {
    std::string out = "rate_bits,n,method,error,ci_half_width,seed,cell_runtime_ms\n";
    char buf[256];
    for (const ExperimentCell& c : cells) {
        std::snprintf(buf, sizeof(buf), "%.12g,%d,%s,%.12g,%.12g,%llu,%.0f\n", c.rate_bits,
                      c.n, c.method.c_str(), c.error, c.ci_half_width,
                      static_cast<unsigned long long>(c.seed), c.runtime_ms);
        out += buf;
    }
    return out;
}

}  // namespace netinfo
