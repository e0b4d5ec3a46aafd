#include "netinfo/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "netinfo/info.hpp"

namespace netinfo {

std::vector<int> Cut::members(int node_count) const {
    std::vector<int> out;
    for (int i = 1; i <= node_count; ++i)
        if (contains(i)) out.push_back(i);
    return out;
}

std::string axis_name_x(int node) { return "X" + std::to_string(node); }
std::string axis_name_y(int node) { return "Y" + std::to_string(node); }
std::string axis_name_x(int node, int time) {
    return "X" + std::to_string(node) + "k" + std::to_string(time);
}
std::string axis_name_y(int node, int time) {
    return "Y" + std::to_string(node) + "k" + std::to_string(time);
}

const LinkChannel* LinkChannelTable::find(int from, int to) const {
    for (const LinkChannel& l : links)
        if (l.from == from && l.to == to) return &l;
    return nullptr;
}

std::vector<Axis> NetworkSpec::input_axes() const {
    std::vector<Axis> axes;
    for (int i = 1; i <= node_count; ++i)
        axes.push_back({axis_name_x(i), input_sizes[i - 1]});
    std::sort(axes.begin(), axes.end(),
              [](const Axis& a, const Axis& b) { return a.name < b.name; });
    return axes;
}

std::vector<Axis> NetworkSpec::output_axes() const {
    std::vector<Axis> axes;
    for (int i = 1; i <= node_count; ++i)
        axes.push_back({axis_name_y(i), output_sizes[i - 1]});
    std::sort(axes.begin(), axes.end(),
              [](const Axis& a, const Axis& b) { return a.name < b.name; });
    return axes;
}

std::vector<Axis> NetworkSpec::input_axes(const std::vector<int>& nodes) const {
    std::vector<Axis> axes;
    for (int i : nodes) axes.push_back({axis_name_x(i), input_sizes[i - 1]});
    std::sort(axes.begin(), axes.end(),
              [](const Axis& a, const Axis& b) { return a.name < b.name; });
    return axes;
}

std::vector<Axis> NetworkSpec::output_axes(const std::vector<int>& nodes) const {
    std::vector<Axis> axes;
    for (int i : nodes) axes.push_back({axis_name_y(i), output_sizes[i - 1]});
    std::sort(axes.begin(), axes.end(),
              [](const Axis& a, const Axis& b) { return a.name < b.name; });
    return axes;
}

bool NetworkSpec::is_source(int node) const {
    return std::find(sources.begin(), sources.end(), node) != sources.end();
}

bool NetworkSpec::is_destination(int node) const {
    return std::find(destinations.begin(), destinations.end(), node) != destinations.end();
}

std::vector<Diagnostic> validate_network(const NetworkSpec& spec) {
    std::vector<Diagnostic> out;
    if (spec.node_count < 1)
        out.push_back({"BadNodeCount", "node_count must be positive"});
    if (spec.sources.empty())
        out.push_back({"MissingSources", "source set is empty"});
    if (spec.destinations.empty())
        out.push_back({"MissingDestinations", "destination set is empty"});
    for (int s : spec.sources)
        if (s < 1 || s > spec.node_count)
            out.push_back({"BadNodeIndex", "source " + std::to_string(s) + " out of range"});
    for (int d : spec.destinations)
        if (d < 1 || d > spec.node_count)
            out.push_back({"BadNodeIndex", "destination " + std::to_string(d) + " out of range"});
    if (static_cast<int>(spec.input_sizes.size()) != spec.node_count ||
        static_cast<int>(spec.output_sizes.size()) != spec.node_count) {
        out.push_back({"AlphabetMismatch", "alphabet lists must have one entry per node"});
        return out;
    }
    for (std::size_t sz : spec.input_sizes)
        if (sz < 1) out.push_back({"AlphabetMismatch", "input alphabet size 0"});
    for (std::size_t sz : spec.output_sizes)
        if (sz < 1) out.push_back({"AlphabetMismatch", "output alphabet size 0"});

    if (spec.channel.from_axes() != spec.input_axes() ||
        spec.channel.to_axes() != spec.output_axes()) {
        out.push_back({"AlphabetMismatch", "channel axes do not match node alphabets"});
        return out;
    }
    for (std::size_t r = 0; r < spec.channel.from_count(); ++r) {
        double s = 0.0;
        bool negative = false;
        for (std::size_t c = 0; c < spec.channel.to_count(); ++c) {
            double v = spec.channel.value(r, c);
            if (v < 0.0) negative = true;
            s += v;
        }
        if (negative)
            out.push_back({"NegativeMass", "channel row " + std::to_string(r) +
                                               " has a negative entry"});
        if (std::abs(s - 1.0) > kNormalizationTol)
            out.push_back({"NotNormalized", "channel row " + std::to_string(r) +
                                                " sums to " + std::to_string(s)});
    }
    return out;
}

void require_valid(const NetworkSpec& spec) {
    std::vector<Diagnostic> d = validate_network(spec);
    if (!d.empty()) throw invalid_probability_error("invalid network: " + d.front().message);
}

CondKernel marginal_channel(const NetworkSpec& spec, const Cut& cut) {
    if (cut.mask >= (1u << spec.node_count))
        throw shape_error("cut references nodes outside the network");
    Cut tc = cut.complement(spec.node_count);
    std::vector<std::string> keep;
    for (int i : tc.members(spec.node_count)) keep.push_back(axis_name_y(i));
    std::sort(keep.begin(), keep.end());
    return spec.channel.marginalize_outputs(keep);
}

namespace {

// mixed-radix digit for component `slot` given component sizes (slot 0 is the
// most significant digit)
std::size_t tuple_digit(std::size_t value, const std::vector<std::size_t>& sizes,
                        std::size_t slot) {
    for (std::size_t i = sizes.size(); i-- > slot + 1;) value /= sizes[i];
    return value % sizes[slot];
}

}  // namespace

NetworkSpec build_independent_dmc_network(const LinkChannelTable& links,
                                          std::vector<int> sources,
                                          std::vector<int> destinations) {
    int n = 0;
    for (const LinkChannel& l : links.links) {
        if (l.from < 1 || l.to < 1)
            throw shape_error("link endpoints must be positive node indices");
        n = std::max({n, l.from, l.to});
        if (l.matrix.size() != l.input_size * l.output_size)
            throw axis_mismatch_error("link matrix does not match alphabet sizes");
    }
    for (int s : sources) n = std::max(n, s);
    for (int d : destinations) n = std::max(n, d);
    if (n == 0) throw shape_error("empty link table");

    // Per-node tuple layouts. Outgoing links of i ordered by destination j,
    // incoming links of j ordered by origin i; absent links are singletons
    // and get dropped from the tuples.
    struct NodeLinks {
        std::vector<const LinkChannel*> out;  // ordered by `to`
        std::vector<const LinkChannel*> in;   // ordered by `from`
    };
    std::vector<NodeLinks> node(n + 1);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if (const LinkChannel* l = links.find(i, j)) {
                if (l->input_size > 1 || l->output_size > 1) {
                    node[i].out.push_back(l);
                    node[j].in.push_back(l);
                }
            }
        }
    }
    // fix ordering of incoming lists by origin
    for (int j = 1; j <= n; ++j)
        std::sort(node[j].in.begin(), node[j].in.end(),
                  [](const LinkChannel* a, const LinkChannel* b) { return a->from < b->from; });

    NetworkSpec spec;
    spec.node_count = n;
    spec.sources = std::move(sources);
    spec.destinations = std::move(destinations);
    spec.input_sizes.assign(n, 1);
    spec.output_sizes.assign(n, 1);
    for (int i = 1; i <= n; ++i) {
        for (const LinkChannel* l : node[i].out) spec.input_sizes[i - 1] *= l->input_size;
        for (const LinkChannel* l : node[i].in) spec.output_sizes[i - 1] *= l->output_size;
    }

    std::vector<Axis> from = spec.input_axes();
    std::vector<Axis> to = spec.output_axes();

    // axis order is canonical (sorted name), so map node -> position
    std::vector<std::size_t> xpos(n + 1), ypos(n + 1);
    for (std::size_t i = 0; i < from.size(); ++i)
        for (int v = 1; v <= n; ++v)
            if (from[i].name == axis_name_x(v)) xpos[v] = i;
    for (std::size_t i = 0; i < to.size(); ++i)
        for (int v = 1; v <= n; ++v)
            if (to[i].name == axis_name_y(v)) ypos[v] = i;

    std::vector<std::size_t> from_sizes, to_sizes;
    for (const Axis& a : from) from_sizes.push_back(a.size);
    for (const Axis& a : to) to_sizes.push_back(a.size);

    std::size_t rows_n = cell_count(from), cols_n = cell_count(to);
    std::vector<double> rows(rows_n * cols_n, 0.0);

    std::vector<std::size_t> out_sizes_of(n + 1), in_sizes_of(n + 1);
    std::vector<std::vector<std::size_t>> out_dims(n + 1), in_dims(n + 1);
    for (int i = 1; i <= n; ++i) {
        for (const LinkChannel* l : node[i].out) out_dims[i].push_back(l->input_size);
        for (const LinkChannel* l : node[i].in) in_dims[i].push_back(l->output_size);
    }

    for_each_coord(from_sizes, [&](std::size_t r, const std::vector<std::size_t>& xc) {
        for_each_coord(to_sizes, [&](std::size_t c, const std::vector<std::size_t>& yc) {
            double p = 1.0;
            for (int j = 1; j <= n && p > 0.0; ++j) {
                for (std::size_t slot = 0; slot < node[j].in.size() && p > 0.0; ++slot) {
                    const LinkChannel* l = node[j].in[slot];
                    // digit of x_{l->from} for this link
                    std::size_t out_slot = 0;
                    for (std::size_t t = 0; t < node[l->from].out.size(); ++t)
                        if (node[l->from].out[t] == l) out_slot = t;
                    std::size_t x_sym =
                        tuple_digit(xc[xpos[l->from]], out_dims[l->from], out_slot);
                    std::size_t y_sym = tuple_digit(yc[ypos[j]], in_dims[j], slot);
                    p *= l->matrix[x_sym * l->output_size + y_sym];
                }
            }
            if (p != 0.0) rows[r * cols_n + c] = p;
        });
    });

    spec.channel = CondKernel::make(from, to, std::move(rows));
    spec.links = links;
    require_valid(spec);
    return spec;
}

NetworkSpec build_erasure_network(const std::vector<ErasureEdge>& edges,
                                  const std::vector<std::size_t>& input_sizes,
                                  std::vector<int> sources,
                                  std::vector<int> destinations) {
    for (const ErasureEdge& e : edges)
        if (e.erasure_prob < 0.0 || e.erasure_prob > 1.0)
            throw invalid_probability_error("erasure probability outside [0,1]");

    int n = static_cast<int>(input_sizes.size());
    for (const ErasureEdge& e : edges) {
        if (e.from < 1 || e.from > n || e.to < 1 || e.to > n)
            throw shape_error("erasure edge endpoint out of range");
    }

    std::size_t pattern_count = std::size_t{1} << edges.size();

    NetworkSpec spec;
    spec.node_count = n;
    spec.sources = std::move(sources);
    spec.destinations = std::move(destinations);
    spec.input_sizes = input_sizes;
    // nodes with no outgoing edge do not transmit: singleton input
    std::vector<bool> has_out(n + 1, false);
    for (const ErasureEdge& e : edges) has_out[e.from] = true;
    for (int i = 1; i <= n; ++i)
        if (!has_out[i]) spec.input_sizes[i - 1] = 1;

    // per-node incoming edges, ordered by origin
    std::vector<std::vector<std::size_t>> in_edges(n + 1);
    for (std::size_t e = 0; e < edges.size(); ++e) in_edges[edges[e].to].push_back(e);
    for (int j = 1; j <= n; ++j)
        std::sort(in_edges[j].begin(), in_edges[j].end(), [&](std::size_t a, std::size_t b) {
            return edges[a].from < edges[b].from;
        });

    spec.output_sizes.assign(n, 1);
    std::vector<std::vector<std::size_t>> y_dims(n + 1);
    for (int j = 1; j <= n; ++j) {
        for (std::size_t e : in_edges[j]) {
            std::size_t sz = spec.input_sizes[edges[e].from - 1] + 1;  // + erasure symbol
            y_dims[j].push_back(sz);
            spec.output_sizes[j - 1] *= sz;
        }
        if (spec.is_destination(j)) {
            y_dims[j].push_back(pattern_count);
            spec.output_sizes[j - 1] *= pattern_count;
        }
    }

    std::vector<Axis> from = spec.input_axes();
    std::vector<Axis> to = spec.output_axes();
    std::vector<std::size_t> xpos(n + 1), ypos(n + 1);
    for (std::size_t i = 0; i < from.size(); ++i)
        for (int v = 1; v <= n; ++v)
            if (from[i].name == axis_name_x(v)) xpos[v] = i;
    for (std::size_t i = 0; i < to.size(); ++i)
        for (int v = 1; v <= n; ++v)
            if (to[i].name == axis_name_y(v)) ypos[v] = i;

    std::vector<std::size_t> from_sizes;
    for (const Axis& a : from) from_sizes.push_back(a.size);
    std::vector<std::size_t> to_strides(to.size(), 1);
    for (std::size_t i = to.size(); i-- > 1;) to_strides[i - 1] = to_strides[i] * to[i].size;

    std::size_t rows_n = cell_count(from), cols_n = cell_count(to);
    std::vector<double> rows(rows_n * cols_n, 0.0);

    for_each_coord(from_sizes, [&](std::size_t r, const std::vector<std::size_t>& xc) {
        for (std::size_t pattern = 0; pattern < pattern_count; ++pattern) {
            double p = 1.0;
            for (std::size_t e = 0; e < edges.size(); ++e) {
                bool erased = (pattern >> e) & 1u;
                p *= erased ? edges[e].erasure_prob : 1.0 - edges[e].erasure_prob;
            }
            if (p == 0.0) continue;
            // outputs are a function of (x, pattern)
            std::size_t col = 0;
            for (int j = 1; j <= n; ++j) {
                std::size_t y_sym = 0;
                std::size_t slot = 0;
                for (std::size_t e : in_edges[j]) {
                    bool erased = (pattern >> e) & 1u;
                    std::size_t edge_sym =
                        erased ? spec.input_sizes[edges[e].from - 1]  // erasure symbol
                               : xc[xpos[edges[e].from]];
                    y_sym = y_sym * y_dims[j][slot] + edge_sym;
                    ++slot;
                }
                if (spec.is_destination(j)) y_sym = y_sym * pattern_count + pattern;
                col += y_sym * to_strides[ypos[j]];
            }
            rows[r * cols_n + col] += p;
        }
    });

    spec.channel = CondKernel::make(from, to, std::move(rows));
    require_valid(spec);
    return spec;
}

NetworkSpec build_feedback_version(const NetworkSpec& spec, int d) {
    require_valid(spec);
    if (spec.destinations.size() != 1 || spec.destinations.front() != d)
        throw shape_error("feedback version requires the single destination {d}");

    NetworkSpec fb;
    fb.node_count = spec.node_count;
    fb.sources = spec.sources;
    fb.destinations = spec.destinations;
    fb.input_sizes = spec.input_sizes;
    fb.output_sizes.resize(spec.node_count);
    std::size_t yd = spec.output_sizes[d - 1];
    for (int i = 1; i <= spec.node_count; ++i)
        fb.output_sizes[i - 1] = spec.output_sizes[i - 1] * yd;

    std::vector<Axis> from = fb.input_axes();
    std::vector<Axis> to = fb.output_axes();

    std::vector<Axis> old_to = spec.output_axes();
    std::vector<std::size_t> old_sizes;
    for (const Axis& a : old_to) old_sizes.push_back(a.size);
    std::vector<std::size_t> new_strides(to.size(), 1);
    for (std::size_t i = to.size(); i-- > 1;) new_strides[i - 1] = new_strides[i] * to[i].size;

    // position of node i's Y axis (same sorted order in old and new lists)
    std::vector<std::size_t> ypos(spec.node_count + 1);
    for (std::size_t i = 0; i < old_to.size(); ++i)
        for (int v = 1; v <= spec.node_count; ++v)
            if (old_to[i].name == axis_name_y(v)) ypos[v] = i;

    std::size_t cols_n = cell_count(to);
    std::vector<double> rows(spec.channel.from_count() * cols_n, 0.0);
    for (std::size_t r = 0; r < spec.channel.from_count(); ++r) {
        for_each_coord(old_sizes, [&](std::size_t c, const std::vector<std::size_t>& yc) {
            double v = spec.channel.value(r, c);
            if (v == 0.0) return;
            std::size_t y_d = yc[ypos[d]];
            std::size_t col = 0;
            for (int i = 1; i <= spec.node_count; ++i)
                col += (yc[ypos[i]] * yd + y_d) * new_strides[ypos[i]];
            rows[r * cols_n + col] += v;
        });
    }
    fb.channel = CondKernel::make(from, to, std::move(rows));
    require_valid(fb);
    return fb;
}

std::vector<bool> check_determinism(const NetworkSpec& spec, const std::vector<Cut>& cuts) {
    require_valid(spec);
    std::vector<bool> out;
    out.reserve(cuts.size());
    for (const Cut& cut : cuts) {
        Cut tc = cut.complement(spec.node_count);
        std::vector<std::string> tc_names;
        for (int i : tc.members(spec.node_count)) tc_names.push_back(axis_name_y(i));
        std::sort(tc_names.begin(), tc_names.end());

        // group Y_{T^c} coordinates inside the full output tuple
        std::vector<std::size_t> tc_pos;
        const std::vector<Axis>& to = spec.channel.to_axes();
        for (const std::string& nm : tc_names)
            for (std::size_t i = 0; i < to.size(); ++i)
                if (to[i].name == nm) tc_pos.push_back(i);
        std::sort(tc_pos.begin(), tc_pos.end());
        AxisGroup g(tc_pos, to);

        std::vector<std::size_t> to_sizes;
        for (const Axis& a : to) to_sizes.push_back(a.size);

        bool deterministic = true;
        std::vector<std::size_t> seen;  // y_{T^c} index -> count of supported y_T
        for (std::size_t r = 0; r < spec.channel.from_count() && deterministic; ++r) {
            seen.assign(g.count(), 0);
            for_each_coord(to_sizes, [&](std::size_t c, const std::vector<std::size_t>& yc) {
                if (spec.channel.value(r, c) > 0.0) ++seen[g.index_of(yc)];
            });
            for (std::size_t v : seen)
                if (v > 1) { deterministic = false; break; }
        }
        out.push_back(deterministic);
    }
    return out;
}

}  // namespace netinfo
