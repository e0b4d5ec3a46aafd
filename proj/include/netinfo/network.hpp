#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netinfo/pmf.hpp"

// Discrete memoryless multimessage multicast networks: N nodes, per-node
// finite input/output alphabets, one row-stochastic channel from the input
// product alphabet to the output product alphabet, and a multicast demand
// (sources S, destinations D). Nodes are numbered 1..N.

namespace netinfo {

// Subset of nodes stored as a bitmask; node i corresponds to bit (i-1).
struct Cut {
    std::uint32_t mask = 0;

    bool contains(int node) const { return (mask >> (node - 1)) & 1u; }
    Cut complement(int node_count) const {
        return Cut{static_cast<std::uint32_t>(~mask & ((1u << node_count) - 1u))};
    }
    std::vector<int> members(int node_count) const;
    friend bool operator==(const Cut&, const Cut&) = default;
};

std::string axis_name_x(int node);            // "X3"
std::string axis_name_y(int node);            // "Y3"
std::string axis_name_x(int node, int time);  // "X3k1"
std::string axis_name_y(int node, int time);  // "Y3k1"

// One point-to-point DMC per ordered node pair; absent pairs are
// zero-capacity links carried as singleton alphabets.
struct LinkChannel {
    int from = 0;
    int to = 0;
    std::size_t input_size = 1;
    std::size_t output_size = 1;
    std::vector<double> matrix;  // row-major input x output, row-stochastic
};

struct LinkChannelTable {
    std::vector<LinkChannel> links;

    const LinkChannel* find(int from, int to) const;
};

struct Diagnostic {
    std::string code;
    std::string message;
};

struct NetworkSpec {
    int node_count = 0;
    std::vector<int> sources;
    std::vector<int> destinations;
    std::vector<std::size_t> input_sizes;   // |X_i|, indexed by node-1
    std::vector<std::size_t> output_sizes;  // |Y_i|
    CondKernel channel;                     // from (X_1..X_N) to (Y_1..Y_N)

    // Present when built from independent per-link DMCs; enables the
    // crossing-capacity region.
    std::optional<LinkChannelTable> links;

    std::vector<Axis> input_axes() const;
    std::vector<Axis> output_axes() const;
    std::vector<Axis> input_axes(const std::vector<int>& nodes) const;
    std::vector<Axis> output_axes(const std::vector<int>& nodes) const;
    bool is_source(int node) const;
    bool is_destination(int node) const;
};

// Reports every invariant violation; an empty report means the spec is valid.
std::vector<Diagnostic> validate_network(const NetworkSpec& spec);
void require_valid(const NetworkSpec& spec);

// q_{Y_{T^c} | X_I}: sums the channel over the outputs of nodes in T.
CondKernel marginal_channel(const NetworkSpec& spec, const Cut& cut);

// Network whose channel is the product of independent per-link DMCs. Node
// inputs are tuples of outgoing-link inputs (by destination index ascending);
// node outputs are tuples of incoming-link outputs (by origin ascending).
NetworkSpec build_independent_dmc_network(const LinkChannelTable& links,
                                          std::vector<int> sources,
                                          std::vector<int> destinations);

struct ErasureEdge {
    int from = 0;
    int to = 0;
    double erasure_prob = 0.0;
};

// Wireless erasure network: each node broadcasts one symbol, each edge
// independently delivers it or an erasure, and every destination observes
// the erasure pattern of the entire network as side information (an extra
// coordinate of its output).
NetworkSpec build_erasure_network(const std::vector<ErasureEdge>& edges,
                                  const std::vector<std::size_t>& input_sizes,
                                  std::vector<int> sources,
                                  std::vector<int> destinations);

// Feedback version for a single destination d: every node's output gains a
// literal copy of Y_d. Requires destinations == {d}.
NetworkSpec build_feedback_version(const NetworkSpec& spec, int d);

// True for cut T iff for every input and every supported y_{T^c} exactly one
// y_T has positive probability. This channel-level condition guarantees
// H(Y_T | X_I, Y_{T^c}) = 0 under every input distribution.
std::vector<bool> check_determinism(const NetworkSpec& spec, const std::vector<Cut>& cuts);

// Decoding helpers for erasure networks (used by code simulation): the
// destination output symbol encodes (incoming edge outputs, pattern).
struct ErasureLayout {
    std::vector<ErasureEdge> edges;
    std::vector<std::size_t> input_sizes;
};

}  // namespace netinfo
