#pragma once

#include <cstdint>
#include <vector>

#include "netinfo/network.hpp"
#include "netinfo/regions.hpp"

// Block codes on a DM-MMN: per-node per-time encoder tables (with optional
// output feedback) and per-(source, destination) decoder tables.

namespace netinfo {

struct Code {
    static constexpr std::uint32_t kDecodeFail = 0xFFFFFFFFu;

    struct Encoder {
        bool feedback_blind = true;
        // feedback_blind: table[w]; otherwise table[w * |Y_i|^(k-1) + y_hist]
        std::vector<std::uint32_t> table;
    };
    struct Decoder {
        int source = 0;  // message being decoded
        int sink = 0;    // node doing the decoding
        // table[w_sink * |Y_sink|^n + y_hist] -> estimate (or kDecodeFail)
        std::vector<std::uint32_t> table;
    };

    int n = 0;
    RateTuple rates;
    std::vector<std::size_t> message_sizes;       // ceil(2^{n R_i}), 1 off-source
    std::vector<std::vector<Encoder>> encoders;   // [node-1][time-1]
    std::vector<Decoder> decoders;                // one per (i, j) in S x D

    std::uint32_t encode(int node, int time, std::size_t w, std::size_t y_hist) const;
    const Decoder& decoder(int source, int sink) const;
    bool any_decoder_can_fail() const;
};

std::vector<std::size_t> message_sizes_for(const NetworkSpec& spec, const RateTuple& rates,
                                           int n);

void validate_code(const NetworkSpec& spec, const Code& code);

enum class DecoderKind { MaximumLikelihood, RandomTable };

// Random code: encoder tables i.i.d. uniform over the input alphabets
// (feedback-blind). The ML decoder maximizes the exact likelihood of the
// observation, ties broken toward the smallest message index.
Code generate_random_code(const NetworkSpec& spec, const RateTuple& rates, int n,
                          std::uint64_t seed, DecoderKind decoder,
                          std::size_t trajectory_budget = 50000000);

// Repetition code for a 2-node erasure link with output symbols
// {0, 1, erasure}: message_bits bits, each transmitted `copies` times
// (n = message_bits * copies). The decoder resolves a bit from any surviving
// copy and reports a decoding failure when every copy of some bit is erased;
// failures count as errors.
Code make_bec_repetition_code(const NetworkSpec& spec, int message_bits, int copies);

// Adapts a code for `spec` to run unchanged on the feedback version of the
// network: encoders already ignore the added outputs, decoders read only the
// original output coordinate.
Code lift_code_to_feedback(const NetworkSpec& spec, const NetworkSpec& feedback_spec,
                           const Code& code, int d);

}  // namespace netinfo
