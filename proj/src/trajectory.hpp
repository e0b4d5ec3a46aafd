#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "netinfo/codes.hpp"

// Internal: enumeration of positive-probability (x^n, y^n) trajectories of a
// code on a network, shared by exact error computation, ML decoder
// construction and induced-distribution assembly.

namespace netinfo::detail {

struct ChannelWalk {
    explicit ChannelWalk(const NetworkSpec& spec);

    int node_count = 0;
    std::vector<std::size_t> x_stride;  // node-1 -> stride into channel row index
    std::vector<std::size_t> y_size;    // node-1 -> |Y_i|
    std::size_t max_row_support = 0;
    // per channel row, the supported (column, probability) pairs
    std::vector<std::vector<std::pair<std::size_t, double>>> row_support;
    // per channel column, the per-node output symbols
    std::vector<std::vector<std::uint32_t>> col_y;
};

// Leaf callback: (prob, xs, ys, final_hist) where xs/ys are [time][node]
// flattened as k * N + i and final_hist[i] is node i's full n-step output
// history as a flat mixed-radix index.
template <class Leaf>
class Walker {
public:
    Walker(const NetworkSpec& spec, const Code& code, const ChannelWalk& cw, Leaf& leaf,
           std::size_t* leaf_budget)
        : code_(code), cw_(cw), leaf_(leaf), budget_(leaf_budget), n_(code.n),
          node_count_(spec.node_count) {
        hist_.assign(static_cast<std::size_t>(n_ + 1) * node_count_, 0);
        xs_.assign(static_cast<std::size_t>(n_) * node_count_, 0);
        ys_.assign(static_cast<std::size_t>(n_) * node_count_, 0);
    }

    void run(const std::vector<std::size_t>& w) {
        w_ = &w;
        step(0, 1.0);
    }

private:
    void step(int k, double prob) {
        if (k == n_) {
            if (budget_) {
                if (*budget_ == 0)
                    throw budget_error("trajectory enumeration budget exhausted");
                --*budget_;
            }
            leaf_(prob, xs_.data(), ys_.data(), &hist_[static_cast<std::size_t>(n_) * node_count_]);
            return;
        }
        std::size_t row = 0;
        std::size_t base = static_cast<std::size_t>(k) * node_count_;
        for (int i = 0; i < node_count_; ++i) {
            std::uint32_t x = code_.encode(i + 1, k + 1, (*w_)[i], hist_[base + i]);
            xs_[base + i] = x;
            row += x * cw_.x_stride[i];
        }
        for (const auto& [col, q] : cw_.row_support[row]) {
            const std::vector<std::uint32_t>& ysym = cw_.col_y[col];
            for (int i = 0; i < node_count_; ++i) {
                ys_[base + i] = ysym[i];
                hist_[base + node_count_ + i] = hist_[base + i] * cw_.y_size[i] + ysym[i];
            }
            step(k + 1, prob * q);
        }
    }

    const Code& code_;
    const ChannelWalk& cw_;
    Leaf& leaf_;
    std::size_t* budget_;
    int n_;
    int node_count_;
    const std::vector<std::size_t>* w_ = nullptr;
    std::vector<std::size_t> hist_;
    std::vector<std::uint32_t> xs_, ys_;
};

template <class Leaf>
void walk_trajectories(const NetworkSpec& spec, const Code& code, const ChannelWalk& cw,
                       const std::vector<std::size_t>& w, Leaf&& leaf,
                       std::size_t* leaf_budget = nullptr) {
    Walker<Leaf> walker(spec, code, cw, leaf, leaf_budget);
    walker.run(w);
}

// Odometer over message tuples; f(w, uniform_weight).
template <class F>
void for_each_message_tuple(const std::vector<std::size_t>& message_sizes, F&& f) {
    std::size_t total = 1;
    for (std::size_t m : message_sizes) total *= m;
    double weight = 1.0 / static_cast<double>(total);
    std::vector<std::size_t> w(message_sizes.size(), 0);
    for (std::size_t it = 0; it < total; ++it) {
        f(w, weight);
        for (std::size_t i = message_sizes.size(); i-- > 0;) {
            if (++w[i] < message_sizes[i]) break;
            w[i] = 0;
        }
    }
}

}  // namespace netinfo::detail
