#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Dense probability tensors over named finite axes, and row-stochastic
// kernels between axis sets. Everything is double precision, axes are kept
// in canonical (name-sorted) order, and values are row-major over that
// order. Instances stay small (<= ~1e6 cells), so dense storage wins.

namespace netinfo {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct shape_error : error { using error::error; };
struct unknown_axis_error : error { using error::error; };
struct axis_overlap_error : error { using error::error; };
struct axis_mismatch_error : error { using error::error; };
struct negative_mass_error : error { using error::error; };
struct not_normalized_error : error { using error::error; };
struct invalid_lambda_error : error { using error::error; };
struct invalid_probability_error : error { using error::error; };
struct budget_error : error { using error::error; };

inline constexpr double kNormalizationTol = 1e-9;

struct Axis {
    std::string name;
    std::size_t size = 0;
};

bool operator==(const Axis& a, const Axis& b);

// Mixed-radix helpers for a list of axis sizes.
std::size_t cell_count(const std::vector<Axis>& axes);

// Calls f(flat_index, coord) for every cell, coord advancing like an
// odometer with the last axis fastest (row-major).
template <class F>
void for_each_coord(const std::vector<std::size_t>& sizes, F&& f) {
    std::size_t total = 1;
    for (std::size_t s : sizes) total *= s;
    std::vector<std::size_t> coord(sizes.size(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        f(flat, coord);
        for (std::size_t i = sizes.size(); i-- > 0;) {
            if (++coord[i] < sizes[i]) break;
            coord[i] = 0;
        }
    }
}

// Addresses a subset of a tensor's axes as its own flat index space.
class AxisGroup {
public:
    AxisGroup() = default;
    AxisGroup(std::vector<std::size_t> positions, const std::vector<Axis>& parent_axes);

    std::size_t count() const { return count_; }
    const std::vector<std::size_t>& positions() const { return pos_; }
    const std::vector<std::size_t>& sizes() const { return sizes_; }

    // Flat index of this group's coordinates inside a full parent coord.
    std::size_t index_of(const std::vector<std::size_t>& parent_coord) const {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < pos_.size(); ++i)
            idx = idx * sizes_[i] + parent_coord[pos_[i]];
        return idx;
    }

private:
    std::vector<std::size_t> pos_;
    std::vector<std::size_t> sizes_;
    std::size_t count_ = 1;
};

class JointPmf {
public:
    JointPmf() = default;

    // Validates shape, nonnegativity and normalization, then canonicalizes
    // the axis order (sorted by name) permuting values accordingly.
    static JointPmf make(std::vector<Axis> axes, std::vector<double> values);

    const std::vector<Axis>& axes() const { return axes_; }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    double value(std::size_t flat) const { return values_[flat]; }
    std::vector<std::size_t> sizes() const;

    bool has_axis(std::string_view name) const;
    std::size_t axis_pos(std::string_view name) const;  // throws unknown_axis_error
    std::vector<std::size_t> positions(const std::vector<std::string>& names) const;
    AxisGroup group(const std::vector<std::string>& names) const;

    double sum() const;

private:
    friend class PmfBuilder;
    std::vector<Axis> axes_;
    std::vector<double> values_;
};

// Accumulation-style construction: start from zeros, add mass cell by cell,
// finish() validates and returns the immutable pmf.
class PmfBuilder {
public:
    explicit PmfBuilder(std::vector<Axis> axes);

    const std::vector<Axis>& axes() const { return axes_; }
    std::size_t size() const { return values_.size(); }
    std::size_t axis_pos(std::string_view name) const;
    // Stride of an axis in the canonical layout; flat = sum coord*stride.
    std::size_t stride(std::size_t axis_pos) const { return strides_[axis_pos]; }

    void add(std::size_t flat, double mass) { values_[flat] += mass; }
    double& at(std::size_t flat) { return values_[flat]; }

    JointPmf finish();

private:
    std::vector<Axis> axes_;
    std::vector<std::size_t> strides_;
    std::vector<double> values_;
};

class CondKernel {
public:
    CondKernel() = default;

    // rows laid out from-major: rows[r * to_count + c]. Every row must be
    // stochastic; use make_partial when some rows are knowingly undefined.
    static CondKernel make(std::vector<Axis> from, std::vector<Axis> to,
                           std::vector<double> rows);
    static CondKernel make_partial(std::vector<Axis> from, std::vector<Axis> to,
                                   std::vector<double> rows,
                                   std::vector<std::uint8_t> row_defined);

    const std::vector<Axis>& from_axes() const { return from_; }
    const std::vector<Axis>& to_axes() const { return to_; }
    std::size_t from_count() const { return from_count_; }
    std::size_t to_count() const { return to_count_; }
    double value(std::size_t row, std::size_t col) const {
        return rows_[row * to_count_ + col];
    }
    const std::vector<double>& rows() const { return rows_; }

    bool row_defined(std::size_t row) const { return row_defined_[row] != 0; }
    std::size_t undefined_row_count() const;

    // Copy with undefined rows replaced by the uniform distribution (or by a
    // caller-supplied row); reports how many rows were substituted.
    CondKernel with_undefined_rows_uniform(std::size_t* substituted = nullptr) const;
    CondKernel with_undefined_rows(const std::vector<double>& row,
                                   std::size_t* substituted = nullptr) const;

    // Sums out some output axes; keep_to must be a subset of to-axis names.
    CondKernel marginalize_outputs(const std::vector<std::string>& keep_to) const;

    // Re-keys rows by a larger from-alphabet; new_from must contain every
    // current from axis (same sizes). Rows repeat over the added axes.
    CondKernel lift(const std::vector<Axis>& new_from) const;

private:
    std::vector<Axis> from_, to_;
    std::size_t from_count_ = 0, to_count_ = 0;
    std::vector<double> rows_;
    std::vector<std::uint8_t> row_defined_;
};

JointPmf marginalize(const JointPmf& p, const std::vector<std::string>& keep);

// Extracts p(rest | given). Rows at zero-mass conditionings are flagged
// undefined rather than silently uniformized; callers choose the policy.
CondKernel condition(const JointPmf& p, const std::vector<std::string>& given);

// p over exactly k's from-axes; result is the joint over from+to axes.
JointPmf compose(const JointPmf& p_from, const CondKernel& k);

// Independent product of pmfs on disjoint axis sets.
JointPmf product(const JointPmf& a, const JointPmf& b);

double l1_distance(const JointPmf& p, const JointPmf& q);

void require_same_axes(const JointPmf& p, const JointPmf& q);

}  // namespace netinfo
