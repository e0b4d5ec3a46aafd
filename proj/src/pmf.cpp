#include "netinfo/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace netinfo {

bool operator==(const Axis& a, const Axis& b) {
    return a.name == b.name && a.size == b.size;
}

std::size_t cell_count(const std::vector<Axis>& axes) {
    std::size_t n = 1;
    for (const Axis& a : axes) n *= a.size;
    return n;
}

namespace {

void validate_axes(const std::vector<Axis>& axes) {
    std::set<std::string> names;
    for (const Axis& a : axes) {
        if (a.size < 1) throw shape_error("axis '" + a.name + "' has size 0");
        if (!names.insert(a.name).second)
            throw shape_error("duplicate axis name '" + a.name + "'");
    }
}

std::vector<std::size_t> row_major_strides(const std::vector<Axis>& axes) {
    std::vector<std::size_t> s(axes.size(), 1);
    for (std::size_t i = axes.size(); i-- > 1;)
        s[i - 1] = s[i] * axes[i].size;
    return s;
}

std::vector<std::size_t> sort_permutation(const std::vector<Axis>& axes) {
    std::vector<std::size_t> perm(axes.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        return axes[a].name < axes[b].name;
    });
    return perm;
}

}  // namespace

AxisGroup::AxisGroup(std::vector<std::size_t> positions, const std::vector<Axis>& parent_axes)
    : pos_(std::move(positions)) {
    sizes_.reserve(pos_.size());
    for (std::size_t p : pos_) {
        sizes_.push_back(parent_axes[p].size);
        count_ *= parent_axes[p].size;
    }
}

JointPmf JointPmf::make(std::vector<Axis> axes, std::vector<double> values) {
    validate_axes(axes);
    if (values.size() != cell_count(axes))
        throw shape_error("value count " + std::to_string(values.size()) +
                          " does not match axes product " +
                          std::to_string(cell_count(axes)));
    double sum = 0.0;
    for (double v : values) {
        if (v < 0.0) throw negative_mass_error("negative probability entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kNormalizationTol)
        throw not_normalized_error("probabilities sum to " + std::to_string(sum));

    JointPmf out;
    std::vector<std::size_t> perm = sort_permutation(axes);
    bool sorted = true;
    for (std::size_t i = 0; i < perm.size(); ++i) sorted &= (perm[i] == i);
    if (sorted) {
        out.axes_ = std::move(axes);
        out.values_ = std::move(values);
        return out;
    }

    out.axes_.reserve(axes.size());
    for (std::size_t p : perm) out.axes_.push_back(axes[p]);
    std::vector<std::size_t> new_strides = row_major_strides(out.axes_);
    // stride of original axis j in the new layout
    std::vector<std::size_t> remap(axes.size());
    for (std::size_t i = 0; i < perm.size(); ++i) remap[perm[i]] = new_strides[i];

    std::vector<std::size_t> sizes;
    sizes.reserve(axes.size());
    for (const Axis& a : axes) sizes.push_back(a.size);
    out.values_.assign(values.size(), 0.0);
    for_each_coord(sizes, [&](std::size_t flat, const std::vector<std::size_t>& coord) {
        std::size_t nf = 0;
        for (std::size_t j = 0; j < coord.size(); ++j) nf += coord[j] * remap[j];
        out.values_[nf] = values[flat];
    });
    return out;
}

std::vector<std::size_t> JointPmf::sizes() const {
    std::vector<std::size_t> s;
    s.reserve(axes_.size());
    for (const Axis& a : axes_) s.push_back(a.size);
    return s;
}

bool JointPmf::has_axis(std::string_view name) const {
    for (const Axis& a : axes_)
        if (a.name == name) return true;
    return false;
}

std::size_t JointPmf::axis_pos(std::string_view name) const {
    for (std::size_t i = 0; i < axes_.size(); ++i)
        if (axes_[i].name == name) return i;
    throw unknown_axis_error("unknown axis '" + std::string(name) + "'");
}

std::vector<std::size_t> JointPmf::positions(const std::vector<std::string>& names) const {
    std::vector<std::size_t> pos;
    pos.reserve(names.size());
    for (const std::string& n : names) pos.push_back(axis_pos(n));
    std::sort(pos.begin(), pos.end());
    return pos;
}

AxisGroup JointPmf::group(const std::vector<std::string>& names) const {
    return AxisGroup(positions(names), axes_);
}

double JointPmf::sum() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
}

PmfBuilder::PmfBuilder(std::vector<Axis> axes) {
    validate_axes(axes);
    std::vector<std::size_t> perm = sort_permutation(axes);
    axes_.reserve(axes.size());
    for (std::size_t p : perm) axes_.push_back(axes[p]);
    strides_ = row_major_strides(axes_);
    values_.assign(cell_count(axes_), 0.0);
}

std::size_t PmfBuilder::axis_pos(std::string_view name) const {
    for (std::size_t i = 0; i < axes_.size(); ++i)
        if (axes_[i].name == name) return i;
    throw unknown_axis_error("unknown axis '" + std::string(name) + "'");
}

JointPmf PmfBuilder::finish() {
    return JointPmf::make(std::move(axes_), std::move(values_));
}

CondKernel CondKernel::make(std::vector<Axis> from, std::vector<Axis> to,
                            std::vector<double> rows) {
    std::size_t nf = cell_count(from);
    return make_partial(std::move(from), std::move(to), std::move(rows),
                        std::vector<std::uint8_t>(nf, 1));
}

CondKernel CondKernel::make_partial(std::vector<Axis> from, std::vector<Axis> to,
                                    std::vector<double> rows,
                                    std::vector<std::uint8_t> row_defined) {
    validate_axes(from);
    validate_axes(to);
    {
        std::vector<Axis> all = from;
        all.insert(all.end(), to.begin(), to.end());
        validate_axes(all);  // from/to must not share names
    }
    if (!std::is_sorted(from.begin(), from.end(),
                        [](const Axis& a, const Axis& b) { return a.name < b.name; }) ||
        !std::is_sorted(to.begin(), to.end(),
                        [](const Axis& a, const Axis& b) { return a.name < b.name; }))
        throw shape_error("kernel axes must be in canonical (sorted) order");

    CondKernel k;
    k.from_ = std::move(from);
    k.to_ = std::move(to);
    k.from_count_ = cell_count(k.from_);
    k.to_count_ = cell_count(k.to_);
    if (rows.size() != k.from_count_ * k.to_count_)
        throw shape_error("kernel row storage does not match axis sizes");
    if (row_defined.size() != k.from_count_)
        throw shape_error("row_defined size mismatch");
    for (std::size_t r = 0; r < k.from_count_; ++r) {
        if (!row_defined[r]) continue;
        double s = 0.0;
        for (std::size_t c = 0; c < k.to_count_; ++c) {
            double v = rows[r * k.to_count_ + c];
            if (v < 0.0) throw negative_mass_error("negative kernel entry");
            s += v;
        }
        if (std::abs(s - 1.0) > kNormalizationTol)
            throw not_normalized_error("kernel row " + std::to_string(r) +
                                       " sums to " + std::to_string(s));
    }
    k.rows_ = std::move(rows);
    k.row_defined_ = std::move(row_defined);
    return k;
}

std::size_t CondKernel::undefined_row_count() const {
    std::size_t n = 0;
    for (std::uint8_t d : row_defined_) n += (d == 0);
    return n;
}

CondKernel CondKernel::with_undefined_rows_uniform(std::size_t* substituted) const {
    std::vector<double> uniform(to_count_, 1.0 / static_cast<double>(to_count_));
    return with_undefined_rows(uniform, substituted);
}

CondKernel CondKernel::with_undefined_rows(const std::vector<double>& row,
                                           std::size_t* substituted) const {
    if (row.size() != to_count_)
        throw shape_error("substitution row has wrong length");
    CondKernel k = *this;
    std::size_t n = 0;
    for (std::size_t r = 0; r < from_count_; ++r) {
        if (k.row_defined_[r]) continue;
        for (std::size_t c = 0; c < to_count_; ++c) k.rows_[r * to_count_ + c] = row[c];
        k.row_defined_[r] = 1;
        ++n;
    }
    if (substituted) *substituted = n;
    return k;
}

CondKernel CondKernel::marginalize_outputs(const std::vector<std::string>& keep_to) const {
    std::vector<std::size_t> keep_pos;
    for (const std::string& n : keep_to) {
        bool found = false;
        for (std::size_t i = 0; i < to_.size(); ++i)
            if (to_[i].name == n) { keep_pos.push_back(i); found = true; break; }
        if (!found) throw unknown_axis_error("unknown output axis '" + n + "'");
    }
    std::sort(keep_pos.begin(), keep_pos.end());

    std::vector<Axis> new_to;
    for (std::size_t p : keep_pos) new_to.push_back(to_[p]);
    AxisGroup keep_group(keep_pos, to_);

    std::vector<std::size_t> to_sizes;
    for (const Axis& a : to_) to_sizes.push_back(a.size);

    std::size_t new_cols = keep_group.count();
    std::vector<double> out(from_count_ * new_cols, 0.0);
    for_each_coord(to_sizes, [&](std::size_t col, const std::vector<std::size_t>& coord) {
        std::size_t nc = keep_group.index_of(coord);
        for (std::size_t r = 0; r < from_count_; ++r)
            out[r * new_cols + nc] += rows_[r * to_count_ + col];
    });
    return make_partial(from_, std::move(new_to), std::move(out), row_defined_);
}

CondKernel CondKernel::lift(const std::vector<Axis>& new_from) const {
    // map each old from-axis to its position in new_from
    std::vector<std::size_t> old_pos_in_new;
    for (const Axis& a : from_) {
        bool found = false;
        for (std::size_t i = 0; i < new_from.size(); ++i) {
            if (new_from[i].name == a.name) {
                if (new_from[i].size != a.size)
                    throw axis_mismatch_error("axis '" + a.name + "' size changed in lift");
                old_pos_in_new.push_back(i);
                found = true;
                break;
            }
        }
        if (!found) throw unknown_axis_error("lift target misses axis '" + a.name + "'");
    }
    AxisGroup old_group(old_pos_in_new, new_from);

    std::vector<std::size_t> new_sizes;
    for (const Axis& a : new_from) new_sizes.push_back(a.size);
    std::size_t new_rows = 1;
    for (std::size_t s : new_sizes) new_rows *= s;

    std::vector<double> rows(new_rows * to_count_);
    std::vector<std::uint8_t> defined(new_rows);
    for_each_coord(new_sizes, [&](std::size_t r, const std::vector<std::size_t>& coord) {
        std::size_t old_r = old_group.index_of(coord);
        defined[r] = row_defined_[old_r];
        std::copy(rows_.begin() + old_r * to_count_,
                  rows_.begin() + (old_r + 1) * to_count_,
                  rows.begin() + r * to_count_);
    });
    return make_partial(new_from, to_, std::move(rows), std::move(defined));
}

JointPmf marginalize(const JointPmf& p, const std::vector<std::string>& keep) {
    AxisGroup g = p.group(keep);
    std::vector<Axis> new_axes;
    for (std::size_t pos : g.positions()) new_axes.push_back(p.axes()[pos]);

    std::vector<double> out(g.count(), 0.0);
    for_each_coord(p.sizes(), [&](std::size_t flat, const std::vector<std::size_t>& coord) {
        out[g.index_of(coord)] += p.value(flat);
    });
    return JointPmf::make(std::move(new_axes), std::move(out));
}

CondKernel condition(const JointPmf& p, const std::vector<std::string>& given) {
    AxisGroup g = p.group(given);
    if (g.positions().size() >= p.axes().size())
        throw axis_overlap_error("conditioning on every axis leaves nothing");

    std::vector<std::size_t> rest_pos;
    {
        std::vector<bool> in_given(p.axes().size(), false);
        for (std::size_t pos : g.positions()) in_given[pos] = true;
        for (std::size_t i = 0; i < p.axes().size(); ++i)
            if (!in_given[i]) rest_pos.push_back(i);
    }
    AxisGroup rest(rest_pos, p.axes());

    std::vector<Axis> from, to;
    for (std::size_t pos : g.positions()) from.push_back(p.axes()[pos]);
    for (std::size_t pos : rest_pos) to.push_back(p.axes()[pos]);

    std::vector<double> mass(g.count(), 0.0);
    std::vector<double> rows(g.count() * rest.count(), 0.0);
    for_each_coord(p.sizes(), [&](std::size_t flat, const std::vector<std::size_t>& coord) {
        std::size_t r = g.index_of(coord);
        mass[r] += p.value(flat);
        rows[r * rest.count() + rest.index_of(coord)] = p.value(flat);
    });
    std::vector<std::uint8_t> defined(g.count(), 1);
    for (std::size_t r = 0; r < g.count(); ++r) {
        if (mass[r] <= 0.0) {
            defined[r] = 0;
            continue;
        }
        for (std::size_t c = 0; c < rest.count(); ++c) rows[r * rest.count() + c] /= mass[r];
    }
    return CondKernel::make_partial(std::move(from), std::move(to), std::move(rows),
                                    std::move(defined));
}

JointPmf compose(const JointPmf& p_from, const CondKernel& k) {
    if (p_from.axes() != k.from_axes())
        throw axis_mismatch_error("input pmf axes do not match kernel from-axes");
    for (std::size_t r = 0; r < k.from_count(); ++r)
        if (p_from.value(r) > 0.0 && !k.row_defined(r))
            throw invalid_probability_error("composition uses an undefined kernel row");

    std::vector<Axis> all = k.from_axes();
    all.insert(all.end(), k.to_axes().begin(), k.to_axes().end());
    PmfBuilder b(all);

    // strides of from/to coordinates inside the merged canonical layout
    std::vector<std::size_t> from_stride(k.from_axes().size());
    std::vector<std::size_t> to_stride(k.to_axes().size());
    for (std::size_t i = 0; i < k.from_axes().size(); ++i)
        from_stride[i] = b.stride(b.axis_pos(k.from_axes()[i].name));
    for (std::size_t i = 0; i < k.to_axes().size(); ++i)
        to_stride[i] = b.stride(b.axis_pos(k.to_axes()[i].name));

    std::vector<std::size_t> from_sizes, to_sizes;
    for (const Axis& a : k.from_axes()) from_sizes.push_back(a.size);
    for (const Axis& a : k.to_axes()) to_sizes.push_back(a.size);

    std::vector<std::size_t> from_base(k.from_count());
    for_each_coord(from_sizes, [&](std::size_t r, const std::vector<std::size_t>& c) {
        std::size_t base = 0;
        for (std::size_t i = 0; i < c.size(); ++i) base += c[i] * from_stride[i];
        from_base[r] = base;
    });
    std::vector<std::size_t> to_base(k.to_count());
    for_each_coord(to_sizes, [&](std::size_t c0, const std::vector<std::size_t>& c) {
        std::size_t base = 0;
        for (std::size_t i = 0; i < c.size(); ++i) base += c[i] * to_stride[i];
        to_base[c0] = base;
    });

    for (std::size_t r = 0; r < k.from_count(); ++r) {
        double pr = p_from.value(r);
        if (pr == 0.0) continue;
        for (std::size_t c = 0; c < k.to_count(); ++c) {
            double v = pr * k.value(r, c);
            if (v != 0.0) b.add(from_base[r] + to_base[c], v);
        }
    }
    return b.finish();
}

JointPmf product(const JointPmf& a, const JointPmf& b) {
    std::vector<Axis> all = a.axes();
    all.insert(all.end(), b.axes().begin(), b.axes().end());
    PmfBuilder out(all);

    std::vector<std::size_t> a_stride(a.axes().size()), b_stride(b.axes().size());
    for (std::size_t i = 0; i < a.axes().size(); ++i)
        a_stride[i] = out.stride(out.axis_pos(a.axes()[i].name));
    for (std::size_t i = 0; i < b.axes().size(); ++i)
        b_stride[i] = out.stride(out.axis_pos(b.axes()[i].name));

    std::vector<std::size_t> a_base(a.size()), b_base(b.size());
    for_each_coord(a.sizes(), [&](std::size_t f, const std::vector<std::size_t>& c) {
        std::size_t base = 0;
        for (std::size_t i = 0; i < c.size(); ++i) base += c[i] * a_stride[i];
        a_base[f] = base;
    });
    for_each_coord(b.sizes(), [&](std::size_t f, const std::vector<std::size_t>& c) {
        std::size_t base = 0;
        for (std::size_t i = 0; i < c.size(); ++i) base += c[i] * b_stride[i];
        b_base[f] = base;
    });

    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.value(i) == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            double v = a.value(i) * b.value(j);
            if (v != 0.0) out.add(a_base[i] + b_base[j], v);
        }
    }
    return out.finish();
}

void require_same_axes(const JointPmf& p, const JointPmf& q) {
    if (p.axes() != q.axes())
        throw axis_mismatch_error("distributions are over different axes");
}

double l1_distance(const JointPmf& p, const JointPmf& q) {
    require_same_axes(p, q);
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p.value(i) - q.value(i));
    return d;
}

}  // namespace netinfo
