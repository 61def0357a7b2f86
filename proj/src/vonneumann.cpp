#include "tenspec/vonneumann.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tenspec/error.hpp"
#include "tenspec/spectral.hpp"
#include "tenspec/svd.hpp"

namespace tenspec {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

template <typename F>
void for_each_index(const Shape& shape, F&& f) {
    const auto& dims = shape.dims();
    std::vector<std::size_t> index(dims.size(), 0);
    for (std::size_t off = 0; off < shape.size(); ++off) {
        f(off, index);
        for (std::size_t k = dims.size(); k-- > 0;) {
            if (++index[k] < dims[k]) break;
            index[k] = 0;
        }
    }
}

void validate_partition(const BlockPartition& partition, const Shape& shape) {
    if (partition.block_count == 0) throw ShapeError("block partition: no blocks");
    if (partition.block_of.size() != shape.order()) throw ShapeError("block partition: wrong number of modes");
    for (std::size_t d = 0; d < shape.order(); ++d) {
        if (partition.block_of[d].size() != shape.dims()[d]) {
            throw ShapeError("block partition: mode " + std::to_string(d + 1) + " does not cover its index range");
        }
        for (std::size_t b : partition.block_of[d]) {
            if (b >= partition.block_count) throw ShapeError("block partition: block id out of range");
        }
    }
}

// Block of an entry, or block_count when its coordinates disagree.
std::size_t block_of_entry(const BlockPartition& p, const std::vector<std::size_t>& index) {
    const std::size_t b = p.block_of[0][index[0]];
    for (std::size_t d = 1; d < index.size(); ++d)
        if (p.block_of[d][index[d]] != b) return p.block_count;
    return b;
}

}  // namespace

VnReport vn_report(const DenseTensor& x, const DenseTensor& y, double tol) {
    if (x.shape() != y.shape()) throw ShapeError("vn_report: shape mismatch");
    VnReport r;
    r.inner = inner(x, y);
    r.scale = std::max(1.0, frobenius(x) * frobenius(y));
    r.equality = true;
    for (std::size_t d = 1; d <= x.order(); ++d) {
        const auto sx = mode_spectrum(x, d);
        const auto sy = mode_spectrum(y, d);
        const double bound = std::inner_product(sx.begin(), sx.end(), sy.begin(), 0.0);
        r.per_mode_bound.push_back(bound);
        r.per_mode_gap.push_back(bound - r.inner);
        if (bound - r.inner > tol * r.scale) r.equality = false;
    }
    return r;
}

std::vector<std::size_t> BlockPartition::indices(std::size_t b, std::size_t d) const {
    std::vector<std::size_t> out;
    const auto& ids = block_of.at(d - 1);
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == b) out.push_back(i);
    return out;
}

BlockPartition find_block_partition(const DenseTensor& cx, const DenseTensor& cy, double tol) {
    if (cx.shape() != cy.shape()) throw ShapeError("find_block_partition: shape mismatch");
    const auto& dims = cx.shape().dims();
    std::vector<std::size_t> base(dims.size(), 0);
    for (std::size_t d = 1; d < dims.size(); ++d) base[d] = base[d - 1] + dims[d - 1];
    const std::size_t nodes = base.back() + dims.back();

    const double tx = tol * frobenius(cx);
    const double ty = tol * frobenius(cy);
    DisjointSets sets(nodes);
    std::vector<bool> touched(nodes, false);
    for_each_index(cx.shape(), [&](std::size_t off, const std::vector<std::size_t>& idx) {
        if (std::abs(cx[off]) <= tx && std::abs(cy[off]) <= ty) return;
        for (std::size_t d = 0; d < idx.size(); ++d) {
            touched[base[d] + idx[d]] = true;
            sets.unite(base[0] + idx[0], base[d] + idx[d]);
        }
    });

    // Every touched component owns a mode-1 node; number blocks by their
    // smallest mode-1 index, which is also the union-find root.
    BlockPartition p;
    std::vector<std::size_t> id_of_root(nodes, nodes);
    for (std::size_t i = 0; i < dims[0]; ++i) {
        const std::size_t root = sets.find(i);
        if (touched[i] && id_of_root[root] == nodes) id_of_root[root] = p.block_count++;
    }
    const bool has_residual = std::find(touched.begin(), touched.end(), false) != touched.end();
    const std::size_t residual = p.block_count;
    if (has_residual || p.block_count == 0) ++p.block_count;

    p.block_of.resize(dims.size());
    for (std::size_t d = 0; d < dims.size(); ++d) {
        p.block_of[d].resize(dims[d]);
        for (std::size_t i = 0; i < dims[d]; ++i) {
            const std::size_t node = base[d] + i;
            p.block_of[d][i] = touched[node] ? id_of_root[sets.find(node)] : residual;
        }
    }
    return p;
}

EqualityStructure verify_equality_structure(const DenseTensor& cx, const DenseTensor& cy,
                                            const BlockPartition& partition, double tol) {
    if (cx.shape() != cy.shape()) throw ShapeError("verify_equality_structure: shape mismatch");
    validate_partition(partition, cx.shape());
    const double scale = std::max({1.0, frobenius(cx), frobenius(cy)});
    const double bound = tol * scale;

    const std::size_t blocks = partition.block_count;
    std::vector<double> xx(blocks, 0.0), yy(blocks, 0.0), xy(blocks, 0.0);
    EqualityStructure s;
    for_each_index(cx.shape(), [&](std::size_t off, const std::vector<std::size_t>& idx) {
        const std::size_t b = block_of_entry(partition, idx);
        if (b == blocks) {
            s.outside_residual = std::max({s.outside_residual, std::abs(cx[off]), std::abs(cy[off])});
            return;
        }
        xx[b] += cx[off] * cx[off];
        yy[b] += cy[off] * cy[off];
        xy[b] += cx[off] * cy[off];
    });

    s.holds = s.outside_residual <= bound;
    std::vector<double> c(blocks, 0.0);
    std::vector<bool> swapped(blocks, false);
    for (std::size_t b = 0; b < blocks; ++b) {
        const double nx = std::sqrt(xx[b]);
        const double ny = std::sqrt(yy[b]);
        if (nx <= bound && ny <= bound) continue;
        if (nx <= bound) {
            // D_b(X) = 0 · D_b(Y).
            swapped[b] = true;
        } else {
            c[b] = xy[b] / xx[b];
        }
    }
    // The residual is summed directly; ‖y‖² − c⟨x,y⟩ cancels to √eps·‖y‖.
    std::vector<double> rr(blocks, 0.0);
    for_each_index(cx.shape(), [&](std::size_t off, const std::vector<std::size_t>& idx) {
        const std::size_t b = block_of_entry(partition, idx);
        if (b == blocks) return;
        const double e = swapped[b] ? cx[off] : cy[off] - c[b] * cx[off];
        rr[b] += e * e;
    });
    for (std::size_t b = 0; b < blocks; ++b) {
        const double residual = std::sqrt(rr[b]);
        if (c[b] < 0.0 || residual > bound) s.holds = false;
        s.constants.push_back(c[b]);
        s.swapped.push_back(swapped[b]);
        s.block_residual.push_back(residual);
    }
    return s;
}

StructureCheck check_equality_via_structure(const DenseTensor& x, const DenseTensor& y,
                                            std::span<const Matrix> frames, double tol) {
    if (x.shape() != y.shape()) throw ShapeError("check_equality_via_structure: shape mismatch");
    if (frames.size() != x.order()) throw ShapeError("check_equality_via_structure: need one frame per mode");
    std::vector<Matrix> transposed;
    for (std::size_t d = 0; d < frames.size(); ++d) {
        if (frames[d].rows() != x.shape().dims()[d] || frames[d].cols() != frames[d].rows()) {
            throw ShapeError("check_equality_via_structure: frame " + std::to_string(d + 1) + " has wrong size");
        }
        if (!is_orthogonal(frames[d], 1e-10)) {
            throw DomainError("check_equality_via_structure: frame " + std::to_string(d + 1) + " is not orthogonal");
        }
        transposed.push_back(frames[d].transpose());
    }
    const DenseTensor cx = multi_mode_mul(x, transposed);
    const DenseTensor cy = multi_mode_mul(y, transposed);

    StructureCheck check;
    check.partition = find_block_partition(cx, cy, tol);
    check.structure = verify_equality_structure(cx, cy, check.partition, tol);
    check.report = vn_report(x, y, tol);
    check.structure_holds = check.structure.holds;
    check.vn_equality = check.report.equality;
    check.holds = check.structure_holds && check.vn_equality;
    return check;
}

}  // namespace tenspec
