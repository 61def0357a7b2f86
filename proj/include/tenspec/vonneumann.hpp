#pragma once

#include <span>
#include <vector>

#include "tenspec/tensor.hpp"

namespace tenspec {

// Per-mode Von Neumann bounds ⟨X,Y⟩ ≤ ⟨σ^(d)(X), σ^(d)(Y)⟩.
struct VnReport {
    double inner = 0.0;
    std::vector<double> per_mode_bound;
    std::vector<double> per_mode_gap;
    // max(1, ‖X‖_F ‖Y‖_F); tolerances are relative to it.
    double scale = 1.0;
    bool equality = false;
};

VnReport vn_report(const DenseTensor& x, const DenseTensor& y, double tol);

// Per-mode index partitions sharing one block numbering: block_of[d][i] is
// the block of index i (0-based) in mode d+1. A block may own no index in
// some mode.
struct BlockPartition {
    std::size_t block_count = 0;
    std::vector<std::vector<std::size_t>> block_of;

    // 0-based indices of mode d (1-based) that belong to block b.
    std::vector<std::size_t> indices(std::size_t b, std::size_t d) const;
};

// Finest common partition: union-find over the nodes (d, i_d), joining the
// D coordinates of every entry with |CX| > tol‖CX‖_F or |CY| > tol‖CY‖_F.
// Indices no such entry touches form one trailing residual block.
BlockPartition find_block_partition(const DenseTensor& cx, const DenseTensor& cy, double tol);

struct EqualityStructure {
    bool holds = false;
    // Largest entry of either tensor outside every aligned block.
    double outside_residual = 0.0;
    // Per block: c_b ≥ 0 with D_b(Y) = c_b D_b(X), or D_b(X) = c_b D_b(Y) when swapped.
    std::vector<double> constants;
    std::vector<bool> swapped;
    std::vector<double> block_residual;
};

// Checks that both cores vanish off the aligned blocks and are blockwise
// proportional with nonnegative least-squares constants. Residuals are
// compared against tol·max(1, ‖CX‖_F, ‖CY‖_F).
EqualityStructure verify_equality_structure(const DenseTensor& cx, const DenseTensor& cy,
                                            const BlockPartition& partition, double tol);

struct StructureCheck {
    bool structure_holds = false;
    bool vn_equality = false;
    // structure_holds && vn_equality.
    bool holds = false;
    BlockPartition partition;
    EqualityStructure structure;
    VnReport report;
};

// Expresses X and Y in the candidate frames (X ×_d W^(d)ᵀ), then runs
// find_block_partition and verify_equality_structure. Proportional blocks
// alone do not force equality when their magnitudes are ordered differently,
// so the Von Neumann report is part of the verdict.
StructureCheck check_equality_via_structure(const DenseTensor& x, const DenseTensor& y,
                                            std::span<const Matrix> frames, double tol);

}  // namespace tenspec
