#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tenspec/odeco.hpp"
#include "tenspec/spectral.hpp"
#include "tenspec/tensor.hpp"

namespace tenspec {

// Arguments (s_1, ..., s_D) of the mixed norm f(s) = λ (Σ_d ‖s_d‖_p^q)^{1/q}.
struct SpectralTuple {
    std::vector<std::vector<double>> modes;

    static SpectralTuple from(const ModeSpectra& s) { return {s.per_mode}; }
    std::size_t order() const noexcept { return modes.size(); }
};

// Hölder conjugates; 1 maps to +∞.
struct DualExponents {
    double p_star;
    double q_star;
};

double dual_exponent(double p);
DualExponents dual_exponents(const SchattenParams& params);

// Maximizer of ⟨v, s⟩ over the unit ℓ_{p*} sphere, s ≥ 0.
struct DualMaximizer {
    // Canonical maximizer.
    std::vector<double> v;
    // Coordinates free in [-1, 1] (p = 1, s_j = 0).
    std::vector<bool> free;
    // s = 0: every vector of the unit ℓ_{p*} ball is admissible.
    bool whole_ball = false;
};

// p > 1: v_j = (s_j/‖s‖_p)^{p-1}. p = 1: v_j = 1, free where s_j = 0.
// s = 0: v = e_1 with whole_ball set. Throws DomainError on negative entries.
DualMaximizer dual_vector_maximizer(const std::vector<double>& s, double p);

double schatten_value_tuple(const SpectralTuple& t, const SchattenParams& params);

// (Σ_d ‖g_d‖_{p*}^{q*})^{1/q*}, the max over d when q* = ∞.
double mixed_dual_norm(const SpectralTuple& g, const SchattenParams& params);

// Canonical element g_d = λ w*_d v*_d of ∂f(t) plus the freedom left in the
// admissible set.
struct TupleSubgradient {
    SpectralTuple canonical;
    // v*_d per mode; whole_ball marks s_d = 0, where g_d ranges over λ w*_d B_{p*}.
    std::vector<DualMaximizer> mode_maximizers;
    // w*, the dual maximizer of ω = (‖s_d‖_p)_d in ℓ_q.
    DualMaximizer weight_maximizer;
    // t = 0: ∂f(0) is the whole dual ball λ·B_{p*,q*}.
    bool full_dual_ball = false;
};

TupleSubgradient tuple_subgradient(const SpectralTuple& t, const SchattenParams& params);

// ⟨g,t⟩ = f(t) within tol·max(1, ‖t‖‖g‖) and mixed_dual_norm(g) ≤ λ(1+tol).
bool tuple_membership(const SpectralTuple& t, const SpectralTuple& g, const SchattenParams& params, double tol);

// Subgradient of N at an odeco point, on X's own factors with weights
// τ = λ D^{1/q} v*(α).
OdecoRep subgrad_schatten_rep(const OdecoRep& x, const SchattenParams& params);
DenseTensor subgrad_schatten(const OdecoRep& x, const SchattenParams& params);

// B_{p*,q*}(σ(Y)) / (λD). A value ≤ 1 bounds the dual norm of Y by 1.
double dual_norm_value(const DenseTensor& y, const SchattenParams& params);

enum class MembershipStatus { Accepted, RejectedExact, RejectedConservative };

const char* to_string(MembershipStatus status);

struct MembershipCertificate {
    std::vector<double> vn_gaps;
    // |⟨X,Y⟩ − N(X)|.
    double pairing_residual = 0.0;
    double dual_norm_value = 0.0;
    double norm_value = 0.0;
    double scale = 1.0;
    bool vn_equality = false;
    bool pairing_ok = false;
    bool dual_bound_ok = false;
    bool accepted = false;
    MembershipStatus status = MembershipStatus::RejectedConservative;
    std::vector<std::string> notes;
};

// Accepts Y ∈ ∂N(X) only when every condition holds:
//   (i)   Von Neumann equality in every mode
//   (ii)  ⟨X,Y⟩ = N(X) within tol·scale
//   (iii) dual_norm_value(Y) ≤ 1 + tol
MembershipCertificate check_membership(const DenseTensor& x, const DenseTensor& y, const SchattenParams& params,
                                       double tol);

struct SubgradientCandidate {
    DenseTensor g;
    SchattenParams params;
};

// min over sampled Y of N(Y) − N(X) − ⟨G, Y − X⟩. Samples: Y = 0, Y = 2X,
// then Gaussian tensors, rotated and scaled copies of X, perturbed copies,
// symmetric tensors (cubic shapes) and random odeco tensors. Trial k uses
// derive_seed(seed, k).
double subgradient_inequality_test(const DenseTensor& x, const DenseTensor& g, const SchattenParams& params,
                                   std::size_t trials, std::uint64_t seed);

// Same samples shared by several (G, params) pairs; spectra of each Y are
// computed once. Returns one minimum slack per candidate.
std::vector<double> subgradient_inequality_test(const DenseTensor& x, std::span<const SubgradientCandidate> candidates,
                                                std::size_t trials, std::uint64_t seed);

// f* of the mixed norm: 0 inside λ·B_{p*,q*}, +∞ outside.
struct ConjugateValue {
    bool finite = true;
    // mixed_dual_norm(g) / λ
    double dual_ratio = 0.0;

    double value() const;
};

ConjugateValue conjugate_value_tuple(const SpectralTuple& g, const SchattenParams& params, double tol = 1e-12);

// f* ∘ σ_E(X) with the tuple function matched to N, g = λ√D · (p,q) mixed norm.
ConjugateValue analytic_tensor_conjugate(const DenseTensor& x, const SchattenParams& params, double tol = 1e-12);

struct ConjugateEstimate {
    // Best ⟨X,Y⟩ − N(Y) seen with Y normalized to N(Y) = 1, floored by the
    // value 0 at Y = 0. Positive means the conjugate is +∞.
    double value = 0.0;
    // Largest ⟨X,Y⟩ / N(Y) seen.
    double best_ratio = 0.0;
    DenseTensor certificate;
    std::size_t evaluations = 0;
};

// Multistart hill climbing on ⟨X,Y⟩/N(Y) within `budget` norm evaluations.
ConjugateEstimate estimate_tensor_conjugate(const DenseTensor& x, const SchattenParams& params, std::size_t budget,
                                            std::uint64_t seed);

}  // namespace tenspec
