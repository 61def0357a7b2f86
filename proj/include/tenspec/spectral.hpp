#pragma once

#include <vector>

#include "tenspec/tensor.hpp"

namespace tenspec {

// Tucker form X = core ×_1 U^(1) ⋯ ×_D U^(D) with orthogonal n_d×n_d factors
// and an all-orthogonal core.
struct Hosvd {
    DenseTensor core;
    std::vector<Matrix> factors;

    DenseTensor reconstruct() const;
};

// Per-mode singular values σ^(1)..σ^(D); vector d has length n_d, sorted
// descending and zero-padded beyond the rank bound of the unfolding.
struct ModeSpectra {
    std::vector<std::vector<double>> per_mode;

    std::size_t order() const noexcept { return per_mode.size(); }
    const std::vector<double>& operator[](std::size_t d0) const { return per_mode[d0]; }
};

// The tuple σ_E(X) = (σ^(1), ..., σ^(D)) / √D.
struct CombinedSpectrum {
    std::vector<std::vector<double>> per_mode;
};

// Exponents and scale of N(X) = λ (Σ_d ‖σ^(d)(X)‖_p^q)^{1/q}; p, q ∈ [1, ∞), λ > 0.
class SchattenParams {
public:
    SchattenParams(double p, double q, double lambda);

    // p = q = 1, λ = 1/D.
    static SchattenParams nuclear(std::size_t order);

    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    double lambda() const noexcept { return lambda_; }

    SchattenParams with_lambda(double lambda) const { return {p_, q_, lambda}; }

    friend bool operator==(const SchattenParams&, const SchattenParams&) = default;

private:
    double p_;
    double q_;
    double lambda_;
};

// ℓ_p norm; p may be +∞ (max norm).
double lp_norm(const std::vector<double>& v, double p);

Hosvd hosvd(const DenseTensor& x);

// d is 1-based.
std::vector<double> mode_spectrum(const DenseTensor& x, std::size_t d);
ModeSpectra all_mode_spectra(const DenseTensor& x);
CombinedSpectrum combined_spectrum(const DenseTensor& x);

// λ (Σ_d ‖s_d‖_p^q)^{1/q} from precomputed spectra.
double schatten_from_spectra(const ModeSpectra& spectra, const SchattenParams& params);
double schatten_norm(const DenseTensor& x, const SchattenParams& params);
double nuclear_norm(const DenseTensor& x);

// Largest off-diagonal magnitude of S_(d)·S_(d)ᵀ per mode; all-orthogonality
// makes these vanish.
std::vector<double> core_orthogonality_report(const Hosvd& h);

}  // namespace tenspec
