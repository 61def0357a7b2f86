#include "tenspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tenspec/error.hpp"
#include "tenspec/svd.hpp"

namespace tenspec {

SchattenParams::SchattenParams(double p, double q, double lambda) : p_(p), q_(q), lambda_(lambda) {
    if (!std::isfinite(p) || p < 1.0) throw DomainError("Schatten exponent p must be finite and >= 1");
    if (!std::isfinite(q) || q < 1.0) throw DomainError("Schatten exponent q must be finite and >= 1");
    if (!std::isfinite(lambda) || lambda <= 0.0) throw DomainError("Schatten scale lambda must be finite and > 0");
}

SchattenParams SchattenParams::nuclear(std::size_t order) {
    return {1.0, 1.0, 1.0 / static_cast<double>(order)};
}

double lp_norm(const std::vector<double>& v, double p) {
    double big = 0.0;
    for (double x : v) big = std::max(big, std::abs(x));
    if (std::isinf(p) || big == 0.0) return big;
    double s = 0.0;
    if (p == 1.0) {
        for (double x : v) s += std::abs(x);
        return s;
    }
    if (p == 2.0) {
        for (double x : v) s += (x / big) * (x / big);
        return big * std::sqrt(s);
    }
    for (double x : v) s += std::pow(std::abs(x) / big, p);
    return big * std::pow(s, 1.0 / p);
}

DenseTensor Hosvd::reconstruct() const { return multi_mode_mul(core, factors); }

Hosvd hosvd(const DenseTensor& x) {
    Hosvd h;
    std::vector<Matrix> transposed;
    for (std::size_t d = 1; d <= x.order(); ++d) {
        h.factors.push_back(svd(matricize(x, d)).U);
        transposed.push_back(h.factors.back().transpose());
    }
    h.core = multi_mode_mul(x, transposed);
    return h;
}

std::vector<double> mode_spectrum(const DenseTensor& x, std::size_t d) {
    const std::size_t n = x.shape().dim(d);
    auto sigma = singular_values(matricize(x, d));
    sigma.resize(n, 0.0);
    return sigma;
}

ModeSpectra all_mode_spectra(const DenseTensor& x) {
    ModeSpectra s;
    for (std::size_t d = 1; d <= x.order(); ++d) s.per_mode.push_back(mode_spectrum(x, d));
    return s;
}

CombinedSpectrum combined_spectrum(const DenseTensor& x) {
    CombinedSpectrum c{all_mode_spectra(x).per_mode};
    const double scale = 1.0 / std::sqrt(static_cast<double>(x.order()));
    for (auto& v : c.per_mode)
        for (double& s : v) s *= scale;
    return c;
}

double schatten_from_spectra(const ModeSpectra& spectra, const SchattenParams& params) {
    std::vector<double> mode_norms;
    mode_norms.reserve(spectra.order());
    for (const auto& s : spectra.per_mode) mode_norms.push_back(lp_norm(s, params.p()));
    return params.lambda() * lp_norm(mode_norms, params.q());
}

double schatten_norm(const DenseTensor& x, const SchattenParams& params) {
    return schatten_from_spectra(all_mode_spectra(x), params);
}

double nuclear_norm(const DenseTensor& x) { return schatten_norm(x, SchattenParams::nuclear(x.order())); }

std::vector<double> core_orthogonality_report(const Hosvd& h) {
    std::vector<double> report;
    for (std::size_t d = 1; d <= h.core.order(); ++d) {
        const Matrix s = matricize(h.core, d);
        const Matrix gram = s * s.transpose();
        double worst = 0.0;
        for (std::size_t i = 0; i < gram.rows(); ++i)
            for (std::size_t j = 0; j < gram.cols(); ++j)
                if (i != j) worst = std::max(worst, std::abs(gram(i, j)));
        report.push_back(worst);
    }
    return report;
}

}  // namespace tenspec
