#include "tenspec/subdiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "parallel.hpp"
#include "tenspec/error.hpp"
#include "tenspec/random.hpp"
#include "tenspec/svd.hpp"
#include "tenspec/vonneumann.hpp"

namespace tenspec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double euclidean(const SpectralTuple& t) {
    double s = 0.0;
    for (const auto& m : t.modes)
        for (double x : m) s += x * x;
    return std::sqrt(s);
}

double tuple_inner(const SpectralTuple& a, const SpectralTuple& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.modes.size(); ++d)
        for (std::size_t j = 0; j < a.modes[d].size(); ++j) s += a.modes[d][j] * b.modes[d][j];
    return s;
}

void require_matching(const SpectralTuple& a, const SpectralTuple& b) {
    if (a.modes.size() != b.modes.size()) throw ShapeError("spectral tuples have different orders");
    for (std::size_t d = 0; d < a.modes.size(); ++d) {
        if (a.modes[d].size() != b.modes[d].size()) {
            throw ShapeError("spectral tuples differ in length at mode " + std::to_string(d + 1));
        }
    }
}

void require_nonnegative(const SpectralTuple& t) {
    for (const auto& m : t.modes)
        for (double x : m)
            if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("spectral tuple entries must be finite and >= 0");
}

std::vector<double> mode_norms(const std::vector<std::vector<double>>& modes, double p) {
    std::vector<double> norms;
    norms.reserve(modes.size());
    for (const auto& m : modes) norms.push_back(lp_norm(m, p));
    return norms;
}

}  // namespace

double dual_exponent(double p) {
    if (!(p >= 1.0)) throw DomainError("exponent must be >= 1");
    if (p == 1.0) return kInf;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

DualExponents dual_exponents(const SchattenParams& params) {
    return {dual_exponent(params.p()), dual_exponent(params.q())};
}

DualMaximizer dual_vector_maximizer(const std::vector<double>& s, double p) {
    if (s.empty()) throw ShapeError("dual_vector_maximizer: empty vector");
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("dual_vector_maximizer: p must be finite and >= 1");
    for (double x : s) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("dual_vector_maximizer: entries must be finite and >= 0");
    }
    DualMaximizer m;
    m.v.assign(s.size(), 0.0);
    m.free.assign(s.size(), false);
    const double norm = lp_norm(s, p);
    if (norm == 0.0) {
        m.v[0] = 1.0;
        m.free.assign(s.size(), true);
        m.whole_ball = true;
        return m;
    }
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (p == 1.0) {
            m.v[j] = 1.0;
            m.free[j] = s[j] == 0.0;
        } else if (p == 2.0) {
            m.v[j] = s[j] / norm;
        } else {
            m.v[j] = std::pow(s[j] / norm, p - 1.0);
        }
    }
    return m;
}

double schatten_value_tuple(const SpectralTuple& t, const SchattenParams& params) {
    return params.lambda() * lp_norm(mode_norms(t.modes, params.p()), params.q());
}

double mixed_dual_norm(const SpectralTuple& g, const SchattenParams& params) {
    const auto dual = dual_exponents(params);
    return lp_norm(mode_norms(g.modes, dual.p_star), dual.q_star);
}

TupleSubgradient tuple_subgradient(const SpectralTuple& t, const SchattenParams& params) {
    if (t.modes.empty()) throw ShapeError("tuple_subgradient: empty tuple");
    require_nonnegative(t);
    TupleSubgradient out;
    std::vector<double> omega;
    for (const auto& s : t.modes) {
        out.mode_maximizers.push_back(dual_vector_maximizer(s, params.p()));
        omega.push_back(lp_norm(s, params.p()));
    }
    out.weight_maximizer = dual_vector_maximizer(omega, params.q());
    out.full_dual_ball = out.weight_maximizer.whole_ball;

    out.canonical.modes.resize(t.modes.size());
    for (std::size_t d = 0; d < t.modes.size(); ++d) {
        auto& g = out.canonical.modes[d];
        g.assign(t.modes[d].size(), 0.0);
        // A vanishing mode keeps the admissible zero block.
        if (out.full_dual_ball || out.mode_maximizers[d].whole_ball) continue;
        const double w = out.weight_maximizer.v[d];
        for (std::size_t j = 0; j < g.size(); ++j) g[j] = params.lambda() * w * out.mode_maximizers[d].v[j];
    }
    return out;
}

bool tuple_membership(const SpectralTuple& t, const SpectralTuple& g, const SchattenParams& params, double tol) {
    require_matching(t, g);
    require_nonnegative(t);
    const double scale = std::max(1.0, euclidean(t) * euclidean(g));
    const bool pairing = std::abs(tuple_inner(g, t) - schatten_value_tuple(t, params)) <= tol * scale;
    const bool bounded = mixed_dual_norm(g, params) <= params.lambda() * (1.0 + tol);
    return pairing && bounded;
}

OdecoRep subgrad_schatten_rep(const OdecoRep& x, const SchattenParams& params) {
    const double order = static_cast<double>(x.shape().order());
    const double factor = params.lambda() * std::pow(order, 1.0 / params.q());
    auto tau = dual_vector_maximizer(x.alphas(), params.p()).v;
    for (double& t : tau) t *= factor;
    return make_odeco(std::move(tau), x.factors(), x.shape());
}

DenseTensor subgrad_schatten(const OdecoRep& x, const SchattenParams& params) {
    return to_dense(subgrad_schatten_rep(x, params));
}

double dual_norm_value(const DenseTensor& y, const SchattenParams& params) {
    const auto spectra = all_mode_spectra(y);
    const double mixed = mixed_dual_norm(SpectralTuple::from(spectra), params);
    return mixed / (params.lambda() * static_cast<double>(y.order()));
}

const char* to_string(MembershipStatus status) {
    switch (status) {
        case MembershipStatus::Accepted: return "accepted";
        case MembershipStatus::RejectedExact: return "rejected_exact";
        case MembershipStatus::RejectedConservative: return "rejected_conservative";
    }
    return "unknown";
}

MembershipCertificate check_membership(const DenseTensor& x, const DenseTensor& y, const SchattenParams& params,
                                       double tol) {
    if (x.shape() != y.shape()) throw ShapeError("check_membership: shape mismatch");
    MembershipCertificate c;
    const VnReport vn = vn_report(x, y, tol);
    c.vn_gaps = vn.per_mode_gap;
    c.scale = vn.scale;
    c.norm_value = schatten_norm(x, params);
    c.pairing_residual = std::abs(vn.inner - c.norm_value);
    c.dual_norm_value = dual_norm_value(y, params);

    c.vn_equality = vn.equality;
    c.pairing_ok = c.pairing_residual <= tol * c.scale;
    c.dual_bound_ok = c.dual_norm_value <= 1.0 + tol;
    c.accepted = c.vn_equality && c.pairing_ok && c.dual_bound_ok;

    const double max_gap = *std::max_element(c.vn_gaps.begin(), c.vn_gaps.end());
    std::ostringstream note;
    note << "(i) von neumann equality: " << (c.vn_equality ? "pass" : "fail") << ", max gap " << max_gap;
    c.notes.push_back(note.str());
    note.str("");
    note << "(ii) pairing <X,Y> = N(X): " << (c.pairing_ok ? "pass" : "fail") << ", residual " << c.pairing_residual;
    c.notes.push_back(note.str());
    note.str("");
    note << "(iii) dual bound: " << (c.dual_bound_ok ? "pass" : "fail") << ", value " << c.dual_norm_value;
    c.notes.push_back(note.str());

    if (c.accepted) {
        c.status = MembershipStatus::Accepted;
    } else if (!c.pairing_ok) {
        // Every subgradient of a norm at X pairs with X to N(X).
        c.status = MembershipStatus::RejectedExact;
        c.notes.push_back("pairing fails: Y is not a subgradient");
    } else if (!c.dual_bound_ok && frobenius(y) * frobenius(y) > schatten_norm(y, params) * (1.0 + tol)) {
        // Z = Y gives <Y,Z> > N(Z), so the dual norm of Y exceeds 1.
        c.status = MembershipStatus::RejectedExact;
        c.notes.push_back("witness Z = Y shows the dual norm of Y exceeds 1");
    } else {
        c.status = MembershipStatus::RejectedConservative;
        c.notes.push_back("sufficient conditions fail; membership not decided exactly");
    }
    return c;
}

namespace {

DenseTensor scaled_to(const DenseTensor& z, double target) {
    const double n = frobenius(z);
    return n > 0.0 ? (target / n) * z : z;
}

DenseTensor inequality_sample(const DenseTensor& x, std::size_t k, std::uint64_t seed, double amplitude) {
    const Shape& shape = x.shape();
    if (k == 0) return DenseTensor(shape);
    if (k == 1) return 2.0 * x;
    const std::uint64_t s = derive_seed(seed, k);
    Rng rng(s);
    const double size = amplitude * rng.uniform(0.1, 3.0);
    switch (k % 5) {
        case 0:
            return scaled_to(random_gaussian(shape, derive_seed(s, 1)), size);
        case 1: {
            std::vector<Matrix> frames;
            for (std::size_t d = 0; d < shape.order(); ++d) {
                frames.push_back(random_orthogonal(shape.dims()[d], derive_seed(s, 10 + d)));
            }
            return rng.uniform(0.0, 3.0) * multi_mode_mul(x, frames);
        }
        case 2: {
            const double eps = amplitude * rng.uniform(1e-3, 0.5);
            return rng.uniform(0.0, 3.0) * x + scaled_to(random_gaussian(shape, derive_seed(s, 2)), eps);
        }
        case 3:
            if (shape.is_cubic()) return scaled_to(symmetrize(random_gaussian(shape, derive_seed(s, 3))), size);
            return scaled_to(random_gaussian(shape, derive_seed(s, 3)), size);
        default: {
            const auto& dims = shape.dims();
            const std::size_t max_rank = *std::min_element(dims.begin(), dims.end());
            const std::size_t rank = 1 + rng.index(max_rank);
            return scaled_to(to_dense(random_odeco(shape, rank, derive_seed(s, 4))), size);
        }
    }
}

}  // namespace

std::vector<double> subgradient_inequality_test(const DenseTensor& x, std::span<const SubgradientCandidate> candidates,
                                                std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw DomainError("subgradient_inequality_test: trials must be >= 1");
    std::vector<double> base(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (candidates[c].g.shape() != x.shape()) throw ShapeError("subgradient_inequality_test: shape mismatch");
        base[c] = schatten_norm(x, candidates[c].params) - inner(candidates[c].g, x);
    }
    const double amplitude = frobenius(x) > 0.0 ? frobenius(x) : 1.0;

    auto chunks = detail::parallel_chunks<std::vector<double>>(trials, [&](std::size_t begin, std::size_t end) {
        std::vector<double> worst(candidates.size(), kInf);
        for (std::size_t k = begin; k < end; ++k) {
            const DenseTensor y = inequality_sample(x, k, seed, amplitude);
            const ModeSpectra spectra = all_mode_spectra(y);
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                const double slack =
                    schatten_from_spectra(spectra, candidates[c].params) - inner(candidates[c].g, y) - base[c];
                worst[c] = std::min(worst[c], slack);
            }
        }
        return worst;
    });
    std::vector<double> result(candidates.size(), kInf);
    for (const auto& chunk : chunks)
        for (std::size_t c = 0; c < result.size(); ++c) result[c] = std::min(result[c], chunk[c]);
    return result;
}

double subgradient_inequality_test(const DenseTensor& x, const DenseTensor& g, const SchattenParams& params,
                                   std::size_t trials, std::uint64_t seed) {
    const SubgradientCandidate candidate{g, params};
    return subgradient_inequality_test(x, std::span<const SubgradientCandidate>(&candidate, 1), trials, seed).front();
}

double ConjugateValue::value() const { return finite ? 0.0 : kInf; }

ConjugateValue conjugate_value_tuple(const SpectralTuple& g, const SchattenParams& params, double tol) {
    ConjugateValue v;
    v.dual_ratio = mixed_dual_norm(g, params) / params.lambda();
    v.finite = v.dual_ratio <= 1.0 + tol;
    return v;
}

ConjugateValue analytic_tensor_conjugate(const DenseTensor& x, const SchattenParams& params, double tol) {
    const double root_order = std::sqrt(static_cast<double>(x.order()));
    return conjugate_value_tuple(SpectralTuple{combined_spectrum(x).per_mode}, params.with_lambda(params.lambda() * root_order),
                                 tol);
}

namespace {

// Hill climbing state for ⟨X,Y⟩/N(Y); every ratio() call is one evaluation.
class RatioSearch {
public:
    RatioSearch(const DenseTensor& x, const SchattenParams& params, std::size_t budget)
        : x_(x), params_(params), budget_(budget) {}

    bool exhausted() const { return used_ >= budget_; }
    std::size_t used() const { return used_; }

    // NaN when Y = 0.
    double ratio(const std::vector<double>& y) {
        ++used_;
        const DenseTensor t(x_.shape(), y);
        const double n = schatten_norm(t, params_);
        if (n == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return inner(x_, t) / n;
    }

    void climb(std::vector<double> y, std::size_t local_budget, Rng& rng) {
        const std::size_t stop = std::min(budget_, used_ + local_budget);
        double r = ratio(y);
        if (std::isnan(r)) return;
        record(y, r);
        const std::size_t n = y.size();
        double step = 0.3;
        for (std::size_t it = 0; used_ < stop; ++it) {
            const double len = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
            std::vector<double> cand = y;
            if (it % 2 == 0) {
                auto z = rng.gaussian_vector(n);
                const double zn = std::sqrt(std::inner_product(z.begin(), z.end(), z.begin(), 0.0));
                for (std::size_t i = 0; i < n; ++i) cand[i] += step * len * z[i] / zn;
            } else {
                const std::size_t k = (it / 4) % n;
                cand[k] += ((it / 2) % 2 == 0 ? step : -step) * len;
            }
            const double rc = ratio(cand);
            if (!std::isnan(rc) && rc > r) {
                const double cn = std::sqrt(std::inner_product(cand.begin(), cand.end(), cand.begin(), 0.0));
                for (double& v : cand) v /= cn;
                y = std::move(cand);
                r = rc;
                record(y, r);
                step = std::min(1.0, step * 1.5);
            } else {
                step *= 0.9;
                if (step < 1e-7) step = 0.3;
            }
        }
    }

    double best_ratio() const { return best_ratio_; }
    const std::vector<double>& best() const { return best_; }

private:
    void record(const std::vector<double>& y, double r) {
        if (r > best_ratio_) {
            best_ratio_ = r;
            best_ = y;
        }
    }

    const DenseTensor& x_;
    const SchattenParams& params_;
    std::size_t budget_;
    std::size_t used_ = 0;
    double best_ratio_ = -kInf;
    std::vector<double> best_;
};

}  // namespace

ConjugateEstimate estimate_tensor_conjugate(const DenseTensor& x, const SchattenParams& params, std::size_t budget,
                                            std::uint64_t seed) {
    if (budget == 0) throw DomainError("estimate_tensor_conjugate: budget must be >= 1");
    ConjugateEstimate est;
    est.certificate = DenseTensor(x.shape());
    if (frobenius(x) == 0.0) {
        est.evaluations = 1;
        return est;
    }

    // X and the leading rank-one term of its HOSVD are tried before the Gaussian starts.
    std::vector<std::vector<double>> starts;
    starts.emplace_back(x.data().begin(), x.data().end());
    const Hosvd h = hosvd(x);
    std::vector<std::vector<double>> leading;
    for (const auto& f : h.factors) leading.push_back(f.column(0));
    const DenseTensor rank_one = outer(leading);
    starts.emplace_back(rank_one.data().begin(), rank_one.data().end());
    const std::size_t random_starts = std::clamp<std::size_t>(budget / 5000, 1, 18);
    for (std::size_t s = 0; s < random_starts; ++s) {
        const DenseTensor z = random_gaussian(x.shape(), derive_seed(seed, s));
        starts.emplace_back(z.data().begin(), z.data().end());
    }

    RatioSearch search(x, params, budget);
    Rng rng(derive_seed(seed, 1000));
    const std::size_t per_start = std::max<std::size_t>(1, budget / starts.size());
    for (auto& y : starts) {
        if (search.exhausted()) break;
        search.climb(std::move(y), per_start, rng);
    }

    est.evaluations = search.used();
    est.best_ratio = search.best_ratio();
    if (est.best_ratio > 1.0) {
        const DenseTensor y(x.shape(), search.best());
        est.certificate = (1.0 / schatten_norm(y, params)) * y;
        est.value = inner(x, est.certificate) - schatten_norm(est.certificate, params);
    }
    return est;
}

}  // namespace tenspec
