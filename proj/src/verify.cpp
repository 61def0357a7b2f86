#include "tenspec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "tenspec/error.hpp"
#include "tenspec/json_io.hpp"
#include "tenspec/odeco.hpp"
#include "tenspec/random.hpp"
#include "tenspec/spectral.hpp"
#include "tenspec/subdiff.hpp"
#include "tenspec/svd.hpp"
#include "tenspec/vonneumann.hpp"

namespace tenspec::verify {

namespace {

using nlohmann::json;

Check upper(std::string name, double threshold) {
    Check c;
    c.name = std::move(name);
    c.threshold = threshold;
    return c;
}

Check lower(std::string name, double threshold) {
    Check c = upper(std::move(name), threshold);
    c.lower_bound = true;
    c.worst = std::numeric_limits<double>::infinity();
    return c;
}

void record(Check& c, double metric) {
    ++c.trials;
    if (c.lower_bound) {
        c.worst = std::min(c.worst, metric);
        if (!(metric >= c.threshold)) ++c.failures;
    } else {
        c.worst = std::max(c.worst, metric);
        if (!(metric <= c.threshold)) ++c.failures;
    }
}

// Pass/fail check with no metric (worst counts failures).
void record_bool(Check& c, bool ok) {
    ++c.trials;
    if (!ok) {
        ++c.failures;
        c.worst += 1.0;
    }
}

std::size_t scaled(std::size_t n, const Config& config) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * config.fraction)));
}

Shape random_shape(Rng& rng, std::size_t order, std::size_t max_dim) {
    std::vector<std::size_t> dims(order);
    for (auto& n : dims) n = 1 + rng.index(max_dim);
    return Shape(std::move(dims));
}

Shape cube(std::size_t n, std::size_t order) { return Shape(std::vector<std::size_t>(order, n)); }

std::size_t min_dim(const Shape& s) { return *std::min_element(s.dims().begin(), s.dims().end()); }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

const std::vector<SchattenParams>& params_for(std::size_t order) {
    static std::vector<std::vector<SchattenParams>> table;
    while (table.size() <= order) {
        const double inv = 1.0 / static_cast<double>(table.size() == 0 ? 1 : table.size());
        table.push_back({SchattenParams(1, 1, inv), SchattenParams(2, 2, 1), SchattenParams(3, 2, 1),
                         SchattenParams(2, 1, 1), SchattenParams(1, 2, inv)});
    }
    return table[order];
}

CriterionResult adjointness(const Config& config, std::uint64_t seed) {
    CriterionResult r{1, "adjointness and round-trip of matricize/tensorize", {}};
    Check adj = upper("adjoint identity, relative", 1e-12);
    Check trip = upper("tensorize(matricize(X)) exact, max abs diff", 0.0);
    Rng rng(seed);
    const std::size_t trials = scaled(100, config);
    for (std::size_t order : {2u, 3u, 4u}) {
        for (std::size_t t = 0; t < trials; ++t) {
            const Shape shape = random_shape(rng, order, 4);
            const std::size_t d = 1 + rng.index(order);
            const DenseTensor x = random_gaussian(shape, derive_seed(seed, 1000 * order + 2 * t));
            const std::size_t rows = shape.dim(d);
            const Matrix m = random_gaussian_matrix(rows, shape.size() / rows, derive_seed(seed, 1000 * order + 2 * t + 1));
            const double lhs = inner(matricize(x, d), m);
            const double rhs = inner(x, tensorize(m, d, shape));
            record(adj, std::abs(lhs - rhs) / std::max(1e-300, frobenius(x) * frobenius(m)));
            const DenseTensor back = tensorize(matricize(x, d), d, shape);
            record(trip, max_abs_diff(back.data(), x.data()));
        }
    }
    r.checks = {adj, trip};
    return r;
}

CriterionResult hosvd_checks(const Config& config, std::uint64_t seed) {
    CriterionResult r{2, "HOSVD reconstruction, orthogonality, all-orthogonality", {}};
    Check rec = upper("reconstruction, relative", 1e-10);
    Check orth = upper("factor orthogonality ||UU^T - I||_F", 1e-12);
    Check core = upper("core off-diagonal / ||X||_F^2", 1e-10);
    Rng rng(seed);
    for (std::size_t t = 0; t < scaled(200, config); ++t) {
        const std::size_t order = 2 + rng.index(3);
        const Shape shape = random_shape(rng, order, order == 4 ? 4 : 5);
        const DenseTensor x = random_gaussian(shape, derive_seed(seed, t));
        const Hosvd h = hosvd(x);
        const double nx = frobenius(x);
        record(rec, frobenius(h.reconstruct() - x) / nx);
        for (const auto& u : h.factors) record(orth, frobenius(u * u.transpose() - Matrix::identity(u.rows())));
        for (double off : core_orthogonality_report(h)) record(core, off / (nx * nx));
    }
    r.checks = {rec, orth, core};
    return r;
}

double cross_mode_deviation(const DenseTensor& x) {
    const auto s = all_mode_spectra(x);
    double worst = 0.0;
    for (std::size_t d = 1; d < s.order(); ++d) worst = std::max(worst, max_abs_diff(s[d], s[0]));
    return worst / std::max(1e-300, frobenius(x));
}

CriterionResult equal_spectra(const Config& config, std::uint64_t seed) {
    CriterionResult r{3, "equal mode spectra for symmetric and odeco tensors", {}};
    Check sym = upper("symmetric: cross-mode deviation, relative", 1e-10);
    Check ode = upper("odeco: cross-mode deviation, relative", 1e-10);
    Rng rng(seed);
    for (std::size_t t = 0; t < scaled(100, config); ++t) {
        const std::size_t order = 2 + rng.index(3);
        const std::size_t n = 2 + rng.index(order == 4 ? 2 : 3);
        record(sym, cross_mode_deviation(symmetrize(random_gaussian(cube(n, order), derive_seed(seed, 2 * t)))));
        const std::size_t rank = 1 + rng.index(n);
        record(ode, cross_mode_deviation(to_dense(random_odeco(cube(n, order), rank, derive_seed(seed, 2 * t + 1)))));
    }
    r.checks = {sym, ode};
    return r;
}

CriterionResult norm_identities(const Config& config, std::uint64_t seed) {
    CriterionResult r{4, "Schatten/nuclear norm identities and triangle inequality", {}};
    Check frob = upper("schatten(2,2,1) vs sqrt(D)*frobenius, relative", 1e-12);
    Check nuc = upper("nuclear(odeco) vs sum(alpha), relative", 1e-10);
    Check tri = lower("triangle slack N(X)+N(Y)-N(X+Y)", -1e-10);
    Rng rng(seed);
    for (std::size_t t = 0; t < scaled(200, config); ++t) {
        const std::size_t order = 2 + rng.index(3);
        const Shape shape = random_shape(rng, order, order == 4 ? 3 : 4);
        const DenseTensor x = random_gaussian(shape, derive_seed(seed, 3 * t));
        const double expect = std::sqrt(static_cast<double>(order)) * frobenius(x);
        record(frob, std::abs(schatten_norm(x, SchattenParams(2, 2, 1)) - expect) / expect);

        const Shape cubic = cube(2 + rng.index(3), order == 4 ? 3 : order);
        const auto rep = random_odeco(cubic, 1 + rng.index(min_dim(cubic)), derive_seed(seed, 3 * t + 1));
        const double sum = std::accumulate(rep.alphas().begin(), rep.alphas().end(), 0.0);
        record(nuc, std::abs(nuclear_norm(to_dense(rep)) - sum) / sum);
    }
    for (std::size_t t = 0; t < scaled(1000, config); ++t) {
        const std::size_t order = 2 + rng.index(2);
        const Shape shape = random_shape(rng, order, 4);
        const DenseTensor x = random_gaussian(shape, derive_seed(seed, 10000 + 2 * t));
        const DenseTensor y = random_gaussian(shape, derive_seed(seed, 10001 + 2 * t));
        const auto& params = params_for(order)[t % 5];
        record(tri, schatten_norm(x, params) + schatten_norm(y, params) - schatten_norm(x + y, params));
    }
    r.checks = {frob, nuc, tri};
    return r;
}

CriterionResult von_neumann(const Config& config, std::uint64_t seed) {
    CriterionResult r{5, "tensor Von Neumann inequality and equality structure", {}};
    Check gaps = lower("min per-mode gap / scale, random pairs", -1e-10);
    Check shared = upper("shared-frame odeco pairs: structure and vn equality (failures)", 0.0);
    Check rotated = upper("random-rotated pairs: vn equality at tol 1e-8 (failures)", 0.0);
    Rng rng(seed);
    for (std::size_t t = 0; t < scaled(10000, config); ++t) {
        const std::size_t order = 2 + rng.index(3);
        const Shape shape = random_shape(rng, order, order == 4 ? 3 : 4);
        const DenseTensor x = random_gaussian(shape, derive_seed(seed, 2 * t));
        DenseTensor y = random_gaussian(shape, derive_seed(seed, 2 * t + 1));
        // Every third pair is nearly aligned, probing the equality regime.
        if (t % 3 == 0) y = x + rng.uniform(1e-6, 0.1) * y;
        const VnReport report = vn_report(x, y, 1e-10);
        const double min_gap = *std::min_element(report.per_mode_gap.begin(), report.per_mode_gap.end());
        record(gaps, min_gap / report.scale);
    }
    for (std::size_t t = 0; t < scaled(100, config); ++t) {
        const std::size_t order = 2 + rng.index(2);
        const Shape shape = random_shape(rng, order, 4);
        const std::size_t rank = 1 + rng.index(min_dim(shape));
        const auto x = random_odeco(shape, rank, derive_seed(seed, 50000 + t));
        std::vector<double> beta(rank);
        for (double& b : beta) b = rng.uniform(0.1, 3.0);
        std::sort(beta.begin(), beta.end(), std::greater<>());
        const auto y = make_odeco(beta, x.factors(), shape);
        const auto frames = odeco_hosvd(x).factors;
        const auto check = check_equality_via_structure(to_dense(x), to_dense(y), frames, 1e-10);
        record_bool(shared, check.holds && check.report.equality);

        // Rotated pairs use modes of size at least 2, so there is room to misalign.
        std::vector<std::size_t> rdims(order);
        for (auto& n : rdims) n = 2 + rng.index(3);
        const Shape rshape(rdims);
        const std::uint64_t xs = derive_seed(seed, 60000 + t);
        const DenseTensor dx = (t % 2 == 0) ? to_dense(random_odeco(rshape, 1 + rng.index(min_dim(rshape)), xs))
                                            : random_gaussian(rshape, xs);
        std::vector<Matrix> rot;
        for (std::size_t d = 0; d < order; ++d)
            rot.push_back(random_orthogonal(rdims[d], derive_seed(seed, 70000 + 10 * t + d)));
        record_bool(rotated, !vn_report(dx, multi_mode_mul(dx, rot), 1e-8).equality);
    }
    r.checks = {gaps, shared, rotated};
    return r;
}

CriterionResult dual_maximizer(const Config& config, std::uint64_t seed) {
    CriterionResult r{6, "dual vector maximizer against grid search", {}};
    Check pairing = upper("|<v*,s> - grid max|", 1e-3);
    Check unit = upper("| ||v*||_{p*} - 1 |", 1e-12);
    Rng rng(seed);
    const std::size_t per_case = scaled(5, config);
    for (std::size_t n : {2u, 3u}) {
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            for (std::size_t t = 0; t < per_case; ++t) {
                std::vector<double> s(n);
                for (double& x : s) x = rng.uniform(0.0, 3.0);
                if (t % 3 == 2) s[rng.index(n)] = 0.0;
                const auto m = dual_vector_maximizer(s, p);
                const double value = std::inner_product(m.v.begin(), m.v.end(), s.begin(), 0.0);
                record(pairing, std::abs(value - grid_search_dual_pairing(s, p, 1e-3)));
                record(unit, std::abs(lp_norm(m.v, dual_exponent(p)) - 1.0));
            }
        }
    }
    r.checks = {pairing, unit};
    return r;
}

CriterionResult subgradient_soundness(const Config& config, std::uint64_t seed) {
    CriterionResult r{7, "subgradient construction soundness at odeco points", {}};
    Check accepted = upper("check_membership(X, G) rejected (count)", 0.0);
    Check slack = lower("min subgradient-inequality slack", -1e-9);
    Check doubled = upper("check_membership(X, 2G) accepted (count)", 0.0);
    Rng rng(seed);
    const std::size_t trials = scaled(10000, config);
    for (std::size_t t = 0; t < scaled(200, config); ++t) {
        const std::size_t order = 2 + rng.index(2);
        const std::uint64_t s = derive_seed(seed, t);
        OdecoRep rep = [&] {
            if (t % 2 == 0) {
                const Shape shape = random_shape(rng, order, 4);
                return random_odeco(shape, 1 + rng.index(min_dim(shape)), s);
            }
            const std::size_t n = 1 + rng.index(4);
            return random_symmetric_odeco(n, order, 1 + rng.index(n), s);
        }();
        const DenseTensor x = to_dense(rep);
        std::vector<SubgradientCandidate> candidates;
        for (const auto& params : params_for(order)) {
            const DenseTensor g = subgrad_schatten(rep, params);
            record_bool(accepted, check_membership(x, g, params, 1e-9).accepted);
            record_bool(doubled, !check_membership(x, 2.0 * g, params, 1e-9).accepted);
            candidates.push_back({g, params});
        }
        for (double v : subgradient_inequality_test(x, candidates, trials, derive_seed(s, 99))) record(slack, v);
    }
    r.checks = {accepted, slack, doubled};
    return r;
}

CriterionResult matrix_reduction(const Config& config, std::uint64_t seed) {
    CriterionResult r{8, "matrix reduction: nuclear subgradient equals U V^T", {}};
    Check diff = upper("max |G - polar(M)|", 1e-10);
    std::size_t draw = 0;
    for (std::size_t t = 0; t < scaled(50, config); ++t) {
        Matrix m;
        SvdResult f;
        // Resample until comfortably full rank.
        do {
            m = random_gaussian_matrix(4, 4, derive_seed(seed, draw++));
            f = svd(m);
        } while (f.singular_values.back() < 1e-3 * f.singular_values.front());
        const auto rep = make_odeco(f.singular_values, {f.U, f.Vt.transpose()}, Shape{4, 4});
        const DenseTensor g = subgrad_schatten(rep, SchattenParams::nuclear(2));
        const Matrix polar = polar_factor(m);
        record(diff, max_abs_diff(g.data(), polar.data()));
    }
    r.checks = {diff};
    return r;
}

CriterionResult conjugate_consistency(const Config& config, std::uint64_t seed) {
    CriterionResult r{9, "conjugate consistency at odeco points", {}};
    Check inside = upper("0.9x dual bound: max sampled <X,Y> - N(Y)", 1e-6);
    Check outside = lower("1.1x dual bound: certificate value", 1e-3);
    Check analytic = upper("analytic conjugate disagrees with side of the dual ball (count)", 0.0);
    Rng rng(seed);
    const std::size_t budget = scaled(100000, config);
    const Shape shape{3, 3, 3};
    for (std::size_t t = 0; t < scaled(50, config); ++t) {
        const auto& params = params_for(3)[t % 5];
        const auto rep = random_odeco(shape, 1 + rng.index(3), derive_seed(seed, 2 * t));
        const DenseTensor x = to_dense(rep);
        const double bound = dual_norm_value(x, params);

        const DenseTensor in = (0.9 / bound) * x;
        const auto est_in = estimate_tensor_conjugate(in, params, budget, derive_seed(seed, 1000 + t));
        record(inside, std::max(est_in.value, est_in.best_ratio - 1.0));
        record_bool(analytic, analytic_tensor_conjugate(in, params).finite);

        const DenseTensor out = (1.1 / bound) * x;
        const auto est_out = estimate_tensor_conjugate(out, params, budget, derive_seed(seed, 2000 + t));
        record(outside, est_out.value);
        record_bool(analytic, !analytic_tensor_conjugate(out, params).finite);
    }
    r.checks = {inside, outside, analytic};
    return r;
}

bool bit_equal(std::span<const double> a, std::span<const double> b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](double x, double y) {
               return std::memcmp(&x, &y, sizeof(double)) == 0;
           });
}

CriterionResult json_round_trip(const Config& config, std::uint64_t seed) {
    CriterionResult r{10, "JSON round-trip bit-exact", {}};
    Check tensors = upper("tensor round-trip mismatches", 0.0);
    Check odecos = upper("odeco round-trip mismatches", 0.0);
    Rng rng(seed);
    for (std::size_t t = 0; t < scaled(100, config); ++t) {
        const Shape shape = random_shape(rng, 2 + rng.index(3), 4);
        // Spread magnitudes so the decimal conversion is exercised.
        const DenseTensor x = std::pow(10.0, rng.uniform(-30, 30)) * random_gaussian(shape, derive_seed(seed, 2 * t));
        const DenseTensor back = io::tensor_from_json(json::parse(io::to_json(x).dump()));
        record_bool(tensors, back.shape() == x.shape() && bit_equal(back.data(), x.data()));

        const auto rep = random_odeco(shape, 1 + rng.index(min_dim(shape)), derive_seed(seed, 2 * t + 1));
        const auto rep2 = io::odeco_from_json(json::parse(io::to_json(rep).dump()));
        bool same = bit_equal(rep.alphas(), rep2.alphas());
        for (std::size_t d = 0; d < rep.factors().size(); ++d)
            same = same && bit_equal(rep.factors()[d].data(), rep2.factors()[d].data());
        record_bool(odecos, same);
    }
    r.checks = {tensors, odecos};
    return r;
}

}  // namespace

bool CriterionResult::passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
}

CriterionResult run_criterion(int id, const Config& config) {
    const std::uint64_t seed = derive_seed(config.seed, static_cast<std::uint64_t>(id));
    switch (id) {
        case 1: return adjointness(config, seed);
        case 2: return hosvd_checks(config, seed);
        case 3: return equal_spectra(config, seed);
        case 4: return norm_identities(config, seed);
        case 5: return von_neumann(config, seed);
        case 6: return dual_maximizer(config, seed);
        case 7: return subgradient_soundness(config, seed);
        case 8: return matrix_reduction(config, seed);
        case 9: return conjugate_consistency(config, seed);
        case 10: return json_round_trip(config, seed);
        default: throw DomainError("unknown criterion " + std::to_string(id));
    }
}

std::vector<CriterionResult> run_all(const Config& config) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, config));
    return out;
}

nlohmann::json to_json(const Check& c) {
    return {{"name", c.name},          {"trials", c.trials},
            {"failures", c.failures},  {"worst", c.worst},
            {"threshold", c.threshold}, {"bound", c.lower_bound ? "lower" : "upper"},
            {"passed", c.passed()}};
}

nlohmann::json to_json(const CriterionResult& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return {{"id", r.id}, {"name", r.name}, {"passed", r.passed()}, {"checks", checks}};
}

nlohmann::json report_json(const std::vector<CriterionResult>& results, const Config& config) {
    json suites = json::array();
    std::size_t passed = 0;
    for (const auto& r : results) {
        suites.push_back(to_json(r));
        if (r.passed()) ++passed;
    }
    return {{"seed", config.seed},
            {"fraction", config.fraction},
            {"passed", passed},
            {"failed", results.size() - passed},
            {"suites", suites}};
}

double grid_search_dual_pairing(const std::vector<double>& s, double p, double step) {
    const std::size_t n = s.size();
    if (n != 2 && n != 3) throw DomainError("grid_search_dual_pairing: n must be 2 or 3");
    if (!(step > 0.0 && step <= 1.0)) throw DomainError("grid_search_dual_pairing: step must lie in (0, 1]");
    const double p_star = dual_exponent(p);
    const auto steps = static_cast<std::size_t>(std::ceil(1.0 / step));
    // Every nonnegative direction is w/‖w‖_{p*} for some w whose largest
    // coordinate is 1, so scanning the faces {w_f = 1} of the unit cube covers
    // the orthant and keeps the ℓ∞ corners on the grid.
    std::vector<double> grid(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) grid[i] = static_cast<double>(i) / static_cast<double>(steps);
    std::vector<double> w(n);
    double best = -std::numeric_limits<double>::infinity();
    auto visit = [&] {
        const double value = std::inner_product(w.begin(), w.end(), s.begin(), 0.0) / lp_norm(w, p_star);
        best = std::max(best, value);
    };
    for (std::size_t f = 0; f < n; ++f) {
        std::vector<std::size_t> others;
        for (std::size_t k = 0; k < n; ++k)
            if (k != f) others.push_back(k);
        w[f] = 1.0;
        for (double a : grid) {
            w[others[0]] = a;
            if (n == 2) {
                visit();
                continue;
            }
            for (double b2 : grid) {
                w[others[1]] = b2;
                visit();
            }
        }
    }
    return best;
}

Matrix inverse(const Matrix& m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw ShapeError("inverse: matrix is not square");
    Matrix a = m;
    Matrix inv = Matrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        for (std::size_t i = c + 1; i < n; ++i)
            if (std::abs(a(i, c)) > std::abs(a(pivot, c))) pivot = i;
        if (a(pivot, c) == 0.0) throw DomainError("inverse: singular matrix");
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(a(c, j), a(pivot, j));
            std::swap(inv(c, j), inv(pivot, j));
        }
        const double d = a(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) /= d;
            inv(c, j) /= d;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c) continue;
            const double f = a(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(c, j);
                inv(i, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

Matrix polar_factor(const Matrix& m) {
    Matrix z = m;
    bool scaling = true;
    for (int it = 0; it < 100; ++it) {
        const Matrix zinv_t = inverse(z).transpose();
        // Frobenius scaling speeds up the early steps; plain Newton finishes.
        const double gamma = scaling ? std::sqrt(frobenius(zinv_t) / frobenius(z)) : 1.0;
        const Matrix next = (0.5 * gamma) * z + (0.5 / gamma) * zinv_t;
        const double change = frobenius(next - z);
        z = next;
        if (change < 1e-2) scaling = false;
        if (change <= 1e-15 * static_cast<double>(z.rows())) break;
    }
    return z;
}

}  // namespace tenspec::verify
