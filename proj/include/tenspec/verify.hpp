#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "tenspec/tensor.hpp"

// Seeded property suite behind `tenspec verify` and the acceptance binary.
// Each criterion samples its own inputs from derive_seed(seed, criterion id)
// and reports the worst observed metric against its pinned threshold.
namespace tenspec::verify {

struct Config {
    std::uint64_t seed = 0;
    // Multiplies every trial count; 1 runs the full suite.
    double fraction = 1.0;
};

struct Check {
    std::string name;
    std::size_t trials = 0;
    std::size_t failures = 0;
    // Worst metric seen; compared against `threshold` in the direction the
    // check names (upper bound unless `lower_bound`).
    double worst = 0.0;
    double threshold = 0.0;
    bool lower_bound = false;

    bool passed() const { return trials > 0 && failures == 0; }
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::vector<Check> checks;

    bool passed() const;
};

// Criteria 1..9 of the property suite plus the JSON part of 10.
inline constexpr int kCriterionCount = 10;

CriterionResult run_criterion(int id, const Config& config);
std::vector<CriterionResult> run_all(const Config& config);

nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const CriterionResult& r);
nlohmann::json report_json(const std::vector<CriterionResult>& results, const Config& config);

// Oracles shared with the tests.

// max ⟨v, s⟩ over the unit ℓ_{p*} sphere restricted to the nonnegative
// orthant (s ≥ 0), scanned on the faces of the unit cube at the given step;
// n ∈ {2, 3}.
double grid_search_dual_pairing(const std::vector<double>& s, double p, double step);

// Orthogonal polar factor of a nonsingular square matrix by scaled Newton
// iteration, M ↦ (γM + (γM)^{-T})/2.
Matrix polar_factor(const Matrix& m);

Matrix inverse(const Matrix& m);

}  // namespace tenspec::verify
