#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "catalysis/models.hpp"

namespace catalysis {

struct NelderMeadOptions {
    int max_iterations = 2000;
    double value_spread_tol = 1e-8;
    double initial_step = 0.25;  // simplex offset per unconstrained coordinate
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0;
    int iterations = 0;
    bool converged = false;
};

// Standard simplex method (reflection 1, expansion 2, contraction 0.5,
// shrink 0.5) on an unconstrained objective. Terminates when the simplex
// value spread drops below tol or the iteration cap is hit.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             const std::vector<double>& start,
                             const NelderMeadOptions& options = {});

// Same search run in transform space; objective sees admissible parameters
// only, and the returned point is feasible by construction.
NelderMeadResult nelder_mead_constrained(
    const std::function<double(const std::vector<double>&)>& objective,
    const ParamTransform& transform, const std::vector<double>& start,
    const NelderMeadOptions& options = {});

struct FitResult {
    ModelParams params;
    double nll = 0;
    std::size_t n_pairs = 0;
    int k_params = 0;
    bool converged = false;
    int starts_evaluated = 0;
    int best_start_index = -1;
};

struct FitOptions {
    double step_minutes = k_default_step_minutes;
    unsigned workers = 0;  // 0 = hardware concurrency
    NelderMeadOptions nelder_mead;
    // extra multistart points appended to the grid (e.g. nested warm starts)
    std::vector<std::vector<double>> extra_starts;
};

// Maximum-likelihood fit by constrained Nelder-Mead from every grid start.
// Deterministic: the optimizer has no random component and ties are broken
// by start index; `seed` is recorded for provenance only.
FitResult fit(ModelKind kind, const PairDataset& data, const MultistartGrid& grid,
              std::uint64_t seed, const FitOptions& options = {});
FitResult fit(ModelKind kind, const Conference& c, std::uint64_t seed,
              const FitOptions& options = {});

}  // namespace catalysis
