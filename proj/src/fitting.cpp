#include "catalysis/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "catalysis/parallel.hpp"

namespace catalysis {

namespace {

constexpr double k_bad_objective = 1e30;

struct Vertex {
    std::vector<double> x;
    double f = 0;
};

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             const std::vector<double>& start,
                             const NelderMeadOptions& options) {
    const std::size_t n = start.size();
    if (n == 0) throw DomainError("empty start vector");

    auto eval = [&](const std::vector<double>& x) {
        const double f = objective(x);
        return std::isfinite(f) ? f : k_bad_objective;
    };

    std::vector<Vertex> simplex(n + 1);
    simplex[0] = {start, eval(start)};
    if (simplex[0].f >= k_bad_objective) {
        throw NumericalError("objective not finite at the start point");
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto x = start;
        x[i] += options.initial_step;
        simplex[i + 1] = {x, eval(x)};
    }

    auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
    std::sort(simplex.begin(), simplex.end(), by_value);

    NelderMeadResult result;
    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        if (simplex.back().f - simplex.front().f < options.value_spread_tol) break;

        // centroid of all but the worst
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i].x[d];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](double coef) {
            std::vector<double> x(n);
            for (std::size_t d = 0; d < n; ++d) {
                x[d] = centroid[d] + coef * (simplex.back().x[d] - centroid[d]);
            }
            return x;
        };

        const auto reflected = blend(-1.0);
        const double fr = eval(reflected);
        if (fr < simplex.front().f) {
            const auto expanded = blend(-2.0);
            const double fe = eval(expanded);
            simplex.back() = fe < fr ? Vertex{expanded, fe} : Vertex{reflected, fr};
        } else if (fr < simplex[n - 1].f) {
            simplex.back() = {reflected, fr};
        } else {
            const bool outside = fr < simplex.back().f;
            const auto contracted = blend(outside ? -0.5 : 0.5);
            const double fc = eval(contracted);
            if (fc < std::min(fr, simplex.back().f)) {
                simplex.back() = {contracted, fc};
            } else {
                // shrink toward the best vertex
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t d = 0; d < n; ++d) {
                        simplex[i].x[d] =
                            simplex[0].x[d] + 0.5 * (simplex[i].x[d] - simplex[0].x[d]);
                    }
                    simplex[i].f = eval(simplex[i].x);
                }
            }
        }
        std::sort(simplex.begin(), simplex.end(), by_value);
    }

    result.x = simplex.front().x;
    result.value = simplex.front().f;
    result.iterations = iter;
    result.converged = iter < options.max_iterations;
    return result;
}

NelderMeadResult nelder_mead_constrained(
    const std::function<double(const std::vector<double>&)>& objective,
    const ParamTransform& transform, const std::vector<double>& start,
    const NelderMeadOptions& options) {
    auto wrapped = [&](const std::vector<double>& u) {
        return objective(transform.to_constrained(u));
    };
    NelderMeadResult r = nelder_mead(wrapped, transform.to_unconstrained(start), options);
    r.x = transform.to_constrained(r.x);
    return r;
}

FitResult fit(ModelKind kind, const PairDataset& data, const MultistartGrid& grid,
              std::uint64_t /*seed*/, const FitOptions& options) {
    const unsigned workers = options.workers == 0 ? default_workers() : options.workers;

    FitResult result;
    result.n_pairs = data.records.size();
    result.k_params = param_count(kind);

    if (kind == ModelKind::random_uniform) {
        result.params = {kind, {}};
        result.nll = static_cast<double>(data.records.size()) * std::log(2.0);
        result.converged = true;
        return result;
    }

    auto starts = grid.expand();
    for (const auto& extra : options.extra_starts) starts.push_back(extra);
    if (starts.empty() || starts.front().empty()) {
        throw DomainError("empty multistart grid for " + model_name(kind));
    }

    const ParamTransform transform = transform_for(kind);
    auto objective = [&](const std::vector<double>& values) {
        try {
            return negative_log_likelihood({kind, values}, data, options.step_minutes,
                                           /*workers=*/1);
        } catch (const DomainError&) {
            return k_bad_objective;
        } catch (const NumericalError&) {
            return k_bad_objective;
        }
    };

    std::vector<NelderMeadResult> runs(starts.size());
    std::vector<char> failed(starts.size(), 0);
    // one NM run per worker at a time; likelihoods inside stay single-threaded
    parallel_for(starts.size(), workers, [&](std::size_t si) {
        try {
            runs[si] = nelder_mead_constrained(objective, transform, starts[si],
                                               options.nelder_mead);
        } catch (const std::exception&) {
            failed[si] = 1;
        }
    });

    int best = -1;
    for (std::size_t si = 0; si < starts.size(); ++si) {
        if (failed[si] || runs[si].value >= k_bad_objective) continue;
        if (best < 0 || runs[si].value < runs[best].value) best = static_cast<int>(si);
    }
    if (best < 0) throw NumericalError("all multistart fits failed");

    result.params = {kind, runs[best].x};
    result.nll = runs[best].value;
    result.converged = runs[best].converged;
    result.starts_evaluated = static_cast<int>(starts.size());
    result.best_start_index = best;
    return result;
}

FitResult fit(ModelKind kind, const Conference& c, std::uint64_t seed,
              const FitOptions& options) {
    return fit(kind, PairDataset::build(c), default_grid(kind), seed, options);
}

}  // namespace catalysis
