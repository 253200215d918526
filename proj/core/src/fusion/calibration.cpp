#include "trisearch/fusion/calibration.hpp"

#include <cmath>
#include <unordered_set>

#include "trisearch/core/errors.hpp"
#include "trisearch/core/parallel.hpp"
#include "trisearch/core/similarity.hpp"

namespace trisearch::fusion {

namespace {

constexpr std::size_t kTopAccuracyCutoff = 10;

std::size_t steps_per_unit(double step) {
    if (step <= 0.0 || step > 1.0)
        throw ParameterError("grid step must lie in (0, 1]");
    const double n = 1.0 / step;
    const double rounded = std::round(n);
    if (std::fabs(n - rounded) > 1e-9)
        throw ParameterError("grid step must divide 1 evenly");
    return static_cast<std::size_t>(rounded);
}

// Rank of the positive candidate under weights w, using the same ordering
// rule as ranking: fused descending, id ascending. Counting beats sorting
// here; each grid point is O(candidates) per query.
std::size_t positive_rank(const std::vector<std::pair<std::string, SchemaScores>>& candidates,
                          const std::string& positive_id, const FusionWeights& w) {
    double positive_score = 0.0;
    bool found = false;
    for (const auto& [id, scores] : candidates) {
        if (id == positive_id) {
            positive_score = fuse_linear(scores, w);
            found = true;
            break;
        }
    }
    if (!found)
        throw CalibrationDataError("positive candidate " + positive_id +
                                   " missing from score table");

    std::size_t rank = 1;
    for (const auto& [id, scores] : candidates) {
        if (id == positive_id)
            continue;
        const double s = fuse_linear(scores, w);
        if (s > positive_score || (s == positive_score && id < positive_id))
            ++rank;
    }
    return rank;
}

std::vector<GridPoint> evaluate_surface(const CalibrationSet& cal, const ScoreTable& scores,
                                        double step) {
    if (cal.instances.empty())
        throw CalibrationDataError("calibration set is empty");
    {
        std::unordered_set<std::string_view> slice_ids;
        slice_ids.reserve(cal.codebase.size());
        for (const auto& s : cal.codebase)
            slice_ids.insert(s.id);
        for (const auto& inst : cal.instances) {
            if (!slice_ids.empty() && !slice_ids.contains(inst.positive_id))
                throw CalibrationDataError("positive id " + inst.positive_id +
                                           " not in the codebase slice");
            if (!scores.contains(inst.query.id))
                throw CalibrationDataError("no scores for query " + inst.query.id);
        }
    }

    const auto grid = simplex_grid(step);
    std::vector<GridPoint> surface(grid.size());

    parallel_for(grid.size(), std::thread::hardware_concurrency(), [&](std::size_t g) {
        const double alpha = grid[g].first;
        const double beta = grid[g].second.first;
        const double gamma = grid[g].second.second;
        const FusionWeights w(alpha, beta, gamma, WeightOrigin::calibrated);

        std::size_t hits = 0;
        for (const auto& inst : cal.instances) {
            const auto& candidates = scores.at(inst.query.id);
            if (positive_rank(candidates, inst.positive_id, w) <= kTopAccuracyCutoff)
                ++hits;
        }
        surface[g] = {alpha, beta, gamma,
                      static_cast<double>(hits) / static_cast<double>(cal.instances.size())};
    });
    return surface;
}

} // namespace

std::vector<std::pair<double, std::pair<double, double>>> simplex_grid(double step) {
    const std::size_t n = steps_per_unit(step);
    std::vector<std::pair<double, std::pair<double, double>>> grid;
    grid.reserve((n + 1) * (n + 2) / 2);
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; i + j <= n; ++j) {
            const std::size_t k = n - i - j;
            grid.push_back({static_cast<double>(i) * step,
                            {static_cast<double>(j) * step, static_cast<double>(k) * step}});
        }
    }
    return grid;
}

CalibrationReport calibrate(const CalibrationSet& cal, const ScoreTable& scores, double step) {
    CalibrationReport report;
    report.grid_step = step;
    report.sampling_dataset_id = cal.dataset_id;
    report.surface = evaluate_surface(cal, scores, step);

    // Ties go to the larger alpha, then the larger beta.
    const GridPoint* best = &report.surface.front();
    for (const GridPoint& p : report.surface) {
        if (p.objective > best->objective ||
            (p.objective == best->objective &&
             (p.alpha > best->alpha || (p.alpha == best->alpha && p.beta > best->beta))))
            best = &p;
    }
    report.best_weights = FusionWeights(best->alpha, best->beta, best->gamma,
                                        WeightOrigin::calibrated);
    return report;
}

std::vector<GridPoint> sweep_weights(const CalibrationSet& cal, const ScoreTable& scores,
                                     double step) {
    return evaluate_surface(cal, scores, step);
}

} // namespace trisearch::fusion
