#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "trisearch/core/types.hpp"

namespace trisearch::fusion {

// Labeled instances for weight calibration: each query has one relevant
// candidate inside a shared codebase slice.
struct CalibrationInstance {
    Query query;
    std::string positive_id;
};

struct CalibrationSet {
    std::vector<CalibrationInstance> instances;
    std::vector<CodeSnippet> codebase; // the slice every instance ranks against
    std::string dataset_id;
};

// Precomputed schema scores: query id -> (candidate id, scores) for every
// candidate in the slice. One embedding pass feeds every grid point.
using ScoreTable = std::map<std::string, std::vector<std::pair<std::string, SchemaScores>>>;

struct GridPoint {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double objective = 0.0; // mean top-10 accuracy
};

struct CalibrationReport {
    FusionWeights best_weights;
    double grid_step = 0.0;
    std::vector<GridPoint> surface; // full objective surface, grid order
    std::string sampling_dataset_id;

    CalibrationReport() : best_weights(FusionWeights::defaults()) {}
};

// All nonnegative weight triples with i + j + k = 1/step on the simplex
// lattice; (n+1)(n+2)/2 points for step 1/n. The step must divide 1 evenly.
std::vector<std::pair<double, std::pair<double, double>>> simplex_grid(double step);

// Exhaustive grid search maximizing mean top-10 accuracy over the set.
// Objective ties are broken toward larger alpha, then larger beta. Every
// (query, candidate) pair must be covered by `scores`.
CalibrationReport calibrate(const CalibrationSet& cal, const ScoreTable& scores,
                            double step = 0.05);

// The full objective surface at a finer default step, for analysis and
// plotting; no winner is selected.
std::vector<GridPoint> sweep_weights(const CalibrationSet& cal, const ScoreTable& scores,
                                     double step = 0.01);

} // namespace trisearch::fusion
