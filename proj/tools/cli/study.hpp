#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cli/config.hpp"
#include "cli/problem.hpp"

namespace bcp::cli {

/// Least-squares line through (log x, log |y|).
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    int points = 0;
};

/// Fits log|y| = intercept + slope log x by ordinary least squares over the
/// points with y != 0. Needs at least two such points with distinct x.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

struct StudyRow {
    int n = 0;
    double probability = 0.0;  ///< non-crossing
    double abs_error = 0.0;
    double seconds = 0.0;
};

struct StudyReport {
    std::vector<StudyRow> rows;
    ReferenceValue reference;
    LineFit fit;
};

/// Runs the chain for every n in config.n_list and fits the error slope.
/// Without an available reference the study falls back to self_richardson.
StudyReport run_study(const RunConfig& config);

}  // namespace bcp::cli
