#include "cli/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "bcp/error.hpp"

namespace bcp::cli {

LineFit fit_loglog(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error(ErrorCode::DimensionMismatch, "cli", "x and y differ in length");
    }
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] == 0.0) continue;
        if (!(x[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "cli", "x must be positive");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(std::abs(y[i])));
    }
    const double m = static_cast<double>(lx.size());
    if (lx.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "cli", "need two nonzero errors to fit a slope");
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw Error(ErrorCode::InvalidArgument, "cli", "all x values coincide");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.points = static_cast<int>(lx.size());
    return fit;
}

StudyReport run_study(const RunConfig& config) {
    if (config.n_list.size() < 3) {
        throw Error(ErrorCode::ConfigError, "cli", "a study needs at least three values in n_list");
    }
    const int max_n = *std::max_element(config.n_list.begin(), config.n_list.end());

    StudyReport report;
    auto reference = resolve_reference(config, max_n);
    if (!reference) {
        RunConfig fallback = config;
        fallback.reference = Reference::self_richardson;
        reference = resolve_reference(fallback, max_n);
    }
    report.reference = *reference;

    std::vector<double> ns;
    std::vector<double> errors;
    for (const int n : config.n_list) {
        const auto started = std::chrono::steady_clock::now();
        const SweepResult r = run_chain(config, n);
        StudyRow row;
        row.n = n;
        row.probability = r.probability;
        row.abs_error = std::abs(r.probability - report.reference.noncrossing);
        row.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        report.rows.push_back(row);
        ns.push_back(n);
        errors.push_back(row.abs_error);
    }
    report.fit = fit_loglog(ns, errors);
    return report;
}

}  // namespace bcp::cli
