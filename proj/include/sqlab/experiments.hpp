#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sqlab/tile_ops.hpp"

namespace sqlab {

// Geometry of a tri-tile collection, in 1/L lattice units.
struct CollectionParams {
    long long a0 = 0, width = 16, gap = 48;
    int n_min = -4, n_max = 4;
    int depth = 2, extent = 1, seeds = 1;
};

// One batch experiment. kind selects the runner, mode the theorem being
// exercised in a boundedness sweep:
//   pair        two-input square function, needs p, q > 2 and r' >= 2
//   exploratory same operator, r' < 2 allowed, ratios reported unasserted
//   sequence    per-strip first inputs, needs 0 < 1/r < 3/2
//   linear      one-input baseline plus the indicator growth fit
struct ExperimentConfig {
    int n = 4096, length = 16;
    std::string kind = "boundedness";
    std::string mode = "pair";
    double p = 4.0, q = 4.0;
    std::vector<int> p_range = {8, 16, 32, 64};
    std::uint64_t seed = 1;
    int trials = 50;
    long long strip_a0 = 0, strip_width = 16, strip_gap = 0;
    int strip_n_min = 0, strip_n_max = 15;
    CollectionParams collection;
    double calibration = 10.0;  // frozen ratio ceiling for asserting modes

    double r() const { return 1.0 / (1.0 / p + 1.0 / q); }
    double r_dual() const { return r() / (r() - 1.0); }
    Grid grid() const { return Grid(n, length); }
    StripFamily strips() const {
        return StripFamily(strip_a0, strip_width, strip_gap, strip_n_min, strip_n_max, length);
    }
    void validate() const;  // throws with the violated hypothesis

    static ExperimentConfig from_json(const std::string& text);
};

struct PowerLawFit {
    double slope = 0.0, intercept = 0.0, residual = 0.0;
    std::vector<std::pair<double, double>> points;  // transformed coordinates
};

// least squares line, optionally on (log x, log y); needs >= 3 points and a
// non-degenerate x range
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& pts, bool log_log);

struct ExperimentReport {
    std::string kind;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<std::pair<std::string, bool>> verdicts;
    std::vector<PowerLawFit> fits;

    double metric(const std::string& name) const;  // throws if absent
    bool pass() const;                             // all verdicts true
};

ExperimentReport run_counterexample(const ExperimentConfig& cfg);
ExperimentReport run_boundedness(const ExperimentConfig& cfg);
ExperimentReport run_tile_audit(const ExperimentConfig& cfg);

// deterministic serialization, 12 significant digits everywhere; svg is only
// defined for reports carrying a ratio curve
std::string emit(const ExperimentReport& rep, const std::string& format);
ExperimentReport report_from_json(const std::string& text);

// static picture of a collection's coordinate rectangles in the (x, xi) plane
std::string svg_tile_picture(const Collection& C);

}  // namespace sqlab
