// End-to-end acceptance suite: one pass/fail line per criterion, exit 0 only
// when every criterion holds. Tolerances are pinned here and nowhere else.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "sqlab/experiments.hpp"

using namespace sqlab;
using clock_type = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void line(int idx, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s %2d %s (%s)\n", ok ? "PASS" : "FAIL", idx, name.c_str(), detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// 1: the indicator pair's band-restricted spectrum is a triangle of height
// 1/2 centred at n + 1 in density units
void criterion_triangle() {
    auto t0 = clock_type::now();
    Grid g(4096, 16);
    const int P = 32, L = 16;
    auto [f, nar] = dirichlet_pair(g, P);
    Spectrum F = forward(f), N = forward(nar);
    double mx = 0.0;
    for (int n = 1; n < P; ++n) {
        Spectrum T = bilinear_project(N, F, FreqInterval::of(n, n + 1.0, L));
        for (long long m = g.mode_min(); m < g.mode_max(); ++m) {
            double t = std::fabs(g.frequency(m) - (n + 1.0));
            double profile = t <= 1.0 ? 0.5 * (1.0 - t) : 0.0;
            mx = std::max(mx, std::fabs(std::abs(T.at_mode(m)) / L - profile));
        }
    }
    double dt = seconds_since(t0);
    line(1, "triangular band spectrum", mx <= 2.0 / L && dt < 30.0,
         "max dev " + fmt(mx) + " <= " + fmt(2.0 / L) + ", " + fmt(dt) + "s");
}

// 2: every band piece is a modulation of the first in absolute value
void criterion_modulation() {
    Grid g(4096, 16);
    const int P = 32;
    auto [f, nar] = dirichlet_pair(g, P);
    auto pieces = strip_apply(nar, f, StripFamily::unit(0, P, 16));
    double ref = 0.0;
    for (int x = 0; x < g.n; ++x) ref = std::max(ref, std::abs(pieces[0][x]));
    double mx = 0.0;
    for (const Signal& piece : pieces)
        for (int x = 0; x < g.n; ++x)
            mx = std::max(mx, std::fabs(std::abs(piece[x]) - std::abs(pieces[0][x])));
    line(2, "modulation identity across bands", mx <= 1e-9 * ref,
         "max dev " + fmt(mx) + " vs " + fmt(1e-9 * ref));
}

// 3: ratio growth over P has the predicted log-log slope
void criterion_scaling() {
    auto t0 = clock_type::now();
    bool ok = true;
    std::string detail;
    for (auto [p, q] : std::vector<std::pair<double, double>>{
             {1.25, 2.0}, {1.5, 2.0}, {2.0, 2.0}, {4.0, 4.0}}) {
        ExperimentConfig cfg;
        cfg.kind = "counterexample";
        cfg.n = 8192;
        cfg.p = p;
        cfg.q = q;
        ExperimentReport rep = run_counterexample(cfg);
        ok = ok && rep.pass();
        if (!detail.empty()) detail += ", ";
        detail += "p=" + fmt(p) + ": " + fmt(rep.metric("scaling_slope"));
    }
    double dt = seconds_since(t0);
    ok = ok && dt < 300.0;
    line(3, "indicator-pair scaling slopes", ok, detail + ", " + fmt(dt) + "s");
}

// 4: a partition of the band preserves the l2 norm of the square function
void criterion_plancherel() {
    Grid g(1024, 16);
    long long band = g.n / (4LL * g.length) + 1;
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        Signal f = random_band_limited(g, 400 + std::uint64_t(t));
        Signal sq = linear_square_unit(f, -band, band);
        worst = std::max(worst, std::fabs(lp_norm(sq, 2.0) - lp_norm(f, 2.0)) / lp_norm(f, 2.0));
    }
    line(4, "plancherel partition", worst <= 1e-10, "max rel dev " + fmt(worst));
}

// 5: summing the projections over a partitioning family reproduces the input
// (linear), the product (bilinear strips), and the product again (cells)
void criterion_reconstruction() {
    Grid g(1024, 16);
    long long band = g.n / (4LL * g.length) + 1;
    Signal f = random_band_limited(g, 501);
    Signal acc(g);
    for (long long n = -band; n < band; ++n) {
        Signal piece = project(f, FreqInterval::of(double(n), double(n + 1), g.length));
        for (int x = 0; x < g.n; ++x) acc[x] += piece[x];
    }
    double dl = 0.0;
    for (int x = 0; x < g.n; ++x) dl = std::max(dl, std::abs(acc[x] - f[x]));
    bool ok = dl <= 1e-10 * lp_norm(f, 2.0);

    Grid gs(256, 16);
    Signal a = random_band_limited(gs, 502), b = random_band_limited(gs, 503);
    Signal prod = pointwise(a, b);
    StripFamily cover(-8LL * 16, 16, 0, 0, 15, 16);  // gap-free over [-8, 8)
    auto pieces = strip_apply(a, b, cover);
    Signal sum(gs);
    for (const Signal& piece : pieces)
        for (int x = 0; x < gs.n; ++x) sum[x] += piece[x];
    double db = 0.0;
    for (int x = 0; x < gs.n; ++x) db = std::max(db, std::abs(sum[x] - prod[x]));
    ok = ok && db <= 1e-10 * lp_norm(prod, 2.0);

    StripFamily ladder(-16LL * 64, 16, 0, 0, 127, 16);
    ParallelogramFamily fam(2, 1, 1, 3, ladder, ladder);
    auto cells = parallelogram_apply(a, b, fam);
    Spectrum cell_sum(gs);
    for (auto& [key, spec] : cells)
        for (int i = 0; i < gs.n; ++i) cell_sum.coeff[size_t(i)] += spec.coeff[size_t(i)];
    Spectrum prod_spec = forward(prod);
    double dp = 0.0;
    for (int i = 0; i < gs.n; ++i)
        dp = std::max(dp, std::abs(cell_sum.coeff[size_t(i)] - prod_spec.coeff[size_t(i)]));
    ok = ok && dp <= 1e-10 * l2_norm(prod_spec);

    line(5, "partition reconstruction (linear, strips, cells)", ok,
         fmt(dl) + " / " + fmt(db) + " / " + fmt(dp));
}

// 6: the banded fast path agrees with the double-sum oracle and beats it
void criterion_oracle_fast() {
    Grid g(512, 16);
    StripFamily strips(0, 16, 0, 0, 15, 16);
    double dev = 0.0;
    for (int t = 0; t < 10; ++t) {
        Signal a = random_band_limited(g, 600 + 2 * std::uint64_t(t));
        Signal b = random_band_limited(g, 601 + 2 * std::uint64_t(t));
        auto fast = strip_apply(a, b, strips, BilinearMode::Fast);
        auto slow = strip_apply(a, b, strips, BilinearMode::Oracle);
        double scale = 0.0;
        for (const Signal& piece : slow)
            for (int x = 0; x < g.n; ++x) scale = std::max(scale, std::abs(piece[x]));
        for (size_t n = 0; n < slow.size(); ++n)
            for (int x = 0; x < g.n; ++x)
                dev = std::max(dev, std::abs(fast[n][x] - slow[n][x]) / scale);
    }

    Grid gb(4096, 16);
    Signal a = random_band_limited(gb, 620), b = random_band_limited(gb, 621);
    auto t0 = clock_type::now();
    auto fast = strip_apply(a, b, strips, BilinearMode::Fast);
    double t_fast = seconds_since(t0);
    t0 = clock_type::now();
    auto slow = strip_apply(a, b, strips, BilinearMode::Oracle);
    double t_slow = seconds_since(t0);
    double speedup = t_slow / std::max(t_fast, 1e-9);
    (void)fast;
    (void)slow;
    line(6, "oracle/fast equivalence and speedup", dev <= 1e-8 && speedup >= 5.0,
         "max rel dev " + fmt(dev) + ", speedup " + fmt(speedup) + "x");
}

// 7: calibrated one-input square function plus the indicator growth fit
void criterion_linear_baseline() {
    ExperimentConfig cfg;
    cfg.kind = "boundedness";
    cfg.mode = "linear";
    cfg.n = 1024;
    cfg.trials = 50;
    cfg.seed = 700;
    ExperimentReport rep = run_boundedness(cfg);
    line(7, "one-input square calibration and growth", rep.pass(),
         "max ratio " + fmt(rep.metric("max_ratio")) + " <= 10, growth slope " +
             fmt(rep.metric("indicator_growth_slope")) + " vs 1/6");
}

// 8-12 all live on the audited tile collection
void criteria_tiles() {
    ExperimentConfig cfg;
    cfg.kind = "tile-audit";
    cfg.n = 512;
    cfg.length = 8;
    cfg.trials = 20;
    cfg.seed = 800;
    ExperimentReport rep = run_tile_audit(cfg);
    auto verdict = [&](const std::string& name) {
        for (const auto& [k, v] : rep.verdicts)
            if (k == name) return v;
        return false;
    };
    line(8, "tree estimate ratio at most one",
         verdict("tree_estimate") && rep.metric("tree_draws") >= 100.0,
         fmt(rep.metric("tree_draws")) + " draws, max ratio " +
             fmt(rep.metric("max_tree_ratio")));
    line(9, "decomposition postconditions and level iteration",
         verdict("decompose_postconditions") && verdict("abstract_bound"),
         "mass constants " + fmt(rep.metric("decompose_mass_constant")) + " / " +
             fmt(rep.metric("abstract_mass_constant")));
    line(10, "energy constants stable, greedy within factor 4",
         verdict("energy_constant_stable") && verdict("energy_greedy_vs_exhaustive"),
         "max/median " +
             fmt(rep.metric("energy_constant_max") / rep.metric("energy_constant_median")) +
             " <= 10");
    line(11, "packet superposition orthogonality", verdict("orthogonality"),
         "constant " + fmt(rep.metric("orthogonality_constant")) + " <= 8");
    line(12, "wave packet contract",
         verdict("wave_packets") && verdict("collection_audit"),
         "envelope " + fmt(rep.metric("envelope_constant")) + " <= 64");
}

}  // namespace

int main() {
    criterion_triangle();
    criterion_modulation();
    criterion_scaling();
    criterion_plancherel();
    criterion_reconstruction();
    criterion_oracle_fast();
    criterion_linear_baseline();
    criteria_tiles();
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures ? 1 : 0;
}
