#include "sqlab/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sqlab {

namespace {

double raw_symbol(SmoothBump::Kind kind, double center, double halfwidth, bool vm, double xi) {
    if (kind == SmoothBump::Kind::CosineCompact) {
        double t = std::fabs(xi - center);
        if (t >= halfwidth) return 0.0;
        double c = std::cos(0.5 * std::numbers::pi * t / halfwidth);
        return c * c;
    }
    // gaussian window around the center; the vanishing-moment variant carries a
    // linear factor so the symbol is exactly zero at xi = 0
    double t = (xi - center) / halfwidth;
    double g = std::exp(-0.5 * t * t);
    return vm ? xi * g : g;
}

// plain trapezoid quadrature of |symbol|^2 over [a, b]
double l2_mass(const SmoothBump& b, double a, double lim, int steps = 20000) {
    double h = (lim - a) / steps, acc = 0.0;
    for (int i = 0; i <= steps; ++i) {
        double xi = a + i * h;
        double v = raw_symbol(b.kind, b.center, b.halfwidth, b.vanishing_moment, xi);
        acc += (i == 0 || i == steps ? 0.5 : 1.0) * v * v;
    }
    return acc * h;
}

}  // namespace

SmoothBump SmoothBump::gaussian(double center, double halfwidth, bool vanishing_moment) {
    if (halfwidth <= 0.0) throw std::invalid_argument("SmoothBump: halfwidth must be positive");
    SmoothBump b;
    b.kind = Kind::GaussianWindowed;
    b.center = center;
    b.halfwidth = halfwidth;
    b.vanishing_moment = vanishing_moment;
    double span = std::fabs(center) + 14.0 * halfwidth;
    double mass = l2_mass(b, -span, span);
    b.scale = 1.0 / std::sqrt(mass);
    return b;
}

SmoothBump SmoothBump::cosine(double center, double halfwidth) {
    if (halfwidth <= 0.0) throw std::invalid_argument("SmoothBump: halfwidth must be positive");
    SmoothBump b;
    b.kind = Kind::CosineCompact;
    b.center = center;
    b.halfwidth = halfwidth;
    // compact support: the symbol vanishes at 0 iff 0 is outside the support
    b.vanishing_moment = (center - halfwidth > 0.0) || (center + halfwidth < 0.0);
    double mass = l2_mass(b, center - halfwidth, center + halfwidth);
    b.scale = 1.0 / std::sqrt(mass);
    return b;
}

double SmoothBump::symbol(double xi) const {
    return scale * raw_symbol(kind, center, halfwidth, vanishing_moment, xi);
}

bool SmoothBump::compactly_inside(double band) const {
    if (kind != Kind::CosineCompact) return false;
    return center - halfwidth >= -band && center + halfwidth <= band;
}

double SmoothBump::leak_fraction(double band) const {
    if (compactly_inside(band)) return 0.0;
    if (kind == Kind::CosineCompact) {
        double total = l2_mass(*this, center - halfwidth, center + halfwidth);
        double inside = l2_mass(*this, std::max(center - halfwidth, -band),
                                std::min(center + halfwidth, band));
        if (inside < 0.0) inside = 0.0;
        return 1.0 - inside / total;
    }
    double span = std::fabs(center) + 14.0 * halfwidth;
    span = std::max(span, band * (1.0 + 1e-12));
    double total = l2_mass(*this, -span, span);
    double inside = l2_mass(*this, std::max(-span, -band), std::min(span, band));
    return std::max(0.0, 1.0 - inside / total);
}

IntervalFamily::IntervalFamily(std::vector<FreqInterval> iv) : intervals(std::move(iv)) {
    if (intervals.empty()) throw std::invalid_argument("IntervalFamily: empty");
    for (const auto& I : intervals)
        if (I.lattice != intervals[0].lattice)
            throw std::invalid_argument("IntervalFamily: mixed lattices");
}

int IntervalFamily::covering_constant() const {
    // sweep over interval endpoints; +1 at lo, -1 at hi
    std::vector<std::pair<long long, int>> ev;
    for (const auto& I : intervals) {
        if (I.empty()) continue;
        ev.push_back({I.lo_units, +1});
        ev.push_back({I.hi_units, -1});
    }
    std::sort(ev.begin(), ev.end());
    int cur = 0, best = 0;
    for (auto& [u, d] : ev) {
        cur += d;
        best = std::max(best, cur);
    }
    return best;
}

Spectrum project(const Spectrum& c, const FreqInterval& I) {
    if (I.lattice != c.grid.length)
        throw std::invalid_argument("project: interval lattice does not match the grid");
    Spectrum out(c.grid);
    for (int i = 0; i < c.grid.n; ++i)
        if (I.contains_mode(c.grid.index_to_mode(i))) out.coeff[i] = c.coeff[i];
    return out;
}

Signal project(const Signal& f, const FreqInterval& I) { return inverse(project(forward(f), I)); }

namespace {

void accumulate_square(std::vector<double>& acc, const Signal& piece) {
    for (size_t j = 0; j < acc.size(); ++j) acc[j] += std::norm(piece.values[j]);
}

Signal finish_square(const Grid& g, const std::vector<double>& acc) {
    Signal out(g);
    for (int j = 0; j < g.n; ++j) out.values[j] = std::sqrt(acc[j]);
    return out;
}

}  // namespace

Signal linear_square_unit(const Signal& f, long long n_from, long long n_to) {
    if (n_to < n_from) throw std::invalid_argument("linear_square_unit: bad range");
    Spectrum c = forward(f);
    const int L = f.grid.length;
    std::vector<double> acc(f.grid.n, 0.0);
    for (long long n = n_from; n < n_to; ++n) {
        FreqInterval I(n * L, (n + 1) * L, L);
        if (I.hi_units <= f.grid.mode_min() || I.lo_units >= f.grid.mode_max()) continue;
        accumulate_square(acc, inverse(project(c, I)));
    }
    return finish_square(f.grid, acc);
}

Signal linear_square(const Signal& f, const IntervalFamily& fam) {
    Spectrum c = forward(f);
    std::vector<double> acc(f.grid.n, 0.0);
    for (const auto& I : fam.intervals) accumulate_square(acc, inverse(project(c, I)));
    return finish_square(f.grid, acc);
}

namespace {

// shared driver: pieces are multipliers symbol_n(m/L); skip out-of-band symbols
template <typename SymbolAt>
SmoothSquareResult smooth_square(const Signal& f, long long n_lo, long long n_hi, SymbolAt&& sym,
                                 auto&& fits) {
    Spectrum c = forward(f);
    const Grid& g = f.grid;
    std::vector<double> acc(g.n, 0.0);
    SmoothSquareResult res{Signal(g), {}};
    for (long long n = n_lo; n <= n_hi; ++n) {
        if (!fits(n)) {
            res.skipped.push_back(n);
            continue;
        }
        Spectrum piece(g);
        for (int i = 0; i < g.n; ++i)
            piece.coeff[i] = c.coeff[i] * sym(n, g.frequency(g.index_to_mode(i)));
        accumulate_square(acc, inverse(piece));
    }
    res.square = finish_square(g, acc);
    return res;
}

}  // namespace

SmoothSquareResult linear_square_dilation(const Signal& f, const SmoothBump& b, int n_lo, int n_hi) {
    if (!b.vanishing_moment)
        throw std::invalid_argument("linear_square_dilation: bump must carry a vanishing moment");
    const double nyq = double(f.grid.n) / (2.0 * f.grid.length);
    return smooth_square(
        f, n_lo, n_hi, [&](long long n, double xi) { return b.symbol(std::ldexp(xi, int(n))); },
        [&](long long n) {
            // symbol(2^n xi): support shrinks by 2^-n in xi
            double band = nyq * std::ldexp(1.0, int(n));
            return b.compactly_inside(band) || b.leak_fraction(band) <= 1e-10;
        });
}

SmoothSquareResult linear_square_modulation(const Signal& f, const SmoothBump& b, long long n_lo,
                                            long long n_hi) {
    const double nyq = double(f.grid.n) / (2.0 * f.grid.length);
    return smooth_square(
        f, n_lo, n_hi, [&](long long n, double xi) { return b.symbol(xi - double(n)); },
        [&](long long n) {
            SmoothBump shifted = b;
            shifted.center += double(n);
            return shifted.compactly_inside(nyq) || shifted.leak_fraction(nyq) <= 1e-10;
        });
}

}  // namespace sqlab
