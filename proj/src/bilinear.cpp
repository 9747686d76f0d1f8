#include "sqlab/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sqlab {

namespace {

long long floordiv(long long a, long long b) {
    long long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

struct Band {
    long long lo, hi;  // inclusive mode range, empty if lo > hi
    bool empty() const { return lo > hi; }
};

Band support_band(const Spectrum& c) {
    long long lo, hi;
    if (!c.support(lo, hi)) return {1, 0};
    return {lo, hi};
}

// aliasing contract: every attainable sum frequency must be representable
void check_product_band(const Grid& g, const Band& f, const Band& gee) {
    if (f.empty() || gee.empty()) return;
    if (f.hi + gee.hi >= g.mode_max() || f.lo + gee.lo < g.mode_min())
        throw std::domain_error(
            "bilinear product band exceeds Nyquist; band-limit the inputs before projecting");
}

void require_same_grid(const Grid& a, const Grid& b) {
    if (a != b) throw std::invalid_argument("bilinear op: grid mismatch");
}

}  // namespace

Spectrum bilinear_project(const Spectrum& F, const Spectrum& G, const FreqInterval& I,
                          BilinearMode mode) {
    require_same_grid(F.grid, G.grid);
    if (I.lattice != F.grid.length)
        throw std::invalid_argument("bilinear_project: interval lattice does not match the grid");
    const Grid& g = F.grid;
    Band bf = support_band(F), bg = support_band(G);
    Spectrum out(g);
    if (bf.empty() || bg.empty() || I.empty()) return out;
    check_product_band(g, bf, bg);

    if (mode == BilinearMode::Oracle) {
        // direct double sum straight from the definition
        for (long long m1 = g.mode_min(); m1 < g.mode_max(); ++m1) {
            cplx a = F.at_mode(m1);
            if (a == cplx(0.0, 0.0)) continue;
            for (long long m2 = g.mode_min(); m2 < g.mode_max(); ++m2) {
                if (!I.contains_mode(m2 - m1)) continue;
                long long k = m1 + m2;
                if (k < g.mode_min() || k >= g.mode_max()) continue;  // unreachable post check
                out.at_mode(k) += a * G.at_mode(m2);
            }
        }
        return out;
    }

    // fast: for fixed output k the constraint k - 2*m1 in [lo, hi) is a
    // contiguous m1 window; walk it in ascending order
    long long klo = std::max<long long>(bf.lo + bg.lo, g.mode_min());
    long long khi = std::min<long long>(bf.hi + bg.hi, g.mode_max() - 1);
    for (long long k = klo; k <= khi; ++k) {
        long long m1_lo = floordiv(k - I.hi_units, 2) + 1;
        long long m1_hi = floordiv(k - I.lo_units, 2);
        m1_lo = std::max({m1_lo, bf.lo, k - bg.hi});
        m1_hi = std::min({m1_hi, bf.hi, k - bg.lo});
        cplx acc(0.0, 0.0);
        for (long long m1 = m1_lo; m1 <= m1_hi; ++m1) acc += F.at_mode(m1) * G.at_mode(k - m1);
        if (acc != cplx(0.0, 0.0)) out.at_mode(k) = acc;
    }
    return out;
}

Signal bilinear_project(const Signal& f, const Signal& g, const FreqInterval& I,
                        BilinearMode mode) {
    return inverse(bilinear_project(forward(f), forward(g), I, mode));
}

StripFamily::StripFamily(long long a0, long long width, long long gap, int nmin, int nmax, int L)
    : a0_units(a0), width_units(width), gap_units(gap), n_min(nmin), n_max(nmax), lattice(L) {
    if (L < 1) throw std::invalid_argument("StripFamily: bad lattice");
    if (width < 1) throw std::invalid_argument("StripFamily: width must be >= one lattice step");
    if (gap < 0) throw std::invalid_argument("StripFamily: negative gap");
    if (nmax < nmin) throw std::invalid_argument("StripFamily: empty index range");
}

StripFamily StripFamily::unit(int n_min, int n_max, int L) {
    return StripFamily(0, L, 0, n_min, n_max, L);
}

FreqInterval StripFamily::interval(int n) const {
    if (n < n_min || n > n_max) throw std::out_of_range("StripFamily: index outside range");
    long long a = a0_units + (long long)n * period_units();
    return FreqInterval(a, a + width_units, lattice);
}

std::vector<Signal> strip_apply(const Signal& f, const Signal& g, const StripFamily& strips,
                                BilinearMode mode) {
    require_same_grid(f.grid, g.grid);
    Spectrum F = forward(f), G = forward(g);
    std::vector<Signal> out;
    out.reserve(strips.count());
    for (int n = strips.n_min; n <= strips.n_max; ++n)
        out.push_back(inverse(bilinear_project(F, G, strips.interval(n), mode)));
    return out;
}

namespace {

Signal square_of(const std::vector<Signal>& pieces, const Grid& g) {
    std::vector<double> acc(g.n, 0.0);
    for (const auto& p : pieces)
        for (int j = 0; j < g.n; ++j) acc[j] += std::norm(p.values[j]);
    Signal out(g);
    for (int j = 0; j < g.n; ++j) out.values[j] = std::sqrt(acc[j]);
    return out;
}

}  // namespace

Signal bilinear_square(const Signal& f, const Signal& g, const StripFamily& strips,
                       BilinearMode mode) {
    return square_of(strip_apply(f, g, strips, mode), f.grid);
}

Signal bilinear_square_seq(const std::vector<Signal>& fs, const Signal& g,
                           const StripFamily& strips, BilinearMode mode) {
    if ((int)fs.size() != strips.count())
        throw std::invalid_argument("bilinear_square_seq: one input per strip required");
    Spectrum G = forward(g);
    std::vector<Signal> pieces;
    pieces.reserve(fs.size());
    for (int n = strips.n_min; n <= strips.n_max; ++n) {
        require_same_grid(fs[n - strips.n_min].grid, g.grid);
        pieces.push_back(
            inverse(bilinear_project(forward(fs[n - strips.n_min]), G, strips.interval(n), mode)));
    }
    return square_of(pieces, g.grid);
}

Signal smooth_bilinear_piece(const Signal& f, const Signal& g, const SmoothBump& b, double shift,
                             int dyadic_scale, bool dilation) {
    require_same_grid(f.grid, g.grid);
    const Grid& gr = f.grid;
    Spectrum F = forward(f), G = forward(g);
    Band bf = support_band(F), bg = support_band(G);
    Spectrum out(gr);
    if (bf.empty() || bg.empty()) return inverse(out);
    check_product_band(gr, bf, bg);
    for (long long m1 = bf.lo; m1 <= bf.hi; ++m1) {
        cplx a = F.at_mode(m1);
        if (a == cplx(0.0, 0.0)) continue;
        for (long long m2 = bg.lo; m2 <= bg.hi; ++m2) {
            double u = gr.frequency(m2 - m1);
            double w = dilation ? b.symbol(std::ldexp(u, dyadic_scale)) : b.symbol(u - shift);
            if (w == 0.0) continue;
            out.at_mode(m1 + m2) += a * G.at_mode(m2) * w;
        }
    }
    return inverse(out);
}

namespace {

template <typename PieceFits, typename MakePiece>
SmoothBilinearResult smooth_bilinear_driver(const Grid& g, long long n_lo, long long n_hi,
                                            PieceFits&& fits, MakePiece&& make) {
    std::vector<Signal> pieces;
    SmoothBilinearResult res{Signal(g), {}};
    for (long long n = n_lo; n <= n_hi; ++n) {
        if (!fits(n)) {
            res.skipped.push_back(n);
            continue;
        }
        pieces.push_back(make(n));
    }
    res.square = square_of(pieces, g);
    return res;
}

}  // namespace

SmoothBilinearResult smooth_bilinear_square_modulation(const Signal& f, const Signal& g,
                                                       const SmoothBump& b, long long n_lo,
                                                       long long n_hi) {
    // the difference frequency of band-limited inputs spans at most (-N/2, N/2)/L
    const double band = double(f.grid.n) / (2.0 * f.grid.length);
    return smooth_bilinear_driver(
        f.grid, n_lo, n_hi,
        [&](long long n) {
            SmoothBump s = b;
            s.center += double(n);
            return s.compactly_inside(band) || s.leak_fraction(band) <= 1e-10;
        },
        [&](long long n) { return smooth_bilinear_piece(f, g, b, double(n), 0, false); });
}

SmoothBilinearResult smooth_bilinear_square_dilation(const Signal& f, const Signal& g,
                                                     const SmoothBump& b, int n_lo, int n_hi) {
    if (!b.vanishing_moment)
        throw std::invalid_argument("smooth_bilinear_square_dilation: vanishing moment required");
    const double band = double(f.grid.n) / (2.0 * f.grid.length);
    return smooth_bilinear_driver(
        f.grid, n_lo, n_hi,
        [&](long long n) {
            double eff = band * std::ldexp(1.0, int(n));
            return b.compactly_inside(eff) || b.leak_fraction(eff) <= 1e-10;
        },
        [&](long long n) { return smooth_bilinear_piece(f, g, b, 0.0, int(n), true); });
}

ParallelogramFamily::ParallelogramFamily(long long t1n, long long t1d, long long t2n, long long t2d,
                                         StripFamily l1, StripFamily l2)
    : t1_num(t1n), t1_den(t1d), t2_num(t2n), t2_den(t2d), ladder1(std::move(l1)),
      ladder2(std::move(l2)) {
    if (t1_den <= 0 || t2_den <= 0) throw std::invalid_argument("parallelogram: denominator <= 0");
    if (t1_num == 0 || t2_num == 0)
        throw std::invalid_argument("parallelogram: theta = 0 is excluded");
    if (t1_num == -t1_den || t2_num == -t2_den)
        throw std::invalid_argument("parallelogram: theta = -pi/4 is excluded");
    if (t1_num * t2_den == t2_num * t1_den)
        throw std::invalid_argument("parallelogram: directions must differ");
    if (ladder1.lattice != ladder2.lattice)
        throw std::invalid_argument("parallelogram: ladder lattice mismatch");
}

namespace {

// ladder membership of the scaled coordinate V = (m2*den - num*m1), exact.
// V/(L*den) = xi2 - t*xi1. Returns true with the strip index when inside.
bool ladder_hit(const StripFamily& ladder, long long V, long long den, int& index) {
    long long A = ladder.a0_units * den;
    long long period = ladder.period_units() * den;
    long long width = ladder.width_units * den;
    long long q = floordiv(V - A, period);
    long long r = V - A - q * period;
    if (r >= width) return false;
    if (q < ladder.n_min || q > ladder.n_max) return false;
    index = (int)q;
    return true;
}

}  // namespace

std::map<std::pair<int, int>, Spectrum> parallelogram_apply(const Signal& f, const Signal& g,
                                                            const ParallelogramFamily& fam) {
    require_same_grid(f.grid, g.grid);
    const Grid& gr = f.grid;
    if (fam.ladder1.lattice != gr.length)
        throw std::invalid_argument("parallelogram_apply: lattice does not match the grid");
    Spectrum F = forward(f), G = forward(g);
    Band bf = support_band(F), bg = support_band(G);
    std::map<std::pair<int, int>, Spectrum> cells;
    if (bf.empty() || bg.empty()) return cells;
    check_product_band(gr, bf, bg);
    for (long long m1 = bf.lo; m1 <= bf.hi; ++m1) {
        cplx a = F.at_mode(m1);
        if (a == cplx(0.0, 0.0)) continue;
        for (long long m2 = bg.lo; m2 <= bg.hi; ++m2) {
            cplx bb = G.at_mode(m2);
            if (bb == cplx(0.0, 0.0)) continue;
            int n, p;
            if (!ladder_hit(fam.ladder1, m2 * fam.t1_den - fam.t1_num * m1, fam.t1_den, n)) continue;
            if (!ladder_hit(fam.ladder2, m2 * fam.t2_den - fam.t2_num * m1, fam.t2_den, p)) continue;
            auto it = cells.find({n, p});
            if (it == cells.end()) it = cells.emplace(std::make_pair(n, p), Spectrum(gr)).first;
            it->second.at_mode(m1 + m2) += a * bb;
        }
    }
    return cells;
}

Signal parallelogram_square(const Signal& f, const Signal& g, const ParallelogramFamily& fam) {
    auto cells = parallelogram_apply(f, g, fam);
    std::vector<double> acc(f.grid.n, 0.0);
    for (const auto& [key, spec] : cells) {
        Signal piece = inverse(spec);
        for (int j = 0; j < f.grid.n; ++j) acc[j] += std::norm(piece.values[j]);
    }
    Signal out(f.grid);
    for (int j = 0; j < f.grid.n; ++j) out.values[j] = std::sqrt(acc[j]);
    return out;
}

}  // namespace sqlab
