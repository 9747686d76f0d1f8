#pragma once
#include <vector>

#include "sqlab/signal.hpp"

namespace sqlab {

// Smooth frequency profile for the convolution-kernel square functions.
// Defined by its continuum Fourier transform ("symbol"); unit L2 mass
// (integral of |profile|^2 is 1) is fixed at construction.
struct SmoothBump {
    enum class Kind { GaussianWindowed, CosineCompact };
    Kind kind = Kind::CosineCompact;
    double center = 1.0;     // symbol center
    double halfwidth = 0.5;  // symbol half-width (scale of decay for the gaussian)
    bool vanishing_moment = false;
    double scale = 1.0;  // normalization, set by make_*

    static SmoothBump gaussian(double center, double halfwidth, bool vanishing_moment);
    static SmoothBump cosine(double center, double halfwidth);  // compact support

    // symbol value at frequency xi (real-valued)
    double symbol(double xi) const;
    // fraction of the symbol's L2 mass outside |xi| <= band
    double leak_fraction(double band) const;
    // true if the symbol is exactly zero outside |xi| <= band
    bool compactly_inside(double band) const;
};

// Finite family of half-open lattice intervals with its covering constant
// kappa = max number of members covering any single frequency.
struct IntervalFamily {
    std::vector<FreqInterval> intervals;

    explicit IntervalFamily(std::vector<FreqInterval> iv);
    int covering_constant() const;  // kappa, exact sweep over endpoints
    bool pairwise_disjoint() const { return covering_constant() <= 1; }
};

// sharp frequency cutoff; bit-exact idempotent on spectra
Spectrum project(const Spectrum& c, const FreqInterval& I);
Signal project(const Signal& f, const FreqInterval& I);

// (sum_n |pi_{[n,n+1)} f|^2)^{1/2} over integer n in [n_from, n_to)
Signal linear_square_unit(const Signal& f, long long n_from, long long n_to);

// (sum_I |pi_I f|^2)^{1/2} over an arbitrary interval family
Signal linear_square(const Signal& f, const IntervalFamily& fam);

// Convolution-kernel square functions. Pieces are Fourier multipliers:
//   dilation:   symbol_n(xi) = symbol(2^n xi), n in [n_lo, n_hi]
//   modulation: symbol_n(xi) = symbol(xi - n), n in [n_lo, n_hi]
// Scales/modulations whose symbol does not fit under the grid's Nyquist
// frequency (leak fraction > 1e-10) are skipped and reported.
struct SmoothSquareResult {
    Signal square;
    std::vector<long long> skipped;  // indices n that were dropped
};
// requires the vanishing-moment flag: the dilation family only sums to a
// bounded symbol when the profile vanishes at the origin
SmoothSquareResult linear_square_dilation(const Signal& f, const SmoothBump& b, int n_lo, int n_hi);
SmoothSquareResult linear_square_modulation(const Signal& f, const SmoothBump& b, long long n_lo,
                                            long long n_hi);

}  // namespace sqlab
