#pragma once
#include <map>
#include <vector>

#include "sqlab/linear.hpp"
#include "sqlab/signal.hpp"

namespace sqlab {

// Frequency-restricted bilinear multiplier on the torus:
//   out(k) = sum_{m1+m2=k, (m2-m1)/L in I} F(m1) G(m2)
// Coefficient weight is 1, so an interval covering every attainable difference
// reproduces the pointwise product f*g exactly. For unit-coefficient indicator
// data the continuum-density reading of the output is coefficient/L; that is
// what keeps the triangular-profile height at 1/2 independently of the grid.
//
// Oracle mode is the direct O(N^2) double sum. Fast mode walks, for each output
// frequency k, the contiguous window of m1 allowed by the strip constraint.
// Both refuse to run when the product band would cross the Nyquist range
// (aliasing is an error, never a silent wraparound).
enum class BilinearMode { Oracle, Fast };

Spectrum bilinear_project(const Spectrum& F, const Spectrum& G, const FreqInterval& I,
                          BilinearMode mode = BilinearMode::Fast);
Signal bilinear_project(const Signal& f, const Signal& g, const FreqInterval& I,
                        BilinearMode mode = BilinearMode::Fast);

// Equispaced half-open strips [a_n, b_n), a_n = a0 + n*(width+gap), all on the
// 1/L lattice. width = L1, gap = L2', period = L2 = L1 + L2'.
struct StripFamily {
    long long a0_units = 0;
    long long width_units = 0;
    long long gap_units = 0;
    int n_min = 0, n_max = 0;  // inclusive index range
    int lattice = 1;

    StripFamily(long long a0, long long width, long long gap, int nmin, int nmax, int L);
    static StripFamily unit(int n_min, int n_max, int L);  // [n, n+1), gap 0

    long long period_units() const { return width_units + gap_units; }
    int count() const { return n_max - n_min + 1; }
    FreqInterval interval(int n) const;
    double width() const { return double(width_units) / lattice; }
    double period() const { return double(period_units()) / lattice; }
};

// element n is bilinear_project(f, g, [a_n, b_n))
std::vector<Signal> strip_apply(const Signal& f, const Signal& g, const StripFamily& strips,
                                BilinearMode mode = BilinearMode::Fast);

// (sum_n |pi_{[a_n,b_n)}(f,g)|^2)^{1/2}
Signal bilinear_square(const Signal& f, const Signal& g, const StripFamily& strips,
                       BilinearMode mode = BilinearMode::Fast);

// sequence-valued variant: piece n is pi_{[a_n,b_n)}(f_n, g), one f per strip
Signal bilinear_square_seq(const std::vector<Signal>& fs, const Signal& g,
                           const StripFamily& strips, BilinearMode mode = BilinearMode::Fast);

// Smooth bilinear square functions. Piece n applies the difference-frequency
// symbol w_n(xi2 - xi1) with
//   modulation: w_n(u) = symbol(u - n)
//   dilation:   w_n(u) = symbol(2^n u)
// Out-of-band pieces are skipped and reported, as in the linear module.
struct SmoothBilinearResult {
    Signal square;
    std::vector<long long> skipped;
};
SmoothBilinearResult smooth_bilinear_square_modulation(const Signal& f, const Signal& g,
                                                       const SmoothBump& b, long long n_lo,
                                                       long long n_hi);
SmoothBilinearResult smooth_bilinear_square_dilation(const Signal& f, const Signal& g,
                                                     const SmoothBump& b, int n_lo, int n_hi);

// single smooth piece, frequency-side evaluation
Signal smooth_bilinear_piece(const Signal& f, const Signal& g, const SmoothBump& b,
                             double shift, int dyadic_scale, bool dilation);

// Two-parameter family of parallelogram cells
//   C_{n,p} = {a_n <= xi2 - t1*xi1 < b_n} ∩ {c_p <= xi2 - t2*xi1 < d_p}
// with t_i = tan(theta_i) supplied as exact rationals; membership decisions are
// integer arithmetic, never floating point. theta in (-pi/2, pi/2) \ {0, -pi/4}
// and theta1 != theta2, i.e. t_i not in {0, -1} and t1 != t2.
struct ParallelogramFamily {
    long long t1_num, t1_den;  // tan(theta1)
    long long t2_num, t2_den;  // tan(theta2)
    StripFamily ladder1;       // strips in v1 = xi2 - t1*xi1
    StripFamily ladder2;       // strips in v2 = xi2 - t2*xi1

    ParallelogramFamily(long long t1n, long long t1d, long long t2n, long long t2d,
                        StripFamily l1, StripFamily l2);
};

// every nonzero cell projection, keyed by (ladder1 index, ladder2 index)
std::map<std::pair<int, int>, Spectrum> parallelogram_apply(const Signal& f, const Signal& g,
                                                            const ParallelogramFamily& fam);
Signal parallelogram_square(const Signal& f, const Signal& g, const ParallelogramFamily& fam);

}  // namespace sqlab
