#pragma once
#include <complex>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sqlab/grid.hpp"

namespace sqlab {

using cplx = std::complex<double>;

struct Spectrum;

// Sampled complex signal on a Grid.
struct Signal {
    Grid grid;
    std::vector<cplx> values;  // values[j] = f(x_j)

    Signal() = default;
    explicit Signal(const Grid& g) : grid(g), values(g.n, cplx(0.0, 0.0)) {}
    Signal(const Grid& g, std::vector<cplx> v);

    cplx& operator[](int j) { return values[j]; }
    const cplx& operator[](int j) const { return values[j]; }
};

// Fourier coefficients c_m for m in [-n/2, n/2), natural (ascending mode) order.
// Convention: c_m = (1/N) sum_j f(x_j) exp(-2 pi i m x_j / L),
//             f(x_j) = sum_m c_m exp(+2 pi i m x_j / L).
// A pure mode exp(2 pi i k x / L) has c_k = 1.
struct Spectrum {
    Grid grid;
    std::vector<cplx> coeff;  // coeff[i] = c_{i - n/2}

    Spectrum() = default;
    explicit Spectrum(const Grid& g) : grid(g), coeff(g.n, cplx(0.0, 0.0)) {}

    cplx& at_mode(long long m) { return coeff[grid.mode_to_index(m)]; }
    cplx at_mode(long long m) const { return coeff[grid.mode_to_index(m)]; }

    // smallest/largest nonzero mode (relative threshold); returns false if all zero
    bool support(long long& mlo, long long& mhi, double rel_tol = 1e-14) const;
};

Spectrum forward(const Signal& f);
Signal inverse(const Spectrum& c);

// ((L/N) sum_j |f_j|^p)^(1/p); p = infinity -> max |f_j|. Rejects p <= 0.
double lp_norm(const Signal& f, double p);

// L2(torus) inner product (L/N) sum_j f_j conj(g_j)
cplx inner(const Signal& f, const Signal& g);

// Parseval form: <f,g> = L * sum_m c_f(m) conj(c_g(m))
cplx inner(const Spectrum& f, const Spectrum& g);

double l2_norm(const Spectrum& c);

// circular translation by an integer number of lattice steps (exact reindexing)
Signal translate(const Signal& f, int steps);

// pointwise product
Signal pointwise(const Signal& f, const Signal& g);

// The section-2.4 example pair: f with unit coefficients on [0, 2P) (wide band),
// g with unit coefficients on [0, 1/2). Requires 2*P*L < N/2 and L even.
std::pair<Signal, Signal> dirichlet_pair(const Grid& g, int P);

// seeded complex Gaussian spectrum restricted to |m| < N/4 (half-Nyquist)
Signal random_band_limited(const Grid& g, std::uint64_t seed);

// JSON container: {"n":..,"length":..,"values":[re,im,re,im,...]}
std::string to_json(const Signal& f);
Signal signal_from_json(const std::string& text);

}  // namespace sqlab
