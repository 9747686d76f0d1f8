#pragma once
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sqlab {

// Discrete periodic torus: n equispaced samples x_j = j*length/n on [0, length),
// frequency lattice xi_m = m/length for integer modes m in [-n/2, n/2).
struct Grid {
    int n = 0;       // sample count, positive and even
    int length = 0;  // integer period L >= 1

    Grid() = default;
    Grid(int n_, int length_) : n(n_), length(length_) {
        if (n <= 0 || n % 2 != 0) throw std::invalid_argument("Grid: n must be positive and even");
        if (length < 1) throw std::invalid_argument("Grid: length must be a positive integer");
    }

    double spacing() const { return double(length) / double(n); }
    double sample(int j) const { return double(j) * double(length) / double(n); }

    // modes run over [-n/2, n/2); index i <-> mode m = i - n/2
    int mode_min() const { return -n / 2; }
    int mode_max() const { return n / 2; }  // exclusive
    int mode_to_index(long long m) const {
        if (m < mode_min() || m >= mode_max()) throw std::out_of_range("Grid: mode outside lattice");
        return int(m + n / 2);
    }
    long long index_to_mode(int i) const { return (long long)i - n / 2; }
    double frequency(long long m) const { return double(m) / double(length); }

    bool operator==(const Grid& o) const { return n == o.n && length == o.length; }
    bool operator!=(const Grid& o) const { return !(*this == o); }

    // torus distance between two points of [0, length)
    double dist(double a, double b) const {
        double d = std::fabs(a - b);
        d = std::fmod(d, double(length));
        return std::min(d, double(length) - d);
    }
};

// Half-open frequency interval [lo, hi) with endpoints on the 1/L lattice.
// Stored as integer multiples of 1/L so membership tests are exact.
struct FreqInterval {
    long long lo_units = 0;  // lo = lo_units / L
    long long hi_units = 0;  // hi = hi_units / L
    int lattice = 1;         // L

    FreqInterval() = default;
    FreqInterval(long long lo_u, long long hi_u, int L) : lo_units(lo_u), hi_units(hi_u), lattice(L) {
        if (L < 1) throw std::invalid_argument("FreqInterval: lattice must be positive");
        if (hi_u < lo_u) throw std::invalid_argument("FreqInterval: hi < lo");
    }

    // Construct from real endpoints; rejects endpoints off the lattice.
    static FreqInterval of(double lo, double hi, int L) {
        double lu = lo * L, hu = hi * L;
        long long li = (long long)std::llround(lu), hi_i = (long long)std::llround(hu);
        if (std::fabs(lu - double(li)) > 1e-9 || std::fabs(hu - double(hi_i)) > 1e-9)
            throw std::invalid_argument("FreqInterval: endpoint not on the 1/L lattice");
        return FreqInterval(li, hi_i, L);
    }

    double lo() const { return double(lo_units) / lattice; }
    double hi() const { return double(hi_units) / lattice; }
    double width() const { return double(hi_units - lo_units) / lattice; }
    long long width_units() const { return hi_units - lo_units; }
    bool empty() const { return hi_units <= lo_units; }

    // membership of a lattice mode m (frequency m/L), half-open
    bool contains_mode(long long m) const { return m >= lo_units && m < hi_units; }
    bool contains(const FreqInterval& o) const {
        return o.lo_units >= lo_units && o.hi_units <= hi_units;
    }
    bool intersects(const FreqInterval& o) const {
        return lo_units < o.hi_units && o.lo_units < hi_units;
    }
    bool operator==(const FreqInterval& o) const {
        return lo_units == o.lo_units && hi_units == o.hi_units && lattice == o.lattice;
    }
};

}  // namespace sqlab
