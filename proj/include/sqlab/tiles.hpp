#pragma once
#include <array>
#include <map>
#include <tuple>
#include <vector>

#include "sqlab/bilinear.hpp"
#include "sqlab/linear.hpp"
#include "sqlab/signal.hpp"

namespace sqlab {

// Time-frequency tile: dyadic spatial interval I = [pos*2^scale, (pos+1)*2^scale)
// on [0, L), frequency interval omega = [freq, freq + L/2^scale) in 1/L units.
// The area |I|*|omega| is exactly 1 by construction; anything else is rejected.
struct Tile {
    int lattice = 1;     // torus period L
    int scale = 0;       // log2 |I|
    long long pos = 0;   // spatial index, in [0, L/2^scale)
    long long freq = 0;  // lower endpoint of omega, units of 1/L

    Tile() = default;
    Tile(int L, int scale_, long long pos_, long long freq_);

    long long width_units() const { return (long long)lattice >> scale; }
    double ilen() const { return double(1LL << scale); }
    double x_lo() const { return double(pos) * ilen(); }
    double x_hi() const { return x_lo() + ilen(); }
    double x_center() const { return x_lo() + 0.5 * ilen(); }
    FreqInterval omega() const { return FreqInterval(freq, freq + width_units(), lattice); }
    // integer 3-dilate [freq - w, freq + 2w)
    FreqInterval omega3() const;
    double freq_center() const { return (double(freq) + 0.5 * double(width_units())) / lattice; }

    bool operator==(const Tile&) const = default;
    auto key() const { return std::tuple(scale, pos, freq); }
};

bool spatial_subset(const Tile& a, const Tile& b);  // I_a subset of I_b
// order on tiles: a <= b iff a == b, or I_a strictly inside I_b and 3*omega_b
// inside 3*omega_a
bool tile_le(const Tile& a, const Tile& b);
bool tile_lt(const Tile& a, const Tile& b);
// rectangles I x omega disjoint
bool tiles_disjoint(const Tile& a, const Tile& b);

// Tri-tile: one spatial interval, three frequency intervals of equal width,
// sitting in exactly one strip n (every difference xi2 - xi1 strictly inside
// [a_n, b_n)) with the sum range xi1 + xi2 + xi3 straddling zero.
struct TriTile {
    int lattice = 1;
    int scale = 0;
    long long pos = 0;
    std::array<long long, 3> freq{0, 0, 0};  // lower endpoints of omega_1..3
    int strip = 0;

    Tile coord(int j) const;  // j in {1,2,3}
    long long width_units() const { return (long long)lattice >> scale; }
    double ilen() const { return double(1LL << scale); }
    bool operator==(const TriTile&) const = default;
    auto key() const { return std::tuple(strip, scale, pos, freq[0], freq[1], freq[2]); }
};

// invariant checks computed exhaustively on a built collection
struct CollectionAudit {
    bool area_ok = false;             // every tile has area 1 (enforced, re-checked)
    int grid_overlap = 0;             // max same-scale overlap per coordinate, want <= 3
    double nesting_dilation = 1.0;    // smallest K making the nesting bullet hold
    bool rank_one = false;            // reference tiles pairwise disjoint per coordinate
    int rank_covering = 0;            // overlap constant of the 1e7-dilate bullet
    bool whitney_ok = false;          // strip distance within [w/4, 4w], sum straddles 0
    bool strips_ok = false;           // unique strip index per tri-tile
    bool translation_closed = false;  // full (i,j) orbit present for every member
    bool order_ok = false;            // partial-order axioms on the coordinate tiles
    bool pass() const;
};

// Finite collection of tri-tiles: a reference square of strip-0 tiles plus its
// closure under the frequency translations (i*T, j*T, -(i+j)*T) for
// i, j in [-extent, extent], T the strip period. Two spatial scales: members
// of length base and tree tops of length 2*base carrying both the inner
// (2- and 3-tree) and outer (1-tree) top frequencies.
struct Collection {
    Grid grid;
    StripFamily strips = StripFamily::unit(0, 0, 1);
    int depth = 2;   // 1 = members only, 2 = members plus tops
    int extent = 1;  // translation range
    int seeds = 2;   // distinct base frequencies for the members

    std::vector<TriTile> tiles;  // all of Q, canonical order
    std::vector<int> reference;  // indices of the reference square (strip 0)

    double whitney_lo = 0.25, whitney_hi = 4.0;  // declared distance constants

    // caches
    std::array<std::map<std::tuple<int, long long, long long>, std::vector<int>>, 3> by_coord;
    std::map<std::tuple<int, long long, long long, long long, long long>, std::vector<int>> orbits;
    std::map<std::tuple<int, int, long long, long long, long long, long long>, int> index;

    int find(const TriTile& t) const;  // -1 if absent
    TriTile translated(const TriTile& t, int i, int j) const;
    const std::vector<int>& coord_matches(int id, int j) const;  // tiles sharing coordinate j
    const std::vector<int>& orbit(int id) const;                 // full translation orbit
    int size() const { return int(tiles.size()); }
};

// Enumerates the curated two-scale geometry: member width w = strip_width/4,
// top width w/2, second frequency at distance 2w, third at -2*alpha - c with
// c chosen per scale so the three-fold sum range straddles zero and adjacent
// scales stay disjoint. Throws on non-equispaced or too-small strips, or when
// the enumeration would leave the grid's mode range.
Collection build_collection(const Grid& g, const StripFamily& strips, int spatial_depth,
                            int freq_extent, int seeds = 2);

CollectionAudit audit_collection(const Collection& C);

std::string collection_to_json(const Collection& C);

// Wave packet of a tile: spectrum supported on the lattice modes strictly
// inside the 9/10 core of omega, cosine-squared profile (or a supplied one),
// phase-centred at the spatial centre, unit L2 norm.
struct WavePacket {
    Tile tile;
    long long mode_lo = 0;
    std::vector<cplx> amp;  // coefficients on modes mode_lo, mode_lo+1, ...

    cplx pair(const Spectrum& f) const;  // <f, packet>
    Signal render(const Grid& g) const;
};

WavePacket make_packet(const Grid& g, const Tile& t);
WavePacket make_packet(const Grid& g, const Tile& t, const SmoothBump& profile);

// spec'd entry point: rendered packet plus an envelope check at decay order M
Signal wave_packet(const Grid& g, const Tile& t, const SmoothBump& profile, int decay_order);

// smallest C with |phi(x)| <= C |I|^{-1/2} (1 + d(x, c(I))/|I|)^{-M} at samples
double packet_envelope_constant(const Grid& g, const WavePacket& p, int M);

}  // namespace sqlab
