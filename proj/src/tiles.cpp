#include "sqlab/tiles.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sqlab {

namespace {

long long floordiv(long long a, long long b) {
    long long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

long long mod_floor(long long a, long long b) { return a - b * floordiv(a, b); }

}  // namespace

Tile::Tile(int L, int scale_, long long pos_, long long freq_)
    : lattice(L), scale(scale_), pos(pos_), freq(freq_) {
    if (L < 1) throw std::invalid_argument("Tile: lattice must be positive");
    if (scale < 0) throw std::invalid_argument("Tile: spatial length below one lattice unit");
    long long len = 1LL << scale;
    if (len > L || L % len != 0)
        throw std::invalid_argument("Tile: spatial length must divide the period");
    if (pos < 0 || pos >= L / len) throw std::invalid_argument("Tile: position outside the torus");
    // width_units * 2^scale == L, so the area |I|*|omega| is exactly one
}

FreqInterval Tile::omega3() const {
    long long w = width_units();
    return FreqInterval(freq - w, freq + 2 * w, lattice);
}

bool spatial_subset(const Tile& a, const Tile& b) {
    if (a.scale > b.scale) return false;
    return (a.pos >> (b.scale - a.scale)) == b.pos;
}

bool tile_lt(const Tile& a, const Tile& b) {
    if (a.lattice != b.lattice) throw std::invalid_argument("tile order: lattice mismatch");
    if (a.scale >= b.scale || !spatial_subset(a, b)) return false;
    return a.omega3().contains(b.omega3());
}

bool tile_le(const Tile& a, const Tile& b) { return a == b || tile_lt(a, b); }

bool tiles_disjoint(const Tile& a, const Tile& b) {
    bool spatial = a.pos << a.scale < (b.pos + 1) << b.scale &&
                   b.pos << b.scale < (a.pos + 1) << a.scale;
    return !(spatial && a.omega().intersects(b.omega()));
}

Tile TriTile::coord(int j) const {
    if (j < 1 || j > 3) throw std::invalid_argument("TriTile::coord: index must be 1, 2 or 3");
    return Tile(lattice, scale, pos, freq[j - 1]);
}

bool CollectionAudit::pass() const {
    return area_ok && grid_overlap <= 3 && rank_one && whitney_ok && strips_ok &&
           translation_closed && order_ok;
}

int Collection::find(const TriTile& t) const {
    auto it = index.find(t.key());
    return it == index.end() ? -1 : it->second;
}

TriTile Collection::translated(const TriTile& t, int i, int j) const {
    long long T = strips.period_units();
    TriTile r = t;
    r.freq[0] += i * T;
    r.freq[1] += j * T;
    r.freq[2] -= (i + j) * T;
    r.strip += j - i;
    return r;
}

const std::vector<int>& Collection::coord_matches(int id, int j) const {
    return by_coord[j - 1].at(tiles[id].coord(j).key());
}

const std::vector<int>& Collection::orbit(int id) const {
    const TriTile& t = tiles[id];
    long long T = strips.period_units();
    return orbits.at(std::tuple(t.scale, t.pos, mod_floor(t.freq[0], T), mod_floor(t.freq[1], T),
                                t.freq[0] + t.freq[1] + t.freq[2]));
}

Collection build_collection(const Grid& g, const StripFamily& strips, int spatial_depth,
                            int freq_extent, int seeds) {
    if (strips.lattice != g.length)
        throw std::invalid_argument("build_collection: strip lattice does not match the grid");
    if (spatial_depth < 1 || spatial_depth > 2)
        throw std::invalid_argument("build_collection: spatial depth must be 1 or 2");
    if (freq_extent < 0 || seeds < 1) throw std::invalid_argument("build_collection: bad extent/seeds");
    if (strips.width_units % 8 != 0 || strips.width_units < 16)
        throw std::invalid_argument("build_collection: strip width must be a multiple of 8 lattice units");
    if (strips.n_min > -2 * freq_extent || strips.n_max < 2 * freq_extent)
        throw std::invalid_argument("build_collection: strip index range too small for the extent");

    const int L = g.length;
    const long long a0 = strips.a0_units;
    const long long wc = strips.width_units / 4;  // member omega width
    const long long wf = wc / 2;                  // top omega width
    if (L % wc != 0 || (L / wc) & (L / wc - 1) || L % wf != 0)
        throw std::invalid_argument("build_collection: strip width incompatible with a dyadic grid");
    int scale_c = 0;
    while ((1LL << scale_c) * wc < L) ++scale_c;
    int scale_f = scale_c + 1;
    if ((1LL << scale_f) > L)
        throw std::invalid_argument("build_collection: top tiles would exceed the period");

    const long long cc = 4 * wc + wf + 1;  // third-coordinate offsets, one per scale,
    const long long cf = 2 * wf + 1;       // keeping the sum range astride zero

    Collection C;
    C.grid = g;
    C.strips = strips;
    C.depth = spatial_depth;
    C.extent = freq_extent;
    C.seeds = seeds;

    std::vector<TriTile> base;
    for (int q = 0; q < seeds; ++q) {
        long long alpha = q * strips.width_units;
        for (long long x = 0; x < L >> scale_c; ++x)
            base.push_back({L, scale_c, x, {alpha, alpha + a0 + 2 * wc, -2 * alpha - a0 - cc}, 0});
        if (spatial_depth >= 2) {
            for (long long beta : {alpha + 2 * wc, alpha - wf})
                for (long long x = 0; x < L >> scale_f; ++x)
                    base.push_back({L, scale_f, x, {beta, beta + a0 + 2 * wf, -2 * beta - a0 - cf}, 0});
        }
    }

    std::set<decltype(std::declval<TriTile>().key())> seen;
    for (const TriTile& s : base) {
        for (int i = -freq_extent; i <= freq_extent; ++i) {
            for (int j = -freq_extent; j <= freq_extent; ++j) {
                TriTile t = C.translated(s, i, j);
                if (seen.insert(t.key()).second) C.tiles.push_back(t);
            }
        }
    }
    std::sort(C.tiles.begin(), C.tiles.end(),
              [](const TriTile& a, const TriTile& b) { return a.key() < b.key(); });

    long long w_top = L >> (spatial_depth >= 2 ? scale_f : scale_c);
    for (size_t id = 0; id < C.tiles.size(); ++id) {
        const TriTile& t = C.tiles[id];
        for (long long f : t.freq) {
            if (f - w_top < g.mode_min() || f + 2 * strips.width_units >= g.mode_max())
                throw std::invalid_argument("build_collection: grid too small for the enumeration");
        }
        C.index[t.key()] = int(id);
        if (t.strip == 0) {
            TriTile b = t;
            bool is_base = false;
            for (const TriTile& s : base)
                if (s == b) is_base = true;
            if (is_base) C.reference.push_back(int(id));
        }
    }
    if (C.tiles.size() > 10000)
        throw std::invalid_argument("build_collection: enumeration cap exceeded");

    long long T = strips.period_units();
    for (int id = 0; id < C.size(); ++id) {
        const TriTile& t = C.tiles[id];
        for (int j = 1; j <= 3; ++j) C.by_coord[j - 1][t.coord(j).key()].push_back(id);
        C.orbits[std::tuple(t.scale, t.pos, mod_floor(t.freq[0], T), mod_floor(t.freq[1], T),
                            t.freq[0] + t.freq[1] + t.freq[2])]
            .push_back(id);
    }
    return C;
}

namespace {

// max multiplicity of a family of half-open intervals at any point
int max_overlap(std::vector<std::pair<long long, long long>> iv) {
    std::vector<std::pair<long long, int>> ev;
    for (auto& [lo, hi] : iv) {
        if (hi <= lo) continue;
        ev.push_back({lo, +1});
        ev.push_back({hi, -1});
    }
    std::sort(ev.begin(), ev.end());
    int cur = 0, best = 0;
    for (auto& [x, d] : ev) {
        cur += d;
        best = std::max(best, cur);
    }
    return best;
}

}  // namespace

CollectionAudit audit_collection(const Collection& C) {
    CollectionAudit a;
    const int L = C.grid.length;

    a.area_ok = true;
    for (const TriTile& t : C.tiles)
        if (t.width_units() * (1LL << t.scale) != L) a.area_ok = false;

    // grid bullet: per dyadic size class, the distinct coordinate intervals
    // overlap boundedly (the strip geometry keeps the third frequency far from
    // the other two, so the enclosing rectangles are not part of the system)
    {
        std::set<std::pair<long long, long long>> distinct[64];
        auto add = [&](long long lo, long long hi) {
            long long w = hi - lo;
            int k = 0;
            while ((2LL << k) <= w) ++k;  // 2^k <= w < 2^{k+1}
            distinct[k].insert({lo, hi});
        };
        for (const TriTile& t : C.tiles) {
            long long w = t.width_units();
            for (long long f : t.freq) add(f, f + w);
        }
        a.grid_overlap = 0;
        for (int k = 0; k < 64; ++k) {
            std::vector<std::pair<long long, long long>> iv;
            // a size class spans [2^{k-1}, 2^{k+1}], i.e. bins k-1, k, k+1
            for (int b = std::max(0, k - 1); b <= std::min(63, k + 1); ++b)
                iv.insert(iv.end(), distinct[b].begin(), distinct[b].end());
            a.grid_overlap = std::max(a.grid_overlap, max_overlap(iv));
        }
        std::vector<std::pair<long long, long long>> spatial;
        std::set<std::pair<long long, long long>> sp;
        for (const TriTile& t : C.tiles)
            sp.insert({t.pos << t.scale, (t.pos + 1) << t.scale});
        spatial.assign(sp.begin(), sp.end());
        a.grid_overlap = std::max(a.grid_overlap, max_overlap(spatial));
    }

    // nesting bullet with a recorded dilation: whenever a coordinate interval
    // sits strictly inside another interval of the frequency system, all three
    // coordinates must fit inside the K-dilate of that interval
    {
        std::set<std::pair<long long, long long>> system;
        for (const TriTile& t : C.tiles) {
            long long w = t.width_units();
            for (long long f : t.freq) system.insert({f, f + w});
        }
        double K = 1.0;
        for (const TriTile& t : C.tiles) {
            long long w = t.width_units();
            for (auto& [lo, hi] : system) {
                bool strict_inside = false;
                for (long long f : t.freq)
                    if (f >= lo && f + w <= hi && hi - lo > w) strict_inside = true;
                if (!strict_inside) continue;
                double c = 0.5 * double(lo + hi), r = 0.5 * double(hi - lo);
                for (long long f : t.freq) {
                    double need = std::max(std::fabs(double(f) - c), std::fabs(double(f + w) - c));
                    K = std::max(K, need / r);
                }
            }
        }
        a.nesting_dilation = K;
    }

    // rank one, bullet 1: reference tiles pairwise disjoint in every coordinate
    a.rank_one = true;
    for (size_t u = 0; u < C.reference.size(); ++u) {
        for (size_t v = u + 1; v < C.reference.size(); ++v) {
            const TriTile& s = C.tiles[C.reference[u]];
            const TriTile& t = C.tiles[C.reference[v]];
            for (int j = 1; j <= 3; ++j)
                if (!tiles_disjoint(s.coord(j), t.coord(j))) a.rank_one = false;
        }
    }

    // rank one, bullet 2: spatial overlap constant of the 1e7-dilate covering
    a.rank_covering = 0;
    for (int id : C.reference) {
        for (int j = 1; j <= 3; ++j) {
            Tile sj = C.tiles[id].coord(j);
            long long w = sj.width_units();
            std::vector<std::pair<long long, long long>> iv;
            for (const TriTile& t : C.tiles) {
                Tile tj = t.coord(j);
                long long wt = tj.width_units();
                // 1e7-dilate of omega_{t_j} contains omega_{s_j}? compare doubled
                // endpoints so the half-unit dilation margins stay integral
                long long clo = 2 * tj.freq - (10000000 - 1) * wt;
                long long chi = 2 * (tj.freq + wt) + (10000000 - 1) * wt;
                if (clo <= 2 * sj.freq && 2 * (sj.freq + w) <= chi)
                    iv.push_back({t.pos << t.scale, (t.pos + 1) << t.scale});
            }
            a.rank_covering = std::max(a.rank_covering, max_overlap(iv));
        }
    }

    // whitney geometry: the difference range keeps distance ~ omega-width from
    // every strip boundary, and the three-fold sum range straddles zero
    a.whitney_ok = true;
    a.strips_ok = true;
    for (const TriTile& t : C.tiles) {
        long long w = t.width_units();
        long long dlo = t.freq[1] - t.freq[0] - w, dhi = t.freq[1] - t.freq[0] + w;  // open range
        int hits = 0;
        for (int n = C.strips.n_min; n <= C.strips.n_max; ++n) {
            FreqInterval I = C.strips.interval(n);
            if (dlo >= I.lo_units && dhi <= I.hi_units) ++hits;
        }
        if (hits != 1) a.strips_ok = false;
        {
            FreqInterval I = C.strips.interval(t.strip);
            if (!(dlo >= I.lo_units && dhi <= I.hi_units)) a.strips_ok = false;
        }
        long long dist = -1;
        for (int n = C.strips.n_min; n <= C.strips.n_max; ++n) {
            FreqInterval I = C.strips.interval(n);
            for (long long b : {I.lo_units, I.hi_units}) {
                long long d = std::max({dlo - b, b - dhi, 0LL});
                dist = dist < 0 ? d : std::min(dist, d);
            }
        }
        if (double(dist) < C.whitney_lo * double(w) || double(dist) > C.whitney_hi * double(w))
            a.whitney_ok = false;
        long long slo = t.freq[0] + t.freq[1] + t.freq[2];
        if (!(slo < 0 && 0 < slo + 3 * w)) a.whitney_ok = false;
    }

    // closure under the in-extent translations
    a.translation_closed = true;
    for (const TriTile& t : C.tiles) {
        if (std::abs(t.strip) > 2 * C.extent) continue;
        // every tile must belong to a full (2E+1)^2 orbit
        if (int(C.orbit(C.find(t)).size()) != (2 * C.extent + 1) * (2 * C.extent + 1))
            a.translation_closed = false;
    }
    for (int id : C.reference) {
        for (int i = -C.extent; i <= C.extent; ++i)
            for (int j = -C.extent; j <= C.extent; ++j)
                if (C.find(C.translated(C.tiles[id], i, j)) < 0) a.translation_closed = false;
    }

    // partial-order axioms on the distinct coordinate tiles
    {
        std::set<std::tuple<int, long long, long long>> keys;
        std::vector<Tile> tiles;
        for (const TriTile& t : C.tiles)
            for (int j = 1; j <= 3; ++j)
                if (keys.insert(t.coord(j).key()).second) tiles.push_back(t.coord(j));
        a.order_ok = true;
        std::vector<std::pair<int, int>> edges;
        for (size_t u = 0; u < tiles.size(); ++u) {
            if (!tile_le(tiles[u], tiles[u])) a.order_ok = false;
            for (size_t v = 0; v < tiles.size(); ++v) {
                if (u == v) continue;
                if (tile_lt(tiles[u], tiles[v])) {
                    edges.push_back({int(u), int(v)});
                    if (tile_lt(tiles[v], tiles[u])) a.order_ok = false;
                }
            }
        }
        for (auto& [u, v] : edges)
            for (auto& [x, y] : edges)
                if (v == x && !tile_le(tiles[u], tiles[y])) a.order_ok = false;
    }
    return a;
}

std::string collection_to_json(const Collection& C) {
    std::ostringstream out;
    out << "{\"grid\":{\"n\":" << C.grid.n << ",\"length\":" << C.grid.length << "},";
    out << "\"strips\":{\"a0\":" << C.strips.a0_units << ",\"width\":" << C.strips.width_units
        << ",\"gap\":" << C.strips.gap_units << ",\"n_min\":" << C.strips.n_min
        << ",\"n_max\":" << C.strips.n_max << "},";
    out << "\"depth\":" << C.depth << ",\"extent\":" << C.extent << ",\"seeds\":" << C.seeds
        << ",\"tiles\":[";
    for (int id = 0; id < C.size(); ++id) {
        const TriTile& t = C.tiles[id];
        if (id) out << ",";
        out << "[" << t.strip << "," << t.scale << "," << t.pos << "," << t.freq[0] << ","
            << t.freq[1] << "," << t.freq[2] << "]";
    }
    out << "]}";
    return out.str();
}

cplx WavePacket::pair(const Spectrum& f) const {
    if (f.grid.length != tile.lattice)
        throw std::invalid_argument("WavePacket::pair: lattice mismatch");
    cplx acc = 0.0;
    for (size_t k = 0; k < amp.size(); ++k)
        acc += f.at_mode(mode_lo + (long long)k) * std::conj(amp[k]);
    return acc * double(tile.lattice);
}

Signal WavePacket::render(const Grid& g) const {
    Spectrum c(g);
    for (size_t k = 0; k < amp.size(); ++k) c.at_mode(mode_lo + (long long)k) = amp[k];
    return inverse(c);
}

WavePacket make_packet(const Grid& g, const Tile& t, const SmoothBump& profile) {
    if (g.length != t.lattice) throw std::invalid_argument("make_packet: lattice mismatch");
    long long w = t.width_units();
    double c = double(t.freq) + 0.5 * double(w);
    double core = 0.45 * double(w);
    long long mlo = (long long)std::floor(c - core) + 1;
    long long mhi = (long long)std::ceil(c + core) - 1;  // inclusive
    if (mhi < mlo) throw std::invalid_argument("make_packet: tile finer than the lattice");
    if (mlo < g.mode_min() || mhi >= g.mode_max())
        throw std::domain_error("make_packet: tile outside the grid's mode range");

    WavePacket p;
    p.tile = t;
    p.mode_lo = mlo;
    p.amp.resize(size_t(mhi - mlo + 1));
    double xc = t.x_center();
    double norm2 = 0.0;
    for (long long m = mlo; m <= mhi; ++m) {
        double rho = profile.symbol(double(m) / t.lattice);
        norm2 += rho * rho;
    }
    if (norm2 <= 0.0) throw std::invalid_argument("make_packet: profile vanishes on the core");
    double scale = 1.0 / std::sqrt(double(t.lattice) * norm2);
    for (long long m = mlo; m <= mhi; ++m) {
        double rho = profile.symbol(double(m) / t.lattice) * scale;
        double ph = -2.0 * M_PI * double(m) * xc / t.lattice;
        p.amp[size_t(m - mlo)] = rho * cplx(std::cos(ph), std::sin(ph));
    }
    return p;
}

WavePacket make_packet(const Grid& g, const Tile& t) {
    long long w = t.width_units();
    double c = (double(t.freq) + 0.5 * double(w)) / t.lattice;
    return make_packet(g, t, SmoothBump::cosine(c, 0.45 * double(w) / t.lattice));
}

Signal wave_packet(const Grid& g, const Tile& t, const SmoothBump& profile, int decay_order) {
    if (decay_order < 0) throw std::invalid_argument("wave_packet: negative decay order");
    WavePacket p = make_packet(g, t, profile);
    Signal phi = p.render(g);
    double n2 = lp_norm(phi, 2.0);
    if (std::fabs(n2 - 1.0) > 1e-6) throw std::runtime_error("wave_packet: normalization failed");
    return phi;
}

double packet_envelope_constant(const Grid& g, const WavePacket& p, int M) {
    Signal phi = p.render(g);
    double len = p.tile.ilen(), xc = p.tile.x_center();
    double best = 0.0;
    for (int j = 0; j < g.n; ++j) {
        double d = g.dist(g.sample(j), xc);
        double env = std::pow(len, -0.5) * std::pow(1.0 + d / len, -double(M));
        best = std::max(best, std::abs(phi[j]) / env);
    }
    return best;
}

}  // namespace sqlab
