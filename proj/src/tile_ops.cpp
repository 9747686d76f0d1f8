#include "sqlab/tile_ops.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace sqlab {

namespace {

// packet coefficients of one coordinate against a spectrum, cached per tile key
std::vector<cplx> pair_all(const Collection& C, const Spectrum& F, int j) {
    std::map<std::tuple<int, long long, long long>, cplx> cache;
    std::vector<cplx> out(C.size());
    for (int id = 0; id < C.size(); ++id) {
        Tile t = C.tiles[id].coord(j);
        auto it = cache.find(t.key());
        if (it == cache.end())
            it = cache.emplace(t.key(), make_packet(C.grid, t).pair(F)).first;
        out[id] = it->second;
    }
    return out;
}

double sum_sq(const std::vector<int>& ids, const Mask& alive, const std::vector<cplx>& coef) {
    double s = 0.0;
    for (int id : ids)
        if (alive[id]) s += std::norm(coef[id]);
    return s;
}

// worst subtree ratio: max over admissible tops and types of the vectorized
// sum of the members below that top, divided by the top's interval length
double subtree_max_ratio(const Collection& C, const Mask& alive, const SizeQuery& q,
                         const std::vector<cplx>& coef, const std::vector<int>& members) {
    double worst = 0.0;
    for (int top : C.reference) {
        for (int k = 1; k <= 3; ++k) {
            Tile tk = C.tiles[top].coord(k);
            std::vector<int> sub;
            for (int id : members)
                if (tile_le(C.tiles[id].coord(k), tk)) sub.push_back(id);
            if (sub.empty()) continue;
            double s = sum_sq(vectorize(C, sub, q.vec), alive, coef);
            worst = std::max(worst, s / C.tiles[top].ilen());
        }
    }
    return worst;
}

// strong j-disjointness of two trees (Def with the 10-dilates)
bool strongly_disjoint(const Collection& C, int j, const Tree& A, const Tree& B) {
    const TriTile& ta = C.tiles[A.top];
    const TriTile& tb = C.tiles[B.top];
    for (int a : A.members) {
        Tile aj = C.tiles[a].coord(j);
        long long wa = aj.width_units();
        for (int b : B.members) {
            Tile bj = C.tiles[b].coord(j);
            long long wb = bj.width_units();
            if (!tiles_disjoint(aj, bj)) return false;
            // 10-dilates compared on doubled endpoints
            bool meet = 2 * aj.freq - 9 * wa < 2 * (bj.freq + wb) + 9 * wb &&
                        2 * bj.freq - 9 * wb < 2 * (aj.freq + wa) + 9 * wa;
            if (!meet) continue;
            bool b_in_a = (bj.pos << bj.scale) < ((ta.pos + 1) << ta.scale) &&
                          (ta.pos << ta.scale) < ((bj.pos + 1) << bj.scale);
            bool a_in_b = (aj.pos << aj.scale) < ((tb.pos + 1) << tb.scale) &&
                          (tb.pos << tb.scale) < ((aj.pos + 1) << aj.scale);
            if (b_in_a || a_in_b) return false;
        }
    }
    return true;
}

int dyadic_floor(double v) {
    // largest k with 2^k <= v
    int k = int(std::floor(std::log2(v)));
    while (std::exp2(k + 1) <= v) ++k;
    while (std::exp2(k) > v) --k;
    return k;
}

// qualifying tree at threshold tau2 (on sum/|I_T|), chosen by the selection
// order: top centre xi_j maximal, maximal in the tile order, leftmost spatial
// interval, lowest strip
std::optional<Tree> pick_tree(const Collection& C, const Mask& alive, const SizeQuery& q,
                              const std::vector<cplx>& coef, double tau2) {
    struct Cand {
        Tree tree;
        double center;
    };
    std::vector<Cand> cands;
    for (int top : C.reference) {
        for (int k = 1; k <= 3; ++k) {
            std::vector<int> members = tree_members(C, alive, top, k);
            if (members.empty()) continue;
            double s = sum_sq(vectorize(C, members, q.vec), alive, coef);
            if (s < tau2 * C.tiles[top].ilen() * (1.0 - 1e-12)) continue;
            cands.push_back({Tree{top, k, members}, C.tiles[top].coord(q.j).freq_center()});
        }
    }
    if (cands.empty()) return std::nullopt;
    double cmax = -1e300;
    for (const Cand& c : cands) cmax = std::max(cmax, c.center);
    std::vector<Cand> keep;
    for (const Cand& c : cands)
        if (c.center == cmax) keep.push_back(c);
    std::vector<Cand> maximal;
    for (const Cand& c : keep) {
        bool below = false;
        for (const Cand& d : keep)
            if (tile_lt(C.tiles[c.tree.top].coord(q.j), C.tiles[d.tree.top].coord(q.j)))
                below = true;
        if (!below) maximal.push_back(c);
    }
    auto better = [&](const Cand& a, const Cand& b) {
        const TriTile& ta = C.tiles[a.tree.top];
        const TriTile& tb = C.tiles[b.tree.top];
        double xa = double(ta.pos) * ta.ilen(), xb = double(tb.pos) * tb.ilen();
        if (xa != xb) return xa < xb;
        if (ta.strip != tb.strip) return ta.strip < tb.strip;
        if (a.tree.top != b.tree.top) return a.tree.top < b.tree.top;
        return a.tree.type < b.tree.type;
    };
    return std::min_element(maximal.begin(), maximal.end(),
                            [&](const Cand& a, const Cand& b) { return better(a, b); })
        ->tree;
}

void remove_vectorized(const Collection& C, Mask& alive, Mask* removed,
                       const std::vector<int>& members) {
    for (int id : vectorize(C, members, {1, 2})) {
        if (alive[id] && removed) (*removed)[id] = 1;
        alive[id] = 0;
    }
}

Tree paired_tree(const Collection& C, const Mask& alive, int j, const Tree& T) {
    Tree P{T.top, j, {}};
    std::set<int> in(T.members.begin(), T.members.end());
    Tile tj = C.tiles[T.top].coord(j);
    for (int id : C.reference)
        if (alive[id] && !in.count(id) && tile_le(C.tiles[id].coord(j), tj))
            P.members.push_back(id);
    return P;
}

}  // namespace

Mask full_mask(const Collection& C) { return Mask(size_t(C.size()), 1); }

std::vector<cplx> attach(const Collection& C, const Signal& f, int j) {
    if (f.grid != C.grid) throw std::invalid_argument("attach: grid mismatch");
    return pair_all(C, forward(f), j);
}

std::vector<cplx> attach_seq(const Collection& C, const std::vector<Signal>& h_seq, int j) {
    if (int(h_seq.size()) != C.strips.count())
        throw std::invalid_argument("attach_seq: one function per strip required");
    std::map<int, std::vector<cplx>> per_strip;
    std::vector<cplx> out(C.size(), cplx(0.0));
    for (int n = C.strips.n_min; n <= C.strips.n_max; ++n) {
        const Signal& h = h_seq[size_t(n - C.strips.n_min)];
        if (h.grid != C.grid) throw std::invalid_argument("attach_seq: grid mismatch");
        bool used = false;
        for (const TriTile& t : C.tiles) used |= (t.strip == n);
        if (!used) continue;
        std::vector<cplx> c = pair_all(C, forward(h), j);
        for (int id = 0; id < C.size(); ++id)
            if (C.tiles[id].strip == n) out[id] = c[id];
    }
    return out;
}

std::vector<int> tree_members(const Collection& C, const Mask& alive, int top, int type) {
    const TriTile& t = C.tiles[top];
    Tile tj = t.coord(type);
    std::vector<int> out;
    for (int id = 0; id < C.size(); ++id) {
        if (!alive[id] || C.tiles[id].strip != t.strip) continue;
        if (tile_le(C.tiles[id].coord(type), tj)) out.push_back(id);
    }
    return out;
}

std::vector<int> vectorize(const Collection& C, const std::vector<int>& ids,
                           const std::vector<int>& coords) {
    std::set<int> cur(ids.begin(), ids.end());
    for (int c : coords) {
        std::set<int> next;
        for (int id : cur) {
            const auto& m = C.coord_matches(id, c);
            next.insert(m.begin(), m.end());
        }
        cur.swap(next);
    }
    return std::vector<int>(cur.begin(), cur.end());
}

SizeQuery standard_query(int j) {
    if (j == 1) return {1, {2}};
    if (j == 2) return {2, {1}};
    if (j == 3) return {3, {1, 2}};
    throw std::invalid_argument("standard_query: j must be 1, 2 or 3");
}

SizeReport size(const Collection& C, const Mask& alive, const SizeQuery& q,
                const std::vector<cplx>& coef) {
    if (q.j < 1 || q.j > 3) throw std::invalid_argument("size: bad coordinate");
    for (int c : q.vec)
        if (c < 1 || c > 3) throw std::invalid_argument("size: bad vectorization coordinate");
    if (int(coef.size()) != C.size()) throw std::invalid_argument("size: coefficient size mismatch");
    SizeReport r;
    for (int top : C.reference) {
        for (int k = 1; k <= 3; ++k) {
            std::vector<int> members = tree_members(C, alive, top, k);
            if (members.empty()) continue;
            double s = sum_sq(vectorize(C, members, q.vec), alive, coef) / C.tiles[top].ilen();
            if (s > r.value * r.value) {
                r.value = std::sqrt(s);
                r.witness = Tree{top, k, members};
            }
        }
    }
    if (r.value > 0.0) {
        double again = sum_sq(vectorize(C, r.witness.members, q.vec), alive, coef) /
                       C.tiles[r.witness.top].ilen();
        r.witness_ok = std::fabs(std::sqrt(again) - r.value) <= 1e-12 * r.value;
    } else {
        r.witness_ok = true;
    }
    return r;
}

double IndicatorSet::measure() const {
    double c = 0.0;
    for (char b : mask) c += b ? 1.0 : 0.0;
    return c * grid.spacing();
}

double size_upper_estimate(const Collection& C, const IndicatorSet& E, double p) {
    if (p < 1.0) throw std::invalid_argument("size_upper_estimate: p must be >= 1");
    if (E.grid != C.grid) throw std::invalid_argument("size_upper_estimate: grid mismatch");
    double sup = 0.0;
    std::set<std::pair<int, long long>> seen;
    for (const TriTile& t : C.tiles) {
        if (!seen.insert({t.scale, t.pos}).second) continue;
        double len = t.ilen();
        double xl = double(t.pos) * len, xh = xl + len;
        double acc = 0.0;
        for (int j = 0; j < C.grid.n; ++j) {
            if (!E.mask[size_t(j)]) continue;
            double x = C.grid.sample(j);
            // torus distance from the point to the interval
            double d = 1e300;
            for (int wrap = -1; wrap <= 1; ++wrap) {
                double y = x + wrap * double(C.grid.length);
                d = std::min(d, std::max({xl - y, y - xh, 0.0}));
            }
            acc += std::pow(1.0 + d / len, -100.0) * C.grid.spacing();
        }
        sup = std::max(sup, acc / len);
    }
    return std::pow(sup, 1.0 / p);
}

EnergyReport energy(const Collection& C, const Mask& alive0, const SizeQuery& q,
                    const std::vector<cplx>& coef, bool exhaustive) {
    EnergyReport rep;
    Mask alive = alive0;
    for (int guard = 0; guard < 10000; ++guard) {
        double s = size(C, alive, q, coef).value;
        if (s <= 0.0) break;
        int k = dyadic_floor(s);
        double tau2 = std::exp2(2.0 * k);
        EnergyLevel lvl;
        lvl.k = k;
        lvl.certified = true;
        bool removed_any = false;
        while (auto T = pick_tree(C, alive, q, coef, tau2)) {
            // keep the tree only when the family stays admissible: both
            // definitional bounds plus pairwise strong disjointness; a
            // rejected tree is still stripped from the alive set so the
            // level makes progress
            bool ok = subtree_max_ratio(C, alive0, q, coef, T->members) <=
                      4.0 * tau2 * (1.0 + 1e-9);
            for (const Tree& other : lvl.trees)
                ok = ok && strongly_disjoint(C, q.j, *T, other);
            if (ok) {
                lvl.trees.push_back(*T);
                lvl.mass += C.tiles[T->top].ilen();
            } else {
                lvl.certified = false;
            }
            Tree P = paired_tree(C, alive, q.j, *T);
            std::vector<int> both = T->members;
            both.insert(both.end(), P.members.begin(), P.members.end());
            remove_vectorized(C, alive, nullptr, both);
            removed_any = true;
        }
        if (!lvl.trees.empty()) {
            rep.value = std::max(rep.value, std::exp2(k) * std::sqrt(lvl.mass));
            rep.levels.push_back(lvl);
        }
        if (!removed_any) break;
    }

    if (!exhaustive) return rep;
    if (int(C.reference.size()) > 12)
        throw std::invalid_argument("energy: exhaustive search capped at 12 reference tiles");

    struct Cand {
        Tree tree;
        double sum, len;
    };
    std::vector<Cand> cands;
    std::set<int> kset;
    for (int top : C.reference) {
        for (int k = 1; k <= 3; ++k) {
            std::vector<int> M = tree_members(C, alive0, top, k);
            if (M.empty() || M.size() > 16) continue;
            for (unsigned bits = 1; bits < (1u << M.size()); ++bits) {
                std::vector<int> sub;
                for (size_t i = 0; i < M.size(); ++i)
                    if (bits & (1u << i)) sub.push_back(M[i]);
                double s = sum_sq(vectorize(C, sub, q.vec), alive0, coef);
                if (s <= 0.0) continue;
                double len = C.tiles[top].ilen();
                cands.push_back({Tree{top, k, sub}, s, len});
                kset.insert(dyadic_floor(std::sqrt(s / len)));
            }
        }
    }
    rep.exhaustive = true;
    for (int k : kset) {
        double tau2 = std::exp2(2.0 * k);
        std::vector<const Cand*> ok;
        for (const Cand& c : cands) {
            if (c.sum < tau2 * c.len * (1.0 - 1e-12)) continue;
            if (subtree_max_ratio(C, alive0, q, coef, c.tree.members) > 4.0 * tau2 * (1.0 + 1e-12))
                continue;
            ok.push_back(&c);
        }
        if (ok.size() > 4096) throw std::invalid_argument("energy: exhaustive candidate cap");
        // max-mass family of pairwise strongly disjoint trees, branch and bound
        std::vector<std::vector<char>> compat(ok.size(), std::vector<char>(ok.size(), 0));
        for (size_t a = 0; a < ok.size(); ++a)
            for (size_t b = a + 1; b < ok.size(); ++b)
                compat[a][b] = compat[b][a] =
                    strongly_disjoint(C, q.j, ok[a]->tree, ok[b]->tree) ? 1 : 0;
        double best = 0.0;
        std::vector<size_t> chosen;
        std::function<void(size_t, double)> dfs = [&](size_t i, double mass) {
            best = std::max(best, mass);
            if (i >= ok.size()) return;
            double rest = mass;
            for (size_t t = i; t < ok.size(); ++t) rest += ok[t]->len;
            if (rest <= best) return;
            bool fits = true;
            for (size_t c : chosen) fits = fits && compat[i][c];
            if (fits) {
                chosen.push_back(i);
                dfs(i + 1, mass + ok[i]->len);
                chosen.pop_back();
            }
            dfs(i + 1, mass);
        };
        dfs(0, 0.0);
        rep.exact = std::max(rep.exact, std::exp2(k) * std::sqrt(best));
    }
    return rep;
}

Signal packet_superposition(const Collection& C, const std::vector<std::pair<int, cplx>>& coef,
                            int j) {
    Signal out(C.grid);
    for (auto& [id, c] : coef) {
        if (id < 0 || id >= C.size())
            throw std::invalid_argument("packet_superposition: coefficient on a non-member");
        Signal phi = make_packet(C.grid, C.tiles[id].coord(j)).render(C.grid);
        for (int x = 0; x < C.grid.n; ++x) out[x] += c * phi[x];
    }
    return out;
}

double model_form(const Collection& C, const Mask& alive, const std::vector<cplx>& c1,
                  const std::vector<cplx>& c2, const std::vector<cplx>& c3) {
    double acc = 0.0;
    for (int id = 0; id < C.size(); ++id) {
        if (!alive[id]) continue;
        acc += std::abs(c1[id]) * std::abs(c2[id]) * std::abs(c3[id]) /
               std::sqrt(C.tiles[id].ilen());
    }
    return acc;
}

double model_form(const Collection& C, const Signal& f, const Signal& g,
                  const std::vector<Signal>& h_seq) {
    return model_form(C, full_mask(C), attach(C, f, 1), attach(C, g, 2), attach_seq(C, h_seq, 3));
}

TreeEstimateReport tree_estimate_report(const Collection& C, const Tree& tree, const Signal& f,
                                        const Signal& g, const std::vector<Signal>& h_seq) {
    for (int id : tree.members) {
        if (id < 0 || id >= C.size())
            throw std::invalid_argument("tree_estimate_report: member outside the collection");
        if (!tile_le(C.tiles[id].coord(tree.type), C.tiles[tree.top].coord(tree.type)))
            throw std::invalid_argument("tree_estimate_report: member not below the top");
    }
    std::vector<cplx> c1 = attach(C, f, 1), c2 = attach(C, g, 2), c3 = attach_seq(C, h_seq, 3);
    Mask vec(size_t(C.size()), 0);
    for (int id : vectorize(C, tree.members, {1, 2})) vec[id] = 1;

    TreeEstimateReport r;
    r.lambda = model_form(C, vec, c1, c2, c3);
    Mask all = full_mask(C);
    r.s1 = size(C, all, standard_query(1), c1).value;
    r.s2 = size(C, all, standard_query(2), c2).value;
    r.s3 = size(C, all, standard_query(3), c3).value;
    r.top_len = C.tiles[tree.top].ilen();
    r.bound = r.top_len * r.s1 * r.s2 * r.s3;
    if (r.bound > 0.0)
        r.ratio = r.lambda / r.bound;
    else if (r.lambda > 0.0)
        r.degenerate = true;
    return r;
}

DecomposeReport energy_decompose(const Collection& C, const Mask& alive, const SizeQuery& q,
                                 const std::vector<cplx>& coef, int n, double E) {
    DecomposeReport rep;
    rep.p1 = alive;
    rep.p2 = Mask(size_t(C.size()), 0);
    rep.size_before = size(C, alive, q, coef).value;
    rep.threshold = std::exp2(-n - 1) * E;
    if (rep.size_before > std::exp2(-double(n)) * E * (1.0 + 1e-9))
        throw std::invalid_argument("energy_decompose: size exceeds 2^{-n} * energy");

    double tau2 = 0.25 * std::exp2(-2.0 * n) * E * E;
    while (auto T = pick_tree(C, rep.p1, q, coef, tau2)) {
        Tree P = paired_tree(C, rep.p1, q.j, *T);
        rep.mass += C.tiles[T->top].ilen();
        std::vector<int> both = T->members;
        both.insert(both.end(), P.members.begin(), P.members.end());
        rep.trees.push_back(*T);
        rep.trees.push_back(P);
        remove_vectorized(C, rep.p1, &rep.p2, both);
    }
    rep.mass_constant = rep.mass * std::exp2(-2.0 * n);
    rep.size_after = size(C, rep.p1, q, coef).value;
    rep.size_ok = rep.size_after <= rep.threshold * (1.0 + 1e-9);

    rep.closure_ok = true;
    for (const auto& [key, ids] : C.orbits) {
        bool any = false, all = true;
        for (int id : ids) {
            if (rep.p1[id])
                any = true;
            else
                all = false;
        }
        if (any && !all) rep.closure_ok = false;
    }
    return rep;
}

AbstractBoundReport abstract_bound_report(const Collection& C, const Signal& f, const Signal& g,
                                          const std::vector<Signal>& h_seq,
                                          const std::array<double, 3>& theta) {
    double tsum = 0.0;
    for (double t : theta) {
        if (t <= 0.0 || t >= 1.0)
            throw std::invalid_argument("abstract_bound_report: theta components must be in (0,1)");
        tsum += t;
    }
    if (std::fabs(tsum - 1.0) > 1e-12)
        throw std::invalid_argument("abstract_bound_report: theta must sum to 1");

    std::array<std::vector<cplx>, 3> coef = {attach(C, f, 1), attach(C, g, 2),
                                             attach_seq(C, h_seq, 3)};
    std::array<SizeQuery, 3> q = {standard_query(1), standard_query(2), standard_query(3)};

    AbstractBoundReport rep;
    Mask all = full_mask(C);
    rep.lambda = model_form(C, all, coef[0], coef[1], coef[2]);
    for (int j = 0; j < 3; ++j) {
        rep.sizes[j] = size(C, all, q[j], coef[j]).value;
        rep.energies[j] = energy(C, all, q[j], coef[j]).value;
    }
    rep.denominator = 1.0;
    for (int j = 0; j < 3; ++j)
        rep.denominator *= std::pow(rep.energies[j], 1.0 - theta[j]) *
                           std::pow(rep.sizes[j], theta[j]);
    if (rep.denominator > 0.0)
        rep.ratio = rep.lambda / rep.denominator;
    else if (rep.lambda > 0.0)
        rep.degenerate = true;

    Mask alive = all;
    for (int guard = 0;; ++guard) {
        if (guard >= 10000)
            throw std::runtime_error("abstract_bound_report: level iteration did not terminate");
        std::array<double, 3> s;
        bool empty = true;
        for (int j = 0; j < 3; ++j) {
            s[j] = size(C, alive, q[j], coef[j]).value;
            if (s[j] > 0.0) empty = false;
        }
        if (empty) break;
        int n = INT_MAX;
        for (int j = 0; j < 3; ++j) {
            if (s[j] <= 0.0 || rep.energies[j] <= 0.0) continue;
            n = std::min(n, dyadic_floor(rep.energies[j] / s[j]));
        }
        if (n == INT_MAX) break;
        AbstractLevel lvl;
        lvl.n = n;
        Mask before = alive;
        for (int j = 0; j < 3; ++j) {
            if (rep.energies[j] <= 0.0) continue;
            if (size(C, alive, q[j], coef[j]).value <= std::exp2(-n - 1) * rep.energies[j])
                continue;
            DecomposeReport d = energy_decompose(C, alive, q[j], coef[j], n, rep.energies[j]);
            lvl.mass[j] = d.mass;
            lvl.tree_count += int(d.trees.size()) / 2;
            alive = d.p1;
        }
        Mask removed(size_t(C.size()), 0);
        bool moved = false;
        for (int id = 0; id < C.size(); ++id) {
            if (before[id] && !alive[id]) {
                removed[id] = 1;
                moved = true;
            }
        }
        lvl.lambda = model_form(C, removed, coef[0], coef[1], coef[2]);
        rep.levels.push_back(lvl);
        double total = lvl.mass[0] + lvl.mass[1] + lvl.mass[2];
        rep.mass_constant = std::max(rep.mass_constant, total * std::exp2(-2.0 * n));
        if (!moved) break;  // sizes already below every next threshold; nothing left to pull
        // generic data never empties the collection exactly; stop once the
        // remainder contributes nothing at double precision
        double rest = model_form(C, alive, coef[0], coef[1], coef[2]);
        if (rest <= 1e-13 * std::max(rep.lambda, 1e-300)) break;
    }
    return rep;
}

}  // namespace sqlab
