#pragma once
#include <array>
#include <optional>

#include "sqlab/tiles.hpp"

namespace sqlab {

// Tree inside a collection: top tri-tile (by id), coordinate type, member ids.
// Members satisfy coord(type) <= top's coord(type) and share the top's strip.
struct Tree {
    int top = -1;
    int type = 1;
    std::vector<int> members;
};

using Mask = std::vector<char>;
Mask full_mask(const Collection& C);

// packet coefficient of every tri-tile's j-th tile against one function, or
// against a per-strip sequence (h_seq[k] belongs to strip n_min + k)
std::vector<cplx> attach(const Collection& C, const Signal& f, int j);
std::vector<cplx> attach_seq(const Collection& C, const std::vector<Signal>& h_seq, int j);

// maximal tree below a top: alive tiles of the top's strip whose coordinate
// sits below the top's in the tile order
std::vector<int> tree_members(const Collection& C, const Mask& alive, int top, int type);

// union of coordinate matches, applied per coordinate in order; ids sorted
std::vector<int> vectorize(const Collection& C, const std::vector<int>& ids,
                           const std::vector<int>& coords);

// which coordinate carries the data and which coordinates get vectorized;
// vec may be empty (plain sums, the sequence-variant size_2)
struct SizeQuery {
    int j = 1;
    std::vector<int> vec = {2};
};
SizeQuery standard_query(int j);  // j=1 -> vec {2}, j=2 -> {1}, j=3 -> {1,2}

struct SizeReport {
    double value = 0.0;
    Tree witness;
    bool witness_ok = false;  // witness re-evaluates to the reported value
};

// sup over trees (every type, tops in the reference square, members alive) of
// (|I_T|^{-1} sum over the vectorized tree of |coef|^2)^{1/2}
SizeReport size(const Collection& C, const Mask& alive, const SizeQuery& q,
                const std::vector<cplx>& coef);

struct IndicatorSet {
    Grid grid;
    std::vector<char> mask;

    IndicatorSet() = default;
    explicit IndicatorSet(const Grid& g) : grid(g), mask(g.n, 0) {}
    double measure() const;
};

// (sup_s |I_s|^{-1} int_E (1 + d(x, I_s)/|I_s|)^{-100} dx)^{1/p}
double size_upper_estimate(const Collection& C, const IndicatorSet& E, double p);

struct EnergyLevel {
    int k = 0;  // dyadic level 2^k
    double mass = 0.0;
    bool certified = false;  // no qualifying tree had to be dropped
    std::vector<Tree> trees;
};
struct EnergyReport {
    double value = 0.0;  // best certified 2^k * sqrt(mass)
    std::vector<EnergyLevel> levels;
    bool exhaustive = false;
    double exact = 0.0;  // definitional sup, exhaustive mode only
};

// greedy level iteration (each level extracts trees at 2^k = the dyadic floor
// of the current size, then re-measures); exhaustive mode additionally runs
// the definitional sup over strongly disjoint families, reference size <= 12
EnergyReport energy(const Collection& C, const Mask& alive, const SizeQuery& q,
                    const std::vector<cplx>& coef, bool exhaustive = false);

// sum of coef * packet over the j-th coordinates of the listed tri-tiles
Signal packet_superposition(const Collection& C, const std::vector<std::pair<int, cplx>>& coef,
                            int j);

// Lambda over the alive tiles: sum |I_s|^{-1/2} |c1 c2 c3|
double model_form(const Collection& C, const Mask& alive, const std::vector<cplx>& c1,
                  const std::vector<cplx>& c2, const std::vector<cplx>& c3);
double model_form(const Collection& C, const Signal& f, const Signal& g,
                  const std::vector<Signal>& h_seq);

struct TreeEstimateReport {
    double lambda = 0.0;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    double top_len = 0.0;
    double bound = 0.0;  // |I_T| * s1 * s2 * s3
    double ratio = 0.0;  // 0 when 0/0
    bool degenerate = false;  // lambda > 0 with a vanishing bound
};

// Lambda over the {1,2}-vectorized tree against |I_T| * size_1^2 * size_2^1 *
// size_3^{1,2}; the Cauchy-Schwarz chain makes the ratio at most 1
TreeEstimateReport tree_estimate_report(const Collection& C, const Tree& tree, const Signal& f,
                                        const Signal& g, const std::vector<Signal>& h_seq);

struct DecomposeReport {
    std::vector<Tree> trees;  // T_1, T_1', T_2, T_2', ...
    Mask p1, p2;
    double mass = 0.0;           // sum |I_{T_i}| over the primary trees
    double mass_constant = 0.0;  // mass / 2^{2n}
    double size_before = 0.0, size_after = 0.0;
    double threshold = 0.0;  // 2^{-n-1} E
    bool size_ok = false;
    bool closure_ok = false;  // p1 is constant on translation orbits
};

// One pass of the selection algorithm at level n: requires
// size <= 2^{-n} E, extracts trees whose vectorized sum reaches
// 4^{-1} (2^{-n} E)^2 |I_T| (selection order: top centre xi_j maximal, then
// maximal in the tile order, then leftmost interval, then lowest strip),
// removes each tree's {1,2}-vectorization together with its paired j-tree
DecomposeReport energy_decompose(const Collection& C, const Mask& alive, const SizeQuery& q,
                                 const std::vector<cplx>& coef, int n, double E);

struct AbstractLevel {
    int n = 0;
    std::array<double, 3> mass{0, 0, 0};
    double lambda = 0.0;
    int tree_count = 0;
};
struct AbstractBoundReport {
    double lambda = 0.0;
    std::array<double, 3> sizes{0, 0, 0};
    std::array<double, 3> energies{0, 0, 0};
    double denominator = 0.0;
    double ratio = 0.0;
    std::vector<AbstractLevel> levels;
    double mass_constant = 0.0;  // max over levels of total mass / 2^{2n}
    bool degenerate = false;     // lambda > 0 with zero denominator
};

// full interleaved decomposition: at each level the three coordinates are
// brought below 2^{-n-1} * energy_j, levels advance until the remainder
// carries no mass; guard at 1e4 levels
AbstractBoundReport abstract_bound_report(const Collection& C, const Signal& f, const Signal& g,
                                          const std::vector<Signal>& h_seq,
                                          const std::array<double, 3>& theta);

}  // namespace sqlab
