#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sqlab/signal.hpp"

using namespace sqlab;

namespace {

// independent O(N^2) transform oracle, written directly from the convention
Spectrum dft_oracle(const Signal& f) {
    const int n = f.grid.n;
    Spectrum out(f.grid);
    for (int i = 0; i < n; ++i) {
        long long m = f.grid.index_to_mode(i);
        cplx acc(0.0, 0.0);
        for (int j = 0; j < n; ++j) {
            double phase = -2.0 * std::numbers::pi * double(m) * f.grid.sample(j) / f.grid.length;
            acc += f.values[j] * cplx(std::cos(phase), std::sin(phase));
        }
        out.coeff[i] = acc / double(n);
    }
    return out;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double mx = 0.0;
    for (size_t i = 0; i < a.size(); ++i) mx = std::max(mx, std::abs(a[i] - b[i]));
    return mx;
}

}  // namespace

TEST_CASE("grid rejects bad parameters") {
    CHECK_THROWS(Grid(0, 16));
    CHECK_THROWS(Grid(31, 16));
    CHECK_THROWS(Grid(64, 0));
    Grid g(64, 16);
    CHECK(g.spacing() == doctest::Approx(0.25));
    CHECK(g.mode_min() == -32);
    CHECK_THROWS(g.mode_to_index(32));
}

TEST_CASE("freq interval lattice exactness") {
    CHECK_THROWS(FreqInterval::of(0.3, 1.0, 16));
    auto I = FreqInterval::of(0.5, 1.5, 16);
    CHECK(I.lo_units == 8);
    CHECK(I.hi_units == 24);
    CHECK(I.contains_mode(8));
    CHECK(!I.contains_mode(24));  // half-open
    CHECK(I.width() == doctest::Approx(1.0));
}

TEST_CASE("pure modes have unit coefficients") {
    Grid g(128, 16);
    for (long long k : {-5LL, 0LL, 3LL, 63LL}) {
        Signal f(g);
        for (int j = 0; j < g.n; ++j) {
            double ph = 2.0 * std::numbers::pi * double(k) * g.sample(j) / g.length;
            f.values[j] = cplx(std::cos(ph), std::sin(ph));
        }
        Spectrum c = forward(f);
        CHECK(std::abs(c.at_mode(k) - cplx(1.0, 0.0)) < 1e-12);
        c.at_mode(k) = 0.0;
        for (const auto& v : c.coeff) CHECK(std::abs(v) < 1e-12);
    }
}

TEST_CASE("fft matches direct dft oracle") {
    Grid g(96, 4);  // non power of two on purpose
    Signal f = random_band_limited(g, 7);
    Spectrum fast = forward(f), slow = dft_oracle(f);
    CHECK(max_abs_diff(fast.coeff, slow.coeff) < 1e-12);
    Signal back = inverse(fast);
    CHECK(max_abs_diff(back.values, f.values) < 1e-12);
}

TEST_CASE("analytic frozen coefficients: cosine and constant") {
    Grid g(64, 8);
    Signal f(g);
    for (int j = 0; j < g.n; ++j)
        f.values[j] = 2.0 + std::cos(2.0 * std::numbers::pi * 3.0 * g.sample(j) / g.length);
    Spectrum c = forward(f);
    CHECK(std::abs(c.at_mode(0) - 2.0) < 1e-13);
    CHECK(std::abs(c.at_mode(3) - 0.5) < 1e-13);
    CHECK(std::abs(c.at_mode(-3) - 0.5) < 1e-13);
    CHECK(std::abs(c.at_mode(1)) < 1e-13);
}

TEST_CASE("modulation covariance: mode multiply shifts the spectrum") {
    Grid g(128, 16);
    Signal f = random_band_limited(g, 11);
    const int k = 9;
    Signal mod(g);
    for (int j = 0; j < g.n; ++j) {
        double ph = 2.0 * std::numbers::pi * double(k) * g.sample(j) / g.length;
        mod.values[j] = f.values[j] * cplx(std::cos(ph), std::sin(ph));
    }
    Spectrum cf = forward(f), cm = forward(mod);
    double mx = 0.0;
    for (long long m = g.mode_min() + k; m < g.mode_max(); ++m)
        mx = std::max(mx, std::abs(cm.at_mode(m) - cf.at_mode(m - k)));
    CHECK(mx < 1e-12);
}

TEST_CASE("translate is an exact reindexing") {
    Grid g(64, 16);
    Signal f = random_band_limited(g, 3);
    Signal t = translate(translate(f, 13), -13);
    for (int j = 0; j < g.n; ++j) CHECK(f.values[j] == t.values[j]);  // bit-exact
    Signal s = translate(f, 4);
    CHECK(s.values[4] == f.values[0]);
}

TEST_CASE("lp_norm: analytic values, quadrature oracle, domain errors") {
    Grid g(256, 16);
    Signal one(g);
    for (auto& v : one.values) v = 1.0;
    CHECK(lp_norm(one, 2.0) == doctest::Approx(4.0).epsilon(1e-12));       // sqrt(L)
    CHECK(lp_norm(one, 1.0) == doctest::Approx(16.0).epsilon(1e-12));      // L
    CHECK(lp_norm(one, std::numeric_limits<double>::infinity()) == 1.0);
    CHECK_THROWS(lp_norm(one, 0.0));
    CHECK_THROWS(lp_norm(one, -2.0));

    // refinement oracle: |f|^4 of a narrow-band f is itself band-limited, so the
    // lattice quadrature is exact and must agree across resolutions
    Spectrum narrow(g);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (long long m = -15; m <= 15; ++m) narrow.at_mode(m) = cplx(gauss(rng), gauss(rng));
    Signal f = inverse(narrow);
    Grid g2(512, 16);
    Spectrum up(g2);
    for (long long m = -15; m <= 15; ++m) up.at_mode(m) = narrow.at_mode(m);
    Signal f2 = inverse(up);
    CHECK(lp_norm(f, 4.0) == doctest::Approx(lp_norm(f2, 4.0)).epsilon(1e-12));
    CHECK(lp_norm(f, 2.0) == doctest::Approx(lp_norm(f2, 2.0)).epsilon(1e-12));
}

TEST_CASE("parseval ties signal and spectrum norms") {
    Grid g(128, 16);
    Signal f = random_band_limited(g, 21);
    Spectrum c = forward(f);
    CHECK(lp_norm(f, 2.0) == doctest::Approx(l2_norm(c)).epsilon(1e-12));
    Signal h = random_band_limited(g, 22);
    cplx a = inner(f, h), b = inner(c, forward(h));
    CHECK(std::abs(a - b) < 1e-10 * std::abs(a));
}

TEST_CASE("dirichlet pair has exact indicator spectra") {
    Grid g(1024, 16);
    auto [f, gee] = dirichlet_pair(g, 4);
    Spectrum cf = forward(f), cg = forward(gee);
    int count = 0;
    for (int i = 0; i < g.n; ++i) {
        long long m = g.index_to_mode(i);
        cplx expect = (m >= 0 && m < 2 * 4 * 16) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
        CHECK(std::abs(cf.coeff[i] - expect) < 1e-11);
        if (std::abs(cf.coeff[i]) > 0.5) ++count;
        cplx eg = (m >= 0 && m < 8) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
        CHECK(std::abs(cg.coeff[i] - eg) < 1e-11);
    }
    CHECK(count == 2 * 4 * 16);  // exactly 2PL unit coefficients
    CHECK_THROWS(dirichlet_pair(g, 16));  // band would hit Nyquist
}

TEST_CASE("random band-limited signals are deterministic and in-band") {
    Grid g(256, 16);
    Signal a = random_band_limited(g, 42), b = random_band_limited(g, 42);
    for (int j = 0; j < g.n; ++j) CHECK(a.values[j] == b.values[j]);
    Spectrum c = forward(a);
    long long lo, hi;
    REQUIRE(c.support(lo, hi));
    CHECK(lo > -g.n / 4);
    CHECK(hi < g.n / 4);
}

TEST_CASE("json round trip is bit-exact") {
    Grid g(64, 4);
    Signal f = random_band_limited(g, 9);
    Signal back = signal_from_json(to_json(f));
    CHECK(back.grid == f.grid);
    for (int j = 0; j < g.n; ++j) CHECK(back.values[j] == f.values[j]);
}
