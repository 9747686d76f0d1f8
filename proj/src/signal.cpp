#include "sqlab/signal.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>

namespace sqlab {

Signal::Signal(const Grid& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
    if ((int)values.size() != grid.n) throw std::invalid_argument("Signal: size mismatch");
}

namespace {

// FFTW plans cached per (size, direction). Executed with fftw_execute_dft on
// caller buffers, so plans are created once with FFTW_UNALIGNED.
fftw_plan plan_for(int n, int sign) {
    static std::map<std::pair<int, int>, fftw_plan> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<cplx> tmp(n);
    fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(tmp.data()),
                                   reinterpret_cast<fftw_complex*>(tmp.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, p);
    return p;
}

void run_fft(std::vector<cplx>& data, int sign) {
    fftw_plan p = plan_for((int)data.size(), sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data.data()),
                     reinterpret_cast<fftw_complex*>(data.data()));
}

}  // namespace

Spectrum forward(const Signal& f) {
    const int n = f.grid.n;
    std::vector<cplx> buf = f.values;
    run_fft(buf, FFTW_FORWARD);  // X_k = sum_j f_j e^{-2 pi i j k / n}
    Spectrum out(f.grid);
    for (int i = 0; i < n; ++i) {
        int k = (i - n / 2 + n) % n;  // mode m = i - n/2 lives in DFT bin m mod n
        out.coeff[i] = buf[k] / double(n);
    }
    return out;
}

Signal inverse(const Spectrum& c) {
    const int n = c.grid.n;
    std::vector<cplx> buf(n);
    for (int i = 0; i < n; ++i) buf[(i - n / 2 + n) % n] = c.coeff[i];
    run_fft(buf, FFTW_BACKWARD);  // f_j = sum_k X_k e^{+2 pi i j k / n}
    return Signal(c.grid, std::move(buf));
}

bool Spectrum::support(long long& mlo, long long& mhi, double rel_tol) const {
    double mx = 0.0;
    for (const auto& c : coeff) mx = std::max(mx, std::abs(c));
    if (mx == 0.0) return false;
    const double thr = rel_tol * mx;
    int lo = -1, hi = -1;
    for (int i = 0; i < (int)coeff.size(); ++i)
        if (std::abs(coeff[i]) > thr) {
            if (lo < 0) lo = i;
            hi = i;
        }
    mlo = grid.index_to_mode(lo);
    mhi = grid.index_to_mode(hi);
    return true;
}

double lp_norm(const Signal& f, double p) {
    if (std::isinf(p)) {
        double mx = 0.0;
        for (const auto& v : f.values) mx = std::max(mx, std::abs(v));
        return mx;
    }
    if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be positive");
    const double w = f.grid.spacing();
    double acc = 0.0;
    for (const auto& v : f.values) acc += std::pow(std::abs(v), p);
    return std::pow(w * acc, 1.0 / p);
}

cplx inner(const Signal& f, const Signal& g) {
    if (f.grid != g.grid) throw std::invalid_argument("inner: grid mismatch");
    cplx acc(0.0, 0.0);
    for (int j = 0; j < f.grid.n; ++j) acc += f.values[j] * std::conj(g.values[j]);
    return acc * f.grid.spacing();
}

cplx inner(const Spectrum& f, const Spectrum& g) {
    if (f.grid != g.grid) throw std::invalid_argument("inner: grid mismatch");
    cplx acc(0.0, 0.0);
    for (int i = 0; i < f.grid.n; ++i) acc += f.coeff[i] * std::conj(g.coeff[i]);
    return acc * double(f.grid.length);
}

double l2_norm(const Spectrum& c) {
    double acc = 0.0;
    for (const auto& v : c.coeff) acc += std::norm(v);
    return std::sqrt(acc * double(c.grid.length));
}

Signal translate(const Signal& f, int steps) {
    const int n = f.grid.n;
    Signal out(f.grid);
    // out(x) = f(x - steps * spacing)
    for (int j = 0; j < n; ++j) out.values[j] = f.values[((j - steps) % n + n) % n];
    return out;
}

Signal pointwise(const Signal& f, const Signal& g) {
    if (f.grid != g.grid) throw std::invalid_argument("pointwise: grid mismatch");
    Signal out(f.grid);
    for (int j = 0; j < f.grid.n; ++j) out.values[j] = f.values[j] * g.values[j];
    return out;
}

std::pair<Signal, Signal> dirichlet_pair(const Grid& g, int P) {
    if (P < 1) throw std::invalid_argument("dirichlet_pair: P must be >= 1");
    if (g.length % 2 != 0) throw std::invalid_argument("dirichlet_pair: L must be even");
    if (2LL * P * g.length >= g.n / 2)
        throw std::invalid_argument("dirichlet_pair: band [0,2P) needs 2*P*L < N/2");
    Spectrum fs(g), gs(g);
    for (long long m = 0; m < 2LL * P * g.length; ++m) fs.at_mode(m) = 1.0;
    for (long long m = 0; m < g.length / 2; ++m) gs.at_mode(m) = 1.0;
    return {inverse(fs), inverse(gs)};
}

Signal random_band_limited(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Spectrum s(g);
    for (long long m = -(g.n / 4) + 1; m < g.n / 4; ++m) s.at_mode(m) = cplx(gauss(rng), gauss(rng));
    return inverse(s);
}

std::string to_json(const Signal& f) {
    nlohmann::ordered_json j;
    j["n"] = f.grid.n;
    j["length"] = f.grid.length;
    std::vector<double> vals;
    vals.reserve(2 * f.values.size());
    for (const auto& v : f.values) {
        vals.push_back(v.real());
        vals.push_back(v.imag());
    }
    j["values"] = vals;
    return j.dump();
}

Signal signal_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    Grid g(j.at("n").get<int>(), j.at("length").get<int>());
    auto vals = j.at("values").get<std::vector<double>>();
    if ((int)vals.size() != 2 * g.n) throw std::invalid_argument("signal_from_json: length mismatch");
    Signal f(g);
    for (int i = 0; i < g.n; ++i) f.values[i] = cplx(vals[2 * i], vals[2 * i + 1]);
    return f;
}

}  // namespace sqlab
