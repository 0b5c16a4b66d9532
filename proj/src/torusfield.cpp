#include "wickworks/torusfield.hpp"

#include "wickworks/budget.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace wickworks {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_dim(int d) {
    if (d < 1 || d > 3) throw std::invalid_argument("torus: dimension must be 1, 2 or 3");
}

double phase(const Mode& k, std::span<const double> x) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += k[i] * x[i];
    return two_pi * s;
}

bool is_representative(const Mode& k) {
    for (int c : k)
        if (c != 0) return c > 0;
    return false;
}

std::vector<Mode> l1_ball(int d, int N) {
    std::vector<Mode> out;
    const int hi1 = d > 1 ? N : 0, hi2 = d > 2 ? N : 0;
    for (int a = -N; a <= N; ++a)
        for (int b = -hi1; b <= hi1; ++b)
            for (int c = -hi2; c <= hi2; ++c)
                if (std::abs(a) + std::abs(b) + std::abs(c) <= N) out.push_back({a, b, c});
    return out;
}

double scaled_hermite(int n, double x, double var) {
    if (n == 0) return 1.0;
    double prev = 1.0, cur = x;
    for (int j = 1; j < n; ++j) {
        const double next = x * cur - j * var * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

double lambda(const Mode& k, int d) {
    return 1.0 + std::pow(two_pi, d) * static_cast<double>(squared_norm(k));
}

ModeLattice ModeLattice::build(int d, int N) {
    check_dim(d);
    if (N < 0) throw std::invalid_argument("torus: cutoff must be non-negative");
    ModeLattice L;
    L.d = d;
    L.N = N;
    L.modes = l1_ball(d, N);
    for (const Mode& k : L.modes) {
        L.lambdas.push_back(lambda(k, d));
        RealMode r;
        if (k == Mode{0, 0, 0})
            r = {k, FourierPart::constant};
        else if (is_representative(k))
            r = {k, FourierPart::cosine};
        else
            r = {-k, FourierPart::sine};
        L.basis.push_back(r);
        L.basis_lambdas.push_back(L.lambdas.back());
    }
    return L;
}

double ModeLattice::basis_function(std::size_t i, std::span<const double> x) const {
    const RealMode& r = basis[i];
    switch (r.part) {
        case FourierPart::constant: return 1.0;
        case FourierPart::cosine: return std::numbers::sqrt2 * std::cos(phase(r.k, x));
        case FourierPart::sine: return std::numbers::sqrt2 * std::sin(phase(r.k, x));
    }
    return 0.0;
}

SpectralProfile SpectralProfile::fractional(double s) {
    if (s < 0) throw std::invalid_argument("profile: exponent must be non-negative");
    return {Kind::fractional, s};
}

SpectralProfile SpectralProfile::parse(const std::string& name) {
    if (name == "white") return white();
    if (name == "gff") return gff();
    if (name.rfind("fractional:", 0) == 0) return fractional(std::stod(name.substr(11)));
    throw std::invalid_argument("profile: expected white, gff or fractional:<s>");
}

std::string SpectralProfile::name() const {
    switch (kind) {
        case Kind::white: return "white";
        case Kind::gff: return "gff";
        case Kind::fractional: return "fractional:" + std::to_string(s);
    }
    return "";
}

double FieldSample::value_at(std::span<const double> x) const {
    double s = 0;
    for (std::size_t i = 0; i < amplitudes.size(); ++i) s += amplitudes[i] * lattice.basis_function(i, x);
    return s;
}

std::vector<double> FieldSample::grid(int M, GridMethod method) const {
    return GridSynthesizer(lattice, M, method)(amplitudes);
}

void fill_amplitudes(FieldSample& f, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    const ModeLattice& L = f.lattice;
    f.amplitudes.resize(L.basis.size());
    const double e = f.profile.exponent();
    for (std::size_t i = 0; i < L.basis.size(); ++i) {
        const double z = normal(rng);
        if (e == 0.0)
            f.amplitudes[i] = z;
        else if (e == 0.5)
            f.amplitudes[i] = z / std::sqrt(L.basis_lambdas[i]);
        else
            f.amplitudes[i] = z * std::pow(L.basis_lambdas[i], -e);
    }
}

FieldSample sample_field(const SpectralProfile& profile, const ModeLattice& lattice, std::uint64_t seed) {
    FieldSample f{lattice, profile, seed, {}};
    std::mt19937_64 rng(seed);
    fill_amplitudes(f, rng);
    return f;
}

GridSynthesizer::GridSynthesizer(const ModeLattice& lattice, int M, GridMethod method)
    : lattice_(&lattice), M_(M), method_(method) {
    if (M < 1) throw std::invalid_argument("grid: size must be positive");
    points_ = 1;
    for (int i = 0; i < lattice.d; ++i) points_ *= M;
    if (method_ == GridMethod::direct) {
        table_.resize(static_cast<std::size_t>(points_) * lattice.basis.size());
        std::vector<double> x(lattice.d);
        for (int p = 0; p < points_; ++p) {
            int rest = p;
            for (int i = lattice.d - 1; i >= 0; --i) {
                x[i] = static_cast<double>(rest % M) / M;
                rest /= M;
            }
            for (std::size_t b = 0; b < lattice.basis.size(); ++b)
                table_[p * lattice.basis.size() + b] = lattice.basis_function(b, x);
        }
    }
}

std::vector<double> GridSynthesizer::operator()(std::span<const double> amplitudes) const {
    const ModeLattice& L = *lattice_;
    if (amplitudes.size() != L.basis.size()) throw std::invalid_argument("grid: amplitude count mismatch");
    std::vector<double> out(points_);
    const std::size_t nb = L.basis.size();
    if (method_ == GridMethod::direct) {
        for (int p = 0; p < points_; ++p) {
            const double* row = &table_[p * nb];
            double s = 0;
            for (std::size_t b = 0; b < nb; ++b) s += row[b] * amplitudes[b];
            out[p] = s;
        }
        return out;
    }
    std::unique_ptr<fftw_complex[], decltype(&fftw_free)> buf(fftw_alloc_complex(points_), &fftw_free);
    for (int p = 0; p < points_; ++p) buf[p][0] = buf[p][1] = 0.0;
    auto bin = [&](const Mode& k) {
        std::size_t flat = 0;
        for (int i = 0; i < L.d; ++i) flat = flat * M_ + static_cast<std::size_t>(((k[i] % M_) + M_) % M_);
        return flat;
    };
    const double r = 1.0 / std::numbers::sqrt2;
    for (std::size_t b = 0; b < nb; ++b) {
        const RealMode& m = L.basis[b];
        const double a = amplitudes[b];
        const std::size_t plus = bin(m.k), minus = bin(-m.k);
        switch (m.part) {
            case FourierPart::constant: buf[plus][0] += a; break;
            case FourierPart::cosine:
                buf[plus][0] += a * r;
                buf[minus][0] += a * r;
                break;
            case FourierPart::sine:
                buf[plus][1] -= a * r;
                buf[minus][1] += a * r;
                break;
        }
    }
    const std::vector<int> dims(L.d, M_);
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft(L.d, dims.data(), buf.get(), buf.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    for (int p = 0; p < points_; ++p) out[p] = buf[p][0];
    return out;
}

double green_truncated(std::span<const double> x, int d, int N) {
    check_dim(d);
    if (static_cast<int>(x.size()) != d) throw std::invalid_argument("green: point dimension mismatch");
    CompensatedSum s;
    for (const Mode& k : l1_ball(d, N)) s.add(std::cos(phase(k, x)) / lambda(k, d));
    return s.value();
}

double c_variance(int d, int N) {
    const std::vector<double> origin(d, 0.0);
    return green_truncated(origin, d, N);
}

double pair_with_testfunction(const FieldSample& sample, const std::map<RealMode, double>& phihat) {
    std::map<RealMode, std::size_t> where;
    for (std::size_t i = 0; i < sample.lattice.basis.size(); ++i) where.emplace(sample.lattice.basis[i], i);
    double s = 0;
    for (const auto& [mode, value] : phihat) {
        auto it = where.find(mode);
        if (it == where.end()) throw std::out_of_range("pairing: test function mode outside the lattice");
        s += sample.amplitudes[it->second] * value;
    }
    return s;
}

double sobolev_sum(double s, int d, int N, const SpectralProfile& profile) {
    check_dim(d);
    double shift = 0;
    if (profile.kind == SpectralProfile::Kind::gff)
        shift = -1;
    else if (profile.kind != SpectralProfile::Kind::white)
        throw std::invalid_argument("sobolev_sum: profile must be white or gff");
    CompensatedSum sum;
    for (const Mode& k : l1_ball(d, N)) sum.add(std::pow(lambda(k, d), s + shift));
    return sum.value();
}

std::vector<double> wick_power_field(const FieldSample& sample, int n, int M, GridMethod method) {
    if (n < 1) throw std::invalid_argument("wick power: n must be positive");
    double var;
    if (sample.profile.kind == SpectralProfile::Kind::gff) {
        var = c_variance(sample.lattice.d, sample.lattice.N);
    } else {
        CompensatedSum s;
        for (double l : sample.lattice.lambdas) s.add(std::pow(l, -2 * sample.profile.exponent()));
        var = s.value();
    }
    std::vector<double> g = sample.grid(M, method);
    for (double& v : g) v = scaled_hermite(n, v, var);
    return g;
}

ModeArray weight_array(int d, int N, double exponent) {
    ModeArray w(d, N);
    for (const Mode& k : l1_ball(d, N)) {
        const double l = lambda(k, d);
        w[k] = exponent == 1.0 ? 1.0 / l : std::pow(l, -exponent);
    }
    return w;
}

double wick_integral_variance(int d, int N, int n, ConvolutionMethod method) {
    check_dim(d);
    if (n < 2) throw std::invalid_argument("wick_integral_variance: n must be at least 2");
    const ModeArray w = weight_array(d, N);
    const int a = (n + 1) / 2, b = n - a;
    auto power = [&](int p) {
        ModeArray acc = w;
        for (int i = 1; i < p; ++i) acc = convolve(acc, w, method);
        return acc;
    };
    const ModeArray A = power(a);
    const ModeArray B = b == a ? A : power(b);
    double fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    return fact * dot_reflected(A, B);
}

namespace {

// Integral of |x|^{-p} outside the cube [-1, 1]^d, via
// (1/(p-d)) * integral over the unit sphere of (max_i |w_i|)^{p-d}.
double outside_cube_integral(int d, double p) {
    const double e = p - d;
    if (d == 1) return 2.0 / e;
    const int steps = 2000;
    double s = 0;
    if (d == 2) {
        for (int i = 0; i < steps; ++i) {
            const double t = two_pi * (i + 0.5) / steps;
            s += std::pow(std::max(std::abs(std::cos(t)), std::abs(std::sin(t))), e);
        }
        return s * two_pi / steps / e;
    }
    for (int i = 0; i < steps; ++i) {
        const double th = std::numbers::pi * (i + 0.5) / steps;
        for (int j = 0; j < steps; ++j) {
            const double ph = two_pi * (j + 0.5) / steps;
            const double w0 = std::sin(th) * std::cos(ph), w1 = std::sin(th) * std::sin(ph), w2 = std::cos(th);
            const double mx = std::max({std::abs(w0), std::abs(w1), std::abs(w2)});
            s += std::pow(mx, e) * std::sin(th);
        }
    }
    return s * (std::numbers::pi / steps) * (two_pi / steps) / e;
}

}  // namespace

YoungReport young_sum_check(int d, double n, double m, int kmax, int cutoff) {
    check_dim(d);
    if (!(n > 0 && m > 0 && n < d && m < d && n + m > d))
        throw std::invalid_argument("young_sum_check: need n + m > d > n, m > 0");
    if (kmax < 1) throw std::invalid_argument("young_sum_check: kmax must be positive");
    YoungReport rep;
    rep.cutoff = cutoff > 0 ? cutoff : 8 * kmax;
    const int L = rep.cutoff;
    // |x|^{-e} from the squared norm, with a fast path for even integer exponents.
    auto inv_pow = [](long r2, double e) {
        if (e == 2.0) return 1.0 / static_cast<double>(r2);
        if (e == 1.0) return 1.0 / std::sqrt(static_cast<double>(r2));
        return std::pow(static_cast<double>(r2), -0.5 * e);
    };
    std::vector<Mode> directions = {{1, 0, 0}};
    if (d >= 2) directions.push_back({1, 1, 0});
    if (d >= 3) directions.push_back({1, 1, 1});
    const int hi1 = d > 1 ? L : 0, hi2 = d > 2 ? L : 0;
    // Continuum estimate of the part of the sum outside the cube, where
    // |k1|, |k2| >> |k|.
    rep.tail = outside_cube_integral(d, n + m) * std::pow(L + 0.5, d - n - m);
    for (const Mode& dir : directions)
        for (int j = 1; j <= kmax; ++j) {
            const Mode k{j * dir[0], j * dir[1], j * dir[2]};
            CompensatedSum s;
            for (int a = -L; a <= L; ++a)
                for (int b = -hi1; b <= hi1; ++b)
                    for (int c = -hi2; c <= hi2; ++c) {
                        const Mode k1{a, b, c};
                        const Mode k2{k[0] - a, k[1] - b, k[2] - c};
                        const long r1 = squared_norm(k1), r2 = squared_norm(k2);
                        if (r1 == 0 || r2 == 0) continue;
                        s.add(inv_pow(r1, n) * inv_pow(r2, m));
                    }
            YoungRow row;
            row.k = k;
            row.norm = std::sqrt(static_cast<double>(squared_norm(k)));
            row.sum = s.value() + rep.tail;
            row.ratio = std::pow(row.norm, n + m - d) * row.sum;
            rep.constant = std::max(rep.constant, row.ratio);
            rep.rows.push_back(row);
        }
    return rep;
}

double gff1_increment_variance(double x, double y, int N) {
    CompensatedSum s;
    for (int k = -N; k <= N; ++k) s.add(2.0 * (1.0 - std::cos(two_pi * k * (y - x))) / lambda({k, 0, 0}, 1));
    return s.value();
}

}  // namespace wickworks
