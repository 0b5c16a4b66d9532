#pragma once

// Gaussian fields on the torus T^d = [0,1)^d, d in {1,2,3}, built spectrally
// from the modes k in Z^d with |k_1| + ... + |k_d| <= N (an l1 ball).
// Eigenvalues are lambda_k = 1 + (2 pi)^d |k|^2.

#include "wickworks/modearray.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace wickworks {

double lambda(const Mode& k, int d);

// Real Fourier basis: the constant 1, and sqrt(2) cos(2 pi k.x),
// sqrt(2) sin(2 pi k.x) for one representative k of each pair {k, -k}.
enum class FourierPart { constant, cosine, sine };
struct RealMode {
    Mode k{0, 0, 0};
    FourierPart part = FourierPart::constant;
    friend auto operator<=>(const RealMode&, const RealMode&) = default;
};

struct ModeLattice {
    int d = 1;
    int N = 0;
    std::vector<Mode> modes;        // all of the l1 ball, lexicographic
    std::vector<double> lambdas;    // per mode
    std::vector<RealMode> basis;    // real basis, |basis| = |modes|
    std::vector<double> basis_lambdas;

    static ModeLattice build(int d, int N);
    double basis_function(std::size_t i, std::span<const double> x) const;
};

// Amplitude weight lambda^{-exponent}: white 0, gff 1/2, fractional s.
struct SpectralProfile {
    enum class Kind { white, gff, fractional };
    Kind kind = Kind::gff;
    double s = 0.5;

    static SpectralProfile white() { return {Kind::white, 0.0}; }
    static SpectralProfile gff() { return {Kind::gff, 0.5}; }
    static SpectralProfile fractional(double s);
    static SpectralProfile parse(const std::string& name);
    double exponent() const { return s; }
    std::string name() const;
};

enum class GridMethod { direct, fft };

struct FieldSample {
    ModeLattice lattice;
    SpectralProfile profile;
    std::uint64_t seed = 0;
    std::vector<double> amplitudes;  // per real basis function, already weighted

    double value_at(std::span<const double> x) const;
    // Values at the points j/M, j in [0, M)^d, first coordinate slowest.
    std::vector<double> grid(int M, GridMethod method = GridMethod::direct) const;
};

FieldSample sample_field(const SpectralProfile& profile, const ModeLattice& lattice, std::uint64_t seed);
// In-place variant for Monte Carlo loops that reuse one generator.
void fill_amplitudes(FieldSample& f, std::mt19937_64& rng);

// Synthesis matrix (grid points x basis) for repeated direct synthesis.
class GridSynthesizer {
public:
    GridSynthesizer(const ModeLattice& lattice, int M, GridMethod method);
    std::vector<double> operator()(std::span<const double> amplitudes) const;
    int points() const { return points_; }

private:
    const ModeLattice* lattice_;
    int M_;
    int points_;
    GridMethod method_;
    std::vector<double> table_;
};

double c_variance(int d, int N);
double green_truncated(std::span<const double> x, int d, int N);

// <sample, phi> = sum over basis functions of amplitude * phihat.
double pair_with_testfunction(const FieldSample& sample, const std::map<RealMode, double>& phihat);

// sum_k lambda_k^s (white) or lambda_k^{s-1} (gff) over the l1 ball.
double sobolev_sum(double s, int d, int N, const SpectralProfile& profile);

// H_n(phi(x); C_N) on the M^d grid.
std::vector<double> wick_power_field(const FieldSample& sample, int n, int M, GridMethod method = GridMethod::direct);

// lambda^{-exponent} on the l1 ball of radius N, as a mode array.
ModeArray weight_array(int d, int N, double exponent = 1.0);

// n! sum_{k_1 + ... + k_n = 0} prod 1/lambda_{k_i}.
double wick_integral_variance(int d, int N, int n, ConvolutionMethod method = ConvolutionMethod::automatic);

struct YoungRow {
    Mode k{0, 0, 0};
    double norm = 0;
    double sum = 0;    // sum_{k1 + k2 = k, k1, k2 != 0} |k1|^-n |k2|^-m
    double ratio = 0;  // |k|^{n+m-d} * sum
};
struct YoungReport {
    std::vector<YoungRow> rows;
    double constant = 0;  // sup of ratio over the rows
    int cutoff = 0;       // |k1|_inf <= cutoff in the inner sum
    double tail = 0;      // continuum estimate added for |k1|_inf > cutoff
    bool zero_excluded = true;
};
// Exponents may be fractional; requires n + m > d > n, m > 0.
YoungReport young_sum_check(int d, double n, double m, int kmax, int cutoff = 0);

// sum_k |e_k(y) - e_k(x)|^2 / lambda_k on T^1.
double gff1_increment_variance(double x, double y, int N);

}  // namespace wickworks
