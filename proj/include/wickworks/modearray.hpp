#pragma once

// Dense arrays over the lattice cube [-R, R]^d (d <= 3) and their
// convolutions. Every array built here is supported in the l1 ball of radius
// R, so the cube radius doubles as the support radius.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace wickworks {

using Mode = std::array<int, 3>;  // unused trailing coordinates are 0

int l1_norm(const Mode& k);
long squared_norm(const Mode& k);
Mode operator-(const Mode& k);
Mode operator+(const Mode& a, const Mode& b);

// Kahan-Babuska compensated accumulator.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (abs_of(sum_) >= abs_of(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + carry_; }

private:
    static double abs_of(double x) { return x < 0 ? -x : x; }
    double sum_ = 0, carry_ = 0;
};

class ModeArray {
public:
    ModeArray() = default;
    ModeArray(int dim, int radius);

    int dim() const { return dim_; }
    int radius() const { return radius_; }
    int side() const { return 2 * radius_ + 1; }
    std::size_t size() const { return values_.size(); }

    bool contains(const Mode& k) const;
    std::size_t index(const Mode& k) const;
    Mode mode_at(std::size_t flat) const;

    // Zero outside the cube.
    double at(const Mode& k) const { return contains(k) ? values_[index(k)] : 0.0; }
    double& operator[](const Mode& k) { return values_[index(k)]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    // Drops entries outside the l1 ball (noise from fast transforms).
    void clip_to_l1_ball();

private:
    int dim_ = 0;
    int radius_ = 0;
    std::vector<double> values_;
};

enum class ConvolutionMethod { automatic, direct, fft };

// (a * b)(k) = sum_j a(j) b(k - j). The direct method is a gather with a
// fixed summation order per output entry, so any thread count gives the
// same bits.
ModeArray convolve(const ModeArray& a, const ModeArray& b, ConvolutionMethod method = ConvolutionMethod::automatic,
                   int threads = 0);
// sum_k a(k) b(-k), compensated.
double dot_reflected(const ModeArray& a, const ModeArray& b);
// Pointwise product on the smaller cube.
ModeArray multiply(const ModeArray& a, const ModeArray& b);
// sum_k a(k), compensated.
double total(const ModeArray& a);

}  // namespace wickworks
