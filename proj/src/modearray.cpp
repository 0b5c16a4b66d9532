#include "wickworks/modearray.hpp"

#include "wickworks/budget.hpp"

#include <fftw3.h>

#include <complex>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace wickworks {

int l1_norm(const Mode& k) { return std::abs(k[0]) + std::abs(k[1]) + std::abs(k[2]); }
long squared_norm(const Mode& k) { return long(k[0]) * k[0] + long(k[1]) * k[1] + long(k[2]) * k[2]; }
Mode operator-(const Mode& k) { return {-k[0], -k[1], -k[2]}; }
Mode operator+(const Mode& a, const Mode& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

ModeArray::ModeArray(int dim, int radius) : dim_(dim), radius_(radius) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("mode array: dimension must be 1, 2 or 3");
    if (radius < 0) throw std::invalid_argument("mode array: negative radius");
    std::size_t n = 1;
    for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(side());
    values_.assign(n, 0.0);
}

bool ModeArray::contains(const Mode& k) const {
    for (int i = 0; i < 3; ++i) {
        if (i < dim_) {
            if (k[i] < -radius_ || k[i] > radius_) return false;
        } else if (k[i] != 0) {
            return false;
        }
    }
    return true;
}

std::size_t ModeArray::index(const Mode& k) const {
    std::size_t flat = 0;
    for (int i = 0; i < dim_; ++i) flat = flat * side() + static_cast<std::size_t>(k[i] + radius_);
    return flat;
}

Mode ModeArray::mode_at(std::size_t flat) const {
    Mode k{0, 0, 0};
    for (int i = dim_ - 1; i >= 0; --i) {
        k[i] = static_cast<int>(flat % side()) - radius_;
        flat /= side();
    }
    return k;
}

void ModeArray::clip_to_l1_ball() {
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (l1_norm(mode_at(i)) > radius_) values_[i] = 0.0;
}

namespace {

// FFTW planning is not thread safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int fft_size(int minimum) {
    for (int n = minimum;; ++n) {
        int m = n;
        for (int p : {2, 3, 5, 7})
            while (m % p == 0) m /= p;
        if (m == 1) return n;
    }
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

ModeArray convolve_fft(const ModeArray& a, const ModeArray& b) {
    const int d = a.dim();
    const int R = a.radius() + b.radius();
    const int P = fft_size(a.side() + b.side() - 1);
    std::size_t real_count = 1;
    for (int i = 0; i < d; ++i) real_count *= P;
    const std::size_t complex_count = real_count / P * (P / 2 + 1);

    std::unique_ptr<double[], FftwFree> ra(fftw_alloc_real(real_count)), rb(fftw_alloc_real(real_count));
    std::unique_ptr<fftw_complex[], FftwFree> ca(fftw_alloc_complex(complex_count)),
        cb(fftw_alloc_complex(complex_count));
    std::fill(ra.get(), ra.get() + real_count, 0.0);
    std::fill(rb.get(), rb.get() + real_count, 0.0);

    // Place offset indices (k + R_x) in the padded grid; linear convolution of
    // the offsets lands at k + R_a + R_b without wrap-around.
    auto scatter = [&](const ModeArray& src, double* dst) {
        for (std::size_t i = 0; i < src.size(); ++i) {
            const double v = src.values()[i];
            if (v == 0.0) continue;
            const Mode k = src.mode_at(i);
            std::size_t flat = 0;
            for (int j = 0; j < d; ++j) flat = flat * P + static_cast<std::size_t>(k[j] + src.radius());
            dst[flat] = v;
        }
    };
    scatter(a, ra.get());
    scatter(b, rb.get());

    const std::vector<int> dims(d, P);
    fftw_plan fa, fb, back;
    {
        std::lock_guard lock(planner_mutex());
        fa = fftw_plan_dft_r2c(d, dims.data(), ra.get(), ca.get(), FFTW_ESTIMATE);
        fb = fftw_plan_dft_r2c(d, dims.data(), rb.get(), cb.get(), FFTW_ESTIMATE);
        back = fftw_plan_dft_c2r(d, dims.data(), ca.get(), ra.get(), FFTW_ESTIMATE);
    }
    fftw_execute(fa);
    fftw_execute(fb);
    for (std::size_t i = 0; i < complex_count; ++i) {
        const std::complex<double> x(ca[i][0], ca[i][1]), y(cb[i][0], cb[i][1]);
        const std::complex<double> z = x * y;
        ca[i][0] = z.real();
        ca[i][1] = z.imag();
    }
    fftw_execute(back);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fa);
        fftw_destroy_plan(fb);
        fftw_destroy_plan(back);
    }

    ModeArray out(d, R);
    const double scale = 1.0 / static_cast<double>(real_count);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Mode k = out.mode_at(i);
        if (l1_norm(k) > R) continue;
        std::size_t flat = 0;
        for (int j = 0; j < d; ++j) flat = flat * P + static_cast<std::size_t>(k[j] + R);
        out.values()[i] = ra[flat] * scale;
    }
    return out;
}

ModeArray convolve_direct(const ModeArray& a, const ModeArray& b, int threads) {
    const ModeArray& sparse = a;
    std::vector<std::pair<Mode, double>> nonzero;
    for (std::size_t i = 0; i < sparse.size(); ++i)
        if (sparse.values()[i] != 0.0) nonzero.emplace_back(sparse.mode_at(i), sparse.values()[i]);
    ModeArray out(a.dim(), a.radius() + b.radius());
    parallel_for(out.size(), threads, [&](std::size_t i) {
        const Mode k = out.mode_at(i);
        if (l1_norm(k) > out.radius()) return;
        CompensatedSum s;
        for (const auto& [j, v] : nonzero) {
            const Mode rest{k[0] - j[0], k[1] - j[1], k[2] - j[2]};
            const double w = b.at(rest);
            if (w != 0.0) s.add(v * w);
        }
        out.values()[i] = s.value();
    });
    return out;
}

}  // namespace

ModeArray convolve(const ModeArray& a, const ModeArray& b, ConvolutionMethod method, int threads) {
    if (a.dim() != b.dim()) throw std::invalid_argument("convolve: dimension mismatch");
    if (method == ConvolutionMethod::automatic) {
        std::size_t nnz = 0;
        for (double v : a.values()) nnz += v != 0.0;
        const double out_side = a.side() + b.side() - 1.0;
        double out_size = 1;
        for (int i = 0; i < a.dim(); ++i) out_size *= out_side;
        method = out_size * static_cast<double>(nnz) < 2e7 ? ConvolutionMethod::direct : ConvolutionMethod::fft;
    }
    return method == ConvolutionMethod::direct ? convolve_direct(a, b, threads) : convolve_fft(a, b);
}

double dot_reflected(const ModeArray& a, const ModeArray& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dot_reflected: dimension mismatch");
    CompensatedSum s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double v = a.values()[i];
        if (v == 0.0) continue;
        const double w = b.at(-a.mode_at(i));
        if (w != 0.0) s.add(v * w);
    }
    return s.value();
}

ModeArray multiply(const ModeArray& a, const ModeArray& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("multiply: dimension mismatch");
    const ModeArray& small = a.radius() <= b.radius() ? a : b;
    const ModeArray& large = a.radius() <= b.radius() ? b : a;
    ModeArray out(small.dim(), small.radius());
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values()[i] = small.values()[i] * large.at(small.mode_at(i));
    return out;
}

double total(const ModeArray& a) {
    CompensatedSum s;
    for (double v : a.values()) s.add(v);
    return s.value();
}

}  // namespace wickworks
