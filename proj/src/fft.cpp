#include "swt/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "swt/errors.hpp"

namespace swt {

namespace {

// The FFTW planner is not thread safe; plan creation is serialized. Plans
// are created with FFTW_ESTIMATE so outputs are bit-reproducible run to run.
std::mutex planner_mutex;

} // namespace

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

RealSpectrum real_fft(const std::vector<double>& x, std::size_t n) {
    if (n < x.size() || (n & (n - 1)) != 0)
        throw ParameterError("real_fft: transform size must be a power of two >= input length");
    std::vector<double> in(n, 0.0);
    std::memcpy(in.data(), x.data(), x.size() * sizeof(double));
    RealSpectrum out;
    out.n = n;
    out.bins.resize(n / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                    reinterpret_cast<fftw_complex*>(out.bins.data()),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(plan);
    }
    return out;
}

std::vector<double> real_ifft(const RealSpectrum& spec) {
    const std::size_t n = spec.n;
    std::vector<std::complex<double>> bins = spec.bins; // c2r destroys its input
    std::vector<double> out(n);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                    reinterpret_cast<fftw_complex*>(bins.data()), out.data(),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(plan);
    }
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : out) v *= scale;
    return out;
}

RealSpectrum spectrum_product(const RealSpectrum& a, const RealSpectrum& b) {
    if (a.n != b.n) throw ShapeError("spectrum_product: transform sizes differ");
    RealSpectrum out;
    out.n = a.n;
    out.bins.resize(a.bins.size());
    for (std::size_t i = 0; i < a.bins.size(); ++i) out.bins[i] = a.bins[i] * b.bins[i];
    return out;
}

std::vector<double> fft_convolve(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t full = a.size() + b.size() - 1;
    const std::size_t n = next_pow2(full);
    auto prod = spectrum_product(real_fft(a, n), real_fft(b, n));
    auto conv = real_ifft(prod);
    conv.resize(full);
    return conv;
}

} // namespace swt
