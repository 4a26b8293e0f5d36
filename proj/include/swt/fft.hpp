#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace swt {

/// Half-complex spectrum of a real sequence zero-padded to the given
/// power-of-two size.
struct RealSpectrum {
    std::size_t n = 0; // transform length
    std::vector<std::complex<double>> bins; // n/2 + 1 entries
};

std::size_t next_pow2(std::size_t n);

/// Forward real FFT at the given (power-of-two) transform size.
RealSpectrum real_fft(const std::vector<double>& x, std::size_t n);

/// Inverse of real_fft, already divided by n.
std::vector<double> real_ifft(const RealSpectrum& spec);

/// Pointwise product of spectra of equal size.
RealSpectrum spectrum_product(const RealSpectrum& a, const RealSpectrum& b);

/// Full linear convolution via FFT (length a.size() + b.size() - 1).
std::vector<double> fft_convolve(const std::vector<double>& a, const std::vector<double>& b);

} // namespace swt
