#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace swt {

enum class WaveletFamily { Haar, Daubechies };

/// Compactly supported orthonormal wavelet with q vanishing moments,
/// materialized as exact samples of psi at dyadic cell midpoints
/// (i + 1/2) * 2^-resolution over the support [0, 2q - 1].
struct WaveletSpec {
    WaveletFamily family = WaveletFamily::Haar;
    int q = 1;           // vanishing moments; support length 2q - 1
    int resolution = 12; // cell width 2^-resolution

    std::vector<double> lowpass;  // scaling filter, sums to sqrt(2)
    std::vector<double> highpass; // g_k = (-1)^k h_{L-1-k}
    std::vector<double> psi;      // midpoint samples

    std::vector<double> moments;  // quadrature of t^m psi(t), m = 0..q
    std::vector<double> abs_moments; // quadrature of |t|^m |psi(t)|

    double support_right() const { return 2.0 * q - 1.0; }
    double cell_width() const;
    std::size_t cells() const { return psi.size(); }
    std::string family_name() const;
};

/// Scaling filter of the Daubechies family with q vanishing moments
/// (q = 1 is Haar), derived by spectral factorization. Length 2q, sums
/// to sqrt(2).
std::vector<double> daubechies_filter(int q);

/// Builds the wavelet and verifies the vanishing-moment property on the
/// sampled psi: quadrature moments 0..q-1 must vanish to 1e-6 relative to
/// the absolute moments and moment q must not vanish.
WaveletSpec build_wavelet(WaveletFamily family, int q, int resolution = 12);

} // namespace swt
