#pragma once

// Radix-2 FFT and the centered unitary 2-D transform used by the PSF
// pipeline. Grids are square powers of two; for even N the centered DFT
//   F(u,v) = 1/sqrt(WH) * sum f(x,y) exp(-2*pi*i*((u-W/2)(x-W/2)/W + ...))
// equals fftshift(FFT(ifftshift(f))) exactly, which is how it is computed.

#include <complex>
#include <vector>

#include "flare/core.hpp"

namespace flare {

using Complex = std::complex<double>;

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

namespace detail {

// Roots of unity exp(-2*pi*i*k/n) for k in [0, n/2).
inline std::vector<Complex> fft_roots(std::size_t n) {
  std::vector<Complex> roots(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    double ang = -2.0 * kPi * double(k) / double(n);
    roots[k] = Complex(std::cos(ang), std::sin(ang));
  }
  return roots;
}

inline void fft_radix2(Complex* a, std::size_t n,
                       const std::vector<Complex>& roots, bool inverse) {
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const std::size_t root_stride_base = roots.size() * 2;  // == n for full table
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = root_stride_base / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        Complex w = roots[k * stride];
        if (inverse) w = std::conj(w);
        Complex u = a[i + k];
        Complex v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

// Swap quadrants in place; for even dimensions fftshift == ifftshift.
inline void fftshift2d(Complex* a, int w, int h) {
  const int hw = w / 2, hh = h / 2;
  for (int y = 0; y < hh; ++y)
    for (int x = 0; x < w; ++x) {
      int x2 = (x + hw) % w;
      int y2 = y + hh;
      std::swap(a[std::size_t(y) * w + x], a[std::size_t(y2) * w + x2]);
    }
}

}  // namespace detail

// In-place unitary 2-D FFT (scaled by 1/sqrt(WH) in either direction).
inline void fft2d(std::vector<Complex>& data, int w, int h,
                  bool inverse = false) {
  check_arg(is_power_of_two(w) && is_power_of_two(h),
            "fft2d: dimensions must be powers of two");
  check_arg(data.size() == std::size_t(w) * h, "fft2d: size mismatch");
  const auto row_roots = detail::fft_roots(w);
  for (int y = 0; y < h; ++y)
    detail::fft_radix2(data.data() + std::size_t(y) * w, w, row_roots, inverse);
  const auto col_roots = w == h ? row_roots : detail::fft_roots(h);
  std::vector<Complex> col(h);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) col[y] = data[std::size_t(y) * w + x];
    detail::fft_radix2(col.data(), h, col_roots, inverse);
    for (int y = 0; y < h; ++y) data[std::size_t(y) * w + x] = col[y];
  }
  const double norm = 1.0 / std::sqrt(double(w) * double(h));
  for (Complex& c : data) c *= norm;
}

// Centered unitary transform: both the spatial origin and the zero
// frequency sit at sample (W/2, H/2).
inline void centered_dft2d(std::vector<Complex>& data, int w, int h,
                           bool inverse = false) {
  detail::fftshift2d(data.data(), w, h);
  fft2d(data, w, h, inverse);
  detail::fftshift2d(data.data(), w, h);
}

}  // namespace flare
