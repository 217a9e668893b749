#pragma once

// Core value types shared by every module: the float image buffer, the
// deterministic counter-based RNG, error types, and a small index-partitioned
// parallel_for. Everything here is a plain value; operations elsewhere are
// pure functions over these values.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace flare {

inline constexpr double kPi = 3.14159265358979323846;

// Errors ---------------------------------------------------------------

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void check_arg(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Image ----------------------------------------------------------------

// Row-major interleaved float samples, nominal range [0,1] (values may
// exceed 1 before an explicit clip). 1 or 3 channels.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> data;

  Image() = default;
  Image(int w, int h, int c, float fill = 0.0f)
      : width(w), height(h), channels(c) {
    check_arg(w > 0 && h > 0, "image dimensions must be positive");
    check_arg(c == 1 || c == 3, "image must have 1 or 3 channels");
    data.assign(static_cast<std::size_t>(w) * h * c, fill);
  }

  bool empty() const { return data.empty(); }
  std::size_t sample_count() const { return data.size(); }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * height;
  }

  float& at(int x, int y, int c = 0) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  float at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  bool same_shape(const Image& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
};

inline void check_shape_match(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("image shape mismatch");
}

inline bool all_finite(const Image& img) {
  for (float v : img.data)
    if (!std::isfinite(v)) return false;
  return true;
}

// RngStream ------------------------------------------------------------

// Counter-based generator: draw k is a pure function of (seed, k), so streams
// replay identically on any platform and fork() yields independent streams
// without shared state.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() {
    return mix(seed + (++counter) * 0x9e3779b97f4a7c15ull);
  }

  // [0,1)
  double unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  bool bernoulli(double p = 0.5) { return unit() < p; }

  // Box-Muller; consumes exactly two uniforms per call.
  double normal() {
    double u1 = unit();
    double u2 = unit();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  RngStream fork(std::uint64_t stream) const {
    return RngStream{mix(seed ^ mix(stream ^ 0xa0761d6478bd642full)), 0};
  }
};

// FNV-1a, used to derive per-name RNG substreams from manifest names.
inline std::uint64_t hash_name(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// parallel_for ---------------------------------------------------------

inline int default_thread_count() {
  if (const char* env = std::getenv("FLAREKIT_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs f(i) for i in [0,n). Work is partitioned by index, never by
// scheduling, so results are identical for any thread count. The first
// exception thrown by a worker is rethrown on the calling thread.
template <typename F>
void parallel_for(std::size_t n, int threads, F&& f) {
  if (threads <= 0) threads = default_thread_count();
  if (threads == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::size_t t_count = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (std::size_t t = 0; t < t_count; ++t) {
    pool.emplace_back([&, t]() {
      std::size_t begin = n * t / t_count;
      std::size_t end = n * (t + 1) / t_count;
      try {
        for (std::size_t i = begin; i < end; ++i) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace flare
