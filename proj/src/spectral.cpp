#include "wcsf/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>

#include "wcsf/error.hpp"
#include "wcsf/types.hpp"

namespace wcsf::spectral {

namespace {

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// FFTW planning is not thread safe; executing a finished plan on new arrays is.
// FFTW_ESTIMATE keeps plan selection (and thus rounding) deterministic.
const Plans& plans_for(int m) {
  static std::mutex mutex;
  static std::map<int, Plans> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  std::vector<double> real(m);
  std::vector<fftw_complex> spec(m / 2 + 1);
  Plans p;
  p.forward = fftw_plan_dft_r2c_1d(m, real.data(), spec.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.backward = fftw_plan_dft_c2r_1d(m, spec.data(), real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  return cache.emplace(m, p).first->second;
}

using Spectrum = std::vector<std::complex<double>>;

Spectrum forward(std::span<const double> f) {
  const int m = static_cast<int>(f.size());
  const Plans& p = plans_for(m);
  std::vector<double> in(f.begin(), f.end());
  Spectrum out(m / 2 + 1);
  fftw_execute_dft_r2c(p.forward, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

// Consumes the spectrum (c2r overwrites its input). Output is unnormalized.
void backward(Spectrum& spec, std::span<double> out) {
  const int m = static_cast<int>(out.size());
  const Plans& p = plans_for(m);
  fftw_execute_dft_c2r(p.backward, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
}

void check_size(std::size_t m) {
  if (!is_power_of_two(static_cast<int>(m)))
    throw Error(ErrorCode::InvalidArgument, "spectral grid size must be a power of two");
}

}  // namespace

bool is_power_of_two(int m) { return m >= 2 && (m & (m - 1)) == 0; }

void differentiate(std::span<const double> f, std::span<double> d1, std::span<double> d2) {
  check_size(f.size());
  const int m = static_cast<int>(f.size());
  const int half = m / 2;
  const Spectrum spec = forward(f);
  const double norm = 1.0 / m;
  if (!d1.empty()) {
    Spectrum s(spec.size());
    for (int k = 0; k < half; ++k) s[k] = spec[k] * std::complex<double>(0.0, k * norm);
    s[half] = 0.0;
    backward(s, d1);
  }
  if (!d2.empty()) {
    Spectrum s(spec.size());
    for (int k = 0; k <= half; ++k) s[k] = spec[k] * (-static_cast<double>(k) * k * norm);
    backward(s, d2);
  }
}

std::vector<double> derivative(std::span<const double> f) {
  std::vector<double> d(f.size());
  differentiate(f, d, {});
  return d;
}

std::vector<double> interpolate(std::span<const double> f, int m_new) {
  check_size(f.size());
  if (!is_power_of_two(m_new)) throw Error(ErrorCode::InvalidArgument, "target grid size must be a power of two");
  const int m = static_cast<int>(f.size());
  const Spectrum spec = forward(f);
  Spectrum s(m_new / 2 + 1, 0.0);
  const double norm = 1.0 / m;
  if (m_new >= m) {
    for (int k = 0; k < m / 2; ++k) s[k] = spec[k] * norm;
    // old Nyquist cosine splits evenly between +-m/2
    s[m / 2] = (m_new == m ? spec[m / 2] : 0.5 * spec[m / 2]) * norm;
  } else {
    for (int k = 0; k < m_new / 2; ++k) s[k] = spec[k] * norm;
    s[m_new / 2] = 2.0 * spec[m_new / 2].real() * norm;
  }
  std::vector<double> out(m_new);
  backward(s, out);
  return out;
}

std::vector<double> evaluate_interpolant(std::span<const double> f, std::span<const double> u) {
  check_size(f.size());
  const int m = static_cast<int>(f.size());
  const Spectrum spec = forward(f);
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    double v = spec[0].real();
    for (int k = 1; k < m / 2; ++k) v += 2.0 * (spec[k] * std::polar(1.0, k * u[i])).real();
    v += spec[m / 2].real() * std::cos(0.5 * m * u[i]);
    out[i] = v / m;
  }
  return out;
}

}  // namespace wcsf::spectral
