#include "wcsf/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

#include "wcsf/error.hpp"

namespace wcsf {

namespace {

// cos(kx), sin(kx) for k = 0..kmax by angle addition.
void harmonics(double x, int kmax, std::vector<double>& c, std::vector<double>& s) {
  c.resize(kmax + 1);
  s.resize(kmax + 1);
  c[0] = 1.0;
  s[0] = 0.0;
  if (kmax == 0) return;
  const double c1 = std::cos(x);
  const double s1 = std::sin(x);
  c[1] = c1;
  s[1] = s1;
  for (int k = 2; k <= kmax; ++k) {
    c[k] = c[k - 1] * c1 - s[k - 1] * s1;
    s[k] = s[k - 1] * c1 + c[k - 1] * s1;
  }
}

// Canonical wavevector: first nonzero component positive.
bool canonicalize(FourierMode& m) {
  const bool flip = m.k[0] < 0 || (m.k[0] == 0 && m.k[1] < 0);
  if (flip) {
    m.k = {-m.k[0], -m.k[1]};
    m.sin = -m.sin;
  }
  return m.k[0] != 0 || m.k[1] != 0;
}

int side_for(int dim, int points) {
  if (dim == 1) return points;
  return std::max(2, static_cast<int>(std::lround(std::sqrt(static_cast<double>(points)))));
}

}  // namespace

FourierField::FourierField(int dim, std::vector<FourierMode> modes) : dim_(dim) {
  if (dim != 1 && dim != 2) throw Error(ErrorCode::InvalidArgument, "Fourier field dimension must be 1 or 2");
  std::map<std::array<int, 2>, FourierMode> merged;
  for (FourierMode m : modes) {
    if (dim == 1 && m.k[1] != 0) throw Error(ErrorCode::InvalidArgument, "1-D field with a 2-D wavevector");
    if (!canonicalize(m)) m.sin = 0.0;
    if (!std::isfinite(m.cos) || !std::isfinite(m.sin))
      throw Error(ErrorCode::InvalidArgument, "non-finite Fourier coefficient");
    auto& slot = merged[m.k];
    slot.k = m.k;
    slot.cos += m.cos;
    slot.sin += m.sin;
  }
  for (const auto& [k, m] : merged) {
    if (m.cos == 0.0 && m.sin == 0.0 && (k[0] != 0 || k[1] != 0)) continue;
    modes_.push_back(m);
    bandwidth_ = std::max({bandwidth_, std::abs(k[0]), std::abs(k[1])});
  }
  if (modes_.empty()) modes_.push_back(FourierMode{});
}

FourierField FourierField::constant(double c, int dim) {
  return FourierField(dim, {FourierMode{{0, 0}, c, 0.0}});
}

FourierField FourierField::series(std::span<const double> cos_coeffs, std::span<const double> sin_coeffs) {
  std::vector<FourierMode> modes;
  const std::size_t n = std::max(cos_coeffs.size(), sin_coeffs.size());
  for (std::size_t k = 0; k < n; ++k) {
    FourierMode m;
    m.k = {static_cast<int>(k), 0};
    m.cos = k < cos_coeffs.size() ? cos_coeffs[k] : 0.0;
    m.sin = (k > 0 && k < sin_coeffs.size()) ? sin_coeffs[k] : 0.0;
    modes.push_back(m);
  }
  return FourierField(1, std::move(modes));
}

FourierField FourierField::from_modes(int dim, std::vector<FourierMode> modes) {
  return FourierField(dim, std::move(modes));
}

FourierField FourierField::project(int dim, const std::function<double(std::span<const double>)>& f,
                                   int bandwidth) {
  if (bandwidth < 0) throw Error(ErrorCode::InvalidArgument, "negative bandwidth");
  std::vector<FourierMode> modes;
  if (dim == 1) {
    const int n = std::max(4096, 4 * bandwidth + 4);
    std::vector<double> samples(n);
    for (int j = 0; j < n; ++j) {
      const double x = kTwoPi * j / n;
      samples[j] = f(std::span<const double>(&x, 1));
    }
    std::vector<double> c, s;
    std::vector<double> acc_c(bandwidth + 1, 0.0), acc_s(bandwidth + 1, 0.0);
    for (int j = 0; j < n; ++j) {
      harmonics(kTwoPi * j / n, bandwidth, c, s);
      for (int k = 0; k <= bandwidth; ++k) {
        acc_c[k] += samples[j] * c[k];
        acc_s[k] += samples[j] * s[k];
      }
    }
    for (int k = 0; k <= bandwidth; ++k) {
      const double w = (k == 0 ? 1.0 : 2.0) / n;
      modes.push_back({{k, 0}, acc_c[k] * w, acc_s[k] * w});
    }
  } else if (dim == 2) {
    const int n = std::max(64, 4 * bandwidth + 4);
    using cplx = std::complex<double>;
    // partial[k2 + K][j1] = sum_j2 f(x1_j1, x2_j2) e^{-i k2 x2}
    const int kk = bandwidth;
    std::vector<std::vector<cplx>> partial(2 * kk + 1, std::vector<cplx>(n));
    for (int j1 = 0; j1 < n; ++j1) {
      for (int j2 = 0; j2 < n; ++j2) {
        const double x[2] = {kTwoPi * j1 / n, kTwoPi * j2 / n};
        const double v = f(std::span<const double>(x, 2));
        for (int k2 = -kk; k2 <= kk; ++k2) partial[k2 + kk][j1] += v * std::polar(1.0, -k2 * x[1]);
      }
    }
    for (int k1 = 0; k1 <= kk; ++k1) {
      for (int k2 = -kk; k2 <= kk; ++k2) {
        if (k1 == 0 && k2 < 0) continue;
        cplx coef = 0.0;
        for (int j1 = 0; j1 < n; ++j1) coef += partial[k2 + kk][j1] * std::polar(1.0, -k1 * kTwoPi * j1 / n);
        coef /= static_cast<double>(n) * n;
        // f ~ sum c_k e^{ik.x}; pairing k with -k gives 2Re(c) cos + (-2Im(c)) sin
        if (k1 == 0 && k2 == 0)
          modes.push_back({{0, 0}, coef.real(), 0.0});
        else
          modes.push_back({{k1, k2}, 2.0 * coef.real(), -2.0 * coef.imag()});
      }
    }
  } else {
    throw Error(ErrorCode::InvalidArgument, "Fourier field dimension must be 1 or 2");
  }
  double biggest = 0.0;
  for (const auto& m : modes) biggest = std::max({biggest, std::abs(m.cos), std::abs(m.sin)});
  const double cut = 1e-18 * biggest;
  for (auto& m : modes) {
    if (std::abs(m.cos) < cut) m.cos = 0.0;
    if (std::abs(m.sin) < cut) m.sin = 0.0;
  }
  return FourierField(dim, std::move(modes));
}

FourierField FourierField::exp_cos(double amplitude, int bandwidth) {
  return project(1, [amplitude](std::span<const double> x) { return std::exp(amplitude * std::cos(x[0])); },
                 bandwidth);
}

double FourierField::value(std::span<const double> x) const {
  if (static_cast<int>(x.size()) < dim_) throw Error(ErrorCode::InvalidArgument, "point dimension too small");
  if (is_constant()) return modes_.front().cos;
  thread_local std::vector<double> c1, s1, c2, s2;
  harmonics(x[0], bandwidth_, c1, s1);
  if (dim_ == 2) harmonics(x[1], bandwidth_, c2, s2);
  double v = 0.0;
  for (const auto& m : modes_) {
    double cs, sn;
    if (dim_ == 1) {
      cs = c1[m.k[0]];
      sn = s1[m.k[0]];
    } else {
      const int k2 = std::abs(m.k[1]);
      const double sgn = m.k[1] < 0 ? -1.0 : 1.0;
      cs = c1[m.k[0]] * c2[k2] - s1[m.k[0]] * sgn * s2[k2];
      sn = s1[m.k[0]] * c2[k2] + c1[m.k[0]] * sgn * s2[k2];
    }
    v += m.cos * cs + m.sin * sn;
  }
  return v;
}

FieldJet FourierField::jet(std::span<const double> x) const {
  if (static_cast<int>(x.size()) < dim_) throw Error(ErrorCode::InvalidArgument, "point dimension too small");
  FieldJet out;
  out.grad = Vec::Zero(dim_);
  out.hess = Mat::Zero(dim_, dim_);
  if (is_constant()) {
    out.value = modes_.front().cos;
    return out;
  }
  thread_local std::vector<double> c1, s1, c2, s2;
  harmonics(x[0], bandwidth_, c1, s1);
  if (dim_ == 2) harmonics(x[1], bandwidth_, c2, s2);
  for (const auto& m : modes_) {
    double cs, sn;
    if (dim_ == 1) {
      cs = c1[m.k[0]];
      sn = s1[m.k[0]];
    } else {
      const int k2 = std::abs(m.k[1]);
      const double sgn = m.k[1] < 0 ? -1.0 : 1.0;
      cs = c1[m.k[0]] * c2[k2] - s1[m.k[0]] * sgn * s2[k2];
      sn = s1[m.k[0]] * c2[k2] + c1[m.k[0]] * sgn * s2[k2];
    }
    const double val = m.cos * cs + m.sin * sn;
    const double dphase = -m.cos * sn + m.sin * cs;
    out.value += val;
    for (int d = 0; d < dim_; ++d) {
      out.grad(d) += m.k[d] * dphase;
      for (int e = 0; e < dim_; ++e) out.hess(d, e) -= static_cast<double>(m.k[d]) * m.k[e] * val;
    }
  }
  return out;
}

void FourierField::for_each_grid_point(int points, const std::function<void(std::span<const double>)>& fn) const {
  const int side = side_for(dim_, points);
  if (dim_ == 1) {
    for (int j = 0; j < side; ++j) {
      const double x = kTwoPi * j / side;
      fn(std::span<const double>(&x, 1));
    }
    return;
  }
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j) {
      const double x[2] = {kTwoPi * i / side, kTwoPi * j / side};
      fn(std::span<const double>(x, 2));
    }
}

double FourierField::grid_min(int points) const {
  double lo = std::numeric_limits<double>::infinity();
  for_each_grid_point(points, [&](std::span<const double> x) { lo = std::min(lo, value(x)); });
  return lo;
}

double FourierField::grid_max(int points) const {
  double hi = -std::numeric_limits<double>::infinity();
  for_each_grid_point(points, [&](std::span<const double> x) { hi = std::max(hi, value(x)); });
  return hi;
}

}  // namespace wcsf
