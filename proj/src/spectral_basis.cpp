#include "bardina/spectral_basis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "bardina/errors.hpp"

namespace bardina {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// The FFTW planner is not reentrant; execution with new-array functions is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool smooth235(int n) {
  for (int p : {2, 3, 5})
    while (n % p == 0) n /= p;
  return n == 1;
}

int fft_size_at_least(int n) {
  int s = std::max(n, 4);
  while (s % 2 != 0 || !smooth235(s)) ++s;
  return s;
}

// Gauss-Legendre nodes (descending in x, i.e. ascending colatitude) and weights.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

}  // namespace

struct BasisPlan::Impl {
  Geometry geometry;
  int truncation = 0;
  bool minimal = false;

  std::vector<SpectralIndex> indices;
  std::vector<double> eigenvalues;
  std::vector<std::size_t> lookup;  // torus: (k1+K)*(2K+1)+(k2+K) -> position

  std::size_t rows = 0, cols = 0;
  std::vector<double> weights;
  std::vector<double> row_coord, col_coord;

  // sphere
  std::vector<double> cos_t, sin_t, gl_w;
  std::vector<std::size_t> lm_base;   // offset of (m, l=m) in a latitude column
  std::size_t lm_count = 0;
  std::vector<double> legendre;       // [row][lm]
  std::vector<double> legendre_dt;    // d/dtheta, [row][lm]

  fftw_plan forward = nullptr;   // r2c
  fftw_plan backward = nullptr;  // c2r

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }

  std::size_t spec_cols() const { return cols / 2 + 1; }
  std::size_t spec_size() const { return rows * spec_cols(); }

  std::size_t lm(int l, int m) const { return lm_base[m] + static_cast<std::size_t>(l - m); }
  double P(std::size_t row, int l, int m) const { return legendre[row * lm_count + lm(l, m)]; }
  double dP(std::size_t row, int l, int m) const { return legendre_dt[row * lm_count + lm(l, m)]; }

  std::size_t sphere_pos(int n, int m) const {
    return static_cast<std::size_t>(n * n - 1 + (m + n));
  }

  void r2c(const double* in, cplx* out) const {
    std::vector<double> scratch(in, in + rows * cols);
    fftw_execute_dft_r2c(forward, scratch.data(), reinterpret_cast<fftw_complex*>(out));
  }
  void c2r(cplx* in, double* out) const {
    fftw_execute_dft_c2r(backward, reinterpret_cast<fftw_complex*>(in), out);
  }
};

namespace {

void build_sphere(BasisPlan::Impl& p) {
  const int L = p.truncation;
  for (int n = 1; n <= L; ++n)
    for (int m = -n; m <= n; ++m) {
      p.indices.push_back({n, m});
      p.eigenvalues.push_back(static_cast<double>(n) * (n + 1));
    }

  const int nlat = p.minimal ? L + 1 : (3 * L + 3) / 2;
  const int nlon = p.minimal ? 2 * L + 2 : fft_size_at_least(3 * L + 1);
  p.rows = static_cast<std::size_t>(nlat);
  p.cols = static_cast<std::size_t>(nlon);

  gauss_legendre(nlat, p.cos_t, p.gl_w);
  p.sin_t.resize(nlat);
  p.row_coord.resize(nlat);
  for (int j = 0; j < nlat; ++j) {
    p.sin_t[j] = std::sqrt((1.0 - p.cos_t[j]) * (1.0 + p.cos_t[j]));
    p.row_coord[j] = std::acos(p.cos_t[j]);
  }
  p.col_coord.resize(nlon);
  for (int k = 0; k < nlon; ++k) p.col_coord[k] = 2.0 * kPi * k / nlon;

  p.weights.resize(p.rows * p.cols);
  for (int j = 0; j < nlat; ++j)
    for (int k = 0; k < nlon; ++k) p.weights[j * nlon + k] = p.gl_w[j] * 2.0 * kPi / nlon;

  p.lm_base.resize(L + 1);
  std::size_t off = 0;
  for (int m = 0; m <= L; ++m) {
    p.lm_base[m] = off;
    off += static_cast<std::size_t>(L - m + 1);
  }
  p.lm_count = off;
  p.legendre.assign(p.rows * p.lm_count, 0.0);
  p.legendre_dt.assign(p.rows * p.lm_count, 0.0);

  for (int j = 0; j < nlat; ++j) {
    const double x = p.cos_t[j], s = p.sin_t[j];
    double* P = &p.legendre[j * p.lm_count];
    double* D = &p.legendre_dt[j * p.lm_count];
    double pmm = 1.0 / std::sqrt(4.0 * kPi);
    for (int m = 0; m <= L; ++m) {
      if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
      P[p.lm(m, m)] = pmm;
      if (m + 1 <= L) P[p.lm(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * pmm;
      for (int l = m + 2; l <= L; ++l) {
        const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
        const double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - static_cast<double>(m) * m) /
                                   (4.0 * (l - 1) * (l - 1) - 1.0));
        P[p.lm(l, m)] = a * (x * P[p.lm(l - 1, m)] - b * P[p.lm(l - 2, m)]);
      }
      for (int l = m; l <= L; ++l) {
        double prev = 0.0;
        if (l > m)
          prev = std::sqrt((2.0 * l + 1.0) * (l - m) * (l + m) / (2.0 * l - 1.0)) * P[p.lm(l - 1, m)];
        D[p.lm(l, m)] = (l * x * P[p.lm(l, m)] - prev) / s;
      }
    }
  }

  std::vector<double> rbuf(p.rows * p.cols);
  std::vector<cplx> cbuf(p.spec_size());
  const int n[] = {nlon};
  std::lock_guard lock(planner_mutex());
  p.forward = fftw_plan_many_dft_r2c(1, n, nlat, rbuf.data(), nullptr, 1, nlon,
                                     reinterpret_cast<fftw_complex*>(cbuf.data()), nullptr, 1,
                                     nlon / 2 + 1, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.backward = fftw_plan_many_dft_c2r(1, n, nlat, reinterpret_cast<fftw_complex*>(cbuf.data()),
                                      nullptr, 1, nlon / 2 + 1, rbuf.data(), nullptr, 1, nlon,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
}

void build_torus(BasisPlan::Impl& p) {
  const int K = p.truncation;
  const double L = p.geometry.length;
  const double base = 2.0 * kPi / L;
  std::vector<SpectralIndex> all;
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2)
      if (k1 != 0 || k2 != 0) all.push_back({k1, k2});
  std::sort(all.begin(), all.end(), [](const SpectralIndex& a, const SpectralIndex& b) {
    const int na = a.first * a.first + a.second * a.second;
    const int nb = b.first * b.first + b.second * b.second;
    if (na != nb) return na < nb;
    return a < b;
  });
  p.indices = all;
  p.lookup.assign(static_cast<std::size_t>((2 * K + 1) * (2 * K + 1)), 0);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& k = all[i];
    p.eigenvalues.push_back(base * base * (k.first * k.first + k.second * k.second));
    p.lookup[static_cast<std::size_t>((k.first + K) * (2 * K + 1) + (k.second + K))] = i;
  }

  const int N = p.minimal ? 2 * K + 2 : fft_size_at_least(3 * K + 1);
  p.rows = p.cols = static_cast<std::size_t>(N);
  p.weights.assign(p.rows * p.cols, (L / N) * (L / N));
  p.row_coord.resize(N);
  p.col_coord.resize(N);
  for (int i = 0; i < N; ++i) p.row_coord[i] = p.col_coord[i] = L * i / N;

  std::vector<double> rbuf(p.rows * p.cols);
  std::vector<cplx> cbuf(p.spec_size());
  std::lock_guard lock(planner_mutex());
  p.forward = fftw_plan_dft_r2c_2d(N, N, rbuf.data(), reinterpret_cast<fftw_complex*>(cbuf.data()),
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.backward = fftw_plan_dft_c2r_2d(N, N, reinterpret_cast<fftw_complex*>(cbuf.data()), rbuf.data(),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
}

bool upper_half(int k1, int k2) { return k1 > 0 || (k1 == 0 && k2 > 0); }

// Torus: complex amplitude F_k (k in the upper half plane) of coefficients,
// scaled by factor(k); writes the Hermitian half spectrum for c2r.
template <class Factor>
void torus_spectrum(const BasisPlan::Impl& p, const ScalarCoeffs& c, Factor factor,
                    std::vector<cplx>& spec) {
  const int N = static_cast<int>(p.rows);
  const std::size_t sc = p.spec_cols();
  spec.assign(p.spec_size(), cplx{});
  const int K = p.truncation;
  const double scale = 1.0 / (std::sqrt(2.0) * p.geometry.length);
  auto at = [&](int k1, int k2) -> cplx& {
    return spec[static_cast<std::size_t>(((k1 % N) + N) % N) * sc + static_cast<std::size_t>(k2)];
  };
  for (int k1 = 0; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2) {
      if (!upper_half(k1, k2)) continue;
      const double a = c.values[p.lookup[static_cast<std::size_t>((k1 + K) * (2 * K + 1) + (k2 + K))]];
      const double b = c.values[p.lookup[static_cast<std::size_t>((-k1 + K) * (2 * K + 1) + (-k2 + K))]];
      const cplx g = factor(k1, k2) * cplx(a, -b) * scale;
      if (k2 > 0) {
        at(k1, k2) = g;
      } else if (k2 == 0) {
        at(k1, 0) = g;
        at(-k1, 0) = std::conj(g);
      } else {
        at(-k1, -k2) = std::conj(g);
      }
    }
}

cplx torus_lookup(const BasisPlan::Impl& p, const std::vector<cplx>& spec, int k1, int k2) {
  const int N = static_cast<int>(p.rows);
  const std::size_t sc = p.spec_cols();
  if (k2 >= 0) return spec[static_cast<std::size_t>(((k1 % N) + N) % N) * sc + static_cast<std::size_t>(k2)];
  return std::conj(spec[static_cast<std::size_t>(((-k1 % N) + N) % N) * sc + static_cast<std::size_t>(-k2)]);
}

enum class SphereKind { value, dtheta, dphi_over_sin };

void sphere_spectrum(const BasisPlan::Impl& p, const ScalarCoeffs& c, SphereKind kind,
                     std::vector<cplx>& spec) {
  const int L = p.truncation;
  const std::size_t sc = p.spec_cols();
  spec.assign(p.spec_size(), cplx{});
  const double r2 = std::numbers::sqrt2;
  for (std::size_t j = 0; j < p.rows; ++j) {
    const double inv_s = 1.0 / p.sin_t[j];
    for (int m = 0; m <= L; ++m) {
      double A = 0.0, B = 0.0;
      for (int l = std::max(m, 1); l <= L; ++l) {
        const double Pv = p.P(j, l, m);
        const double Dv = p.dP(j, l, m);
        if (m == 0) {
          const double cc = c.values[p.sphere_pos(l, 0)];
          if (kind == SphereKind::value) A += cc * Pv;
          else if (kind == SphereKind::dtheta) A += cc * Dv;
          continue;
        }
        const double cc = c.values[p.sphere_pos(l, m)];
        const double cs = c.values[p.sphere_pos(l, -m)];
        switch (kind) {
          case SphereKind::value:
            A += r2 * cc * Pv;
            B += r2 * cs * Pv;
            break;
          case SphereKind::dtheta:
            A += r2 * cc * Dv;
            B += r2 * cs * Dv;
            break;
          case SphereKind::dphi_over_sin:
            B -= r2 * cc * m * Pv * inv_s;
            A += r2 * cs * m * Pv * inv_s;
            break;
        }
      }
      spec[j * sc + static_cast<std::size_t>(m)] = (m == 0) ? cplx(A, 0.0) : cplx(A, -B) * 0.5;
    }
  }
}

GridField grid_from_spectrum(const BasisPlan::Impl& p, std::vector<cplx>& spec) {
  GridField g{p.rows, p.cols, std::vector<double>(p.rows * p.cols)};
  p.c2r(spec.data(), g.values.data());
  return g;
}

std::string shape_message(const char* what, std::size_t got_r, std::size_t got_c, std::size_t want_r,
                          std::size_t want_c) {
  std::ostringstream os;
  os << what << ": grid " << got_r << "x" << got_c << " does not match plan grid " << want_r << "x"
     << want_c;
  return os.str();
}

}  // namespace

BasisPlan::BasisPlan(Geometry geometry, int truncation, PlanOptions options) {
  if (truncation < 1) throw ConfigError("truncation must be >= 1");
  if (geometry.is_torus() && !(geometry.length > 0.0 && std::isfinite(geometry.length)))
    throw ConfigError("torus period L must be positive");
  if (geometry.is_sphere()) geometry.length = 1.0;
  auto impl = std::make_shared<Impl>();
  impl->geometry = geometry;
  impl->truncation = truncation;
  impl->minimal = options.minimal_grid;
  if (geometry.is_sphere())
    build_sphere(*impl);
  else
    build_torus(*impl);
  impl_ = std::move(impl);
}

const Geometry& BasisPlan::geometry() const { return impl_->geometry; }
int BasisPlan::truncation() const { return impl_->truncation; }
bool BasisPlan::minimal_grid() const { return impl_->minimal; }
std::size_t BasisPlan::mode_count() const { return impl_->indices.size(); }
std::span<const SpectralIndex> BasisPlan::indices() const { return impl_->indices; }
std::span<const double> BasisPlan::eigenvalues() const { return impl_->eigenvalues; }
double BasisPlan::first_eigenvalue() const { return impl_->eigenvalues.front(); }
std::size_t BasisPlan::harmonic_dim() const { return impl_->geometry.is_torus() ? 2 : 0; }
std::size_t BasisPlan::grid_rows() const { return impl_->rows; }
std::size_t BasisPlan::grid_cols() const { return impl_->cols; }
std::span<const double> BasisPlan::quadrature_weights() const { return impl_->weights; }
std::span<const double> BasisPlan::row_coordinates() const { return impl_->row_coord; }
std::span<const double> BasisPlan::col_coordinates() const { return impl_->col_coord; }

double BasisPlan::area() const {
  if (impl_->geometry.is_sphere()) return 4.0 * kPi;
  return impl_->geometry.length * impl_->geometry.length;
}

int BasisPlan::dealias_cutoff() const { return (2 * impl_->truncation) / 3; }

bool BasisPlan::contains(SpectralIndex index) const {
  const int T = impl_->truncation;
  if (impl_->geometry.is_sphere())
    return index.first >= 1 && index.first <= T && std::abs(index.second) <= index.first;
  return (index.first != 0 || index.second != 0) && std::abs(index.first) <= T &&
         std::abs(index.second) <= T;
}

std::size_t BasisPlan::position(SpectralIndex index) const {
  if (!contains(index)) {
    std::ostringstream os;
    os << "spectral index (" << index.first << ", " << index.second
       << ") outside truncation " << impl_->truncation;
    throw IndexError(os.str());
  }
  if (impl_->geometry.is_sphere()) return impl_->sphere_pos(index.first, index.second);
  const int K = impl_->truncation;
  return impl_->lookup[static_cast<std::size_t>((index.first + K) * (2 * K + 1) + (index.second + K))];
}

GridField BasisPlan::make_grid() const {
  return GridField{impl_->rows, impl_->cols, std::vector<double>(impl_->rows * impl_->cols, 0.0)};
}

ScalarCoeffs BasisPlan::make_coeffs() const {
  return ScalarCoeffs{std::vector<double>(mode_count(), 0.0)};
}

BasisPlan build_plan(const Geometry& geometry, int truncation, PlanOptions options) {
  return BasisPlan(geometry, truncation, options);
}

double eigenvalue(const BasisPlan& plan, SpectralIndex index) {
  return plan.eigenvalues()[plan.position(index)];
}

void check_shape(const BasisPlan& plan, const GridField& field) {
  if (field.rows != plan.grid_rows() || field.cols != plan.grid_cols() ||
      field.values.size() != plan.grid_size())
    throw ShapeError(shape_message("grid field", field.rows, field.cols, plan.grid_rows(), plan.grid_cols()));
}

void check_shape(const BasisPlan& plan, const ScalarCoeffs& coeffs) {
  if (coeffs.size() != plan.mode_count()) {
    std::ostringstream os;
    os << "coefficient array has " << coeffs.size() << " entries, plan has " << plan.mode_count()
       << " modes";
    throw ShapeError(os.str());
  }
}

ScalarCoeffs analyze(const BasisPlan& plan, const GridField& field) {
  check_shape(plan, field);
  const auto& p = plan.impl();
  std::vector<cplx> spec(p.spec_size());
  p.r2c(field.values.data(), spec.data());
  ScalarCoeffs out = plan.make_coeffs();

  if (p.geometry.is_torus()) {
    const int K = p.truncation;
    const double N = static_cast<double>(p.rows);
    const double scale = std::numbers::sqrt2 * p.geometry.length / (N * N);
    for (int k1 = 0; k1 <= K; ++k1)
      for (int k2 = -K; k2 <= K; ++k2) {
        if (!upper_half(k1, k2)) continue;
        const cplx X = torus_lookup(p, spec, k1, k2);
        out.values[plan.position({k1, k2})] = scale * X.real();
        out.values[plan.position({-k1, -k2})] = -scale * X.imag();
      }
    return out;
  }

  const int L = p.truncation;
  const std::size_t sc = p.spec_cols();
  const double dphi = 2.0 * kPi / static_cast<double>(p.cols);
  const double r2 = std::numbers::sqrt2;
  for (int m = 0; m <= L; ++m) {
    for (int l = std::max(m, 1); l <= L; ++l) {
      double sum_c = 0.0, sum_s = 0.0;
      for (std::size_t j = 0; j < p.rows; ++j) {
        const cplx X = spec[j * sc + static_cast<std::size_t>(m)];
        const double wP = p.gl_w[j] * p.P(j, l, m) * dphi;
        sum_c += wP * X.real();
        sum_s -= wP * X.imag();
      }
      if (m == 0) {
        out.values[p.sphere_pos(l, 0)] = sum_c;
      } else {
        out.values[p.sphere_pos(l, m)] = r2 * sum_c;
        out.values[p.sphere_pos(l, -m)] = r2 * sum_s;
      }
    }
  }
  return out;
}

GridField synthesize(const BasisPlan& plan, const ScalarCoeffs& coeffs) {
  check_shape(plan, coeffs);
  const auto& p = plan.impl();
  std::vector<cplx> spec;
  if (p.geometry.is_torus())
    torus_spectrum(p, coeffs, [](int, int) { return cplx(1.0, 0.0); }, spec);
  else
    sphere_spectrum(p, coeffs, SphereKind::value, spec);
  return grid_from_spectrum(p, spec);
}

VectorGridField surface_gradient(const BasisPlan& plan, const ScalarCoeffs& coeffs) {
  check_shape(plan, coeffs);
  const auto& p = plan.impl();
  std::vector<cplx> spec;
  VectorGridField out;
  if (p.geometry.is_torus()) {
    const double base = 2.0 * kPi / p.geometry.length;
    torus_spectrum(p, coeffs, [&](int k1, int) { return cplx(0.0, base * k1); }, spec);
    out.e1 = grid_from_spectrum(p, spec);
    torus_spectrum(p, coeffs, [&](int, int k2) { return cplx(0.0, base * k2); }, spec);
    out.e2 = grid_from_spectrum(p, spec);
  } else {
    sphere_spectrum(p, coeffs, SphereKind::dtheta, spec);
    out.e1 = grid_from_spectrum(p, spec);
    sphere_spectrum(p, coeffs, SphereKind::dphi_over_sin, spec);
    out.e2 = grid_from_spectrum(p, spec);
  }
  return out;
}

ScalarCoeffs dealias(const BasisPlan& plan, const ScalarCoeffs& coeffs) {
  check_shape(plan, coeffs);
  ScalarCoeffs out = coeffs;
  if (plan.geometry().is_sphere()) return out;
  const int cut = plan.dealias_cutoff();
  const auto idx = plan.indices();
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (std::abs(idx[i].first) > cut || std::abs(idx[i].second) > cut) out.values[i] = 0.0;
  return out;
}

ScalarCoeffs analyze_rotated_gradient(const BasisPlan& plan, const VectorGridField& g) {
  check_shape(plan, g.e1);
  check_shape(plan, g.e2);
  const auto& p = plan.impl();
  std::vector<cplx> s1(p.spec_size()), s2(p.spec_size());
  p.r2c(g.e1.values.data(), s1.data());
  p.r2c(g.e2.values.data(), s2.data());
  ScalarCoeffs out = plan.make_coeffs();

  if (p.geometry.is_torus()) {
    const int K = p.truncation;
    const double N = static_cast<double>(p.rows);
    const double scale = std::numbers::sqrt2 * p.geometry.length / (N * N);
    const double base = 2.0 * kPi / p.geometry.length;
    for (int k1 = 0; k1 <= K; ++k1)
      for (int k2 = -K; k2 <= K; ++k2) {
        if (!upper_half(k1, k2)) continue;
        const cplx Z = base * (double(k1) * torus_lookup(p, s2, k1, k2) - double(k2) * torus_lookup(p, s1, k1, k2));
        out.values[plan.position({k1, k2})] = scale * Z.imag();
        out.values[plan.position({-k1, -k2})] = scale * Z.real();
      }
    return out;
  }

  const int L = p.truncation;
  const std::size_t sc = p.spec_cols();
  const double dphi = 2.0 * kPi / static_cast<double>(p.cols);
  const double r2 = std::numbers::sqrt2;
  for (int m = 0; m <= L; ++m) {
    for (int l = std::max(m, 1); l <= L; ++l) {
      double sum_c = 0.0, sum_s = 0.0;
      for (std::size_t j = 0; j < p.rows; ++j) {
        const cplx T = s1[j * sc + static_cast<std::size_t>(m)] * dphi;
        const cplx F = s2[j * sc + static_cast<std::size_t>(m)] * dphi;
        // cos/sin moments: C = Re X, S = -Im X
        const double Tc = T.real(), Ts = -T.imag();
        const double Fc = F.real(), Fs = -F.imag();
        const double w = p.gl_w[j];
        const double mPs = m * p.P(j, l, m) / p.sin_t[j];
        const double D = p.dP(j, l, m);
        sum_c += w * (mPs * Ts + D * Fc);
        sum_s += w * (-mPs * Tc + D * Fs);
      }
      if (m == 0) {
        out.values[p.sphere_pos(l, 0)] = sum_c;
      } else {
        out.values[p.sphere_pos(l, m)] = r2 * sum_c;
        out.values[p.sphere_pos(l, -m)] = r2 * sum_s;
      }
    }
  }
  return out;
}

double integrate(const BasisPlan& plan, const GridField& field) {
  check_shape(plan, field);
  const auto w = plan.quadrature_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * field.values[i];
  return s;
}

}  // namespace bardina
