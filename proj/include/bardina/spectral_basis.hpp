#pragma once

// Scalar Laplace-Beltrami eigenbasis on the unit sphere and the flat square
// torus, with the quadrature grid and grid <-> spectral transforms.
//
// Sphere: real orthonormal spherical harmonics with Condon-Shortley phase,
//   Y(n, m)  = sqrt(2) P(n,|m|)(cos t) cos(m p)   for m > 0
//   Y(n, 0)  =         P(n, 0)(cos t)
//   Y(n, m)  = sqrt(2) P(n,|m|)(cos t) sin(|m| p) for m < 0
// with P the fully normalized associated Legendre functions.
//
// Torus [0,L]^2: with kappa = 2 pi k / L, for k in the upper half plane
// (k1 > 0, or k1 == 0 and k2 > 0) the mode k is sqrt(2)/L cos(kappa.x) and
// the mode -k is sqrt(2)/L sin(kappa.x). Both families are orthonormal in
// L^2 with the area measure.

#include <complex>
#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace bardina {

enum class GeometryKind { sphere, torus };

struct Geometry {
  GeometryKind kind = GeometryKind::sphere;
  double length = 1.0;  // torus period; ignored on the sphere (radius 1)

  static Geometry sphere() { return {GeometryKind::sphere, 1.0}; }
  static Geometry torus(double period) { return {GeometryKind::torus, period}; }

  bool is_sphere() const { return kind == GeometryKind::sphere; }
  bool is_torus() const { return kind == GeometryKind::torus; }
};

/// Sphere: (degree, order). Torus: wavevector (k1, k2).
struct SpectralIndex {
  int first = 0;
  int second = 0;
  auto operator<=>(const SpectralIndex&) const = default;
};

/// Real coefficients of a mean-free scalar, one per mode in plan order.
struct ScalarCoeffs {
  std::vector<double> values;
  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Samples on the plan grid, row-major. Sphere rows are Gauss-Legendre
/// colatitudes, columns equispaced longitudes; torus rows index x, columns y.
struct GridField {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

/// Two tangent components in the local orthonormal frame: (theta, phi) on
/// the sphere, (x, y) on the torus.
struct VectorGridField {
  GridField e1;
  GridField e2;
};

struct PlanOptions {
  // Undersized grid that only resolves linear terms. Used to study aliasing.
  bool minimal_grid = false;
};

class BasisPlan {
 public:
  BasisPlan(Geometry geometry, int truncation, PlanOptions options = {});

  const Geometry& geometry() const;
  int truncation() const;
  bool minimal_grid() const;

  std::size_t mode_count() const;
  std::span<const SpectralIndex> indices() const;
  /// Ascending, aligned with indices().
  std::span<const double> eigenvalues() const;
  std::size_t position(SpectralIndex index) const;
  bool contains(SpectralIndex index) const;
  double first_eigenvalue() const;

  /// 0 on the sphere, 2 on the torus.
  std::size_t harmonic_dim() const;
  double area() const;

  std::size_t grid_rows() const;
  std::size_t grid_cols() const;
  std::size_t grid_size() const { return grid_rows() * grid_cols(); }
  /// Area weight of each grid point (row-major).
  std::span<const double> quadrature_weights() const;
  /// Sphere: colatitude of each row. Torus: x coordinate of each row.
  std::span<const double> row_coordinates() const;
  /// Sphere: longitude of each column. Torus: y coordinate of each column.
  std::span<const double> col_coordinates() const;

  /// Torus 2/3-rule retained band: |k_i| <= floor(2 Kmax / 3).
  int dealias_cutoff() const;

  GridField make_grid() const;
  ScalarCoeffs make_coeffs() const;
  bool same_as(const BasisPlan& other) const { return impl_ == other.impl_; }

  struct Impl;
  const Impl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const Impl> impl_;
};

BasisPlan build_plan(const Geometry& geometry, int truncation, PlanOptions options = {});

double eigenvalue(const BasisPlan& plan, SpectralIndex index);

ScalarCoeffs analyze(const BasisPlan& plan, const GridField& field);
GridField synthesize(const BasisPlan& plan, const ScalarCoeffs& coeffs);
VectorGridField surface_gradient(const BasisPlan& plan, const ScalarCoeffs& coeffs);
ScalarCoeffs dealias(const BasisPlan& plan, const ScalarCoeffs& coeffs);

/// Coefficients of <g, n x grad Y> for every mode Y, by quadrature.
/// This is -<curl_n g, Y>; the Leray projection divides it by lambda.
ScalarCoeffs analyze_rotated_gradient(const BasisPlan& plan, const VectorGridField& g);

/// Plain grid quadrature of a scalar field (integral over the surface).
double integrate(const BasisPlan& plan, const GridField& field);

void check_shape(const BasisPlan& plan, const GridField& field);
void check_shape(const BasisPlan& plan, const ScalarCoeffs& coeffs);

}  // namespace bardina
