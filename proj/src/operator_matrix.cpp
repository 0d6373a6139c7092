// Copyright 2026 The qfn developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qfn/operator_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace qfn {

namespace {

bool finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace

Tolerances::Tolerances(double sing, double eq) : sing_tol(sing), eq_tol(eq) {
  if (!(sing > 0.0 && sing <= eq && eq < 1.0)) {
    throw InvariantViolationError("tolerances must satisfy 0 < sing_tol <= eq_tol < 1");
  }
}

Operator::Operator(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {
  if (dim < 1) throw DimMismatchError("operator dimension must be >= 1");
}

Operator::Operator(int dim, std::vector<Complex> entries)
    : dim_(dim), a_(std::move(entries)) {
  if (dim < 1) throw DimMismatchError("operator dimension must be >= 1");
  if (a_.size() != static_cast<size_t>(dim) * dim) {
    throw DimMismatchError("operator entry count does not match dim*dim");
  }
  for (Complex z : a_) {
    if (!finite(z)) throw InvariantViolationError("non-finite operator entry");
  }
}

Operator Operator::identity(int dim) {
  Operator r(dim);
  for (int j = 0; j < dim; ++j) r.set(j, j, 1.0);
  return r;
}

Operator Operator::scalar(int dim, Complex z) {
  Operator r(dim);
  for (int j = 0; j < dim; ++j) r.set(j, j, z);
  return r;
}

void Operator::set(int j, int k, Complex z) {
  if (!finite(z)) throw InvariantViolationError("non-finite operator entry");
  a_[j * dim_ + k] = z;
}

Operator Operator::operator+(const Operator& o) const {
  if (o.dim_ != dim_) throw DimMismatchError("operator dims differ in +");
  Operator r(dim_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

Operator Operator::operator-(const Operator& o) const {
  if (o.dim_ != dim_) throw DimMismatchError("operator dims differ in -");
  Operator r(dim_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

Operator Operator::operator*(const Operator& o) const {
  if (o.dim_ != dim_) throw DimMismatchError("operator dims differ in *");
  Operator r(dim_);
  for (int j = 0; j < dim_; ++j) {
    for (int l = 0; l < dim_; ++l) {
      const Complex x = a_[j * dim_ + l];
      if (x == Complex{}) continue;
      for (int k = 0; k < dim_; ++k) {
        r.a_[j * dim_ + k] += x * o.a_[l * dim_ + k];
      }
    }
  }
  return r;
}

Operator Operator::operator-() const {
  Operator r(dim_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = -a_[i];
  return r;
}

Operator operator*(Complex z, const Operator& a) {
  Operator r(a.dim_);
  for (size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = z * a.a_[i];
  return r;
}

Operator Operator::adjoint() const {
  Operator r(dim_);
  for (int j = 0; j < dim_; ++j) {
    for (int k = 0; k < dim_; ++k) {
      r.a_[j * dim_ + k] = std::conj(a_[k * dim_ + j]);
    }
  }
  return r;
}

Complex Operator::trace() const {
  Complex t{};
  for (int j = 0; j < dim_; ++j) t += a_[j * dim_ + j];
  return t;
}

double Operator::max_abs() const {
  double m = 0.0;
  for (Complex z : a_) m = std::max(m, std::abs(z));
  return m;
}

std::optional<Operator> try_inverse(const Operator& a, const Tolerances& tol,
                                    double* smallest_pivot) {
  const int n = a.dim();
  // Augmented elimination [A | I] -> [I | A^-1].
  std::vector<Complex> m(static_cast<size_t>(n) * 2 * n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) m[j * 2 * n + k] = a(j, k);
    m[j * 2 * n + n + j] = 1.0;
  }

  // Pivot threshold is anchored at scale 1 so that blocks containing only
  // numerical residue are reported singular rather than inverted.
  const double threshold = tol.sing_tol * std::max(1.0, a.max_abs());
  double min_pivot = std::numeric_limits<double>::infinity();
  if (smallest_pivot) *smallest_pivot = 0.0;

  for (int col = 0; col < n; ++col) {
    int pivot_row = col;
    double best = std::abs(m[col * 2 * n + col]);
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(m[r * 2 * n + col]);
      if (v > best) {
        best = v;
        pivot_row = r;
      }
    }
    min_pivot = std::min(min_pivot, best);
    if (smallest_pivot) *smallest_pivot = min_pivot;
    if (best <= threshold || best == 0.0) return std::nullopt;
    if (pivot_row != col) {
      for (int k = 0; k < 2 * n; ++k) {
        std::swap(m[col * 2 * n + k], m[pivot_row * 2 * n + k]);
      }
    }
    const Complex p = m[col * 2 * n + col];
    for (int k = 0; k < 2 * n; ++k) m[col * 2 * n + k] /= p;
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex f = m[r * 2 * n + col];
      if (f == Complex{}) continue;
      for (int k = 0; k < 2 * n; ++k) m[r * 2 * n + k] -= f * m[col * 2 * n + k];
    }
  }

  Operator inv(n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) inv.set(j, k, m[j * 2 * n + n + k]);
  }
  return inv;
}

Operator inverse(const Operator& a, const Tolerances& tol) {
  double pivot = 0.0;
  auto inv = try_inverse(a, tol, &pivot);
  if (!inv) throw SingularError("matrix is singular", {}, pivot);
  return *inv;
}

Operator imag_part(const Operator& x) {
  return Complex(0.0, -0.5) * (x - x.adjoint());
}

bool is_unitary(const Operator& a, const Tolerances& tol) {
  const Operator id = Operator::identity(a.dim());
  return max_abs_diff(a.adjoint() * a, id) <= tol.eq_tol &&
         max_abs_diff(a * a.adjoint(), id) <= tol.eq_tol;
}

bool is_selfadjoint(const Operator& a, const Tolerances& tol) {
  return max_abs_diff(a, a.adjoint()) <= tol.eq_tol;
}

double max_abs_diff(const Operator& a, const Operator& b) {
  return (a - b).max_abs();
}

bool approx_equal(const Operator& a, const Operator& b, double tol) {
  return a.dim() == b.dim() && max_abs_diff(a, b) <= tol;
}

}  // namespace qfn
