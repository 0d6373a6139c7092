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

#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "qfn/errors.hpp"

namespace qfn {

using Complex = std::complex<double>;

/// Comparison and singularity thresholds shared across the calculus.
///
/// sing_tol is a relative pivot threshold: an LU pivot counts as zero when
/// its magnitude falls below sing_tol times the largest absolute entry of
/// the matrix being inverted. eq_tol is the element-wise comparison
/// threshold used by all approximate equality checks.
struct Tolerances {
  double sing_tol = 1e-12;
  double eq_tol = 1e-9;

  Tolerances() = default;
  Tolerances(double sing, double eq);
};

/// A d x d complex matrix representing an operator on the truncated initial
/// Hilbert space. Entries are stored row-major and required to be finite.
class Operator {
 public:
  explicit Operator(int dim);
  Operator(int dim, std::vector<Complex> entries);

  static Operator identity(int dim);
  static Operator scalar(int dim, Complex z);

  int dim() const noexcept { return dim_; }

  Complex operator()(int j, int k) const { return a_[j * dim_ + k]; }
  void set(int j, int k, Complex z);

  Operator operator+(const Operator& o) const;
  Operator operator-(const Operator& o) const;
  Operator operator*(const Operator& o) const;
  Operator operator-() const;
  friend Operator operator*(Complex z, const Operator& a);

  Operator adjoint() const;
  Complex trace() const;
  double max_abs() const;

 private:
  int dim_;
  std::vector<Complex> a_;
};

/// Inverse via partial-pivot LU; throws SingularError when a pivot falls
/// below sing_tol times the largest initial absolute entry.
Operator inverse(const Operator& a, const Tolerances& tol);

/// Like inverse() but reports failure through the return value. If
/// smallest_pivot is non-null it receives the smallest pivot magnitude
/// encountered before a failure (or over the whole elimination on success).
std::optional<Operator> try_inverse(const Operator& a, const Tolerances& tol,
                                    double* smallest_pivot = nullptr);

/// (X - X^dag) / 2i. The result is self-adjoint.
Operator imag_part(const Operator& x);

bool is_unitary(const Operator& a, const Tolerances& tol);
bool is_selfadjoint(const Operator& a, const Tolerances& tol);

/// Max absolute entry of a - b.
double max_abs_diff(const Operator& a, const Operator& b);
bool approx_equal(const Operator& a, const Operator& b, double tol);

}  // namespace qfn
