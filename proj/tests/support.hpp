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

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "qfn/netlist.hpp"
#include "qfn/network.hpp"

namespace qfn::testing {

using EMat = Eigen::MatrixXcd;

inline std::mt19937& rng() {
  static std::mt19937 gen(20260824u);
  return gen;
}

inline Complex rand_c() {
  static std::normal_distribution<double> dist(0.0, 1.0);
  return Complex(dist(rng()), dist(rng()));
}

inline Operator rand_op(int d) {
  Operator r(d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) r.set(j, k, rand_c());
  }
  return r;
}

inline Operator rand_selfadjoint(int d) {
  const Operator a = rand_op(d);
  return Complex(0.5, 0.0) * (a + a.adjoint());
}

inline EMat to_eigen(const Operator& a) {
  EMat m(a.dim(), a.dim());
  for (int j = 0; j < a.dim(); ++j) {
    for (int k = 0; k < a.dim(); ++k) m(j, k) = a(j, k);
  }
  return m;
}

inline Operator from_eigen(const EMat& m) {
  Operator a(static_cast<int>(m.rows()));
  for (int j = 0; j < m.rows(); ++j) {
    for (int k = 0; k < m.cols(); ++k) a.set(j, k, m(j, k));
  }
  return a;
}

inline EMat to_eigen(const BlockMatrix& x) {
  const int nr = x.rows().size(), nc = x.cols().size(), d = x.dim();
  EMat m(nr * d, nc * d);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nc; ++j) {
      const Operator& b = x.block(i, j);
      for (int p = 0; p < d; ++p) {
        for (int q = 0; q < d; ++q) m(i * d + p, j * d + q) = b(p, q);
      }
    }
  }
  return m;
}

inline BlockMatrix from_eigen_blocks(const LabelSet& rows, const LabelSet& cols,
                                     int d, const EMat& m) {
  BlockMatrix out(rows, cols, d);
  for (int i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < cols.size(); ++j) {
      Operator b(d);
      for (int p = 0; p < d; ++p) {
        for (int q = 0; q < d; ++q) b.set(p, q, m(i * d + p, j * d + q));
      }
      out.set_block(i, j, b);
    }
  }
  return out;
}

inline double smallest_singular(const EMat& m) {
  return m.jacobiSvd().singularValues().minCoeff();
}

inline double smallest_singular(const BlockMatrix& x) {
  return smallest_singular(to_eigen(x));
}

/// Haar-like random unitary of size n via QR with phase fixing.
inline EMat rand_unitary_eigen(int n) {
  EMat a(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) a(j, k) = rand_c();
  }
  Eigen::HouseholderQR<EMat> qr(a);
  EMat q = qr.householderQ();
  const EMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex diag = r(j, j);
    q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

inline Operator rand_unitary(int d) { return from_eigen(rand_unitary_eigen(d)); }

/// Random SLH model: Haar-ish unitary S over the flattened channel space,
/// Gaussian L, Hermitian H.
inline SLHModel rand_slh(const LabelSet& channels, int d) {
  const int n = channels.size();
  BlockMatrix s = from_eigen_blocks(channels, channels, d,
                                    rand_unitary_eigen(n * d));
  std::vector<Operator> l;
  for (int j = 0; j < n; ++j) l.push_back(rand_op(d));
  return SLHModel(channels, std::move(s), std::move(l), rand_selfadjoint(d));
}

/// Random Stratonovich generator with the Hermitian block structure
/// E_ab^dag = E_ba.
inline StratGenerator rand_strat(const LabelSet& channels, int d) {
  const LabelSet full = LabelSet::unioned(LabelSet({kInitialLabel}), channels);
  BlockMatrix e(full, full, d);
  for (int a = 0; a < full.size(); ++a) {
    e.set_block(a, a, rand_selfadjoint(d));
    for (int b = a + 1; b < full.size(); ++b) {
      const Operator x = rand_op(d);
      e.set_block(a, b, x);
      e.set_block(b, a, x.adjoint());
    }
  }
  return StratGenerator(channels, std::move(e));
}

inline BlockMatrix half_i_e_kk_pivot(const StratGenerator& g) {
  return BlockMatrix::identity(g.channels, g.dim()) +
         Complex(0.0, 0.5) * g.e_kk();
}

/// Random Hermitian-structured E whose Cayley pivot I + (i/2)E_kk is
/// well-conditioned (smallest singular value >= floor).
inline StratGenerator rand_strat_representable(const LabelSet& channels, int d,
                                               double floor = 1e-6) {
  for (;;) {
    StratGenerator g = rand_strat(channels, d);
    if (smallest_singular(half_i_e_kk_pivot(g)) >= floor) return g;
  }
}

/// Additionally conditions the feedback pivot E_ii for a given split.
inline StratGenerator rand_strat_feedback_ready(const LabelSet& external,
                                                const LabelSet& internal, int d,
                                                double floor = 1e-6) {
  const LabelSet channels = LabelSet::unioned(external, internal);
  for (;;) {
    StratGenerator g = rand_strat_representable(channels, d, floor);
    if (smallest_singular(sub_block(g.E, internal, internal)) < floor) continue;
    // The reduced model must itself be representable for round-trip checks.
    const BlockMatrix s_ii =
        sub_block(slh_from_strat(g, Tolerances()).S, internal, internal);
    const BlockMatrix gap = BlockMatrix::identity(internal, d) - s_ii;
    if (smallest_singular(gap) < floor) continue;
    return g;
  }
}

inline Operator rand_density(int d) {
  const Operator a = rand_op(d);
  const Operator p = a * a.adjoint();
  Complex tr = p.trace();
  return (1.0 / tr.real()) * p;
}

inline LabelSet labels(std::vector<Label> ls) { return LabelSet(std::move(ls)); }

}  // namespace qfn::testing
