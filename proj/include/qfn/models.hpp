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

#include <vector>

#include "qfn/block_matrix.hpp"

namespace qfn {

/// Reserved label for the time (dt) row/column of generator matrices.
inline const Label kInitialLabel = "0";
/// Reserved labels for the top and bottom rows of the triple-block
/// (1+n+1) embedding.
inline const Label kTopLabel = "~0";
inline const Label kBottomLabel = "_0";

/// Hudson-Parthasarathy triple: unitary scattering matrix S over the
/// channel labels, column of coupling operators L and self-adjoint
/// Hamiltonian H.
struct SLHModel {
  LabelSet channels;
  BlockMatrix S;  // channels x channels
  std::vector<Operator> L;
  Operator H;

  SLHModel(LabelSet channels, BlockMatrix s, std::vector<Operator> l, Operator h);

  /// Identity component: S = I, L = 0, H = 0.
  static SLHModel identity(const LabelSet& channels, int dim);

  int dim() const { return H.dim(); }
  int n() const { return channels.size(); }

  /// L viewed as a column block matrix (channels x {"0"}).
  BlockMatrix l_column() const;

  /// Checks S unitary and H self-adjoint; throws InvariantViolation.
  void validate(const Tolerances& tol) const;
};

/// Ito generator matrix G over (0 u k) with blocks
///   G_00 = -(1/2 L^dag L + iH),  G_0k = -L^dag S,  G_k0 = L,  G_kk = S - I.
struct ItoGenerator {
  LabelSet channels;
  BlockMatrix G;
};

/// Stratonovich generator matrix E over (0 u k) with the Hermitian block
/// structure E_ab^dag = E_ba.
struct StratGenerator {
  LabelSet channels;
  BlockMatrix E;

  StratGenerator(LabelSet channels, BlockMatrix e);

  static StratGenerator zero(const LabelSet& channels, int dim);

  int dim() const { return E.dim(); }

  BlockMatrix e_kk() const { return sub_block(E, channels, channels); }

  /// True iff E_ab^dag = E_ba for all blocks, within tol.
  bool hermitian_structure(double tol) const;
};

/// Triple-block matrix over (~0 u k u _0) with the twisted involution
/// X* = J X^dag J.
struct BHMatrix {
  LabelSet channels;
  BlockMatrix M;  // (~0 u k u _0) square

  static LabelSet bh_labels(const LabelSet& channels);
  static BHMatrix identity(const LabelSet& channels, int dim);
  /// The swap constant J: exchanges ~0 and _0, identity on the channels.
  static BHMatrix swap(const LabelSet& channels, int dim);

  int dim() const { return M.dim(); }
};

/// Embeds a (0 u k)-square matrix X into its triple-block form
///   [[0, x_0k, x_00], [0, x_kk, x_k0], [0, 0, 0]].
BHMatrix bh_embed(const LabelSet& channels, const BlockMatrix& x);

/// Extracts the (0 u k)-square matrix from a matrix in the image of the
/// embedding (first block column and last block row zero).
BlockMatrix bh_extract(const BHMatrix& x);

/// The Ito correction product X . delta . Y over (0 u k), i.e. block
/// (a,b) = sum_k x_ak y_kb.
BlockMatrix ito_delta_product(const LabelSet& channels, const BlockMatrix& x,
                              const BlockMatrix& y);

/// Twisted involution X* = J X^dag J.
BHMatrix bh_star(const BHMatrix& v);

ItoGenerator ito_from_slh(const SLHModel& m);

/// V = I + embedded G; star-unitary for every valid SLH model.
BHMatrix v_from_slh(const SLHModel& m);

/// Inverse of v_from_slh; checks the V shape (unit corners, zero blocks)
/// and the consistency V_~0,k = -L^dag S. Throws MalformedV.
SLHModel slh_from_v(const BHMatrix& v, const Tolerances& tol);

/// Cayley transform route from a Stratonovich generator:
///   S = (I - i/2 E_kk)(I + i/2 E_kk)^-1,
///   L = -i (I + i/2 E_kk)^-1 E_k0,
///   H = E_00 + 1/2 Im{ E_0k (I + i/2 E_kk)^-1 E_k0 }.
SLHModel slh_from_strat(const StratGenerator& e, const Tolerances& tol);

/// Inverse Cayley transform; throws NotRepresentable when I + S is
/// singular (e.g. the perfect mirror S = -1).
StratGenerator strat_from_slh(const SLHModel& m, const Tolerances& tol);

/// V = (I - i/2 EE)(I + i/2 EE)^-1 on the embedded generator; agrees with
/// v_from_slh(slh_from_strat(e)).
BHMatrix v_from_strat(const StratGenerator& e, const Tolerances& tol);

double max_abs_diff(const SLHModel& a, const SLHModel& b);

}  // namespace qfn
