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

#include "qfn/models.hpp"

namespace qfn {

/// Partition of a model's channel set into external and internal
/// (fed-back) channels.
struct ChannelSplit {
  LabelSet external;
  LabelSet internal;

  /// Checks disjointness and that external u internal covers `channels`.
  void validate(const LabelSet& channels) const;
};

/// Bijection on {0..n-1}.
class Permutation {
 public:
  explicit Permutation(std::vector<int> image);
  static Permutation identity(int n);

  int size() const noexcept { return static_cast<int>(image_.size()); }
  int apply(int k) const { return image_[k]; }
  Permutation inverse() const;

  /// Cycle decomposition; each cycle lists indices in traversal order.
  std::vector<std::vector<int>> cycles() const;

 private:
  std::vector<int> image_;
};

/// Invertibility diagnostics for the feedback reduction of a Stratonovich
/// generator.
struct WellPosednessReport {
  bool e_ii_invertible = false;        // the Schur pivot E_ii
  bool script_e_ii_invertible = false; // the well-posedness operator
  bool i_minus_s_ii_invertible = false;
  double smallest_pivot = -1.0;        // from the script-E_ii inversion
};

SLHModel concat_slh(const std::vector<SLHModel>& models);
StratGenerator concat_strat(const std::vector<StratGenerator>& gens);

/// Series product (second drives nothing; it is driven by first):
/// (S2 S1, L2 + S2 L1, H1 + H2 + Im{L2^dag S2 L1}). Channels are aligned
/// positionally; the result keeps first's channel labels.
SLHModel series_slh(const SLHModel& second, const SLHModel& first);

/// Stratonovich form of the series product, evaluated on the triple-block
/// embeddings:
///   (I + i/2 E2)^-1 (E1 + E2) (I - 1/4 E2 E1)^-1 (I + i/2 E2).
StratGenerator series_strat(const StratGenerator& e2, const StratGenerator& e1,
                            const Tolerances& tol);

/// Absorbs the adjacency permutation into S: the columns of the internal
/// input blocks S_ei and S_ii are permuted so that new column k is old
/// column sigma(k). L and H are unchanged.
SLHModel absorb_adjacency(const SLHModel& m, const ChannelSplit& split,
                          const Permutation& sigma);

/// Generalized adjacency absorption over all channels: series-composes the
/// model with the static wire scattering given by `routing`, so that new
/// input column j is old input column routing(j). Used when connections
/// pair outputs and inputs of different channels.
SLHModel absorb_input_permutation(const SLHModel& m, const Permutation& routing);

/// Feedback reduction in SLH form (adjacency already absorbed):
///   S_fb = S_ee + S_ei (I - S_ii)^-1 S_ie,
///   L_fb = L_e + S_ei (I - S_ii)^-1 L_i,
///   H_fb = H + sum_j Im{L_j^dag S_ji (I - S_ii)^-1 L_i}.
SLHModel feedback_slh(const SLHModel& m, const ChannelSplit& split,
                      const Tolerances& tol);

/// Moebius form of feedback on the triple-block matrix:
///   V_fb[a,b] = V[a,b] + V[a,i](I - V_ii)^-1 V[i,b].
BHMatrix feedback_v(const BHMatrix& v, const ChannelSplit& split,
                    const Tolerances& tol);

/// Feedback as the Schur complement of the embedded Ito generator,
/// shortening the internal labels; equals feedback_v's result minus I.
BHMatrix feedback_g_schur(const SLHModel& m, const ChannelSplit& split,
                          const Tolerances& tol);

/// Feedback as the Schur complement of the Stratonovich generator over the
/// internal labels. Throws SchurUndefined when E_ii is singular.
StratGenerator feedback_strat(const StratGenerator& e, const ChannelSplit& split,
                              const Tolerances& tol);

/// Well-posedness and representability diagnostics: reports invertibility
/// of E_ii, of the well-posedness operator
///   script_E_ii = E_ii - i/2 E_ie (I_e + i/2 E_ee)^-1 E_ei
/// and of I - S_ii, asserting that the last two agree.
WellPosednessReport wellposedness(const StratGenerator& e,
                                  const ChannelSplit& split,
                                  const Tolerances& tol);

/// True iff the E_ii block of strat_from_slh(m) is invertible. Also
/// evaluates the scattering shortcut
///   script_S_ii = S_ii - S_ie (I_e + S_ee)^-1 S_ei
/// and asserts that invertibility of I - script_S_ii matches the direct
/// test whenever the external pivot exists.
bool e_ii_representability(const SLHModel& m, const ChannelSplit& split,
                           const Tolerances& tol);

/// 0/1 scalar-entry permutation matrix with [eta]_jk = 1 iff j = sigma(k),
/// labeled "1".."n", block dimension 1.
BlockMatrix adjacency_matrix(const Permutation& sigma);

/// The E_kk block whose Cayley transform reproduces eta(sigma):
/// (2/i)(I - eta)(I + eta)^-1. Fails with EvenCycle exactly when sigma has
/// a cycle of even length.
BlockMatrix permutation_strat(const Permutation& sigma, const Tolerances& tol);

/// Static Lindblad generator applied to rho:
///   -i[H,rho] + sum_k (L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho}).
Operator lindblad_generator(const SLHModel& m, const Operator& rho);

}  // namespace qfn
