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

#include "qfn/network.hpp"

#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace qfn {

namespace {

const Complex kI{0.0, 1.0};

// Same blocks, new labels; shapes must agree.
BlockMatrix relabeled(const BlockMatrix& x, const LabelSet& rows,
                      const LabelSet& cols) {
  if (rows.size() != x.rows().size() || cols.size() != x.cols().size()) {
    throw DimMismatchError("relabeling with differently sized label sets");
  }
  BlockMatrix out(rows, cols, x.dim());
  for (int i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < cols.size(); ++j) out.set_block(i, j, x.block(i, j));
  }
  return out;
}

}  // namespace

void ChannelSplit::validate(const LabelSet& channels) const {
  if (!external.disjoint(internal)) {
    throw LabelCollisionError("external and internal label sets overlap");
  }
  const LabelSet all = LabelSet::unioned(external, internal);
  if (!all.same_set(channels)) {
    throw UnknownLabelError("split does not cover the channel set");
  }
}

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (int v : image_) {
    if (v < 0 || v >= static_cast<int>(image_.size()) || seen[v]) {
      throw InvariantViolationError("permutation image is not a bijection");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 0);
  return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
  std::vector<int> img(image_.size());
  for (int k = 0; k < size(); ++k) img[image_[k]] = k;
  return Permutation(std::move(img));
}

std::vector<std::vector<int>> Permutation::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(image_.size(), false);
  for (int start = 0; start < size(); ++start) {
    if (seen[start]) continue;
    std::vector<int> cycle;
    int k = start;
    while (!seen[k]) {
      seen[k] = true;
      cycle.push_back(k);
      k = image_[k];
    }
    out.push_back(std::move(cycle));
  }
  return out;
}

SLHModel concat_slh(const std::vector<SLHModel>& models) {
  if (models.empty()) throw DimMismatchError("concat of zero models");
  const int d = models[0].dim();
  LabelSet all;
  for (const SLHModel& m : models) {
    if (m.dim() != d) throw DimMismatchError("concat models with different dims");
    all = LabelSet::unioned(all, m.channels);
  }
  BlockMatrix s(all, all, d);
  std::vector<Operator> l;
  Operator h(d);
  for (const SLHModel& m : models) {
    for (int j = 0; j < m.n(); ++j) {
      for (int k = 0; k < m.n(); ++k) {
        s.set_entry(m.channels[j], m.channels[k], m.S.block(j, k));
      }
      l.push_back(m.L[j]);
    }
    h = h + m.H;
  }
  return SLHModel(all, std::move(s), std::move(l), h);
}

StratGenerator concat_strat(const std::vector<StratGenerator>& gens) {
  if (gens.empty()) throw DimMismatchError("concat of zero generators");
  const int d = gens[0].dim();
  LabelSet all;
  for (const StratGenerator& g : gens) {
    if (g.dim() != d) throw DimMismatchError("concat generators with different dims");
    all = LabelSet::unioned(all, g.channels);
  }
  const LabelSet full = LabelSet::unioned(LabelSet({kInitialLabel}), all);
  BlockMatrix e(full, full, d);
  Operator e00(d);
  for (const StratGenerator& g : gens) {
    e00 = e00 + g.E.entry(kInitialLabel, kInitialLabel);
    for (const Label& j : g.channels) {
      e.set_entry(j, kInitialLabel, g.E.entry(j, kInitialLabel));
      e.set_entry(kInitialLabel, j, g.E.entry(kInitialLabel, j));
      for (const Label& k : g.channels) e.set_entry(j, k, g.E.entry(j, k));
    }
  }
  e.set_entry(kInitialLabel, kInitialLabel, e00);
  return StratGenerator(all, std::move(e));
}

SLHModel series_slh(const SLHModel& second, const SLHModel& first) {
  if (second.n() != first.n()) throw DimMismatchError("series channel counts differ");
  if (second.dim() != first.dim()) throw DimMismatchError("series dims differ");
  const BlockMatrix s2 = relabeled(second.S, first.channels, first.channels);
  const BlockMatrix l2 = relabeled(second.l_column(), first.channels,
                                   LabelSet({kInitialLabel}));
  const BlockMatrix s = s2 * first.S;
  const BlockMatrix l = l2 + s2 * first.l_column();

  Operator cross(first.dim());
  const BlockMatrix s2l1 = s2 * first.l_column();
  for (int j = 0; j < first.n(); ++j) {
    cross = cross + l2.block(j, 0).adjoint() * s2l1.block(j, 0);
  }
  const Operator h = first.H + second.H + imag_part(cross);

  std::vector<Operator> l_ops;
  for (int j = 0; j < first.n(); ++j) l_ops.push_back(l.block(j, 0));
  return SLHModel(first.channels, s, std::move(l_ops), h);
}

StratGenerator series_strat(const StratGenerator& e2, const StratGenerator& e1,
                            const Tolerances& tol) {
  if (e2.channels.size() != e1.channels.size()) {
    throw DimMismatchError("series channel counts differ");
  }
  if (e2.dim() != e1.dim()) throw DimMismatchError("series dims differ");
  const int d = e1.dim();
  const LabelSet full = LabelSet::unioned(LabelSet({kInitialLabel}), e1.channels);

  const BlockMatrix bb1 = bh_embed(e1.channels, e1.E).M;
  const BlockMatrix bb2 =
      bh_embed(e1.channels, relabeled(e2.E, full, full)).M;
  const BlockMatrix id = BHMatrix::identity(e1.channels, d).M;

  BlockMatrix a_inv(id.rows(), id.cols(), d);
  try {
    a_inv = block_inverse(id + Complex(0.0, 0.5) * bb2, tol);
  } catch (const SingularError& err) {
    throw SingularError("I + i/2 E2 is singular", "I+i/2*E2",
                        err.smallest_pivot());
  }
  BlockMatrix pivot_inv(id.rows(), id.cols(), d);
  try {
    pivot_inv = block_inverse(id - Complex(0.25, 0.0) * (bb2 * bb1), tol);
  } catch (const SingularError& err) {
    throw SeriesNotRepresentableError(
        "I - 1/4 E2 E1 is singular: composite scattering has -1 in its spectrum",
        "I-1/4*E2*E1", err.smallest_pivot());
  }
  const BlockMatrix series =
      a_inv * (bb1 + bb2) * pivot_inv * (id + Complex(0.0, 0.5) * bb2);
  const BlockMatrix e = bh_extract(BHMatrix{e1.channels, series});
  return StratGenerator(e1.channels, e);
}

SLHModel absorb_adjacency(const SLHModel& m, const ChannelSplit& split,
                          const Permutation& sigma) {
  split.validate(m.channels);
  if (sigma.size() != split.internal.size()) {
    throw SizeMismatchError("sigma size differs from the internal channel count");
  }
  BlockMatrix s = m.S;
  // New internal column k is old internal column sigma(k).
  for (int j = 0; j < m.n(); ++j) {
    for (int k = 0; k < split.internal.size(); ++k) {
      s.set_entry(m.channels[j], split.internal[k],
                  m.S.entry(m.channels[j], split.internal[sigma.apply(k)]));
    }
  }
  return SLHModel(m.channels, std::move(s), m.L, m.H);
}

SLHModel absorb_input_permutation(const SLHModel& m, const Permutation& routing) {
  if (routing.size() != m.n()) {
    throw SizeMismatchError("routing size differs from the channel count");
  }
  BlockMatrix s(m.channels, m.channels, m.dim());
  for (int j = 0; j < m.n(); ++j) {
    for (int k = 0; k < m.n(); ++k) {
      s.set_block(j, k, m.S.block(j, routing.apply(k)));
    }
  }
  return SLHModel(m.channels, std::move(s), m.L, m.H);
}

SLHModel feedback_slh(const SLHModel& m, const ChannelSplit& split,
                      const Tolerances& tol) {
  split.validate(m.channels);
  const LabelSet& e = split.external;
  const LabelSet& i = split.internal;
  const int d = m.dim();

  std::vector<Operator> l_e;
  for (const Label& lab : e) l_e.push_back(m.L[m.channels.index_of(lab)]);
  if (i.empty()) {
    return SLHModel(e, sub_block(m.S, e, e), std::move(l_e), m.H);
  }

  const BlockMatrix s_ii = sub_block(m.S, i, i);
  BlockMatrix x(i, i, d);
  try {
    x = block_inverse(BlockMatrix::identity(i, d) - s_ii, tol);
  } catch (const SingularError& err) {
    throw IllPosedError("I - S_ii is singular: network is not well-posed",
                        "I-S_ii", err.smallest_pivot());
  }

  BlockMatrix l_i(i, LabelSet({kInitialLabel}), d);
  for (int j = 0; j < i.size(); ++j) {
    l_i.set_block(j, 0, m.L[m.channels.index_of(i[j])]);
  }

  const BlockMatrix s_fb =
      sub_block(m.S, e, e) + sub_block(m.S, e, i) * x * sub_block(m.S, i, e);
  const BlockMatrix l_corr = sub_block(m.S, e, i) * x * l_i;
  std::vector<Operator> l_fb;
  for (int j = 0; j < e.size(); ++j) {
    l_fb.push_back(l_e[j] + l_corr.block(j, 0));
  }

  // H_fb = H + sum over all output rows j of Im{L_j^dag S_ji (I-S_ii)^-1 L_i}.
  const BlockMatrix r = sub_block(m.S, m.channels, i) * x * l_i;
  Operator cross(d);
  for (int j = 0; j < m.n(); ++j) {
    cross = cross + m.L[j].adjoint() * r.block(j, 0);
  }
  const Operator h_fb = m.H + imag_part(cross);
  return SLHModel(e, s_fb, std::move(l_fb), h_fb);
}

BHMatrix feedback_v(const BHMatrix& v, const ChannelSplit& split,
                    const Tolerances& tol) {
  split.validate(v.channels);
  const LabelSet& i = split.internal;
  const LabelSet reduced = BHMatrix::bh_labels(split.external);
  if (i.empty()) {
    return BHMatrix{split.external, sub_block(v.M, reduced, reduced)};
  }
  BlockMatrix x(i, i, v.dim());
  try {
    x = block_inverse(BlockMatrix::identity(i, v.dim()) - sub_block(v.M, i, i),
                      tol);
  } catch (const SingularError& err) {
    throw IllPosedError("I - V_ii is singular: network is not well-posed",
                        "I-V_ii", err.smallest_pivot());
  }
  const BlockMatrix m = sub_block(v.M, reduced, reduced) +
                        sub_block(v.M, reduced, i) * x * sub_block(v.M, i, reduced);
  return BHMatrix{split.external, m};
}

BHMatrix feedback_g_schur(const SLHModel& m, const ChannelSplit& split,
                          const Tolerances& tol) {
  split.validate(m.channels);
  const BlockMatrix g =
      v_from_slh(m).M - BHMatrix::identity(m.channels, m.dim()).M;
  try {
    return BHMatrix{split.external, schur_complement(g, split.internal, tol)};
  } catch (const SingularError& err) {
    throw IllPosedError("S_ii - I is singular: network is not well-posed",
                        "S_ii-I", err.smallest_pivot());
  }
}

StratGenerator feedback_strat(const StratGenerator& e, const ChannelSplit& split,
                              const Tolerances& tol) {
  split.validate(e.channels);
  try {
    const BlockMatrix reduced = schur_complement(e.E, split.internal, tol);
    return StratGenerator(split.external, reduced);
  } catch (const SingularError& err) {
    throw SchurUndefinedError("E_ii is singular: the Schur complement is not defined",
                              "E_ii", err.smallest_pivot());
  }
}

WellPosednessReport wellposedness(const StratGenerator& e,
                                  const ChannelSplit& split,
                                  const Tolerances& tol) {
  split.validate(e.channels);
  const LabelSet& ext = split.external;
  const LabelSet& in = split.internal;
  const int d = e.dim();
  WellPosednessReport report;
  if (in.empty()) {
    report.e_ii_invertible = true;
    report.script_e_ii_invertible = true;
    report.i_minus_s_ii_invertible = true;
    return report;
  }

  const BlockMatrix e_ii = sub_block(e.E, in, in);
  report.e_ii_invertible = block_invertible(e_ii, tol);

  BlockMatrix script_e_ii = e_ii;
  if (!ext.empty()) {
    const BlockMatrix pivot =
        BlockMatrix::identity(ext, d) + Complex(0.0, 0.5) * sub_block(e.E, ext, ext);
    BlockMatrix pivot_inv(ext, ext, d);
    try {
      pivot_inv = block_inverse(pivot, tol);
    } catch (const SingularError& err) {
      throw SingularError("I_e + i/2 E_ee is singular", "I_e+i/2*E_ee",
                          err.smallest_pivot());
    }
    script_e_ii = e_ii - Complex(0.0, 0.5) * (sub_block(e.E, in, ext) * pivot_inv *
                                              sub_block(e.E, ext, in));
  }
  report.script_e_ii_invertible =
      block_invertible(script_e_ii, tol, &report.smallest_pivot);

  const SLHModel m = slh_from_strat(e, tol);
  const BlockMatrix s_ii = sub_block(m.S, in, in);
  report.i_minus_s_ii_invertible =
      block_invertible(BlockMatrix::identity(in, d) - s_ii, tol);

  if (report.script_e_ii_invertible != report.i_minus_s_ii_invertible) {
    throw InvariantViolationError(
        "well-posedness diagnostics disagree: script-E_ii vs I - S_ii");
  }
  return report;
}

bool e_ii_representability(const SLHModel& m, const ChannelSplit& split,
                           const Tolerances& tol) {
  split.validate(m.channels);
  const LabelSet& ext = split.external;
  const LabelSet& in = split.internal;
  const int d = m.dim();
  if (in.empty()) return true;

  const StratGenerator e = strat_from_slh(m, tol);
  const bool direct = block_invertible(sub_block(e.E, in, in), tol);

  // Scattering shortcut, evaluated when the external pivot exists.
  BlockMatrix script_s_ii = sub_block(m.S, in, in);
  bool shortcut_defined = true;
  if (!ext.empty()) {
    const BlockMatrix pivot =
        BlockMatrix::identity(ext, d) + sub_block(m.S, ext, ext);
    if (block_invertible(pivot, tol)) {
      script_s_ii = script_s_ii - sub_block(m.S, in, ext) * block_inverse(pivot, tol) *
                                      sub_block(m.S, ext, in);
    } else {
      shortcut_defined = false;
    }
  }
  if (shortcut_defined) {
    const bool shortcut =
        block_invertible(BlockMatrix::identity(in, d) - script_s_ii, tol);
    if (shortcut != direct) {
      throw InvariantViolationError(
          "representability shortcut disagrees with the direct E_ii test");
    }
  }
  return direct;
}

BlockMatrix adjacency_matrix(const Permutation& sigma) {
  std::vector<Label> labels;
  for (int k = 1; k <= sigma.size(); ++k) labels.push_back(std::to_string(k));
  const LabelSet ls{labels};
  BlockMatrix eta(ls, ls, 1);
  for (int k = 0; k < sigma.size(); ++k) {
    eta.set_block(sigma.apply(k), k, Operator::identity(1));
  }
  return eta;
}

BlockMatrix permutation_strat(const Permutation& sigma, const Tolerances& tol) {
  for (const auto& cycle : sigma.cycles()) {
    if (cycle.size() % 2 == 0) {
      throw EvenCycleError("permutation has a cycle of even length " +
                           std::to_string(cycle.size()) +
                           ": I + eta is singular");
    }
  }
  const BlockMatrix eta = adjacency_matrix(sigma);
  const BlockMatrix id = BlockMatrix::identity(eta.rows(), 1);
  return Complex(0.0, -2.0) * ((id - eta) * block_inverse(id + eta, tol));
}

Operator lindblad_generator(const SLHModel& m, const Operator& rho) {
  if (rho.dim() != m.dim()) throw DimMismatchError("rho dim differs from model dim");
  Operator out = Complex(0.0, -1.0) * (m.H * rho - rho * m.H);
  for (const Operator& l : m.L) {
    const Operator ld = l.adjoint();
    out = out + l * rho * ld - 0.5 * (ld * l * rho + rho * ld * l);
  }
  return out;
}

}  // namespace qfn
