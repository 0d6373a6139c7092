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

#include "qfn/models.hpp"

#include <utility>

namespace qfn {

namespace {

const Complex kI{0.0, 1.0};

LabelSet with_initial(const LabelSet& channels) {
  return LabelSet::unioned(LabelSet({kInitialLabel}), channels);
}

}  // namespace

SLHModel::SLHModel(LabelSet channels_, BlockMatrix s, std::vector<Operator> l,
                   Operator h)
    : channels(std::move(channels_)), S(std::move(s)), L(std::move(l)), H(std::move(h)) {
  if (!(S.rows() == channels && S.cols() == channels)) {
    throw DimMismatchError("S labels must equal the channel set");
  }
  if (static_cast<int>(L.size()) != channels.size()) {
    throw DimMismatchError("L length must equal the channel count");
  }
  if (S.dim() != H.dim()) throw DimMismatchError("S and H dims differ");
  for (const Operator& l_op : L) {
    if (l_op.dim() != H.dim()) throw DimMismatchError("L and H dims differ");
  }
}

SLHModel SLHModel::identity(const LabelSet& channels, int dim) {
  return SLHModel(channels, BlockMatrix::identity(channels, dim),
                  std::vector<Operator>(channels.size(), Operator(dim)),
                  Operator(dim));
}

BlockMatrix SLHModel::l_column() const {
  BlockMatrix col(channels, LabelSet({kInitialLabel}), dim());
  for (int j = 0; j < n(); ++j) col.set_block(j, 0, L[j]);
  return col;
}

void SLHModel::validate(const Tolerances& tol) const {
  if (n() > 0) {
    const BlockMatrix id = BlockMatrix::identity(channels, dim());
    if (max_abs_diff(S * S.adjoint(), id) > tol.eq_tol ||
        max_abs_diff(S.adjoint() * S, id) > tol.eq_tol) {
      throw InvariantViolationError("S is not unitary");
    }
  }
  if (!is_selfadjoint(H, tol)) {
    throw InvariantViolationError("H is not self-adjoint");
  }
}

StratGenerator::StratGenerator(LabelSet channels_, BlockMatrix e)
    : channels(std::move(channels_)), E(std::move(e)) {
  const LabelSet full = with_initial(channels);
  if (!(E.rows() == full && E.cols() == full)) {
    throw DimMismatchError("E must be labeled by 0 u channels");
  }
}

StratGenerator StratGenerator::zero(const LabelSet& channels, int dim) {
  const LabelSet full = with_initial(channels);
  return StratGenerator(channels, BlockMatrix(full, full, dim));
}

bool StratGenerator::hermitian_structure(double tol) const {
  return max_abs_diff(E, E.adjoint()) <= tol;
}

LabelSet BHMatrix::bh_labels(const LabelSet& channels) {
  return LabelSet::unioned(LabelSet::unioned(LabelSet({kTopLabel}), channels),
                           LabelSet({kBottomLabel}));
}

BHMatrix BHMatrix::identity(const LabelSet& channels, int dim) {
  return BHMatrix{channels, BlockMatrix::identity(bh_labels(channels), dim)};
}

BHMatrix BHMatrix::swap(const LabelSet& channels, int dim) {
  BlockMatrix m(bh_labels(channels), bh_labels(channels), dim);
  m.set_entry(kTopLabel, kBottomLabel, Operator::identity(dim));
  m.set_entry(kBottomLabel, kTopLabel, Operator::identity(dim));
  for (const Label& k : channels) m.set_entry(k, k, Operator::identity(dim));
  return BHMatrix{channels, std::move(m)};
}

BHMatrix bh_embed(const LabelSet& channels, const BlockMatrix& x) {
  const LabelSet full = with_initial(channels);
  if (!(x.rows() == full && x.cols() == full)) {
    throw DimMismatchError("bh_embed expects a (0 u k)-square matrix");
  }
  BlockMatrix m(BHMatrix::bh_labels(channels), BHMatrix::bh_labels(channels), x.dim());
  m.set_entry(kTopLabel, kBottomLabel, x.entry(kInitialLabel, kInitialLabel));
  for (const Label& k : channels) {
    m.set_entry(kTopLabel, k, x.entry(kInitialLabel, k));
    m.set_entry(k, kBottomLabel, x.entry(k, kInitialLabel));
    for (const Label& l : channels) m.set_entry(k, l, x.entry(k, l));
  }
  return BHMatrix{channels, std::move(m)};
}

BlockMatrix bh_extract(const BHMatrix& x) {
  const LabelSet full = with_initial(x.channels);
  BlockMatrix out(full, full, x.dim());
  out.set_entry(kInitialLabel, kInitialLabel, x.M.entry(kTopLabel, kBottomLabel));
  for (const Label& k : x.channels) {
    out.set_entry(kInitialLabel, k, x.M.entry(kTopLabel, k));
    out.set_entry(k, kInitialLabel, x.M.entry(k, kBottomLabel));
    for (const Label& l : x.channels) out.set_entry(k, l, x.M.entry(k, l));
  }
  return out;
}

BlockMatrix ito_delta_product(const LabelSet& channels, const BlockMatrix& x,
                              const BlockMatrix& y) {
  return sub_block(x, x.rows(), channels) * sub_block(y, channels, y.cols());
}

BHMatrix bh_star(const BHMatrix& v) {
  const BHMatrix j = BHMatrix::swap(v.channels, v.dim());
  return BHMatrix{v.channels, j.M * v.M.adjoint() * j.M};
}

ItoGenerator ito_from_slh(const SLHModel& m) {
  const LabelSet full = with_initial(m.channels);
  BlockMatrix g(full, full, m.dim());

  Operator ll(m.dim());
  for (const Operator& l : m.L) ll = ll + l.adjoint() * l;
  g.set_entry(kInitialLabel, kInitialLabel, -(0.5 * ll + kI * m.H));

  for (int j = 0; j < m.n(); ++j) {
    // Row block -L^dag S, entry j: -sum_m L_m^dag S_mj.
    Operator row_j(m.dim());
    for (int mm = 0; mm < m.n(); ++mm) {
      row_j = row_j + m.L[mm].adjoint() * m.S.block(mm, j);
    }
    g.set_entry(kInitialLabel, m.channels[j], -row_j);
    g.set_entry(m.channels[j], kInitialLabel, m.L[j]);
    for (int k = 0; k < m.n(); ++k) {
      Operator s = m.S.block(j, k);
      if (j == k) s = s - Operator::identity(m.dim());
      g.set_entry(m.channels[j], m.channels[k], s);
    }
  }
  return ItoGenerator{m.channels, std::move(g)};
}

BHMatrix v_from_slh(const SLHModel& m) {
  const ItoGenerator g = ito_from_slh(m);
  const BHMatrix embedded = bh_embed(m.channels, g.G);
  return BHMatrix{m.channels,
                  BHMatrix::identity(m.channels, m.dim()).M + embedded.M};
}

SLHModel slh_from_v(const BHMatrix& v, const Tolerances& tol) {
  const int d = v.dim();
  const Operator id = Operator::identity(d);
  const Operator zero(d);
  auto check = [&](const Operator& got, const Operator& want, const char* what) {
    if (max_abs_diff(got, want) > tol.eq_tol) {
      throw MalformedVError(std::string("V block has unexpected shape: ") + what);
    }
  };
  check(v.M.entry(kTopLabel, kTopLabel), id, "V[~0,~0] != I");
  check(v.M.entry(kBottomLabel, kBottomLabel), id, "V[_0,_0] != I");
  check(v.M.entry(kBottomLabel, kTopLabel), zero, "V[_0,~0] != 0");
  for (const Label& k : v.channels) {
    check(v.M.entry(k, kTopLabel), zero, "V[k,~0] != 0");
    check(v.M.entry(kBottomLabel, k), zero, "V[_0,k] != 0");
  }

  BlockMatrix s = sub_block(v.M, v.channels, v.channels);
  std::vector<Operator> l;
  l.reserve(v.channels.size());
  for (const Label& k : v.channels) l.push_back(v.M.entry(k, kBottomLabel));
  const Operator kk = v.M.entry(kTopLabel, kBottomLabel);
  const Operator h = Complex(0.0, 0.5) * (kk - kk.adjoint());

  // Consistency: V[~0,k] must be the row -L^dag S.
  for (int j = 0; j < v.channels.size(); ++j) {
    Operator row_j(d);
    for (int mm = 0; mm < v.channels.size(); ++mm) {
      row_j = row_j + l[mm].adjoint() * s.block(mm, j);
    }
    if (max_abs_diff(v.M.entry(kTopLabel, v.channels[j]), -row_j) > tol.eq_tol) {
      throw MalformedVError("V[~0,k] inconsistent with -L^dag S");
    }
  }
  return SLHModel(v.channels, std::move(s), std::move(l), h);
}

SLHModel slh_from_strat(const StratGenerator& e, const Tolerances& tol) {
  const int d = e.dim();
  const Operator e00 = e.E.entry(kInitialLabel, kInitialLabel);
  if (e.channels.empty()) {
    return SLHModel(e.channels, BlockMatrix(e.channels, e.channels, d), {}, e00);
  }

  const BlockMatrix e_kk = e.e_kk();
  const BlockMatrix id = BlockMatrix::identity(e.channels, d);
  const BlockMatrix a = id + Complex(0.0, 0.5) * e_kk;
  BlockMatrix a_inv(e.channels, e.channels, d);
  try {
    a_inv = block_inverse(a, tol);
  } catch (const SingularError& err) {
    throw SingularError("I + i/2 E_kk is singular", "I+i/2*E_kk",
                        err.smallest_pivot());
  }
  const BlockMatrix s = (id - Complex(0.0, 0.5) * e_kk) * a_inv;

  BlockMatrix e_k0(e.channels, LabelSet({kInitialLabel}), d);
  BlockMatrix e_0k(LabelSet({kInitialLabel}), e.channels, d);
  for (const Label& k : e.channels) {
    e_k0.set_entry(k, kInitialLabel, e.E.entry(k, kInitialLabel));
    e_0k.set_entry(kInitialLabel, k, e.E.entry(kInitialLabel, k));
  }
  const BlockMatrix l_col = Complex(0.0, -1.0) * (a_inv * e_k0);
  std::vector<Operator> l;
  for (int j = 0; j < e.channels.size(); ++j) l.push_back(l_col.block(j, 0));

  const Operator cross = (e_0k * a_inv * e_k0).block(0, 0);
  const Operator h = e00 + 0.5 * imag_part(cross);
  return SLHModel(e.channels, s, std::move(l), h);
}

StratGenerator strat_from_slh(const SLHModel& m, const Tolerances& tol) {
  const int d = m.dim();
  const LabelSet full = with_initial(m.channels);
  if (m.channels.empty()) {
    BlockMatrix e(full, full, d);
    e.set_entry(kInitialLabel, kInitialLabel, m.H);
    return StratGenerator(m.channels, std::move(e));
  }

  const BlockMatrix id = BlockMatrix::identity(m.channels, d);
  BlockMatrix b_inv(m.channels, m.channels, d);
  try {
    b_inv = block_inverse(id + m.S, tol);
  } catch (const SingularError& err) {
    throw NotRepresentableError("I + S is singular: no Stratonovich form",
                                "I+S", err.smallest_pivot());
  }
  const BlockMatrix e_kk = Complex(0.0, -2.0) * (b_inv * (id - m.S));

  const BlockMatrix a = id + Complex(0.0, 0.5) * e_kk;
  const BlockMatrix e_k0 = kI * (a * m.l_column());
  const BlockMatrix e_0k = e_k0.adjoint();
  const BlockMatrix a_inv = block_inverse(a, tol);
  const Operator cross = (e_0k * a_inv * e_k0).block(0, 0);
  const Operator e00 = m.H - 0.5 * imag_part(cross);

  BlockMatrix e(full, full, d);
  e.set_entry(kInitialLabel, kInitialLabel, e00);
  for (int j = 0; j < m.n(); ++j) {
    e.set_entry(m.channels[j], kInitialLabel, e_k0.block(j, 0));
    e.set_entry(kInitialLabel, m.channels[j], e_0k.block(0, j));
    for (int k = 0; k < m.n(); ++k) {
      e.set_entry(m.channels[j], m.channels[k], e_kk.block(j, k));
    }
  }
  return StratGenerator(m.channels, std::move(e));
}

BHMatrix v_from_strat(const StratGenerator& e, const Tolerances& tol) {
  const BHMatrix embedded = bh_embed(e.channels, e.E);
  const BlockMatrix id = BHMatrix::identity(e.channels, e.dim()).M;
  BlockMatrix denom_inv(embedded.M.rows(), embedded.M.cols(), e.dim());
  try {
    denom_inv = block_inverse(id + Complex(0.0, 0.5) * embedded.M, tol);
  } catch (const SingularError& err) {
    throw SingularError("I + i/2 E is singular", "I+i/2*E", err.smallest_pivot());
  }
  return BHMatrix{e.channels, (id - Complex(0.0, 0.5) * embedded.M) * denom_inv};
}

double max_abs_diff(const SLHModel& a, const SLHModel& b) {
  if (a.L.size() != b.L.size()) throw DimMismatchError("channel counts differ");
  double m = max_abs_diff(a.S, b.S);
  m = std::max(m, max_abs_diff(a.H, b.H));
  for (size_t j = 0; j < a.L.size(); ++j) {
    m = std::max(m, max_abs_diff(a.L[j], b.L[j]));
  }
  return m;
}

}  // namespace qfn
