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

#include "qfn/block_matrix.hpp"

#include <algorithm>
#include <limits>
#include <utility>

namespace qfn {

LabelSet::LabelSet(std::vector<Label> labels) : labels_(std::move(labels)) {
  for (int i = 0; i < static_cast<int>(labels_.size()); ++i) {
    if (labels_[i].empty()) {
      throw InvariantViolationError("empty label");
    }
    if (!index_.emplace(labels_[i], i).second) {
      throw LabelCollisionError("duplicate label '" + labels_[i] + "'");
    }
  }
}

bool LabelSet::contains(const Label& l) const { return index_.count(l) != 0; }

int LabelSet::index_of(const Label& l) const {
  auto it = index_.find(l);
  if (it == index_.end()) throw UnknownLabelError("unknown label '" + l + "'");
  return it->second;
}

bool LabelSet::is_subset_of(const LabelSet& other) const {
  return std::all_of(labels_.begin(), labels_.end(),
                     [&](const Label& l) { return other.contains(l); });
}

bool LabelSet::same_set(const LabelSet& other) const {
  return size() == other.size() && is_subset_of(other);
}

bool LabelSet::disjoint(const LabelSet& other) const {
  return std::none_of(labels_.begin(), labels_.end(),
                      [&](const Label& l) { return other.contains(l); });
}

LabelSet LabelSet::unioned(const LabelSet& a, const LabelSet& b) {
  std::vector<Label> out = a.labels_;
  out.insert(out.end(), b.labels_.begin(), b.labels_.end());
  return LabelSet(std::move(out));  // ctor reports collisions
}

LabelSet LabelSet::minus(const LabelSet& b) const {
  std::vector<Label> out;
  for (const Label& l : labels_) {
    if (!b.contains(l)) out.push_back(l);
  }
  return LabelSet(std::move(out));
}

BlockMatrix::BlockMatrix(LabelSet rows, LabelSet cols, int dim)
    : rows_(std::move(rows)), cols_(std::move(cols)), dim_(dim) {
  if (dim < 1) throw DimMismatchError("block matrix dim must be >= 1");
  blocks_.assign(static_cast<size_t>(rows_.size()) * cols_.size(), Operator(dim));
}

BlockMatrix BlockMatrix::identity(const LabelSet& labels, int dim) {
  BlockMatrix r(labels, labels, dim);
  for (int i = 0; i < labels.size(); ++i) {
    r.set_block(i, i, Operator::identity(dim));
  }
  return r;
}

const Operator& BlockMatrix::entry(const Label& r, const Label& c) const {
  return block(rows_.index_of(r), cols_.index_of(c));
}

void BlockMatrix::set_entry(const Label& r, const Label& c, const Operator& op) {
  set_block(rows_.index_of(r), cols_.index_of(c), op);
}

void BlockMatrix::set_block(int i, int j, const Operator& op) {
  if (op.dim() != dim_) throw DimMismatchError("block dim mismatch");
  blocks_[i * cols_.size() + j] = op;
}

BlockMatrix BlockMatrix::operator+(const BlockMatrix& o) const {
  if (!(rows_ == o.rows_ && cols_ == o.cols_ && dim_ == o.dim_)) {
    throw DimMismatchError("label/dim mismatch in block +");
  }
  BlockMatrix r(rows_, cols_, dim_);
  for (size_t i = 0; i < blocks_.size(); ++i) r.blocks_[i] = blocks_[i] + o.blocks_[i];
  return r;
}

BlockMatrix BlockMatrix::operator-(const BlockMatrix& o) const {
  if (!(rows_ == o.rows_ && cols_ == o.cols_ && dim_ == o.dim_)) {
    throw DimMismatchError("label/dim mismatch in block -");
  }
  BlockMatrix r(rows_, cols_, dim_);
  for (size_t i = 0; i < blocks_.size(); ++i) r.blocks_[i] = blocks_[i] - o.blocks_[i];
  return r;
}

BlockMatrix BlockMatrix::operator*(const BlockMatrix& o) const {
  if (!(cols_ == o.rows_ && dim_ == o.dim_)) {
    throw DimMismatchError("label/dim mismatch in block *");
  }
  BlockMatrix r(rows_, o.cols_, dim_);
  for (int i = 0; i < rows_.size(); ++i) {
    for (int j = 0; j < o.cols_.size(); ++j) {
      Operator acc(dim_);
      for (int l = 0; l < cols_.size(); ++l) {
        acc = acc + block(i, l) * o.block(l, j);
      }
      r.set_block(i, j, acc);
    }
  }
  return r;
}

BlockMatrix BlockMatrix::operator-() const {
  BlockMatrix r(rows_, cols_, dim_);
  for (size_t i = 0; i < blocks_.size(); ++i) r.blocks_[i] = -blocks_[i];
  return r;
}

BlockMatrix operator*(Complex z, const BlockMatrix& x) {
  BlockMatrix r(x.rows_, x.cols_, x.dim_);
  for (size_t i = 0; i < x.blocks_.size(); ++i) r.blocks_[i] = z * x.blocks_[i];
  return r;
}

BlockMatrix BlockMatrix::adjoint() const {
  BlockMatrix r(cols_, rows_, dim_);
  for (int i = 0; i < rows_.size(); ++i) {
    for (int j = 0; j < cols_.size(); ++j) {
      r.set_block(j, i, block(i, j).adjoint());
    }
  }
  return r;
}

double BlockMatrix::max_abs() const {
  double m = 0.0;
  for (const Operator& b : blocks_) m = std::max(m, b.max_abs());
  return m;
}

BlockMatrix sub_block(const BlockMatrix& x, const LabelSet& r, const LabelSet& c) {
  BlockMatrix out(r, c, x.dim());
  for (const Label& rl : r) {
    for (const Label& cl : c) {
      out.set_entry(rl, cl, x.entry(rl, cl));
    }
  }
  return out;
}

namespace {

Operator flatten(const BlockMatrix& x) {
  // Square-labeled only; caller checks.
  const int n = x.rows().size();
  const int d = x.dim();
  Operator flat(n * d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Operator& b = x.block(i, j);
      for (int p = 0; p < d; ++p) {
        for (int q = 0; q < d; ++q) {
          flat.set(i * d + p, j * d + q, b(p, q));
        }
      }
    }
  }
  return flat;
}

BlockMatrix unflatten(const LabelSet& rows, const LabelSet& cols, int d,
                      const Operator& flat) {
  BlockMatrix out(rows, cols, d);
  for (int i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < cols.size(); ++j) {
      Operator b(d);
      for (int p = 0; p < d; ++p) {
        for (int q = 0; q < d; ++q) {
          b.set(p, q, flat(i * d + p, j * d + q));
        }
      }
      out.set_block(i, j, b);
    }
  }
  return out;
}

}  // namespace

BlockMatrix block_inverse(const BlockMatrix& x, const Tolerances& tol) {
  if (x.rows().size() != x.cols().size()) {
    throw DimMismatchError("block_inverse requires equally sized label sets");
  }
  const Operator inv = inverse(flatten(x), tol);
  return unflatten(x.cols(), x.rows(), x.dim(), inv);
}

BlockMatrix schur_complement(const BlockMatrix& x, const LabelSet& shorted,
                             const Tolerances& tol) {
  if (!x.rows().same_set(x.cols())) {
    throw DimMismatchError("schur_complement requires square labeling");
  }
  if (!shorted.is_subset_of(x.rows()) || !shorted.is_subset_of(x.cols())) {
    throw UnknownLabelError("shortened labels not present in matrix");
  }
  if (shorted.empty()) return x;

  const LabelSet a_rows = x.rows().minus(shorted);
  const LabelSet a_cols = x.cols().minus(shorted);
  const BlockMatrix x_aa = sub_block(x, a_rows, a_cols);
  if (a_rows.empty()) return x_aa;

  const BlockMatrix x_ab = sub_block(x, a_rows, shorted);
  const BlockMatrix x_ba = sub_block(x, shorted, a_cols);
  const BlockMatrix x_bb = sub_block(x, shorted, shorted);
  return x_aa - x_ab * block_inverse(x_bb, tol) * x_ba;
}

bool block_invertible(const BlockMatrix& x, const Tolerances& tol,
                      double* smallest_pivot) {
  if (x.rows().size() != x.cols().size()) {
    throw DimMismatchError("block_invertible requires equally sized label sets");
  }
  if (x.rows().empty()) {
    if (smallest_pivot) *smallest_pivot = std::numeric_limits<double>::infinity();
    return true;
  }
  return try_inverse(flatten(x), tol, smallest_pivot).has_value();
}

double max_abs_diff(const BlockMatrix& a, const BlockMatrix& b) {
  return (a - b).max_abs();
}

bool approx_equal(const BlockMatrix& a, const BlockMatrix& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a.dim() == b.dim() &&
         max_abs_diff(a, b) <= tol;
}

}  // namespace qfn
