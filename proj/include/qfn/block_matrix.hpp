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

#include <string>
#include <unordered_map>
#include <vector>

#include "qfn/operator_matrix.hpp"

namespace qfn {

using Label = std::string;

/// Ordered set of labels. Order is significant and preserved by every
/// operation; duplicates are rejected.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<Label> labels);

  int size() const noexcept { return static_cast<int>(labels_.size()); }
  bool empty() const noexcept { return labels_.empty(); }
  const Label& operator[](int i) const { return labels_[i]; }
  const std::vector<Label>& labels() const noexcept { return labels_; }

  bool contains(const Label& l) const;
  int index_of(const Label& l) const;  // throws UnknownLabel

  bool is_subset_of(const LabelSet& other) const;
  bool same_set(const LabelSet& other) const;
  bool disjoint(const LabelSet& other) const;

  /// Concatenation; throws LabelCollision on overlap.
  static LabelSet unioned(const LabelSet& a, const LabelSet& b);
  /// Labels of this set not in b, in this set's order.
  LabelSet minus(const LabelSet& b) const;

  bool operator==(const LabelSet& other) const { return labels_ == other.labels_; }

  auto begin() const { return labels_.begin(); }
  auto end() const { return labels_.end(); }

 private:
  std::vector<Label> labels_;
  std::unordered_map<Label, int> index_;
};

/// Matrix of Operators indexed by ordered row and column label sets, all
/// blocks sharing one operator dimension d. This is the carrier for the
/// generator matrices and their Schur complements. Rectangular shapes arise
/// only as extraction results; inversion and Schur complementation require
/// square labeling.
class BlockMatrix {
 public:
  BlockMatrix(LabelSet rows, LabelSet cols, int dim);

  static BlockMatrix identity(const LabelSet& labels, int dim);

  const LabelSet& rows() const noexcept { return rows_; }
  const LabelSet& cols() const noexcept { return cols_; }
  int dim() const noexcept { return dim_; }

  const Operator& entry(const Label& r, const Label& c) const;
  const Operator& block(int i, int j) const { return blocks_[i * cols_.size() + j]; }
  void set_entry(const Label& r, const Label& c, const Operator& op);
  void set_block(int i, int j, const Operator& op);

  BlockMatrix operator+(const BlockMatrix& o) const;
  BlockMatrix operator-(const BlockMatrix& o) const;
  BlockMatrix operator*(const BlockMatrix& o) const;
  BlockMatrix operator-() const;
  friend BlockMatrix operator*(Complex z, const BlockMatrix& x);

  /// Conjugate transpose: swaps the label axes and adjoints each block.
  BlockMatrix adjoint() const;

  double max_abs() const;

 private:
  LabelSet rows_;
  LabelSet cols_;
  int dim_;
  std::vector<Operator> blocks_;
};

/// Copy of the sub-block X_rc with row/column order given by r and c.
BlockMatrix sub_block(const BlockMatrix& x, const LabelSet& r, const LabelSet& c);

/// Inverse of the whole block matrix, computed on the flattened
/// (|rows|*d)-square complex matrix. Result is indexed cols x rows so that
/// X * Y and Y * X are both label-consistent identities.
BlockMatrix block_inverse(const BlockMatrix& x, const Tolerances& tol);

/// Schur complement shortening the labels in `shorted`:
/// X_aa - X_ab X_bb^-1 X_ba with b = shorted, a = rows \ shorted.
/// Requires rows and cols to carry the same label set.
BlockMatrix schur_complement(const BlockMatrix& x, const LabelSet& shorted,
                             const Tolerances& tol);

/// Invertibility test on the flattened matrix. When smallest_pivot is
/// non-null it receives the smallest pivot magnitude seen during the
/// elimination (infinity for an empty matrix).
bool block_invertible(const BlockMatrix& x, const Tolerances& tol,
                      double* smallest_pivot = nullptr);

double max_abs_diff(const BlockMatrix& a, const BlockMatrix& b);
bool approx_equal(const BlockMatrix& a, const BlockMatrix& b, double tol);

}  // namespace qfn
