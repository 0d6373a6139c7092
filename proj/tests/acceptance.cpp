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

// Acceptance checks for the network-reduction calculus. Each check prints a
// single PASS/FAIL line; the process exits nonzero if any check fails.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qfn/cli.hpp"
#include "support.hpp"

using namespace qfn;
using namespace qfn::testing;

namespace {

const Tolerances kTol;

LabelSet seq_labels(const std::string& stem, int n) {
  std::vector<Label> ls;
  for (int j = 0; j < n; ++j) ls.push_back(stem + std::to_string(j + 1));
  return LabelSet(ls);
}

StratGenerator beam_splitter_strat(Complex alpha, Complex beta) {
  const LabelSet k({"1", "2"});
  const LabelSet full = LabelSet::unioned(LabelSet({kInitialLabel}), k);
  BlockMatrix e(full, full, 1);
  e.set_entry("1", "1", Operator::scalar(1, alpha));
  e.set_entry("1", "2", Operator::scalar(1, beta));
  e.set_entry("2", "1", Operator::scalar(1, std::conj(beta)));
  return StratGenerator(k, e);
}

double star_unitarity_defect(const BHMatrix& v) {
  const BHMatrix id = BHMatrix::identity(v.channels, v.dim());
  return max_abs_diff(v.M * bh_star(v).M, id.M);
}

// --- criterion 1 -----------------------------------------------------------

bool feedback_equivalence(std::string& detail) {
  double worst = 0.0;
  int count = 0;
  while (count < 500) {
    for (int d : {1, 2, 3}) {
      for (int ne : {1, 2}) {
        for (int ni : {1, 2}) {
          const LabelSet ext = seq_labels("e", ne);
          const LabelSet in = seq_labels("i", ni);
          const StratGenerator e = rand_strat_feedback_ready(ext, in, d, 1e-2);
          const ChannelSplit split{ext, in};
          const StratGenerator schur_route = feedback_strat(e, split, kTol);
          const StratGenerator ito_route = strat_from_slh(
              feedback_slh(slh_from_strat(e, kTol), split, kTol), kTol);
          worst = std::max(worst, max_abs_diff(schur_route.E, ito_route.E));
          ++count;
        }
      }
    }
  }
  std::ostringstream os;
  os << count << " samples, max error " << worst;
  detail = os.str();
  return worst <= 1e-8;
}

// --- criterion 2 -----------------------------------------------------------

bool beam_splitter_reproduction(std::string& detail) {
  const ChannelSplit split{LabelSet({"1"}), LabelSet({"2"})};
  double worst_s = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Complex alpha(std::cos(0.37 * trial) * 2.0, 0.0);
    Complex beta = rand_c();
    while (std::abs(beta) < 0.1) beta = rand_c();
    const StratGenerator e = beam_splitter_strat(alpha, beta);

    const SLHModel fb = feedback_slh(slh_from_strat(e, kTol), split, kTol);
    worst_s = std::max(worst_s,
                       std::abs(fb.S.block(0, 0)(0, 0) - Complex(-1.0, 0.0)));
    if (worst_s > 1e-10) break;

    bool threw = false;
    try {
      feedback_strat(e, split, kTol);
    } catch (const SchurUndefinedError&) {
      threw = true;
    }
    if (!threw) {
      detail = "Schur complement unexpectedly defined";
      return false;
    }

    const WellPosednessReport report = wellposedness(e, split, kTol);
    const Complex script_e = Complex(0.0, -0.5) * std::norm(beta) /
                             (1.0 + Complex(0.0, 0.5) * alpha);
    if (!report.script_e_ii_invertible ||
        std::abs(report.smallest_pivot - std::abs(script_e)) > 1e-8) {
      detail = "well-posedness operator mismatch";
      return false;
    }
  }
  std::ostringstream os;
  os << "20 samples, max |S_fb + 1| = " << worst_s;
  detail = os.str();
  return worst_s <= 1e-10;
}

// --- criterion 3 -----------------------------------------------------------

bool star_unitarity(std::string& detail) {
  double worst = 0.0, worst_fb = 0.0;
  int count = 0;
  while (count < 500) {
    for (int d : {1, 2, 3}) {
      for (int n : {2, 3}) {
        const LabelSet k = seq_labels("c", n);
        const SLHModel m = rand_slh(k, d);
        const BHMatrix v = v_from_slh(m);
        worst = std::max(worst, star_unitarity_defect(v));
        ++count;

        const ChannelSplit split{k.minus(LabelSet({k[n - 1]})),
                                 LabelSet({k[n - 1]})};
        const BlockMatrix gap =
            BlockMatrix::identity(split.internal, d) -
            sub_block(m.S, split.internal, split.internal);
        if (smallest_singular(gap) < 0.1) continue;
        worst_fb = std::max(
            worst_fb, star_unitarity_defect(feedback_v(v, split, kTol)));
      }
    }
  }
  std::ostringstream os;
  os << count << " samples, defect " << worst << ", after feedback " << worst_fb;
  detail = os.str();
  return worst <= 1e-10 && worst_fb <= 1e-10;
}

// --- criterion 4 -----------------------------------------------------------

double lemma_defect(const StratGenerator& e) {
  const LabelSet k = e.channels;
  const int d = e.dim();
  const BHMatrix v = v_from_strat(e, kTol);
  const BlockMatrix g = v.M - BHMatrix::identity(k, d).M;

  const LabelSet bh = BHMatrix::bh_labels(k);
  std::vector<Label> primed;
  for (const Label& l : bh) primed.push_back(l + "'");
  const LabelSet bhp(primed);
  const BHMatrix ee = bh_embed(k, e.E);

  BlockMatrix big(LabelSet::unioned(bh, bhp), LabelSet::unioned(bh, bhp), d);
  const double r2 = std::sqrt(2.0);
  for (int i = 0; i < bh.size(); ++i) {
    big.set_entry(bh[i], bh[i], Operator::scalar(d, 2.0));
    big.set_entry(bh[i], bhp[i], Operator::scalar(d, r2));
    big.set_entry(bhp[i], bh[i], Operator::scalar(d, r2));
    for (int j = 0; j < bh.size(); ++j) {
      Operator block = Complex(0.0, 0.5) * ee.M.block(i, j);
      if (i == j) block = block + Operator::identity(d);
      big.set_entry(bhp[i], bhp[j], block);
    }
  }
  return max_abs_diff(-schur_complement(big, bhp, kTol), g);
}

bool lemma_identity(std::string& detail) {
  double worst = 0.0;
  int count = 0;
  while (count < 200) {
    for (int d : {1, 2}) {
      for (int n : {1, 2}) {
        worst = std::max(
            worst, lemma_defect(rand_strat_representable(seq_labels("c", n), d,
                                                         1e-2)));
        ++count;
      }
    }
  }
  std::ostringstream os;
  os << count << " samples, max error " << worst;
  detail = os.str();
  return worst <= 1e-8;
}

// --- criterion 5 -----------------------------------------------------------

bool series_consistency(std::string& detail) {
  double worst = 0.0;
  int count = 0;
  const LabelSet k = seq_labels("c", 2);
  while (count < 200) {
    const int d = 1 + count % 2;
    const StratGenerator e1 = rand_strat_representable(k, d, 1e-2);
    const StratGenerator e2 = rand_strat_representable(k, d, 1e-2);
    const SLHModel m1 = slh_from_strat(e1, kTol);
    const SLHModel m2 = slh_from_strat(e2, kTol);
    const SLHModel direct = series_slh(m2, m1);
    if (smallest_singular(BlockMatrix::identity(k, d) + direct.S) < 1e-2) {
      continue;  // composite not representable; resample
    }
    ++count;

    // V-product route.
    BlockMatrix v2m = v_from_slh(m2).M;
    const SLHModel via_v =
        slh_from_v(BHMatrix{k, v2m * v_from_slh(m1).M}, kTol);
    worst = std::max(worst, max_abs_diff(direct, via_v));

    // Stratonovich route.
    const StratGenerator e_series = series_strat(e2, e1, kTol);
    worst = std::max(worst,
                     max_abs_diff(e_series.E, strat_from_slh(direct, kTol).E));
  }

  // Scalar E_kk = 2 composed with itself: composite S = -1.
  const LabelSet k1({"k"});
  const LabelSet full({kInitialLabel, "k"});
  BlockMatrix ekk2(full, full, 1);
  ekk2.set_entry("k", "k", Operator::scalar(1, 2.0));
  const StratGenerator twice(k1, ekk2);
  bool threw = false;
  try {
    series_strat(twice, twice, kTol);
  } catch (const SeriesNotRepresentableError&) {
    threw = true;
  }
  std::ostringstream os;
  os << count << " pairs, max error " << worst
     << (threw ? ", degenerate pair rejected" : ", degenerate pair ACCEPTED");
  detail = os.str();
  return worst <= 1e-8 && threw;
}

// --- criterion 6 -----------------------------------------------------------

bool shortening_order(std::string& detail) {
  double worst = 0.0;
  int count = 0;
  const LabelSet full({"a", "b", "c", "d"});
  const LabelSet b1({"c"}), b2({"d"}), b12({"c", "d"});
  while (count < 200) {
    const int d = 1 + count % 2;
    BlockMatrix x(full, full, d);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) x.set_block(i, j, rand_op(d));
    }
    if (smallest_singular(sub_block(x, b12, b12)) < 1e-2) continue;
    if (smallest_singular(sub_block(x, b2, b2)) < 1e-2) continue;
    ++count;
    const BlockMatrix joint = schur_complement(x, b12, kTol);
    const BlockMatrix steps =
        schur_complement(schur_complement(x, b2, kTol), b1, kTol);
    worst = std::max(worst, max_abs_diff(joint, steps));
  }
  std::ostringstream os;
  os << count << " samples, max error " << worst;
  detail = os.str();
  return worst <= 1e-8;
}

// --- criterion 7 -----------------------------------------------------------

bool diagnostics_agree(std::string& detail) {
  int disagreements = 0, count = 0;
  const LabelSet ext = seq_labels("e", 1);
  const LabelSet in = seq_labels("i", 1);
  const LabelSet k = LabelSet::unioned(ext, in);
  const ChannelSplit split{ext, in};
  while (count < 500) {
    const int d = 1 + count % 3;
    StratGenerator e = rand_strat_representable(k, d, 1e-4);
    // Half the samples get a singular E_ii so both branches are exercised.
    if (count % 2 == 1) {
      BlockMatrix mod = e.E;
      mod.set_entry("i1", "i1", Operator(d));
      e = StratGenerator(k, mod);
    }
    // Skip samples in the numerically ambiguous band for either quantity.
    const SLHModel m = slh_from_strat(e, kTol);
    const double sv_gap = smallest_singular(
        BlockMatrix::identity(in, d) - sub_block(m.S, in, in));
    const double sv_eii = smallest_singular(sub_block(e.E, in, in));
    if ((sv_gap > 1e-9 && sv_gap < 1e-4) || (sv_eii > 1e-9 && sv_eii < 1e-4)) {
      continue;
    }
    ++count;

    const WellPosednessReport report = wellposedness(e, split, kTol);
    if (report.i_minus_s_ii_invertible != (sv_gap >= 1e-4)) ++disagreements;
    if (report.script_e_ii_invertible != report.i_minus_s_ii_invertible) {
      ++disagreements;
    }
    if (report.e_ii_invertible != (sv_eii >= 1e-4)) ++disagreements;
    // Scattering shortcut against brute-force E_ii extraction.
    if (e_ii_representability(m, split, kTol) != (sv_eii >= 1e-4)) {
      ++disagreements;
    }
  }
  std::ostringstream os;
  os << count << " samples, " << disagreements << " disagreements";
  detail = os.str();
  return disagreements == 0;
}

// --- criterion 8 -----------------------------------------------------------

bool permutation_criterion(std::string& detail) {
  std::vector<int> image{0, 1, 2, 3};
  int checked = 0;
  double worst = 0.0;
  do {
    const Permutation sigma(image);
    bool has_even_cycle = false;
    std::vector<int> cycle_lengths;
    for (const auto& cycle : sigma.cycles()) {
      cycle_lengths.push_back(static_cast<int>(cycle.size()));
      if (cycle.size() % 2 == 0) has_even_cycle = true;
    }

    bool threw = false;
    try {
      const BlockMatrix ekk = permutation_strat(sigma, kTol);
      // The Cayley transform must reproduce the adjacency matrix.
      const LabelSet k = ekk.rows();
      const LabelSet full = LabelSet::unioned(LabelSet({kInitialLabel}), k);
      BlockMatrix e(full, full, 1);
      for (const Label& r : k) {
        for (const Label& c : k) e.set_entry(r, c, ekk.entry(r, c));
      }
      const SLHModel m = slh_from_strat(StratGenerator(k, e), kTol);
      worst = std::max(worst, max_abs_diff(m.S, adjacency_matrix(sigma)));
    } catch (const EvenCycleError&) {
      threw = true;
    }
    if (threw != has_even_cycle) {
      detail = "even-cycle detection mismatch";
      return false;
    }

    // Eigenvalue multiset of eta: union over cycles of the roots of unity.
    std::vector<Complex> predicted;
    for (int len : cycle_lengths) {
      for (int j = 0; j < len; ++j) {
        predicted.push_back(std::polar(1.0, 2.0 * M_PI * j / len));
      }
    }
    Eigen::VectorXcd actual =
        to_eigen(adjacency_matrix(sigma)).eigenvalues();
    std::vector<bool> used(predicted.size(), false);
    for (int j = 0; j < actual.size(); ++j) {
      double best = 1e9;
      int best_idx = -1;
      for (size_t p = 0; p < predicted.size(); ++p) {
        if (used[p]) continue;
        const double dist = std::abs(actual[j] - predicted[p]);
        if (dist < best) {
          best = dist;
          best_idx = static_cast<int>(p);
        }
      }
      if (best > 1e-8) {
        detail = "eigenvalue multiset mismatch";
        return false;
      }
      used[best_idx] = true;
    }
    ++checked;
  } while (std::next_permutation(image.begin(), image.end()));

  // The swap-gate case on two labels.
  bool swap_fails = false;
  try {
    permutation_strat(Permutation({1, 0}), kTol);
  } catch (const EvenCycleError&) {
    swap_fails = true;
  }
  std::ostringstream os;
  os << checked << " permutations, max Cayley error " << worst;
  detail = os.str();
  return checked == 24 && swap_fails && worst <= 1e-8;
}

// --- criterion 9 -----------------------------------------------------------

bool round_trips(std::string& detail) {
  double worst = 0.0;
  int count = 0;
  while (count < 500) {
    for (int d : {1, 2}) {
      for (int n : {1, 2}) {
        const LabelSet k = seq_labels("c", n);
        const StratGenerator e = rand_strat_representable(k, d, 1e-2);
        worst = std::max(
            worst,
            max_abs_diff(strat_from_slh(slh_from_strat(e, kTol), kTol).E, e.E));
        ++count;

        const SLHModel m = rand_slh(k, d);
        if (smallest_singular(BlockMatrix::identity(k, d) + m.S) < 1e-2) {
          continue;
        }
        worst = std::max(
            worst,
            max_abs_diff(slh_from_strat(strat_from_slh(m, kTol), kTol), m));
        ++count;
      }
    }
  }

  bool stable = true;
  for (const auto& [name, text] : bundled_examples()) {
    if (serialize_network(parse_network(text, kTol)) != text) stable = false;
  }
  std::ostringstream os;
  os << count << " round-trips, max error " << worst
     << (stable ? ", documents byte-stable" : ", documents NOT byte-stable");
  detail = os.str();
  return worst <= 1e-8 && stable;
}

// --- criterion 10 ----------------------------------------------------------

ComponentDecl random_component(const std::string& name,
                               const std::vector<std::string>& ports, int d) {
  ComponentDecl decl;
  decl.name = name;
  decl.inputs = ports;
  decl.form = "slh";
  std::vector<Label> labels;
  for (const std::string& p : ports) labels.push_back(name + "." + p);
  decl.slh = rand_slh(LabelSet(labels), d);
  return decl;
}

bool lindblad_oracle(std::string& detail) {
  double worst = 0.0, worst_trace = 0.0;
  int count = 0;
  const int d = 2;
  while (count < 100) {
    NetworkSpec spec;
    spec.hilbert_dim = d;
    spec.components.push_back(random_component("c1", {"a", "b"}, d));
    spec.components.push_back(random_component("c2", {"a", "b"}, d));
    // A genuine loop: c1's second channel feeds c2, whose first channel
    // feeds back into c1.
    spec.connections.push_back(Connection{"c1", "b", "c2", "a"});
    spec.connections.push_back(Connection{"c2", "a", "c1", "b"});

    // Resample until the open loop is representable and comfortably
    // well-posed on both routes.
    const OpenLoop ol = build_open_loop(spec);
    const SLHModel absorbed = absorb_input_permutation(ol.model, ol.routing);
    const LabelSet& in = ol.split.internal;
    if (smallest_singular(BlockMatrix::identity(absorbed.channels, d) +
                          absorbed.S) < 1e-2) {
      continue;
    }
    const StratGenerator e = strat_from_slh(absorbed, kTol);
    if (smallest_singular(sub_block(e.E, in, in)) < 1e-2) continue;
    if (smallest_singular(BlockMatrix::identity(in, d) -
                          sub_block(absorbed.S, in, in)) < 1e-2) {
      continue;
    }
    ++count;

    const ReductionResult r = reduce_network(spec, Route::Both, kTol);
    const SLHModel via_strat = slh_from_strat(*r.strat, kTol);
    for (int trial = 0; trial < 5; ++trial) {
      const Operator rho = rand_density(d);
      const Operator a = lindblad_generator(r.slh, rho);
      const Operator b = lindblad_generator(via_strat, rho);
      worst = std::max(worst, max_abs_diff(a, b));
      worst_trace = std::max(worst_trace,
                             std::max(std::abs(a.trace()), std::abs(b.trace())));
    }
  }
  std::ostringstream os;
  os << count << " networks, max generator gap " << worst << ", max |trace| "
     << worst_trace;
  detail = os.str();
  return worst <= 1e-8 && worst_trace <= 1e-10;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<bool(std::string&)> check;
  };
  const std::vector<Criterion> criteria{
      {"feedback route equivalence (500 generators)", feedback_equivalence},
      {"beam-splitter reproduction (20 samples)", beam_splitter_reproduction},
      {"star-unitarity incl. feedback (500 models)", star_unitarity},
      {"doubled-matrix shortening identity (200 generators)", lemma_identity},
      {"series three-route consistency (200 pairs)", series_consistency},
      {"Schur shortening order-independence (200 matrices)", shortening_order},
      {"well-posedness diagnostics vs brute force (500 samples)",
       diagnostics_agree},
      {"permutation representability and spectra (24 permutations)",
       permutation_criterion},
      {"conversion round-trips and byte-stable documents (500 samples)",
       round_trips},
      {"Lindblad agreement across routes (100 networks)", lindblad_oracle},
  };

  int failures = 0;
  for (size_t j = 0; j < criteria.size(); ++j) {
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[j].check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << (j + 1) << ": "
              << criteria[j].name << " — " << detail << "\n";
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
