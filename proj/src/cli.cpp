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

#include "qfn/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "qfn/netlist.hpp"

namespace qfn {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IO", "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Tolerances resolve_tolerances(double tol_flag) {
  double eq = 1e-9;
  if (const char* env = std::getenv("QFN_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || v <= 0.0 || v >= 1.0) {
      throw InvariantViolationError("QFN_TOL must be a number in (0, 1)");
    }
    eq = v;
  }
  if (tol_flag > 0.0) eq = tol_flag;
  return Tolerances{std::min(1e-12, eq), eq};
}

void write_diag(std::ostream& err, const std::string& code,
                const std::string& message, const std::string& block,
                double pivot) {
  err << "{\"error\": \"" << code << "\", \"message\": \"";
  for (char c : message) {
    if (c == '"' || c == '\\') err << '\\';
    err << c;
  }
  err << "\", \"block\": ";
  if (block.empty()) {
    err << "null";
  } else {
    err << "\"" << block << "\"";
  }
  err << ", \"smallest_pivot\": ";
  if (pivot < 0.0) {
    err << "null";
  } else {
    err << fmt_double(pivot);
  }
  err << "}\n";
}

int exit_code_for(const Error& e) {
  const std::string& c = e.code();
  const bool undefined = c == "IllPosed" || c == "SchurUndefined" ||
                         c == "NotRepresentable" || c == "SeriesNotRepresentable";
  return undefined ? 2 : 1;
}

Route parse_route(const std::string& route) {
  if (route == "ito") return Route::Ito;
  if (route == "strat") return Route::Strat;
  return Route::Both;
}

const ComponentDecl& single_component(const NetworkSpec& spec,
                                      const std::string& verb) {
  if (spec.components.size() != 1 || !spec.connections.empty()) {
    throw InvariantViolationError(
        verb + " requires a single-component document without connections");
  }
  return spec.components.front();
}

SLHModel component_slh(const ComponentDecl& decl, const Tolerances& tol) {
  return decl.slh ? *decl.slh : slh_from_strat(*decl.strat, tol);
}

int cmd_reduce(const std::string& path, const std::string& route_name,
               const Tolerances& tol, std::ostream& out, std::ostream& err) {
  const NetworkSpec spec = parse_network(read_file(path), tol);
  const Route route = parse_route(route_name);
  const ReductionResult result = reduce_network(spec, route, tol);
  out << serialize_model(result);
  if (route == Route::Both &&
      result.cross_check_discrepancy > 10.0 * tol.eq_tol) {
    write_diag(err, "CrossCheckFailed",
               "route discrepancy " + fmt_double(result.cross_check_discrepancy) +
                   " exceeds tolerance",
               "", -1.0);
    return 1;
  }
  return 0;
}

int cmd_convert(const std::string& path, const std::string& to,
                const Tolerances& tol, std::ostream& out) {
  NetworkSpec spec = parse_network(read_file(path), tol);
  single_component(spec, "convert");
  ComponentDecl& decl = spec.components.front();
  if (to == "slh" && decl.form != "slh") {
    decl.slh = slh_from_strat(*decl.strat, tol);
    decl.strat.reset();
    decl.form = "slh";
  } else if (to == "strat" && decl.form != "strat") {
    decl.strat = strat_from_slh(*decl.slh, tol);
    decl.slh.reset();
    decl.form = "strat";
  }
  out << serialize_network(spec);
  return 0;
}

int cmd_check(const std::string& path, const Tolerances& tol, std::ostream& out) {
  const NetworkSpec spec = parse_network(read_file(path), tol);
  const OpenLoop ol = build_open_loop(spec);
  const SLHModel absorbed = absorb_input_permutation(ol.model, ol.routing);

  std::ostringstream os;
  os << "{\n  \"external\": [";
  for (int i = 0; i < ol.split.external.size(); ++i) {
    os << (i ? ", " : "") << "\"" << ol.split.external[i] << "\"";
  }
  os << "],\n  \"internal\": [";
  for (int i = 0; i < ol.split.internal.size(); ++i) {
    os << (i ? ", " : "") << "\"" << ol.split.internal[i] << "\"";
  }
  os << "],\n";

  bool representable = true;
  try {
    const StratGenerator e = strat_from_slh(absorbed, tol);
    const WellPosednessReport report = wellposedness(e, ol.split, tol);
    os << "  \"representable\": true,\n";
    os << "  \"e_ii_invertible\": " << (report.e_ii_invertible ? "true" : "false")
       << ",\n";
    os << "  \"script_e_ii_invertible\": "
       << (report.script_e_ii_invertible ? "true" : "false") << ",\n";
    os << "  \"i_minus_s_ii_invertible\": "
       << (report.i_minus_s_ii_invertible ? "true" : "false") << ",\n";
    os << "  \"well_posed\": " << (report.script_e_ii_invertible ? "true" : "false")
       << ",\n";
    os << "  \"smallest_pivot\": " << fmt_double(report.smallest_pivot) << "\n}\n";
  } catch (const NotRepresentableError&) {
    representable = false;
  }
  if (!representable) {
    // The Ito-side condition is still decidable: I - S_ii invertible.
    const BlockMatrix s_ii =
        sub_block(absorbed.S, ol.split.internal, ol.split.internal);
    const BlockMatrix gap =
        BlockMatrix::identity(ol.split.internal, absorbed.dim()) - s_ii;
    double pivot = -1.0;
    const bool ok = block_invertible(gap, tol, &pivot);
    os << "  \"representable\": false,\n";
    os << "  \"e_ii_invertible\": null,\n";
    os << "  \"script_e_ii_invertible\": null,\n";
    os << "  \"i_minus_s_ii_invertible\": " << (ok ? "true" : "false") << ",\n";
    os << "  \"well_posed\": " << (ok ? "true" : "false") << ",\n";
    os << "  \"smallest_pivot\": " << fmt_double(pivot) << "\n}\n";
  }
  out << os.str();
  return 0;
}

int cmd_series(const std::string& path2, const std::string& path1,
               const Tolerances& tol, std::ostream& out) {
  const NetworkSpec spec2 = parse_network(read_file(path2), tol);
  const NetworkSpec spec1 = parse_network(read_file(path1), tol);
  const SLHModel m2 = component_slh(single_component(spec2, "series"), tol);
  const SLHModel m1 = component_slh(single_component(spec1, "series"), tol);
  const ReductionResult result{series_slh(m2, m1), std::nullopt, -1.0};
  out << serialize_model(result);
  return 0;
}

int cmd_examples(const std::string& dir, std::ostream& out) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("IO", "cannot create directory '" + dir + "'");
  for (const auto& [name, text] : bundled_examples()) {
    const std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("IO", "cannot write '" + path.string() + "'");
    f << text;
    out << path.string() << "\n";
  }
  return 0;
}

// ---- bundled documents ----------------------------------------------------

Operator scalar1(Complex z) { return Operator::scalar(1, z); }

ComponentDecl strat_component(const std::string& name,
                              std::vector<std::string> ports, int d,
                              const BlockMatrix& e_full) {
  ComponentDecl decl;
  decl.name = name;
  decl.inputs = std::move(ports);
  decl.form = "strat";
  std::vector<Label> labels;
  for (const std::string& p : decl.inputs) labels.push_back(name + "." + p);
  decl.strat = StratGenerator(LabelSet(labels), e_full);
  (void)d;
  return decl;
}

ComponentDecl slh_component(const std::string& name,
                            std::vector<std::string> ports, const BlockMatrix& s,
                            std::vector<Operator> l, const Operator& h) {
  ComponentDecl decl;
  decl.name = name;
  decl.inputs = std::move(ports);
  decl.form = "slh";
  std::vector<Label> labels;
  for (const std::string& p : decl.inputs) labels.push_back(name + "." + p);
  decl.slh = SLHModel(LabelSet(labels), s, std::move(l), h);
  return decl;
}

NetworkSpec beamsplitter_gamma0() {
  // Stratonovich beam splitter with E_kk = [[alpha, beta], [beta*, 0]] and a
  // self-loop on the second channel; the reduced scattering is -1.
  const Complex alpha(0.5, 0.0), beta(0.6, 0.8);
  const LabelSet channels({"bs.a", "bs.b"});
  const LabelSet full = LabelSet::unioned(LabelSet({kInitialLabel}), channels);
  BlockMatrix e(full, full, 1);
  e.set_entry("bs.a", "bs.a", scalar1(alpha));
  e.set_entry("bs.a", "bs.b", scalar1(beta));
  e.set_entry("bs.b", "bs.a", scalar1(std::conj(beta)));
  NetworkSpec spec;
  spec.hilbert_dim = 1;
  spec.components.push_back(strat_component("bs", {"a", "b"}, 1, e));
  spec.connections.push_back(Connection{"bs", "b", "bs", "b"});
  return spec;
}

NetworkSpec swap_gate() {
  const LabelSet channels({"swap.1", "swap.2"});
  BlockMatrix s(channels, channels, 1);
  s.set_entry("swap.1", "swap.2", scalar1(1.0));
  s.set_entry("swap.2", "swap.1", scalar1(1.0));
  NetworkSpec spec;
  spec.hilbert_dim = 1;
  spec.components.push_back(
      slh_component("swap", {"1", "2"}, s, {Operator(1), Operator(1)}, Operator(1)));
  return spec;
}

NetworkSpec cascade() {
  // Two qubit components in series: sys1's output drives sys2's input.
  const int d = 2;
  Operator sx(d), sz(d), lower(d), raise_op(d);
  sx.set(0, 1, 1.0);
  sx.set(1, 0, 1.0);
  sz.set(0, 0, 1.0);
  sz.set(1, 1, -1.0);
  lower.set(0, 1, 1.0);
  raise_op.set(1, 0, 1.0);

  const LabelSet c1({"sys1.a"});
  BlockMatrix s1(c1, c1, d);
  s1.set_block(0, 0, Operator::scalar(d, Complex(0.0, 1.0)));
  const LabelSet c2({"sys2.a"});
  BlockMatrix s2(c2, c2, d);
  s2.set_block(0, 0, Operator::identity(d));

  NetworkSpec spec;
  spec.hilbert_dim = d;
  spec.components.push_back(slh_component("sys1", {"a"}, s1, {lower}, sz));
  spec.components.push_back(slh_component("sys2", {"a"}, s2, {raise_op}, sx));
  spec.connections.push_back(Connection{"sys1", "a", "sys2", "a"});
  return spec;
}

NetworkSpec mirror() {
  const LabelSet channels({"mirror.a"});
  BlockMatrix s(channels, channels, 1);
  s.set_entry("mirror.a", "mirror.a", scalar1(-1.0));
  NetworkSpec spec;
  spec.hilbert_dim = 1;
  spec.components.push_back(
      slh_component("mirror", {"a"}, s, {Operator(1)}, Operator(1)));
  return spec;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> bundled_examples() {
  return {
      {"beamsplitter_gamma0.json", serialize_network(beamsplitter_gamma0())},
      {"swap_gate.json", serialize_network(swap_gate())},
      {"cascade.json", serialize_network(cascade())},
      {"mirror.json", serialize_network(mirror())},
  };
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Quantum feedback network reduction toolkit"};
  app.require_subcommand(1);

  std::string file, file2, route = "ito", to, dir = ".";
  double tol_flag = -1.0;

  CLI::App* reduce = app.add_subcommand("reduce", "Reduce a network document");
  reduce->add_option("file", file, "network document")->required();
  reduce->add_option("--route", route, "reduction route")
      ->check(CLI::IsMember({"ito", "strat", "both"}));
  reduce->add_option("--tol", tol_flag, "equality tolerance");

  CLI::App* convert =
      app.add_subcommand("convert", "Convert a single-component document");
  convert->add_option("file", file, "component document")->required();
  convert->add_option("--to", to, "target form")
      ->required()
      ->check(CLI::IsMember({"slh", "strat"}));
  convert->add_option("--tol", tol_flag, "equality tolerance");

  CLI::App* check =
      app.add_subcommand("check", "Well-posedness and representability report");
  check->add_option("file", file, "network document")->required();
  check->add_option("--tol", tol_flag, "equality tolerance");

  CLI::App* series =
      app.add_subcommand("series", "Series product; the first document drives");
  series->add_option("file2", file2, "downstream component document")->required();
  series->add_option("file1", file, "upstream component document")->required();
  series->add_option("--tol", tol_flag, "equality tolerance");

  CLI::App* examples =
      app.add_subcommand("examples", "Write the bundled example documents");
  examples->add_option("dir", dir, "output directory");

  std::vector<const char*> argv;
  argv.push_back("qfn");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }

  try {
    const Tolerances tol = resolve_tolerances(tol_flag);
    if (reduce->parsed()) return cmd_reduce(file, route, tol, out, err);
    if (convert->parsed()) return cmd_convert(file, to, tol, out);
    if (check->parsed()) return cmd_check(file, tol, out);
    if (series->parsed()) return cmd_series(file2, file, tol, out);
    if (examples->parsed()) return cmd_examples(dir, out);
  } catch (const Error& e) {
    write_diag(err, e.code(), e.what(), e.block(), e.smallest_pivot());
    return exit_code_for(e);
  }
  return 1;
}

}  // namespace qfn
