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

#include "qfn/netlist.hpp"

#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace qfn {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) {
  throw InvariantViolationError("invalid document: " + what);
}

Complex parse_complex(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    schema_error(ctx + " must be a [re, im] pair");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

// OpLit: [re, im] (scalar times identity) or a full d x d array of pairs.
Operator parse_operator(const json& j, int d, const std::string& ctx) {
  if (!j.is_array() || j.empty()) schema_error(ctx + " must be an operator literal");
  if (j.size() == 2 && j[0].is_number()) {
    return Operator::scalar(d, parse_complex(j, ctx));
  }
  if (static_cast<int>(j.size()) != d) {
    throw DimMismatchError(ctx + " has " + std::to_string(j.size()) +
                           " rows, expected " + std::to_string(d));
  }
  Operator op(d);
  for (int r = 0; r < d; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != d) {
      throw DimMismatchError(ctx + " row " + std::to_string(r) +
                             " must have " + std::to_string(d) + " entries");
    }
    for (int c = 0; c < d; ++c) op.set(r, c, parse_complex(j[r][c], ctx));
  }
  return op;
}

LabelSet namespaced_channels(const std::string& name,
                             const std::vector<std::string>& ports) {
  std::vector<Label> labels;
  for (const std::string& p : ports) labels.push_back(name + "." + p);
  return LabelSet(std::move(labels));
}

ComponentDecl parse_component(const json& j, int d, const Tolerances& tol) {
  if (!j.is_object()) schema_error("component must be an object");
  for (const char* key : {"name", "inputs", "form"}) {
    if (!j.contains(key)) schema_error(std::string("component missing '") + key + "'");
  }
  ComponentDecl decl;
  if (!j["name"].is_string()) schema_error("component name must be a string");
  decl.name = j["name"].get<std::string>();
  if (decl.name.empty() || decl.name.find('.') != std::string::npos) {
    schema_error("component name must be non-empty and must not contain '.'");
  }
  if (!j["inputs"].is_array()) schema_error("component inputs must be an array");
  std::set<std::string> seen_ports;
  for (const auto& p : j["inputs"]) {
    if (!p.is_string() || p.get<std::string>().empty()) {
      schema_error("port names must be non-empty strings");
    }
    if (!seen_ports.insert(p.get<std::string>()).second) {
      throw LabelCollisionError("duplicate port '" + p.get<std::string>() +
                                "' in component '" + decl.name + "'");
    }
    decl.inputs.push_back(p.get<std::string>());
  }
  decl.form = j["form"].is_string() ? j["form"].get<std::string>() : "";

  const int n = static_cast<int>(decl.inputs.size());
  const LabelSet channels = namespaced_channels(decl.name, decl.inputs);
  const std::string ctx = "component '" + decl.name + "'";

  if (decl.form == "slh") {
    for (const char* key : {"S", "L", "H"}) {
      if (!j.contains(key)) schema_error(ctx + " (form slh) missing '" + key + "'");
    }
    if (!j["S"].is_array() || static_cast<int>(j["S"].size()) != n) {
      throw DimMismatchError(ctx + ": S must be " + std::to_string(n) + " rows");
    }
    BlockMatrix s(channels, channels, d);
    for (int r = 0; r < n; ++r) {
      if (!j["S"][r].is_array() || static_cast<int>(j["S"][r].size()) != n) {
        throw DimMismatchError(ctx + ": S row " + std::to_string(r) +
                               " must have " + std::to_string(n) + " entries");
      }
      for (int c = 0; c < n; ++c) {
        s.set_block(r, c, parse_operator(j["S"][r][c], d, ctx + " S"));
      }
    }
    if (!j["L"].is_array() || static_cast<int>(j["L"].size()) != n) {
      throw DimMismatchError(ctx + ": L must have " + std::to_string(n) + " entries");
    }
    std::vector<Operator> l;
    for (int r = 0; r < n; ++r) l.push_back(parse_operator(j["L"][r], d, ctx + " L"));
    const Operator h = parse_operator(j["H"], d, ctx + " H");
    SLHModel model(channels, std::move(s), std::move(l), h);
    model.validate(tol);
    decl.slh = std::move(model);
  } else if (decl.form == "strat") {
    if (!j.contains("E")) schema_error(ctx + " (form strat) missing 'E'");
    if (!j["E"].is_array() || static_cast<int>(j["E"].size()) != n + 1) {
      throw DimMismatchError(ctx + ": E must be " + std::to_string(n + 1) + " rows");
    }
    const LabelSet full = LabelSet::unioned(LabelSet({kInitialLabel}), channels);
    BlockMatrix e(full, full, d);
    for (int r = 0; r <= n; ++r) {
      if (!j["E"][r].is_array() || static_cast<int>(j["E"][r].size()) != n + 1) {
        throw DimMismatchError(ctx + ": E row " + std::to_string(r) +
                               " must have " + std::to_string(n + 1) + " entries");
      }
      for (int c = 0; c <= n; ++c) {
        e.set_block(r, c, parse_operator(j["E"][r][c], d, ctx + " E"));
      }
    }
    StratGenerator gen(channels, std::move(e));
    if (!gen.hermitian_structure(tol.eq_tol)) {
      throw InvariantViolationError(ctx + ": E lacks the Hermitian block structure");
    }
    decl.strat = std::move(gen);
  } else {
    schema_error(ctx + ": form must be \"slh\" or \"strat\"");
  }
  return decl;
}

// Splits "comp.out[port]" / "comp.in[port]".
std::pair<std::string, std::string> parse_endpoint(const std::string& s,
                                                   const std::string& kind) {
  const std::string marker = "." + kind + "[";
  const auto pos = s.find(marker);
  if (pos == std::string::npos || pos == 0 || s.back() != ']') {
    schema_error("malformed connection endpoint '" + s + "', expected comp." +
                 kind + "[port]");
  }
  const std::string comp = s.substr(0, pos);
  const std::string port =
      s.substr(pos + marker.size(), s.size() - pos - marker.size() - 1);
  if (port.empty()) schema_error("empty port in connection endpoint '" + s + "'");
  return {comp, port};
}

const ComponentDecl* find_component(const NetworkSpec& spec, const std::string& name) {
  for (const ComponentDecl& c : spec.components) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

void check_port(const NetworkSpec& spec, const std::string& comp,
                const std::string& port, const std::string& endpoint) {
  const ComponentDecl* decl = find_component(spec, comp);
  if (decl == nullptr) {
    throw UnknownPortError("unknown component in '" + endpoint + "'");
  }
  for (const std::string& p : decl->inputs) {
    if (p == port) return;
  }
  throw UnknownPortError("unknown port in '" + endpoint + "'");
}

// ---- serialization --------------------------------------------------------

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string oplit(const Operator& op) {
  std::string out = "[";
  for (int r = 0; r < op.dim(); ++r) {
    if (r > 0) out += ", ";
    out += "[";
    for (int c = 0; c < op.dim(); ++c) {
      if (c > 0) out += ", ";
      out += "[" + fmt_double(op(r, c).real()) + ", " + fmt_double(op(r, c).imag()) + "]";
    }
    out += "]";
  }
  return out + "]";
}

void write_component(std::ostringstream& os, const ComponentDecl& c) {
  os << "    {\n      \"name\": \"" << json_escape(c.name) << "\",\n";
  os << "      \"inputs\": [";
  for (size_t i = 0; i < c.inputs.size(); ++i) {
    if (i > 0) os << ", ";
    os << "\"" << json_escape(c.inputs[i]) << "\"";
  }
  os << "],\n      \"form\": \"" << c.form << "\",\n";
  if (c.form == "slh") {
    const SLHModel& m = *c.slh;
    os << "      \"S\": [";
    for (int r = 0; r < m.n(); ++r) {
      os << (r > 0 ? ",\n            [" : "[");
      for (int cc = 0; cc < m.n(); ++cc) {
        if (cc > 0) os << ", ";
        os << oplit(m.S.block(r, cc));
      }
      os << "]";
    }
    os << "],\n      \"L\": [";
    for (int r = 0; r < m.n(); ++r) {
      if (r > 0) os << ", ";
      os << oplit(m.L[r]);
    }
    os << "],\n      \"H\": " << oplit(m.H) << "\n    }";
  } else {
    const StratGenerator& g = *c.strat;
    const int n1 = g.channels.size() + 1;
    os << "      \"E\": [";
    for (int r = 0; r < n1; ++r) {
      os << (r > 0 ? ",\n            [" : "[");
      for (int cc = 0; cc < n1; ++cc) {
        if (cc > 0) os << ", ";
        os << oplit(g.E.block(r, cc));
      }
      os << "]";
    }
    os << "]\n    }";
  }
}

}  // namespace

NetworkSpec parse_network(const std::string& text, const Tolerances& tol) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SyntaxError(e.what(), e.byte);
  }
  if (!doc.is_object()) schema_error("top level must be an object");
  for (const char* key : {"hilbert_dim", "components", "connections"}) {
    if (!doc.contains(key)) schema_error(std::string("missing '") + key + "'");
  }
  if (!doc["hilbert_dim"].is_number_integer() || doc["hilbert_dim"].get<int>() < 1) {
    schema_error("hilbert_dim must be a positive integer");
  }

  NetworkSpec spec;
  spec.hilbert_dim = doc["hilbert_dim"].get<int>();
  if (!doc["components"].is_array() || doc["components"].empty()) {
    schema_error("components must be a non-empty array");
  }
  std::set<std::string> names;
  for (const auto& cj : doc["components"]) {
    ComponentDecl decl = parse_component(cj, spec.hilbert_dim, tol);
    if (!names.insert(decl.name).second) {
      throw LabelCollisionError("duplicate component name '" + decl.name + "'");
    }
    spec.components.push_back(std::move(decl));
  }

  if (!doc["connections"].is_array()) schema_error("connections must be an array");
  std::set<std::string> sources, targets;
  for (const auto& cj : doc["connections"]) {
    if (!cj.is_object() || !cj.contains("from") || !cj.contains("to") ||
        !cj["from"].is_string() || !cj["to"].is_string()) {
      schema_error("each connection must be {\"from\": str, \"to\": str}");
    }
    const std::string from = cj["from"].get<std::string>();
    const std::string to = cj["to"].get<std::string>();
    auto [fc, fp] = parse_endpoint(from, "out");
    auto [tc, tp] = parse_endpoint(to, "in");
    check_port(spec, fc, fp, from);
    check_port(spec, tc, tp, to);
    if (!sources.insert(fc + "." + fp).second) {
      throw DuplicateConnectionError("output '" + from + "' used twice");
    }
    if (!targets.insert(tc + "." + tp).second) {
      throw DuplicateConnectionError("input '" + to + "' used twice");
    }
    spec.connections.push_back(Connection{fc, fp, tc, tp});
  }
  return spec;
}

OpenLoop build_open_loop(const NetworkSpec& spec) {
  const Tolerances tol;
  std::vector<SLHModel> models;
  bool representable = true;
  std::vector<StratGenerator> gens;
  for (const ComponentDecl& c : spec.components) {
    if (c.slh) {
      models.push_back(*c.slh);
      if (representable) {
        try {
          gens.push_back(strat_from_slh(*c.slh, tol));
        } catch (const NotRepresentableError&) {
          representable = false;
        }
      }
    } else {
      models.push_back(slh_from_strat(*c.strat, tol));
      if (representable) gens.push_back(*c.strat);
    }
  }
  SLHModel model = concat_slh(models);

  std::map<Label, Label> wire;  // internal output channel -> input channel
  std::set<Label> targets;
  for (const Connection& c : spec.connections) {
    wire[c.from_channel()] = c.to_channel();
    targets.insert(c.to_channel());
  }

  std::vector<Label> internal, external;
  for (const Label& l : model.channels) {
    (wire.count(l) ? internal : external).push_back(l);
  }
  // Unconnected inputs in declaration order, to be paired with the
  // unconnected outputs in declaration order.
  std::vector<Label> free_inputs;
  for (const Label& l : model.channels) {
    if (!targets.count(l)) free_inputs.push_back(l);
  }

  std::vector<int> routing(model.n());
  size_t next_free = 0;
  for (int x = 0; x < model.n(); ++x) {
    const Label& lx = model.channels[x];
    auto it = wire.find(lx);
    if (it != wire.end()) {
      routing[x] = model.channels.index_of(it->second);
    } else {
      routing[x] = model.channels.index_of(free_inputs[next_free++]);
    }
  }

  OpenLoop ol{std::move(model),
              representable ? std::optional<StratGenerator>(concat_strat(gens))
                            : std::nullopt,
              ChannelSplit{LabelSet(std::move(external)), LabelSet(std::move(internal))},
              Permutation(std::move(routing))};
  return ol;
}

ReductionResult reduce_network(const NetworkSpec& spec, Route route,
                               const Tolerances& tol) {
  const OpenLoop ol = build_open_loop(spec);
  const SLHModel absorbed = absorb_input_permutation(ol.model, ol.routing);

  ReductionResult result{feedback_slh(absorbed, ol.split, tol), std::nullopt, -1.0};

  if (route == Route::Strat || route == Route::Both) {
    const StratGenerator open_e = strat_from_slh(absorbed, tol);
    result.strat = feedback_strat(open_e, ol.split, tol);
    if (route == Route::Both) {
      // Compare the two routes at whichever level converts cleanly.
      try {
        const StratGenerator via_ito = strat_from_slh(result.slh, tol);
        result.cross_check_discrepancy =
            max_abs_diff(via_ito.E, result.strat->E);
      } catch (const NotRepresentableError&) {
        const SLHModel via_strat = slh_from_strat(*result.strat, tol);
        result.cross_check_discrepancy = max_abs_diff(via_strat, result.slh);
      }
    }
  }
  return result;
}

std::string serialize_network(const NetworkSpec& spec) {
  std::ostringstream os;
  os << "{\n  \"hilbert_dim\": " << spec.hilbert_dim << ",\n  \"components\": [\n";
  for (size_t i = 0; i < spec.components.size(); ++i) {
    write_component(os, spec.components[i]);
    os << (i + 1 < spec.components.size() ? ",\n" : "\n");
  }
  os << "  ],\n  \"connections\": [";
  for (size_t i = 0; i < spec.connections.size(); ++i) {
    os << (i > 0 ? ",\n    " : "\n    ");
    os << "{ \"from\": \"" << json_escape(spec.connections[i].from_component) << ".out["
       << json_escape(spec.connections[i].from_port) << "]\", \"to\": \""
       << json_escape(spec.connections[i].to_component) << ".in["
       << json_escape(spec.connections[i].to_port) << "]\" }";
  }
  os << (spec.connections.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return os.str();
}

std::string serialize_model(const ReductionResult& result) {
  NetworkSpec one;
  one.hilbert_dim = result.slh.dim();
  ComponentDecl decl;
  decl.name = "reduced";

  const bool strat_form = result.strat.has_value() &&
                          result.cross_check_discrepancy < 0.0;
  if (strat_form) {
    const StratGenerator& g = *result.strat;
    decl.form = "strat";
    for (const Label& l : g.channels) decl.inputs.push_back(l);
    const LabelSet channels = namespaced_channels(decl.name, decl.inputs);
    const LabelSet full = LabelSet::unioned(LabelSet({kInitialLabel}), channels);
    BlockMatrix e(full, full, g.dim());
    for (int r = 0; r < full.size(); ++r) {
      for (int c = 0; c < full.size(); ++c) e.set_block(r, c, g.E.block(r, c));
    }
    decl.strat = StratGenerator(channels, std::move(e));
  } else {
    const SLHModel& m = result.slh;
    decl.form = "slh";
    for (const Label& l : m.channels) decl.inputs.push_back(l);
    const LabelSet channels = namespaced_channels(decl.name, decl.inputs);
    BlockMatrix s(channels, channels, m.dim());
    for (int r = 0; r < m.n(); ++r) {
      for (int c = 0; c < m.n(); ++c) s.set_block(r, c, m.S.block(r, c));
    }
    decl.slh = SLHModel(channels, std::move(s), m.L, m.H);
  }
  one.components.push_back(std::move(decl));
  return serialize_network(one);
}

}  // namespace qfn
