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

#include <optional>
#include <string>
#include <vector>

#include "qfn/network.hpp"

namespace qfn {

/// One declared component. Channels of the stored model are namespaced as
/// "name.port" so that network assembly cannot collide.
struct ComponentDecl {
  std::string name;
  std::vector<std::string> inputs;
  std::string form;                     // "slh" or "strat"
  std::optional<SLHModel> slh;          // present when form == "slh"
  std::optional<StratGenerator> strat;  // present when form == "strat"
};

/// A wire from an internal output port to an internal input port.
struct Connection {
  std::string from_component;
  std::string from_port;
  std::string to_component;
  std::string to_port;

  Label from_channel() const { return from_component + "." + from_port; }
  Label to_channel() const { return to_component + "." + to_port; }
};

struct NetworkSpec {
  int hilbert_dim = 1;
  std::vector<ComponentDecl> components;
  std::vector<Connection> connections;
};

/// Parses and structurally validates a network document; model invariants
/// (S unitary, H self-adjoint, E Hermitian-structured) are checked within
/// tol.eq_tol.
NetworkSpec parse_network(const std::string& text,
                          const Tolerances& tol = Tolerances());

/// The concatenated open-loop network before connections are closed.
struct OpenLoop {
  SLHModel model;                       // concatenated, adjacency not absorbed
  std::optional<StratGenerator> strat;  // when every component is representable
  ChannelSplit split;                   // internal = connected output channels
  Permutation routing;                  // input routing over all channels
};

/// Concatenates the components in declaration order and derives the
/// channel split and the input-routing permutation from the connections.
/// Channel k of the open loop pairs output k with input routing(k); for
/// connected channels the routing follows the wires, for external channels
/// it pairs unconnected outputs with unconnected inputs in declaration
/// order.
OpenLoop build_open_loop(const NetworkSpec& spec);

enum class Route { Ito, Strat, Both };

struct ReductionResult {
  SLHModel slh;
  std::optional<StratGenerator> strat;
  /// Max element-wise discrepancy between the Ito and Stratonovich routes;
  /// negative unless route == Both.
  double cross_check_discrepancy = -1.0;
};

/// Runs the reduction pipeline: absorb the routing into S, then eliminate
/// the internal channels. Route Ito uses the SLH rule, route Strat the
/// Schur complement of the Stratonovich generator, route Both runs both
/// and reports their discrepancy.
ReductionResult reduce_network(const NetworkSpec& spec, Route route,
                               const Tolerances& tol);

/// Deterministic normalized document text: stable key order, operators
/// always in full d x d array form, floats with 17 significant digits.
std::string serialize_network(const NetworkSpec& spec);

/// Serializes a reduction result as a one-component document (component
/// name "reduced", ports named by the external channel labels). Stratonovich
/// results use form "strat", otherwise form "slh".
std::string serialize_model(const ReductionResult& result);

}  // namespace qfn
