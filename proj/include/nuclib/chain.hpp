#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nuclib/level_validation.hpp"
#include "nuclib/nuclear_data.hpp"

namespace nuclib {

struct DecayChain {
  Nuclide progenitor;
  // Discovery order; members[0] is the progenitor as given, the rest are
  // level-erased. Stable nuclides never appear.
  std::vector<Nuclide> members;
  bool progenitor_terminal = false;
};

struct LineageBranch;

struct LineageTree {
  Nuclide root;
  std::vector<LineageBranch> children;  // descending branching
};

struct LineageBranch {
  double branching_percent = 0.0;
  // The daughter was already expanded elsewhere in the tree; this branch
  // only links to it and has no children.
  bool cross_reference = false;
  LineageTree tree;
};

struct LineageEdge {
  Nuclide parent;
  Nuclide daughter;
  double branching_percent = 0.0;
  bool cross_reference = false;

  friend bool operator==(const LineageEdge&, const LineageEdge&) = default;
};

struct ProgenyOptions {
  std::size_t depth_cap = 500;
};

struct Progeny {
  DecayChain chain;
  LineageTree tree;
  std::vector<LineageEdge> edges;  // traversal order, stable daughters excluded
  std::vector<Nuclide> terminals;  // stable daughters reached, discovery order
  // Daughter levels fed by decays within this chain, keyed by level-erased
  // daughter (terminal daughters included).
  std::map<Nuclide, std::vector<EnergyValue>> feeding;
};

// Decay-product closure of one progenitor. A nuclide whose six decay
// datasets are all absent is terminal. Each level-erased nuclide is expanded
// once; later parents link to it as a cross-reference.
// Throws Error(data_unavailable | depth_exceeded).
Progeny build_progeny(const Nuclide& progenitor, NuclearData& data, const ProgenyOptions& opts = {});

struct SubsetOptions {
  ValidationConfig validation;
  ProgenyOptions progeny;
};

struct RadionuclideSubset {
  std::vector<Progeny> recursive;
  // Per recursive chain, its members with isomers spelled out: every
  // feasible isomer with its own decay data, then the ground state.
  std::vector<std::vector<Nuclide>> expanded;
  std::vector<Nuclide> statics;     // canonical identities
  std::vector<Nuclide> exclusions;  // canonical identities
  std::vector<Nuclide> members;     // (expanded chains + statics) minus exclusions
  // Level validation per level-erased nuclide, for members and their
  // terminal daughters.
  std::map<Nuclide, NuclideLevels> levels;
  std::vector<std::string> warnings;
};

// Throws Error(empty_subset) when nothing remains, and propagates
// build_progeny and level-resolution errors.
RadionuclideSubset assemble_subset(std::span<const Nuclide> recursive, std::span<const Nuclide> statics,
                                   std::span<const Nuclide> exclusions, NuclearData& data,
                                   const SubsetOptions& opts = {});

// One nuclide per line, two spaces of indentation per generation, each
// daughter annotated with its branching percentage.
std::string render_lineage(const LineageTree& tree);

// <out_dir>/lineage_<canonical id>.txt
std::filesystem::path lineage_path(const std::filesystem::path& out_dir, const Nuclide& progenitor);

}  // namespace nuclib
