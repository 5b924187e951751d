#include "nuclib/chain.hpp"

#include <algorithm>
#include <cstdio>

#include "nuclib/error.hpp"
#include "nuclib/text.hpp"

namespace nuclib {

namespace {

void add_levels(std::vector<EnergyValue>& into, std::span<const EnergyValue> levels) {
  for (const auto& e : levels)
    if (std::none_of(into.begin(), into.end(), [&](const EnergyValue& x) { return x.kev == e.kev; }))
      into.push_back(e);
}

LineageTree build_tree(const Nuclide& root_label, const Nuclide& root, const std::vector<LineageEdge>& edges) {
  std::map<Nuclide, std::vector<const LineageEdge*>> out_edges;
  for (const auto& e : edges) out_edges[e.parent].push_back(&e);

  // Each daughter has exactly one expanding edge, so the recursion is bounded
  // by the chain length.
  auto build = [&](auto& self, const Nuclide& at, const Nuclide& label) -> LineageTree {
    LineageTree t;
    t.root = label;
    if (auto it = out_edges.find(at); it != out_edges.end()) {
      for (const auto* e : it->second) {
        LineageBranch b;
        b.branching_percent = e->branching_percent;
        b.cross_reference = e->cross_reference;
        b.tree = e->cross_reference ? LineageTree{e->daughter, {}} : self(self, e->daughter, e->daughter);
        t.children.push_back(std::move(b));
      }
    }
    std::stable_sort(t.children.begin(), t.children.end(), [](const LineageBranch& a, const LineageBranch& b) {
      return a.branching_percent > b.branching_percent;
    });
    return t;
  };
  return build(build, root, root_label);
}

std::string format_percent(double pct) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", pct);
  return buf;
}

}  // namespace

Progeny build_progeny(const Nuclide& progenitor, NuclearData& data, const ProgenyOptions& opts) {
  Progeny out;
  out.chain.progenitor = progenitor;
  out.chain.members.push_back(progenitor);
  const Nuclide root = progenitor.level_erased();

  enum class State { expanding, terminal };
  std::map<Nuclide, State> seen;
  seen[root] = State::expanding;

  if (data.decay_records(root)->empty()) {
    out.chain.progenitor_terminal = true;
    out.tree.root = progenitor;
    return out;
  }

  std::vector<Nuclide> stack{root};
  while (!stack.empty()) {
    const Nuclide j = stack.back();
    stack.pop_back();
    const auto records = data.decay_records(j);
    const auto daughters = extract_daughters(*records);

    std::vector<Nuclide> names;
    for (const auto& d : daughters)
      if (!seen.count(d.daughter)) names.push_back(d.daughter);
    data.prefetch(names);

    std::vector<Nuclide> fresh;
    for (const auto& d : daughters) {
      add_levels(out.feeding[d.daughter], d.feeding_levels);
      if (auto it = seen.find(d.daughter); it != seen.end()) {
        if (it->second == State::expanding)
          out.edges.push_back({j, d.daughter, d.branching_percent, true});
        continue;
      }
      if (data.decay_records(d.daughter)->empty()) {
        seen[d.daughter] = State::terminal;
        out.terminals.push_back(d.daughter);
        continue;
      }
      seen[d.daughter] = State::expanding;
      if (out.chain.members.size() >= opts.depth_cap)
        throw Error(Errc::depth_exceeded, format_nuclide_id(progenitor) + ": more than " +
                                              std::to_string(opts.depth_cap) + " nuclides in the chain");
      out.chain.members.push_back(d.daughter);
      out.edges.push_back({j, d.daughter, d.branching_percent, false});
      fresh.push_back(d.daughter);
    }
    // The first daughter in rank order is expanded next.
    stack.insert(stack.end(), fresh.rbegin(), fresh.rend());
  }

  out.tree = build_tree(progenitor, root, out.edges);
  return out;
}

namespace {

bool has_records_at(const NuclideLevels& nl, std::size_t level_index, std::span<const DecayRecord> records,
                    const MatchTolerance& tol) {
  return std::any_of(records.begin(), records.end(), [&](const DecayRecord& r) {
    auto idx = nl.scheme->resolve(r.parent_level, tol);
    return idx && *idx == level_index;
  });
}

}  // namespace

RadionuclideSubset assemble_subset(std::span<const Nuclide> recursive, std::span<const Nuclide> statics,
                                   std::span<const Nuclide> exclusions, NuclearData& data,
                                   const SubsetOptions& opts) {
  const ValidationConfig& vc = opts.validation;
  RadionuclideSubset out;
  for (const auto& r : recursive) {
    Nuclide progenitor = r;
    if (!r.is_ground()) {
      const auto scheme = data.level_scheme(r);
      progenitor = canonical_at_level(r, level_energy_for(r, scheme.get(), vc), scheme.get(), vc);
    }
    out.recursive.push_back(build_progeny(progenitor, data, opts.progeny));
  }

  std::vector<Nuclide> all;
  auto note = [&](const Nuclide& n) {
    const Nuclide e = n.level_erased();
    if (std::find(all.begin(), all.end(), e) == all.end()) all.push_back(e);
  };
  for (const auto& p : out.recursive) {
    for (const auto& m : p.chain.members) note(m);
    for (const auto& t : p.terminals) note(t);
  }
  for (const auto& s : statics) note(s);
  for (const auto& x : exclusions) note(x);
  data.prefetch(all, true);

  std::map<Nuclide, std::vector<EnergyValue>> inherited;
  for (const auto& p : out.recursive) {
    for (const auto& [d, levels] : p.feeding) add_levels(inherited[d], levels);
    const auto scheme = data.level_scheme(p.chain.progenitor);
    const EnergyValue e = level_energy_for(p.chain.progenitor, scheme.get(), vc);
    add_levels(inherited[p.chain.progenitor.level_erased()], std::span(&e, 1));
  }
  for (const auto& s : statics) {
    const auto scheme = data.level_scheme(s);
    const EnergyValue e = level_energy_for(s, scheme.get(), vc);
    add_levels(inherited[s.level_erased()], std::span(&e, 1));
    out.statics.push_back(canonical_at_level(s, e, scheme.get(), vc));
  }
  for (const auto& x : exclusions) {
    const auto scheme = data.level_scheme(x);
    out.exclusions.push_back(canonical_at_level(x, level_energy_for(x, scheme.get(), vc), scheme.get(), vc));
  }

  for (const auto& n : all) {
    auto nl = validate_nuclide(n, inherited[n], data.level_scheme(n), vc);
    for (const auto& o : nl.flat.orphans)
      out.warnings.push_back(format_nuclide_id(n) + ": level " + text::format_double(o.kev) +
                             " keV has no level record; its radiation is kept unvalidated");
    out.levels.emplace(n, std::move(nl));
  }

  auto expand = [&](const Nuclide& n) {
    const NuclideLevels& nl = out.levels.at(n.level_erased());
    if (!nl.scheme) return std::vector<Nuclide>{n};
    const auto records = data.decay_records(n);
    std::vector<Nuclide> forms;
    std::optional<std::size_t> ground;
    for (std::size_t i = 0; i < nl.outcomes.size(); ++i) {
      const auto& o = nl.outcomes[i];
      if (o.level.energy.kev == 0.0) ground = i;
      if (o.is_isomer && o.feasible && has_records_at(nl, i, *records, vc.tolerance))
        forms.push_back(canonical_at_level(n, o.level.energy, nl.scheme.get(), vc));
    }
    if (ground && nl.outcomes[*ground].feasible) forms.push_back(n.level_erased());
    if (forms.empty()) {
      out.warnings.push_back(format_nuclide_id(n) +
                             ": no feasible level carries decay data; kept as the ground state");
      forms.push_back(n.level_erased());
    }
    return forms;
  };

  for (const auto& p : out.recursive) {
    std::vector<Nuclide> chain;
    for (const auto& m : p.chain.members)
      for (auto& f : expand(m))
        if (std::find(chain.begin(), chain.end(), f) == chain.end()) chain.push_back(std::move(f));
    out.expanded.push_back(std::move(chain));
  }

  auto add_member = [&](const Nuclide& n) {
    if (std::find(out.exclusions.begin(), out.exclusions.end(), n) != out.exclusions.end()) return;
    if (std::find(out.members.begin(), out.members.end(), n) == out.members.end()) out.members.push_back(n);
  };
  for (const auto& chain : out.expanded)
    for (const auto& n : chain) add_member(n);
  for (const auto& s : out.statics) add_member(s);

  if (out.members.empty()) throw Error(Errc::empty_subset, "the radionuclide subset has no members");
  return out;
}

std::string render_lineage(const LineageTree& tree) {
  struct Frame {
    const LineageTree* node;
    const LineageBranch* via;
    std::size_t depth;
  };
  std::string out;
  std::vector<Frame> stack{{&tree, nullptr, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    out.append(2 * f.depth, ' ');
    out += display_name(f.node->root);
    if (f.via) {
      out += " (" + format_percent(f.via->branching_percent) + "%)";
      if (f.via->cross_reference) out += " [cross-reference]";
    }
    out += '\n';
    for (auto it = f.node->children.rbegin(); it != f.node->children.rend(); ++it)
      stack.push_back({&it->tree, &*it, f.depth + 1});
  }
  return out;
}

std::filesystem::path lineage_path(const std::filesystem::path& out_dir, const Nuclide& progenitor) {
  return out_dir / ("lineage_" + format_nuclide_id(progenitor) + ".txt");
}

}  // namespace nuclib
