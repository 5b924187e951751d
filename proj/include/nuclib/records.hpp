#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nuclib/dataset_key.hpp"
#include "nuclib/nuclide.hpp"

namespace nuclib {

// Two energies match iff |E1 - E2| <= max(sigmas * sqrt(u1^2 + u2^2), floor_kev).
struct MatchTolerance {
  double sigmas = 3.0;
  double floor_kev = 1.0;

  double window(const EnergyValue& a, const EnergyValue& b) const noexcept;
  bool match(const EnergyValue& a, const EnergyValue& b) const noexcept;
};

// One decay-radiation row, attributed to the parent whose decay produced it.
struct DecayRecord {
  DatasetKey source{Nuclide{}, DatasetKind::levels()};
  std::size_t row = 0;  // 1-based data row within the source dataset

  Nuclide parent;  // level-erased
  EnergyValue parent_level;
  std::optional<HalfLife> parent_half_life;

  RadiationType radiation = RadiationType::gamma;
  // Absent for a level fed by electron capture alone: such rows carry feeding
  // information but no emitted particle.
  std::optional<EnergyValue> energy;
  std::optional<double> intensity;  // per 100 decays of the parent
  double intensity_uncertainty = 0.0;
  bool energy_uncertainty_reported = false;
  bool intensity_uncertainty_reported = false;

  Nuclide daughter;  // level-erased
  // Daughter level the emission starts from (photons, electrons).
  std::optional<EnergyValue> start_level;
  // Daughter level populated by the decay (particles).
  std::optional<EnergyValue> end_level;
  EnergyValue daughter_feeding_level;

  DecayMode decay_mode = DecayMode::alpha;
  double branching_percent = 0.0;

  bool emits() const noexcept { return energy.has_value(); }
  // True when the row is the particle of the decay itself rather than
  // de-excitation radiation of the daughter.
  bool is_particle() const noexcept {
    return radiation == RadiationType::alpha || radiation == RadiationType::beta_minus ||
           radiation == RadiationType::beta_plus_ec;
  }
};

struct ModeBranch {
  DecayMode mode = DecayMode::alpha;
  double percent = 0.0;

  friend bool operator==(const ModeBranch&, const ModeBranch&) = default;
};

struct LevelRecord {
  Nuclide nuclide;  // level-erased
  EnergyValue energy;
  std::optional<std::string> jpi;
  // Empty when not reported; HalfLife::stable() for a stable ground state.
  std::optional<HalfLife> half_life;
  std::vector<ModeBranch> decay_modes;

  bool has_mode(DecayMode m) const noexcept;
};

struct TransitionRecord {
  Nuclide nuclide;  // level-erased
  EnergyValue start_level;
  EnergyValue end_level;
  EnergyValue gamma_energy;
  std::optional<double> intensity;
};

struct LevelScheme {
  Nuclide nuclide;
  std::vector<LevelRecord> levels;  // ascending energy
  std::vector<TransitionRecord> transitions;

  // Index of the level nearest to e among those matching it, if any.
  std::optional<std::size_t> resolve(const EnergyValue& e, const MatchTolerance& tol = {}) const;
};

}  // namespace nuclib
