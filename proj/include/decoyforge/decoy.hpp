//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_DECOY_HPP_
#define DECOYFORGE_DECOY_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decoyforge/curation.hpp"
#include "decoyforge/geometry.hpp"

namespace decoyforge {

/// Poses at or below this RMSD (Angstrom) from the native pose are positives.
inline constexpr double kPositiveRmsdMax = 2.0;

struct DecoyPose {
  std::string complex_id;
  int pose_index = 0;
  Coords ligand_coords;  // native ligand atom order
  double rmsd = 0.0;
};

/**
 * Root mean squared deviation over index-aligned atoms, without
 * superposition. Throws Error{LengthMismatch} for unequal or empty inputs.
 */
double rmsd(std::span<const Vec3> native, std::span<const Vec3> pose);

inline bool is_positive_pose(double rmsd_value, double threshold = kPositiveRmsdMax) {
  return rmsd_value <= threshold;
}

struct DecoyGenConfig {
  int poses_per_complex = 100;
  double translation_sigma = 1.0;  // Angstrom
  double rotation_max = 0.6;       // radians
  double torsion_sigma = 0.6;      // radians
  double clash_min_distance = 2.0;
  double box_padding = 5.0;
  // Every pose keeps at least one protein atom within this distance, so its
  // complex graph has a non-empty pocket.
  double contact_distance = 5.0;
  int max_attempts_per_pose = 50;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

DecoyGenConfig decoy_config_from_json(std::string_view json_text);
std::string decoy_config_to_json(const DecoyGenConfig &cfg);

/// Non-ring single bonds between heavy atoms that each have >= 2 heavy
/// neighbours. Distance-inferred bonds are treated as single bonds.
BondList rotatable_bonds(const LigandCandidate &ligand);

/// Bonds whose removal leaves their endpoints connected.
std::vector<bool> ring_bond_mask(std::size_t n_atoms, const BondList &bonds);

struct DecoyGeneration {
  std::vector<DecoyPose> poses;
  // Poses dropped because every attempt failed the box/clash/contact checks.
  int exhausted = 0;
};

/**
 * Seeded perturbation generator: torsion noise on rotatable bonds, then a
 * rigid rotation about the ligand centroid, then a Gaussian translation.
 * Candidates must stay inside the native ligand box padded by
 * cfg.box_padding, keep cfg.clash_min_distance from every protein atom and
 * touch the pocket within cfg.contact_distance.
 *
 * Throws Error{NoValidPose} if no pose survives.
 */
DecoyGeneration generate_decoys(const ComplexRecord &rec, const DecoyGenConfig &cfg);

/// Seed of the per-complex stream; independent of processing order.
std::uint64_t complex_stream_seed(std::uint64_t base_seed, std::string_view complex_id);

/**
 * Reads poses from PDB-format text, one pose per MODEL (or the whole file
 * when it has no MODEL records). Atoms are matched to the native ligand by
 * atom name. Throws Error{AtomNameMismatch} or Error{AmbiguousAtomNames}.
 */
std::vector<DecoyPose> poses_from_text(const ComplexRecord &rec, std::string_view text,
                                       int first_pose_index);

std::vector<DecoyPose> ingest_poses(const ComplexRecord &rec,
                                    const std::vector<std::string> &pose_files,
                                    int first_pose_index = 0);

}  // namespace decoyforge

#endif  // DECOYFORGE_DECOY_HPP_
