//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_SYNTHETIC_HPP_
#define DECOYFORGE_SYNTHETIC_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "decoyforge/dataset.hpp"

namespace decoyforge {

/// A generated structure file: entry id and PDB text.
struct SyntheticEntry {
  std::string entry_id;
  std::string pdb_text;
};

struct SyntheticOptions {
  std::size_t complexes = 32;
  std::uint64_t seed = 0;
  std::size_t min_ligand_atoms = 6;
  std::size_t max_ligand_atoms = 11;
  std::size_t min_pocket_atoms = 20;
  std::size_t max_pocket_atoms = 32;
};

/**
 * Small protein-ligand complexes: a branched-free ligand chain with
 * tetrahedral-like bond angles and a shell of protein atoms 3.2-6.5 A from
 * it. Every fourth entry also carries a distant second chain. All entries
 * pass the default curation filters.
 */
std::vector<SyntheticEntry> synthetic_corpus(const SyntheticOptions &options = {});

/**
 * Six entries, one per outcome: pass, resolution, monoatomic ion, excluded
 * additive, disallowed element, molecular weight.
 */
std::vector<SyntheticEntry> curation_fixture();

/// y = intercept + slope * (interactive edges of the native graph).
std::vector<AffinityLabel> synthetic_labels(const DatasetView &view, double intercept = 3.0,
                                            double slope = 0.04);

/// Writes <dir>/<entry_id>.pdb for every entry; returns the paths.
std::vector<std::string> write_entries(const std::vector<SyntheticEntry> &entries,
                                       const std::string &dir);

}  // namespace decoyforge

#endif  // DECOYFORGE_SYNTHETIC_HPP_
