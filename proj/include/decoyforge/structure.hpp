//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_STRUCTURE_HPP_
#define DECOYFORGE_STRUCTURE_HPP_

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "decoyforge/element.hpp"
#include "decoyforge/geometry.hpp"

namespace decoyforge {

struct ResidueId {
  std::string chain;
  int seq = 0;
  char insertion = ' ';
  std::string name;

  auto operator<=>(const ResidueId &) const = default;
  bool operator==(const ResidueId &) const = default;

  /// Filesystem-safe label such as "A_401_LIG".
  std::string label() const;
};

struct Atom {
  int serial = 0;
  Element element = Element::Unknown;
  std::string name;
  Vec3 position = Vec3::Zero();
  ResidueId residue;
  bool is_hetero = false;

  bool operator==(const Atom &) const = default;
};

struct Structure {
  std::string entry_id;
  std::vector<Atom> atoms;
  std::optional<double> resolution;
  std::set<std::string> chains;
};

using BondList = std::vector<std::pair<int, int>>;

struct LigandCandidate {
  ResidueId residue;
  std::vector<Atom> atoms;
  BondList covalent_bonds;  // index pairs into atoms, first < second

  Coords coordinates() const;
};

/// Distance rule for covalent bonds: d(a, b) <= r(a) + r(b) + tolerance.
struct BondRule {
  double tolerance = 0.4;
  double fallback_radius = 0.77;  // for elements without a tabulated radius

  double max_distance(Element a, Element b) const;
};

/**
 * Parses PDB-format text: ATOM/HETATM, MODEL/ENDMDL, TER and the REMARK 2
 * resolution line. Only atoms of the first model are kept, and only altloc
 * 'A' or blank.
 *
 * Throws Error{MalformedRecord} with the 1-based line number on a bad
 * ATOM/HETATM record and Error{EmptyStructure} when no atoms were read.
 */
Structure parse_structure(std::string_view text, std::string entry_id = {});

Structure read_structure_file(const std::string &path);

/// Writes ATOM/HETATM records (coordinates at 3 decimals) plus REMARK 2.
std::string format_structure(const Structure &s);

/// Formats one ATOM/HETATM line.
std::string format_atom_record(const Atom &a);

/// Infers covalent bonds by the distance rule over all atom pairs.
BondList infer_bonds(const std::vector<Atom> &atoms, const BondRule &rule);

/**
 * One candidate per hetero residue, excluding water. Bonds are inferred by
 * BondRule.
 */
std::vector<LigandCandidate> extract_ligands(const Structure &s, const BondRule &rule = {});

bool is_water(std::string_view residue_name) noexcept;

}  // namespace decoyforge

#endif  // DECOYFORGE_STRUCTURE_HPP_
