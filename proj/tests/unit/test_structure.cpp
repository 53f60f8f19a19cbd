//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <doctest.h>

#include "decoyforge/error.hpp"
#include "decoyforge/rng.hpp"
#include "decoyforge/structure.hpp"
#include "support.hpp"

using namespace decoyforge;
using testing::pdb_line;

namespace {

std::string benzene_entry() {
  std::string text = "REMARK   2 RESOLUTION.    1.80 ANGSTROMS.\n";
  text += pdb_line(false, 1, "CA", "ALA", 'A', 1, 4.0, 0.0, 0.0, "C") + "\n";
  for (int k = 0; k < 6; ++k) {
    const double t = k * std::numbers::pi / 3.0;
    text += pdb_line(true, 10 + k, "C" + std::to_string(k + 1), "BNZ", 'A', 401, 1.39 * std::cos(t),
                     1.39 * std::sin(t), 0.0, "C")
            + "\n";
  }
  return text;
}

// Every pair within r_a + r_b + 0.4, counted without the library.
std::set<std::pair<int, int>> brute_force_bonds(const std::vector<Atom> &atoms) {
  std::set<std::pair<int, int>> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      const double limit = *covalent_radius(atoms[i].element) + *covalent_radius(atoms[j].element) + 0.4;
      if ((atoms[i].position - atoms[j].position).norm() <= limit)
        out.emplace(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("single ATOM record parses to one atom") {
  const Structure s = parse_structure(pdb_line(false, 1, "CA", "GLY", 'A', 7, 1.0, 2.0, 3.0, "C") + "\n", "x");
  REQUIRE(s.atoms.size() == 1);
  const Atom &a = s.atoms[0];
  CHECK(a.position == Vec3(1.0, 2.0, 3.0));
  CHECK(a.element == Element::C);
  CHECK(a.name == "CA");
  CHECK(a.residue.name == "GLY");
  CHECK(a.residue.chain == "A");
  CHECK(a.residue.seq == 7);
  CHECK_FALSE(a.is_hetero);
  CHECK(s.entry_id == "x");
  CHECK_FALSE(s.resolution.has_value());
}

TEST_CASE("resolution comes from REMARK 2") {
  const std::string text = "REMARK   2 RESOLUTION. 2.30 ANGSTROMS.\n"
                           + pdb_line(false, 1, "N", "GLY", 'A', 1, 0, 0, 0, "N") + "\n";
  const Structure s = parse_structure(text);
  REQUIRE(s.resolution.has_value());
  CHECK(*s.resolution == doctest::Approx(2.30).epsilon(1e-15));

  const Structure none = parse_structure("REMARK   2 RESOLUTION. NOT APPLICABLE.\n"
                                         + pdb_line(false, 1, "N", "GLY", 'A', 1, 0, 0, 0, "N"));
  CHECK_FALSE(none.resolution.has_value());
}

TEST_CASE("only the first MODEL is kept") {
  std::string text = "MODEL        1\n";
  for (int k = 0; k < 3; ++k)
    text += pdb_line(false, k + 1, "CA", "ALA", 'A', k + 1, k, 0, 0, "C") + "\n";
  text += "ENDMDL\nMODEL        2\n";
  for (int k = 0; k < 5; ++k)
    text += pdb_line(false, k + 1, "CA", "ALA", 'A', k + 1, k, 1, 0, "C") + "\n";
  text += "ENDMDL\n";
  const Structure s = parse_structure(text);
  CHECK(s.atoms.size() == 3);
  for (const Atom &a: s.atoms)
    CHECK(a.position.y() == 0.0);
}

TEST_CASE("altloc other than A or blank is dropped") {
  std::string a = pdb_line(false, 1, "CA", "ALA", 'A', 1, 0, 0, 0, "C");
  std::string b = pdb_line(false, 2, "CA", "ALA", 'A', 1, 0.5, 0, 0, "C");
  std::string c = pdb_line(false, 3, "CB", "ALA", 'A', 1, 1, 0, 0, "C");
  a[16] = 'A';
  b[16] = 'B';
  const Structure s = parse_structure(a + "\n" + b + "\n" + c + "\n");
  REQUIRE(s.atoms.size() == 2);
  CHECK(s.atoms[0].serial == 1);
  CHECK(s.atoms[1].serial == 3);
}

TEST_CASE("malformed records report their line") {
  const std::string good = pdb_line(false, 1, "CA", "ALA", 'A', 1, 0, 0, 0, "C");
  SUBCASE("short line") {
    try {
      parse_structure(good + "\nATOM      2  CA  ALA A   2       1.000\n");
      FAIL("expected an error");
    } catch (const Error &e) {
      CHECK(e.kind() == ErrorKind::MalformedRecord);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("duplicate serial") {
    CHECK_THROWS_AS(parse_structure(good + "\n" + good + "\n"), Error);
  }
  SUBCASE("bad coordinate") {
    std::string bad = good;
    bad.replace(30, 8, "   abc  ");
    try {
      parse_structure(bad);
      FAIL("expected an error");
    } catch (const Error &e) {
      CHECK(e.kind() == ErrorKind::MalformedRecord);
    }
  }
  SUBCASE("no atoms") {
    try {
      parse_structure("REMARK   2 RESOLUTION. 2.0 ANGSTROMS.\nEND\n");
      FAIL("expected an error");
    } catch (const Error &e) {
      CHECK(e.kind() == ErrorKind::EmptyStructure);
    }
  }
}

TEST_CASE("unknown element symbols parse to Unknown") {
  const Structure s = parse_structure(pdb_line(true, 1, "X1", "UNK", 'A', 1, 0, 0, 0, "Xx"));
  CHECK(s.atoms[0].element == Element::Unknown);
}

TEST_CASE("element falls back to the atom name") {
  std::string line = pdb_line(true, 1, "CL1", "LIG", 'A', 1, 0, 0, 0, "Cl");
  line.resize(54);
  // Name "CL1 " starts in column 13: a two-letter element.
  CHECK(parse_structure(line).atoms[0].element == Element::Cl);
  std::string ca = pdb_line(false, 2, "CA", "ALA", 'A', 1, 0, 0, 0, "C");
  ca.resize(54);
  CHECK(parse_structure(ca).atoms[0].element == Element::C);
}

TEST_CASE("extract_ligands") {
  SUBCASE("protein only") {
    const Structure s = parse_structure(pdb_line(false, 1, "CA", "ALA", 'A', 1, 0, 0, 0, "C"));
    CHECK(extract_ligands(s).empty());
  }
  SUBCASE("benzene: one candidate, bonds by the distance rule") {
    const Structure s = parse_structure(benzene_entry());
    const auto ligands = extract_ligands(s);
    REQUIRE(ligands.size() == 1);
    CHECK(ligands[0].residue.name == "BNZ");
    CHECK(ligands[0].atoms.size() == 6);
    CHECK(ligands[0].covalent_bonds.size() == 6);
    const auto oracle = brute_force_bonds(ligands[0].atoms);
    const std::set<std::pair<int, int>> got(ligands[0].covalent_bonds.begin(), ligands[0].covalent_bonds.end());
    CHECK(got == oracle);
  }
  SUBCASE("water only") {
    std::string text;
    for (int k = 0; k < 3; ++k)
      text += pdb_line(true, k + 1, "O", "HOH", 'A', 500 + k, 3.0 * k, 0, 0, "O") + "\n";
    CHECK(extract_ligands(parse_structure(text)).empty());
  }
  SUBCASE("two hetero residues give two candidates") {
    std::string text = benzene_entry();
    text += pdb_line(true, 40, "C1", "ETH", 'B', 402, 20, 0, 0, "C") + "\n";
    text += pdb_line(true, 41, "C2", "ETH", 'B', 402, 21.5, 0, 0, "C") + "\n";
    CHECK(extract_ligands(parse_structure(text)).size() == 2);
  }
}

TEST_CASE("format and parse round-trip at 3 decimals") {
  Rng rng(5);
  Structure s;
  s.entry_id = "rt";
  s.resolution = 1.95;
  const Element elements[] = { Element::C, Element::N, Element::O, Element::S, Element::Cl, Element::Br };
  for (int k = 0; k < 40; ++k) {
    const Element e = elements[rng.below(6)];
    std::string name = std::string(element_symbol(e)) + std::to_string(k % 10);
    // Exactly representable at 3 decimals after the round trip through text.
    const auto coord = [&] { return std::round(rng.uniform(-999, 999) * 1000.0) / 1000.0; };
    s.atoms.push_back(testing::make_atom(k + 1, e, name, Vec3(coord(), coord(), coord()),
                                         k < 30 ? "A" : "B", k / 3 + 1, k < 30 ? "ALA" : "LIG", k >= 30));
  }
  const Structure back = parse_structure(format_structure(s), "rt");
  REQUIRE(back.atoms.size() == s.atoms.size());
  for (std::size_t k = 0; k < s.atoms.size(); ++k)
    CHECK(back.atoms[k] == s.atoms[k]);
  REQUIRE(back.resolution.has_value());
  CHECK(*back.resolution == doctest::Approx(1.95));

  // A second round trip is byte-identical.
  CHECK(format_structure(back) == format_structure(s));
}

TEST_CASE("bond inference is invariant to atom order") {
  Rng rng(11);
  std::vector<Atom> atoms;
  Vec3 p = Vec3::Zero();
  for (int k = 0; k < 12; ++k) {
    p += Vec3(rng.uniform(0.8, 1.6), rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6));
    atoms.push_back(testing::make_atom(k + 1, k % 3 == 0 ? Element::N : Element::C, "A" + std::to_string(k), p, "A",
                                       1, "LIG", true));
  }
  const BondRule rule;
  const BondList base = infer_bonds(atoms, rule);
  CHECK(std::set<std::pair<int, int>>(base.begin(), base.end()) == brute_force_bonds(atoms));

  std::vector<int> perm(atoms.size());
  for (std::size_t k = 0; k < perm.size(); ++k)
    perm[k] = static_cast<int>(k);
  for (int trial = 0; trial < 20; ++trial) {
    for (std::size_t i = perm.size() - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.below(i + 1)]);
    std::vector<Atom> shuffled;
    for (int k: perm)
      shuffled.push_back(atoms[k]);
    std::set<std::pair<int, int>> mapped;
    for (auto [i, j]: infer_bonds(shuffled, rule))
      mapped.emplace(std::min(perm[i], perm[j]), std::max(perm[i], perm[j]));
    CHECK(mapped == std::set<std::pair<int, int>>(base.begin(), base.end()));
  }
}

TEST_CASE("residue labels are filesystem safe") {
  ResidueId r { "A", 401, 'B', "L/G" };
  CHECK(r.label() == "A_401B_L_G");
  CHECK(is_water("HOH"));
  CHECK(is_water("WAT"));
  CHECK_FALSE(is_water("LIG"));
}
