//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "decoyforge/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "decoyforge/binary_io.hpp"
#include "decoyforge/error.hpp"
#include "decoyforge/rng.hpp"
#include "decoyforge/structure.hpp"

namespace decoyforge {

namespace fs = std::filesystem;

namespace {

constexpr double kBondLength = 1.5;
constexpr double kBendAngle = 1.22;  // radians away from straight (~110 deg bond angle)
constexpr const char *kResidueNames[] = { "ALA", "SER", "LEU", "GLY", "THR", "VAL", "ASP", "LYS" };
constexpr const char *kBackbone[] = { "N", "CA", "C", "O" };
constexpr Element kBackboneElements[] = { Element::N, Element::C, Element::C, Element::O };

Vec3 random_unit(Rng &rng) {
  for (;;) {
    Vec3 v(rng.normal(), rng.normal(), rng.normal());
    const double n = v.norm();
    if (n > 1e-6)
      return v / n;
  }
}

Vec3 random_perpendicular(const Vec3 &d, Rng &rng) {
  for (;;) {
    Vec3 p = random_unit(rng);
    p -= p.dot(d) * d;
    const double n = p.norm();
    if (n > 1e-3)
      return p / n;
  }
}

double min_distance(const Vec3 &x, const Coords &pts, std::size_t skip_last = 0) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = pts.size() > skip_last ? pts.size() - skip_last : 0;
  for (std::size_t k = 0; k < n; ++k)
    best = std::min(best, (pts[k] - x).norm());
  return best;
}

Coords ligand_chain(std::size_t n, Rng &rng) {
  for (;;) {
    Coords pts { Vec3::Zero() };
    Vec3 dir = random_unit(rng);
    bool ok = true;
    while (pts.size() < n && ok) {
      ok = false;
      for (int attempt = 0; attempt < 50; ++attempt) {
        Vec3 next_dir = dir;
        if (pts.size() > 1) {
          next_dir = std::cos(kBendAngle) * dir + std::sin(kBendAngle) * random_perpendicular(dir, rng);
          next_dir.normalize();
        }
        const Vec3 x = pts.back() + kBondLength * next_dir;
        if (min_distance(x, pts, 1) >= 2.4) {
          pts.push_back(x);
          dir = next_dir;
          ok = true;
          break;
        }
      }
    }
    if (ok)
      return pts;
  }
}

Atom make_atom(int serial, Element e, std::string name, const Vec3 &pos, ResidueId res, bool het) {
  Atom a;
  a.serial = serial;
  a.element = e;
  a.name = std::move(name);
  a.position = pos;
  a.residue = std::move(res);
  a.is_hetero = het;
  return a;
}

std::string entry_name(const char *prefix, std::size_t k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%s%03zu", prefix, k);
  return buf;
}

/// Protein residues (4 atoms each) spread on a shell around the ligand.
void add_pocket(Structure &s, const Coords &ligand, std::size_t n_atoms, Rng &rng, int &serial) {
  Coords placed;
  int seq = 1;
  while (placed.size() < n_atoms) {
    const Vec3 &base = ligand[rng.below(ligand.size())];
    const Vec3 x = base + rng.uniform(3.4, 6.5) * random_unit(rng);
    if (min_distance(x, ligand) < 3.2 || min_distance(x, placed) < 2.6)
      continue;
    const std::size_t slot = placed.size() % 4;
    if (slot == 0 && !placed.empty())
      ++seq;
    const ResidueId res { "A", seq, ' ', kResidueNames[(seq - 1) % 8] };
    s.atoms.push_back(make_atom(serial++, kBackboneElements[slot], kBackbone[slot], x, res, false));
    placed.push_back(x);
  }
}

Structure base_structure(const std::string &id, double resolution) {
  Structure s;
  s.entry_id = id;
  s.resolution = resolution;
  return s;
}

void add_ligand(Structure &s, const Coords &pts, const std::vector<Element> &elements,
                const std::string &resname, int &serial, const std::string &chain = "A",
                int seq = 401) {
  const ResidueId res { chain, seq, ' ', resname };
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const std::string name = std::string(element_symbol(elements[k])) + std::to_string(k + 1);
    s.atoms.push_back(make_atom(serial++, elements[k], name, pts[k], res, true));
  }
}

std::string render(Structure s) {
  for (const Atom &a: s.atoms)
    s.chains.insert(a.residue.chain);
  return format_structure(s);
}

}  // namespace

std::vector<SyntheticEntry> synthetic_corpus(const SyntheticOptions &options) {
  if (options.min_ligand_atoms < 2 || options.max_ligand_atoms < options.min_ligand_atoms
      || options.min_pocket_atoms < 1 || options.max_pocket_atoms < options.min_pocket_atoms)
    throw Error(ErrorKind::InvalidConfig, "invalid synthetic corpus sizes");
  std::vector<SyntheticEntry> out;
  for (std::size_t k = 0; k < options.complexes; ++k) {
    Rng rng(mix_seed({ options.seed, 0x73796e, k }));
    const std::string id = entry_name("syn", k);
    Structure s = base_structure(id, 1.6 + 0.8 * rng.uniform());

    const std::size_t n_lig = options.min_ligand_atoms
                              + rng.below(options.max_ligand_atoms - options.min_ligand_atoms + 1);
    const std::size_t n_pocket = options.min_pocket_atoms
                                 + rng.below(options.max_pocket_atoms - options.min_pocket_atoms + 1);
    Coords lig = ligand_chain(n_lig, rng);
    const Vec3 offset(rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-20, 20));
    for (Vec3 &x: lig)
      x += offset;
    std::vector<Element> elements;
    for (std::size_t a = 0; a < n_lig; ++a) {
      const double u = rng.uniform();
      elements.push_back(u < 0.65 ? Element::C : (u < 0.85 ? Element::N : Element::O));
    }

    int serial = 1;
    add_pocket(s, lig, n_pocket, rng, serial);
    if (k % 4 == 3) {
      // A second chain well outside the pocket radius.
      const Vec3 far = offset + Vec3(30.0, 0.0, 0.0);
      for (int a = 0; a < 4; ++a) {
        const ResidueId res { "B", 1, ' ', "GLY" };
        s.atoms.push_back(make_atom(serial++, kBackboneElements[a], kBackbone[a],
                                    far + Vec3(1.4 * a, 0.3 * a, 0.0), res, false));
      }
    }
    add_ligand(s, lig, elements, "LIG", serial);
    // Crystallographic water; never a ligand candidate.
    s.atoms.push_back(make_atom(serial++, Element::O, "O", offset + Vec3(0.0, 0.0, 15.0),
                                { "A", 501, ' ', "HOH" }, true));
    out.push_back({ id, render(std::move(s)) });
  }
  return out;
}

std::vector<SyntheticEntry> curation_fixture() {
  std::vector<SyntheticEntry> out;
  const auto pocket_entry = [](const std::string &id, double resolution, const Coords &lig,
                               const std::vector<Element> &elements, const std::string &resname,
                               std::uint64_t seed) {
    Rng rng(mix_seed({ seed, 0x637572 }));
    Structure s = base_structure(id, resolution);
    int serial = 1;
    add_pocket(s, lig.size() > 1 ? lig : Coords { lig[0], lig[0] }, 16, rng, serial);
    add_ligand(s, lig, elements, resname, serial);
    return SyntheticEntry { id, render(std::move(s)) };
  };

  Rng rng(mix_seed({ 0, 0x666978 }));
  const Coords chain8 = ligand_chain(8, rng);
  const std::vector<Element> c8(8, Element::C);

  // 1: passes every filter.
  out.push_back(pocket_entry("cur001", 2.0, chain8, c8, "LIG", 1));
  // 2: resolution above the 2.5 A cut.
  out.push_back(pocket_entry("cur002", 3.1, chain8, c8, "LIG", 2));
  // 3: single zinc ion.
  out.push_back(pocket_entry("cur003", 1.9, { Vec3(0.5, 0.5, 0.5) }, { Element::Zn }, "ZN", 3));
  // 4: sulfate additive (S plus four O at 1.5 A).
  {
    Coords so4 { Vec3::Zero() };
    const Vec3 dirs[] = { { 1, 1, 1 }, { 1, -1, -1 }, { -1, 1, -1 }, { -1, -1, 1 } };
    for (const Vec3 &d: dirs)
      so4.push_back(1.5 * d.normalized());
    std::vector<Element> el { Element::S, Element::O, Element::O, Element::O, Element::O };
    out.push_back(pocket_entry("cur004", 2.2, so4, el, "SO4", 4));
  }
  // 5: boron is outside the element whitelist.
  {
    std::vector<Element> el = c8;
    el[3] = Element::B;
    out.push_back(pocket_entry("cur005", 2.4, chain8, el, "BOR", 5));
  }
  // 6: three carbons, 36 Da, below the weight window.
  {
    const Coords c3(chain8.begin(), chain8.begin() + 3);
    out.push_back(pocket_entry("cur006", 1.5, c3, { Element::C, Element::C, Element::C }, "TRI", 6));
  }
  return out;
}

std::vector<AffinityLabel> synthetic_labels(const DatasetView &view, double intercept, double slope) {
  std::vector<AffinityLabel> labels;
  for (std::size_t i = 0; i < view.size(); ++i) {
    const ComplexGraph g = view.native_graph(i);
    labels.push_back({ view.at(i).complex_id,
                       intercept + slope * static_cast<double>(g.count_edges(EdgeType::Interactive)),
                       Split::Unassigned });
  }
  return labels;
}

std::vector<std::string> write_entries(const std::vector<SyntheticEntry> &entries,
                                       const std::string &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw Error(ErrorKind::Io, "cannot create " + dir + ": " + ec.message());
  std::vector<std::string> paths;
  for (const SyntheticEntry &e: entries) {
    const std::string path = (fs::path(dir) / (e.entry_id + ".pdb")).string();
    write_file(path, e.pdb_text);
    paths.push_back(path);
  }
  return paths;
}

}  // namespace decoyforge
