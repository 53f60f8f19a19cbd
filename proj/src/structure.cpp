//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "decoyforge/structure.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "decoyforge/error.hpp"

namespace decoyforge {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

// 1-based inclusive column range, clipped to the line length.
std::string_view columns(std::string_view line, std::size_t first, std::size_t last) {
  if (line.size() < first)
    return {};
  return line.substr(first - 1, std::min(last, line.size()) - first + 1);
}

[[noreturn]] void malformed(std::size_t line_no, const std::string &what) {
  throw Error(ErrorKind::MalformedRecord, "line " + std::to_string(line_no) + ": " + what);
}

template <class T>
bool parse_number(std::string_view field, T &out) {
  field = trim(field);
  if (field.empty())
    return false;
  if (field.front() == '+')
    field.remove_prefix(1);
  const char *end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

// Element from columns 77-78, or from the atom name when that field is blank.
Element element_of(std::string_view line, std::string_view raw_name) {
  std::string_view sym = trim(columns(line, 77, 78));
  if (!sym.empty())
    return element_from_symbol(sym);

  // Names are aligned so that one-letter elements start in column 14.
  std::string letters;
  for (char c: raw_name) {
    if (std::isalpha(static_cast<unsigned char>(c)))
      letters.push_back(c);
    else if (!letters.empty())
      break;
  }
  if (letters.empty())
    return Element::Unknown;
  if (raw_name.size() == 4 && raw_name[0] != ' ' && letters.size() >= 2) {
    Element two = element_from_symbol(letters.substr(0, 2));
    if (two != Element::Unknown)
      return two;
  }
  return element_from_symbol(letters.substr(0, 1));
}

std::optional<double> parse_resolution(std::string_view line) {
  const std::size_t key = line.find("RESOLUTION.");
  if (key == std::string_view::npos)
    return std::nullopt;
  std::string_view rest = trim(line.substr(key + 11));
  const std::size_t space = rest.find(' ');
  double value = 0.0;
  if (!parse_number(rest.substr(0, space), value) || !(value > 0.0))
    return std::nullopt;
  return value;
}

}  // namespace

std::string ResidueId::label() const {
  std::string out = chain.empty() ? std::string("_") : chain;
  out += "_" + std::to_string(seq);
  if (insertion != ' ')
    out.push_back(insertion);
  out += "_" + name;
  for (char &c: out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
      c = '_';
  }
  return out;
}

Coords LigandCandidate::coordinates() const {
  Coords out;
  out.reserve(atoms.size());
  for (const Atom &a: atoms)
    out.push_back(a.position);
  return out;
}

double BondRule::max_distance(Element a, Element b) const {
  return covalent_radius(a).value_or(fallback_radius)
         + covalent_radius(b).value_or(fallback_radius) + tolerance;
}

bool is_water(std::string_view residue_name) noexcept {
  residue_name = trim(residue_name);
  return residue_name == "HOH" || residue_name == "WAT" || residue_name == "H2O"
         || residue_name == "DOD";
}

Structure parse_structure(std::string_view text, std::string entry_id) {
  Structure s;
  s.entry_id = std::move(entry_id);

  std::unordered_set<int> serials;
  bool in_model = false;
  bool first_model_done = false;
  std::size_t line_no = 0;

  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view {} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);

    const std::string_view record = columns(line, 1, 6);
    if (record.starts_with("MODEL")) {
      if (in_model || first_model_done)
        first_model_done = true;
      in_model = true;
      continue;
    }
    if (record.starts_with("ENDMDL")) {
      in_model = false;
      first_model_done = true;
      continue;
    }
    if (record.starts_with("REMARK") && trim(columns(line, 7, 10)) == "2") {
      if (!s.resolution)
        s.resolution = parse_resolution(line);
      continue;
    }

    const bool is_atom = record == "ATOM  " || record == "ATOM";
    const bool is_hetatm = record == "HETATM";
    if (!is_atom && !is_hetatm)
      continue;
    if (first_model_done)
      continue;

    if (line.size() < 54)
      malformed(line_no, "record shorter than 54 columns");

    const char altloc = line[16];
    if (altloc != ' ' && altloc != 'A')
      continue;

    Atom atom;
    atom.is_hetero = is_hetatm;
    if (!parse_number(columns(line, 7, 11), atom.serial))
      malformed(line_no, "bad serial number");
    if (!serials.insert(atom.serial).second)
      malformed(line_no, "duplicate serial " + std::to_string(atom.serial));

    const std::string_view raw_name = columns(line, 13, 16);
    atom.name = std::string(trim(raw_name));
    if (atom.name.empty())
      malformed(line_no, "blank atom name");

    atom.residue.name = std::string(trim(columns(line, 18, 20)));
    atom.residue.chain = std::string(trim(columns(line, 22, 22)));
    if (!parse_number(columns(line, 23, 26), atom.residue.seq))
      malformed(line_no, "bad residue sequence number");
    const std::string_view icode = columns(line, 27, 27);
    atom.residue.insertion = icode.empty() ? ' ' : icode.front();

    double xyz[3];
    for (int k = 0; k < 3; ++k) {
      const std::size_t first = 31 + static_cast<std::size_t>(8 * k);
      if (!parse_number(columns(line, first, first + 7), xyz[k]) || !std::isfinite(xyz[k]))
        malformed(line_no, "bad coordinate field");
    }
    atom.position = Vec3(xyz[0], xyz[1], xyz[2]);
    atom.element = element_of(line, raw_name);

    s.chains.insert(atom.residue.chain);
    s.atoms.push_back(std::move(atom));
  }

  if (s.atoms.empty())
    throw Error(ErrorKind::EmptyStructure, "no ATOM/HETATM records in entry '" + s.entry_id + "'");
  return s;
}

Structure read_structure_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();

  std::string stem = path;
  if (const auto slash = stem.find_last_of('/'); slash != std::string::npos)
    stem = stem.substr(slash + 1);
  if (const auto dot = stem.find('.'); dot != std::string::npos)
    stem = stem.substr(0, dot);
  return parse_structure(buf.str(), stem);
}

std::string format_atom_record(const Atom &a) {
  const std::string_view sym = a.element == Element::Unknown ? std::string_view("")
                                                              : element_symbol(a.element);
  std::string name = a.name;
  if (name.size() < 4 && sym.size() <= 1)
    name = " " + name;

  char buf[96];
  std::snprintf(buf, sizeof buf, "%-6s%5d %-4.4s %3.3s %1.1s%4d%c   %8.3f%8.3f%8.3f%6.2f%6.2f          %2s",
                a.is_hetero ? "HETATM" : "ATOM", a.serial, name.c_str(), a.residue.name.c_str(),
                a.residue.chain.empty() ? " " : a.residue.chain.c_str(), a.residue.seq,
                a.residue.insertion, a.position.x(), a.position.y(), a.position.z(), 1.0, 0.0,
                std::string(sym).c_str());
  return buf;
}

std::string format_structure(const Structure &s) {
  std::string out;
  if (s.resolution) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "REMARK   2 RESOLUTION.    %.2f ANGSTROMS.\n", *s.resolution);
    out += buf;
  }
  for (const Atom &a: s.atoms) {
    out += format_atom_record(a);
    out += '\n';
  }
  out += "END\n";
  return out;
}

BondList infer_bonds(const std::vector<Atom> &atoms, const BondRule &rule) {
  BondList bonds;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      const double d = (atoms[i].position - atoms[j].position).norm();
      if (d <= rule.max_distance(atoms[i].element, atoms[j].element))
        bonds.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return bonds;
}

std::vector<LigandCandidate> extract_ligands(const Structure &s, const BondRule &rule) {
  std::map<ResidueId, std::vector<Atom>> groups;
  for (const Atom &a: s.atoms) {
    if (a.is_hetero && !is_water(a.residue.name))
      groups[a.residue].push_back(a);
  }

  std::vector<LigandCandidate> out;
  out.reserve(groups.size());
  for (auto &[residue, atoms]: groups) {
    LigandCandidate cand;
    cand.residue = residue;
    cand.atoms = std::move(atoms);
    cand.covalent_bonds = infer_bonds(cand.atoms, rule);
    out.push_back(std::move(cand));
  }
  return out;
}

}  // namespace decoyforge
