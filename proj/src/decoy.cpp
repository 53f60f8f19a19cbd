//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "decoyforge/decoy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "decoyforge/error.hpp"
#include "decoyforge/rng.hpp"

namespace decoyforge {

using nlohmann::json;

double rmsd(std::span<const Vec3> native, std::span<const Vec3> pose) {
  if (native.size() != pose.size() || native.empty()) {
    throw Error(ErrorKind::LengthMismatch, "rmsd over " + std::to_string(native.size()) + " vs "
                                               + std::to_string(pose.size()) + " atoms");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < native.size(); ++i)
    sum += (native[i] - pose[i]).squaredNorm();
  return std::sqrt(sum / static_cast<double>(native.size()));
}

void DecoyGenConfig::validate() const {
  if (poses_per_complex < 1)
    throw Error(ErrorKind::InvalidConfig, "poses_per_complex must be >= 1");
  if (translation_sigma < 0.0 || torsion_sigma < 0.0 || rotation_max < 0.0)
    throw Error(ErrorKind::InvalidConfig, "perturbation scales must be non-negative");
  if (clash_min_distance < 0.0 || box_padding < 0.0 || contact_distance <= 0.0)
    throw Error(ErrorKind::InvalidConfig, "distance thresholds out of range");
  if (max_attempts_per_pose < 1)
    throw Error(ErrorKind::InvalidConfig, "max_attempts_per_pose must be >= 1");
}

DecoyGenConfig decoy_config_from_json(std::string_view json_text) {
  DecoyGenConfig cfg;
  try {
    const json j = json::parse(json_text);
    for (const auto &[key, value]: j.items()) {
      if (key == "poses_per_complex")
        cfg.poses_per_complex = value.get<int>();
      else if (key == "translation_sigma")
        cfg.translation_sigma = value.get<double>();
      else if (key == "rotation_max")
        cfg.rotation_max = value.get<double>();
      else if (key == "torsion_sigma")
        cfg.torsion_sigma = value.get<double>();
      else if (key == "clash_min_distance")
        cfg.clash_min_distance = value.get<double>();
      else if (key == "box_padding")
        cfg.box_padding = value.get<double>();
      else if (key == "contact_distance")
        cfg.contact_distance = value.get<double>();
      else if (key == "max_attempts_per_pose")
        cfg.max_attempts_per_pose = value.get<int>();
      else if (key == "rng_seed")
        cfg.rng_seed = value.get<std::uint64_t>();
      else
        throw Error(ErrorKind::InvalidConfig, "unknown decoy config key " + key);
    }
  } catch (const json::exception &e) {
    throw Error(ErrorKind::InvalidConfig, std::string("decoys: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string decoy_config_to_json(const DecoyGenConfig &cfg) {
  json j;
  j["poses_per_complex"] = cfg.poses_per_complex;
  j["translation_sigma"] = cfg.translation_sigma;
  j["rotation_max"] = cfg.rotation_max;
  j["torsion_sigma"] = cfg.torsion_sigma;
  j["clash_min_distance"] = cfg.clash_min_distance;
  j["box_padding"] = cfg.box_padding;
  j["contact_distance"] = cfg.contact_distance;
  j["max_attempts_per_pose"] = cfg.max_attempts_per_pose;
  j["rng_seed"] = cfg.rng_seed;
  return j.dump(2);
}

namespace {

using Adjacency = std::vector<std::vector<int>>;

Adjacency adjacency(std::size_t n, const BondList &bonds) {
  Adjacency adj(n);
  for (auto [a, b]: bonds) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

// Atoms reachable from `start` without traversing the edge (skip_a, skip_b).
std::vector<int> side_of(const Adjacency &adj, int start, int skip_a, int skip_b) {
  std::vector<bool> seen(adj.size(), false);
  std::vector<int> stack { start }, out;
  seen[start] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    out.push_back(u);
    for (int v: adj[u]) {
      if ((u == skip_a && v == skip_b) || (u == skip_b && v == skip_a))
        continue;
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return out;
}

struct Torsion {
  int axis_from;
  int axis_to;
  std::vector<int> moving;
};

std::vector<Torsion> torsions_of(const LigandCandidate &ligand) {
  const Adjacency adj = adjacency(ligand.atoms.size(), ligand.covalent_bonds);
  std::vector<Torsion> out;
  for (auto [a, b]: rotatable_bonds(ligand)) {
    std::vector<int> side_b = side_of(adj, b, a, b);
    std::vector<int> side_a = side_of(adj, a, a, b);
    if (side_b.size() <= side_a.size())
      out.push_back({ a, b, std::move(side_b) });
    else
      out.push_back({ b, a, std::move(side_a) });
  }
  return out;
}

Vec3 random_unit_vector(Rng &rng) {
  for (;;) {
    Vec3 v(rng.normal(), rng.normal(), rng.normal());
    const double n = v.norm();
    if (n > 1e-12)
      return v / n;
  }
}

}  // namespace

std::vector<bool> ring_bond_mask(std::size_t n_atoms, const BondList &bonds) {
  const Adjacency adj = adjacency(n_atoms, bonds);
  std::vector<bool> mask(bonds.size(), false);
  for (std::size_t k = 0; k < bonds.size(); ++k) {
    const auto [a, b] = bonds[k];
    const auto side = side_of(adj, a, a, b);
    mask[k] = std::find(side.begin(), side.end(), b) != side.end();
  }
  return mask;
}

BondList rotatable_bonds(const LigandCandidate &ligand) {
  const auto &atoms = ligand.atoms;
  std::vector<int> heavy_degree(atoms.size(), 0);
  for (auto [a, b]: ligand.covalent_bonds) {
    if (!is_hydrogen(atoms[a].element) && !is_hydrogen(atoms[b].element)) {
      ++heavy_degree[a];
      ++heavy_degree[b];
    }
  }
  const auto in_ring = ring_bond_mask(atoms.size(), ligand.covalent_bonds);

  BondList out;
  for (std::size_t k = 0; k < ligand.covalent_bonds.size(); ++k) {
    const auto [a, b] = ligand.covalent_bonds[k];
    if (in_ring[k] || is_hydrogen(atoms[a].element) || is_hydrogen(atoms[b].element))
      continue;
    if (heavy_degree[a] >= 2 && heavy_degree[b] >= 2)
      out.emplace_back(a, b);
  }
  return out;
}

std::uint64_t complex_stream_seed(std::uint64_t base_seed, std::string_view complex_id) {
  return mix_seed({ base_seed, hash_string(complex_id) });
}

DecoyGeneration generate_decoys(const ComplexRecord &rec, const DecoyGenConfig &cfg) {
  cfg.validate();
  const Coords native = rec.ligand.coordinates();
  if (native.empty())
    throw Error(ErrorKind::NoValidPose, rec.complex_id + ": ligand has no atoms");

  const Box box = bounding_box(native, cfg.box_padding);
  const double reach = cfg.box_padding + std::max(cfg.contact_distance, cfg.clash_min_distance);
  const Box near_box = bounding_box(native, reach);
  Coords pocket;
  for (const Atom &a: rec.protein_atoms) {
    if (near_box.contains(a.position))
      pocket.push_back(a.position);
  }

  const std::vector<Torsion> torsions = torsions_of(rec.ligand);
  const double clash2 = cfg.clash_min_distance * cfg.clash_min_distance;
  const double contact2 = cfg.contact_distance * cfg.contact_distance;

  auto acceptable = [&](const Coords &pose) {
    bool contact = false;
    for (const Vec3 &p: pose) {
      if (!box.contains(p))
        return false;
      for (const Vec3 &q: pocket) {
        const double d2 = (p - q).squaredNorm();
        if (d2 < clash2)
          return false;
        if (d2 <= contact2)
          contact = true;
      }
    }
    return contact;
  };

  Rng rng(complex_stream_seed(cfg.rng_seed, rec.complex_id));
  DecoyGeneration out;
  for (int pose_no = 0; pose_no < cfg.poses_per_complex; ++pose_no) {
    bool accepted = false;
    for (int attempt = 0; attempt < cfg.max_attempts_per_pose && !accepted; ++attempt) {
      Coords pose = native;

      for (const Torsion &t: torsions) {
        const double angle = rng.normal(0.0, cfg.torsion_sigma);
        const Vec3 origin = pose[t.axis_from];
        const Vec3 axis = (pose[t.axis_to] - origin).normalized();
        const Eigen::AngleAxisd rot(angle, axis);
        for (int idx: t.moving)
          pose[idx] = origin + rot * (pose[idx] - origin);
      }

      const Vec3 axis = random_unit_vector(rng);
      const double angle = rng.uniform(0.0, cfg.rotation_max);
      const Vec3 shift(rng.normal(0.0, cfg.translation_sigma), rng.normal(0.0, cfg.translation_sigma),
                       rng.normal(0.0, cfg.translation_sigma));
      const Vec3 center = centroid(pose);
      const Eigen::Matrix3d rot = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
      for (Vec3 &p: pose)
        p = center + rot * (p - center) + shift;

      if (!acceptable(pose))
        continue;
      DecoyPose dp;
      dp.complex_id = rec.complex_id;
      dp.pose_index = static_cast<int>(out.poses.size());
      dp.rmsd = rmsd(native, pose);
      dp.ligand_coords = std::move(pose);
      out.poses.push_back(std::move(dp));
      accepted = true;
    }
    if (!accepted)
      ++out.exhausted;
  }

  if (out.poses.empty()) {
    throw Error(ErrorKind::NoValidPose,
                rec.complex_id + ": all " + std::to_string(cfg.poses_per_complex) + " poses rejected");
  }
  return out;
}

namespace {

std::vector<std::string_view> split_models(std::string_view text) {
  std::vector<std::string_view> models;
  bool saw_model = false;
  std::size_t start = 0, pos = 0;
  bool open = false;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos)
      nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    if (line.starts_with("MODEL")) {
      saw_model = true;
      open = true;
      start = nl + 1;
    } else if (line.starts_with("ENDMDL") && open) {
      models.push_back(text.substr(start, pos - start));
      open = false;
    }
    pos = nl + 1;
  }
  if (open)
    models.push_back(text.substr(start));
  if (!saw_model)
    models.push_back(text);
  return models;
}

}  // namespace

std::vector<DecoyPose> poses_from_text(const ComplexRecord &rec, std::string_view text,
                                       int first_pose_index) {
  std::map<std::string, int> native_index;
  for (std::size_t i = 0; i < rec.ligand.atoms.size(); ++i) {
    if (!native_index.emplace(rec.ligand.atoms[i].name, static_cast<int>(i)).second) {
      throw Error(ErrorKind::AmbiguousAtomNames,
                  rec.complex_id + ": native ligand repeats atom name " + rec.ligand.atoms[i].name);
    }
  }
  const Coords native = rec.ligand.coordinates();

  std::vector<DecoyPose> out;
  int index = first_pose_index;
  for (std::string_view block: split_models(text)) {
    const Structure s = parse_structure(block, rec.complex_id);
    std::vector<const Atom *> ligand_atoms;
    for (const Atom &a: s.atoms) {
      if (a.is_hetero && !is_water(a.residue.name))
        ligand_atoms.push_back(&a);
    }

    Coords coords(native.size(), Vec3::Zero());
    std::vector<bool> filled(native.size(), false);
    for (const Atom *a: ligand_atoms) {
      auto it = native_index.find(a->name);
      if (it == native_index.end()) {
        throw Error(ErrorKind::AtomNameMismatch,
                    rec.complex_id + ": pose atom " + a->name + " not in native ligand");
      }
      if (filled[it->second]) {
        throw Error(ErrorKind::AmbiguousAtomNames,
                    rec.complex_id + ": pose repeats atom name " + a->name);
      }
      filled[it->second] = true;
      coords[it->second] = a->position;
    }
    if (ligand_atoms.size() != native.size()) {
      throw Error(ErrorKind::AtomNameMismatch,
                  rec.complex_id + ": pose has " + std::to_string(ligand_atoms.size())
                      + " ligand atoms, native has " + std::to_string(native.size()));
    }

    DecoyPose dp;
    dp.complex_id = rec.complex_id;
    dp.pose_index = index++;
    dp.rmsd = rmsd(native, coords);
    dp.ligand_coords = std::move(coords);
    out.push_back(std::move(dp));
  }
  return out;
}

std::vector<DecoyPose> ingest_poses(const ComplexRecord &rec,
                                    const std::vector<std::string> &pose_files,
                                    int first_pose_index) {
  std::vector<DecoyPose> out;
  for (const std::string &path: pose_files) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw Error(ErrorKind::Io, "cannot open pose file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    auto poses = poses_from_text(rec, buf.str(), first_pose_index + static_cast<int>(out.size()));
    for (auto &p: poses)
      out.push_back(std::move(p));
  }
  return out;
}

}  // namespace decoyforge
