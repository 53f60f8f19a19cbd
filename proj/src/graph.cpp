//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "decoyforge/graph.hpp"

#include <algorithm>

#include <json.hpp>

#include "decoyforge/error.hpp"

namespace decoyforge {

std::size_t ComplexGraph::count_edges(EdgeType type) const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [type](const Edge &e) { return e.type == type; }));
}

bool ComplexGraph::is_ligand(int node) const {
  return std::find(ligand_nodes.begin(), ligand_nodes.end(), node) != ligand_nodes.end();
}

Eigen::MatrixXd node_features(const std::vector<Element> &elements,
                              const std::vector<bool> &is_ligand) {
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(elements.size()),
                                            kNodeFeatureDim);
  for (std::size_t n = 0; n < elements.size(); ++n) {
    const auto row = static_cast<Eigen::Index>(n);
    f(row, element_vocab_index(elements[n])) = 1.0;
    f(row, kElementVocabSize) = is_ligand[n] ? 1.0 : 0.0;
  }
  return f;
}

ComplexGraph build_graph(const std::vector<Element> &protein_elements, const Coords &protein_coords,
                         const std::vector<Element> &ligand_elements, const Coords &ligand_coords,
                         const BondList &ligand_bonds, double cutoff) {
  if (ligand_elements.size() != ligand_coords.size())
    throw Error(ErrorKind::LengthMismatch, "ligand elements and coordinates differ in length");
  const double cut2 = cutoff * cutoff;

  std::vector<int> pocket;
  for (std::size_t p = 0; p < protein_coords.size(); ++p) {
    for (const Vec3 &l: ligand_coords) {
      if ((protein_coords[p] - l).squaredNorm() <= cut2) {
        pocket.push_back(static_cast<int>(p));
        break;
      }
    }
  }
  if (pocket.empty())
    throw Error(ErrorKind::EmptyPocket, "no protein atom within cutoff of the ligand");

  ComplexGraph g;
  const int n_pocket = static_cast<int>(pocket.size());
  const int n_ligand = static_cast<int>(ligand_coords.size());
  std::vector<bool> ligand_flag;
  for (int p: pocket) {
    g.positions.push_back(protein_coords[p]);
    g.elements.push_back(protein_elements[p]);
    ligand_flag.push_back(false);
  }
  for (int l = 0; l < n_ligand; ++l) {
    g.positions.push_back(ligand_coords[l]);
    g.elements.push_back(ligand_elements[l]);
    ligand_flag.push_back(true);
    g.ligand_nodes.push_back(n_pocket + l);
  }
  g.features = node_features(g.elements, ligand_flag);

  for (int a = 0; a < n_pocket; ++a) {
    for (int b = a + 1; b < n_pocket; ++b) {
      if ((g.positions[a] - g.positions[b]).squaredNorm() <= cut2)
        g.edges.push_back({ a, b, EdgeType::ProteinProtein });
    }
    for (int l = 0; l < n_ligand; ++l) {
      if ((g.positions[a] - ligand_coords[l]).squaredNorm() <= cut2)
        g.edges.push_back({ a, n_pocket + l, EdgeType::Interactive });
    }
  }
  for (auto [a, b]: ligand_bonds) {
    if (a == b)
      continue;
    g.edges.push_back({ n_pocket + std::min(a, b), n_pocket + std::max(a, b),
                        EdgeType::LigandCovalent });
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const Edge &x, const Edge &y) {
    return std::tie(x.i, x.j) < std::tie(y.i, y.j);
  });
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end(),
                            [](const Edge &x, const Edge &y) { return x.i == y.i && x.j == y.j; }),
                g.edges.end());
  return g;
}

ComplexGraph build_graph(const ComplexRecord &rec, const DecoyPose *pose, double cutoff) {
  std::vector<Element> protein_elements, ligand_elements;
  Coords protein_coords;
  for (const Atom &a: rec.protein_atoms) {
    protein_elements.push_back(a.element);
    protein_coords.push_back(a.position);
  }
  for (const Atom &a: rec.ligand.atoms)
    ligand_elements.push_back(a.element);

  Coords ligand_coords = pose != nullptr ? pose->ligand_coords : rec.ligand.coordinates();
  if (ligand_coords.size() != rec.ligand.atoms.size())
    throw Error(ErrorKind::LengthMismatch, rec.complex_id + ": pose atom count differs from native");
  return build_graph(protein_elements, protein_coords, ligand_elements, ligand_coords,
                     rec.ligand.covalent_bonds, cutoff);
}

PerturbedGraph perturb_ligand(const ComplexGraph &g, double sigma, Rng &rng) {
  if (!(sigma > 0.0))
    throw Error(ErrorKind::InvalidConfig, "perturbation sigma must be positive");
  PerturbedGraph out { g, {}, sigma };
  out.noise.reserve(g.ligand_nodes.size());
  for (int node: g.ligand_nodes) {
    const Vec3 eps(rng.normal(0.0, sigma), rng.normal(0.0, sigma), rng.normal(0.0, sigma));
    out.graph.positions[node] += eps;
    out.noise.push_back(eps);
  }
  return out;
}

std::string graph_to_json(const ComplexGraph &g) {
  nlohmann::json j;
  auto &pos = j["positions"] = nlohmann::json::array();
  for (const Vec3 &p: g.positions)
    pos.push_back({ p.x(), p.y(), p.z() });
  auto &feat = j["features"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < g.features.rows(); ++r) {
    std::vector<double> row(g.features.cols());
    for (Eigen::Index c = 0; c < g.features.cols(); ++c)
      row[c] = g.features(r, c);
    feat.push_back(row);
  }
  auto &edges = j["edges"] = nlohmann::json::array();
  for (const Edge &e: g.edges)
    edges.push_back({ e.i, e.j, static_cast<int>(e.type) });
  std::vector<bool> mask(g.num_nodes(), false);
  for (int n: g.ligand_nodes)
    mask[n] = true;
  j["ligand_mask"] = mask;
  return j.dump();
}

}  // namespace decoyforge
