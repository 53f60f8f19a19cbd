//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_GRAPH_HPP_
#define DECOYFORGE_GRAPH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "decoyforge/curation.hpp"
#include "decoyforge/decoy.hpp"
#include "decoyforge/rng.hpp"

namespace decoyforge {

inline constexpr double kGraphCutoff = 5.0;

// One-hot element slots followed by the is-ligand flag.
inline constexpr int kNodeFeatureDim = kElementVocabSize + 1;

enum class EdgeType : std::uint8_t {
  ProteinProtein = 0,
  LigandCovalent = 1,
  Interactive = 2,
};

inline constexpr int kEdgeTypeCount = 3;

struct Edge {
  int i;  // i < j
  int j;
  EdgeType type;

  bool operator==(const Edge &) const = default;
};

/// Protein pocket nodes come first, in source order, followed by the ligand.
struct ComplexGraph {
  Coords positions;
  Eigen::MatrixXd features;  // n x kNodeFeatureDim
  std::vector<Element> elements;
  std::vector<Edge> edges;   // sorted by (i, j), undirected, no self-loops
  std::vector<int> ligand_nodes;

  std::size_t num_nodes() const { return positions.size(); }
  std::size_t count_edges(EdgeType type) const;
  bool is_ligand(int node) const;
};

Eigen::MatrixXd node_features(const std::vector<Element> &elements,
                              const std::vector<bool> &is_ligand);

/**
 * Builds the complex graph with the ligand at the pose coordinates (or the
 * native ones). Protein atoms within `cutoff` of any ligand atom become
 * nodes; protein-protein and protein-ligand pairs at distance <= cutoff
 * become edges; ligand bonds are copied.
 *
 * Throws Error{EmptyPocket} when no protein atom is within the cutoff and
 * Error{LengthMismatch} when the pose has the wrong atom count.
 */
ComplexGraph build_graph(const ComplexRecord &rec, const DecoyPose *pose = nullptr,
                         double cutoff = kGraphCutoff);

/// Same as above from raw parts; used by the dataset store.
ComplexGraph build_graph(const std::vector<Element> &protein_elements, const Coords &protein_coords,
                         const std::vector<Element> &ligand_elements, const Coords &ligand_coords,
                         const BondList &ligand_bonds, double cutoff = kGraphCutoff);

struct PerturbedGraph {
  ComplexGraph graph;
  Coords noise;  // per ligand node, in ligand_nodes order
  double sigma = 0.0;
};

/**
 * Adds i.i.d. N(0, sigma^2) noise to every ligand coordinate. Protein
 * positions and the edge list are left as they were.
 */
PerturbedGraph perturb_ligand(const ComplexGraph &g, double sigma, Rng &rng);

/// {"positions": [[x,y,z]...], "features": [[...]...], "edges": [[i,j,type]...],
///  "ligand_mask": [bool...]}
std::string graph_to_json(const ComplexGraph &g);

}  // namespace decoyforge

#endif  // DECOYFORGE_GRAPH_HPP_
