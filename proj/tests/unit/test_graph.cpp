//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <set>
#include <tuple>

#include <doctest.h>
#include <json.hpp>

#include "decoyforge/error.hpp"
#include "decoyforge/graph.hpp"
#include "decoyforge/rng.hpp"
#include "support.hpp"

using namespace decoyforge;

namespace {

struct RandomComplex {
  std::vector<Element> pe, le;
  Coords pc, lc;
  BondList bonds;
};

RandomComplex random_complex(std::uint64_t seed) {
  Rng rng(seed);
  RandomComplex c;
  const int nl = 2 + static_cast<int>(rng.below(6));
  for (int k = 0; k < nl; ++k) {
    c.le.push_back(k % 3 == 1 ? Element::N : Element::C);
    c.lc.push_back(Vec3(1.5 * k, rng.uniform(-0.3, 0.3), 0));
    if (k > 0)
      c.bonds.emplace_back(k - 1, k);
  }
  const int np = 10 + static_cast<int>(rng.below(40));
  for (int k = 0; k < np; ++k) {
    c.pe.push_back(k % 4 == 0 ? Element::O : Element::C);
    c.pc.push_back(Vec3(rng.uniform(-8, 16), rng.uniform(-9, 9), rng.uniform(-9, 9)));
  }
  // One guaranteed pocket atom.
  c.pc[0] = Vec3(0, 3.0, 0);
  return c;
}

}  // namespace

TEST_CASE("graph matches a brute-force construction") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const RandomComplex c = random_complex(seed);
    const ComplexGraph g = build_graph(c.pe, c.pc, c.le, c.lc, c.bonds);

    std::vector<int> pocket;
    for (std::size_t p = 0; p < c.pc.size(); ++p) {
      bool near = false;
      for (const Vec3 &l: c.lc)
        near = near || (c.pc[p] - l).norm() <= kGraphCutoff;
      if (near)
        pocket.push_back(static_cast<int>(p));
    }
    const int np = static_cast<int>(pocket.size());
    REQUIRE(g.num_nodes() == pocket.size() + c.lc.size());
    for (int k = 0; k < np; ++k)
      CHECK(g.positions[k] == c.pc[pocket[k]]);

    std::set<std::tuple<int, int, int>> expected;
    for (int a = 0; a < np; ++a)
      for (int b = a + 1; b < np; ++b)
        if ((c.pc[pocket[a]] - c.pc[pocket[b]]).norm() <= kGraphCutoff)
          expected.emplace(a, b, 0);
    for (auto [i, j]: c.bonds)
      expected.emplace(np + i, np + j, 1);
    for (int a = 0; a < np; ++a)
      for (std::size_t l = 0; l < c.lc.size(); ++l)
        if ((c.pc[pocket[a]] - c.lc[l]).norm() <= kGraphCutoff)
          expected.emplace(a, np + static_cast<int>(l), 2);

    std::set<std::tuple<int, int, int>> got;
    for (const Edge &e: g.edges) {
      CHECK(e.i < e.j);
      got.emplace(e.i, e.j, static_cast<int>(e.type));
    }
    CHECK(got == expected);
    CHECK(got.size() == g.edges.size());
    CHECK(std::is_sorted(g.edges.begin(), g.edges.end(), [](const Edge &x, const Edge &y) {
      return std::tie(x.i, x.j) < std::tie(y.i, y.j);
    }));

    for (std::size_t n = 0; n < g.num_nodes(); ++n) {
      CHECK(g.features.row(n).sum() == 2.0 - (n < pocket.size() ? 1.0 : 0.0));
      CHECK(g.is_ligand(static_cast<int>(n)) == (n >= pocket.size()));
    }
    CHECK(g.count_edges(EdgeType::LigandCovalent) == c.bonds.size());
  }
}

TEST_CASE("cutoff is inclusive") {
  const std::vector<Element> pe { Element::C, Element::C };
  const Coords pc { Vec3(5.0, 0, 0), Vec3(0, 5.0 + 1e-9, 0) };
  const ComplexGraph g = build_graph(pe, pc, { Element::C }, { Vec3::Zero() }, {});
  CHECK(g.num_nodes() == 2);
  CHECK(g.count_edges(EdgeType::Interactive) == 1);
}

TEST_CASE("empty pocket and wrong pose length") {
  try {
    build_graph({ Element::C }, { Vec3(20, 0, 0) }, { Element::C }, { Vec3::Zero() }, {});
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::EmptyPocket);
  }

  ComplexRecord rec;
  rec.complex_id = "x";
  rec.ligand.atoms.push_back(testing::make_atom(1, Element::C, "C1", Vec3::Zero(), "A", 1, "LIG", true));
  rec.protein_atoms.push_back(testing::make_atom(2, Element::C, "CA", Vec3(3, 0, 0), "A", 2, "ALA", false));
  DecoyPose pose;
  pose.ligand_coords = { Vec3::Zero(), Vec3::Zero() };
  try {
    build_graph(rec, &pose);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::LengthMismatch);
  }
  pose.ligand_coords = { Vec3(1, 0, 0) };
  const ComplexGraph g = build_graph(rec, &pose);
  CHECK(g.positions[1] == Vec3(1, 0, 0));
}

TEST_CASE("ligand perturbation leaves the protein and edges") {
  const RandomComplex c = random_complex(3);
  const ComplexGraph g = build_graph(c.pe, c.pc, c.le, c.lc, c.bonds);
  Rng rng(11);
  const PerturbedGraph p = perturb_ligand(g, 0.5, rng);
  CHECK(p.sigma == 0.5);
  CHECK(p.graph.edges == g.edges);
  REQUIRE(p.noise.size() == g.ligand_nodes.size());
  for (std::size_t n = 0; n < g.num_nodes(); ++n) {
    if (!g.is_ligand(static_cast<int>(n)))
      CHECK(p.graph.positions[n] == g.positions[n]);
  }
  for (std::size_t k = 0; k < g.ligand_nodes.size(); ++k) {
    const int n = g.ligand_nodes[k];
    CHECK((p.graph.positions[n] - g.positions[n] - p.noise[k]).norm() < 1e-12);
  }
  Rng zero_rng(11);
  CHECK_THROWS_AS(perturb_ligand(g, 0.0, zero_rng), Error);
}

TEST_CASE("perturbation noise has the requested scale") {
  const RandomComplex c = random_complex(5);
  const ComplexGraph g = build_graph(c.pe, c.pc, c.le, c.lc, c.bonds);
  Rng rng(2);
  double sum = 0.0, sq = 0.0;
  std::size_t n = 0;
  for (int rep = 0; rep < 4000; ++rep) {
    for (const Vec3 &e: perturb_ligand(g, 0.7, rng).noise) {
      for (int k = 0; k < 3; ++k) {
        sum += e[k];
        sq += e[k] * e[k];
        ++n;
      }
    }
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::sqrt(sq / n - mean * mean) == doctest::Approx(0.7).epsilon(0.02));
}

TEST_CASE("graph JSON export") {
  const RandomComplex c = random_complex(1);
  const ComplexGraph g = build_graph(c.pe, c.pc, c.le, c.lc, c.bonds);
  const auto j = nlohmann::json::parse(graph_to_json(g));
  CHECK(j["positions"].size() == g.num_nodes());
  CHECK(j["features"][0].size() == static_cast<std::size_t>(kNodeFeatureDim));
  CHECK(j["edges"].size() == g.edges.size());
  std::size_t lig = 0;
  for (const auto &b: j["ligand_mask"])
    lig += b.get<bool>();
  CHECK(lig == c.lc.size());
}
