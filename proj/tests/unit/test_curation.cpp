//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>

#include <doctest.h>

#include "decoyforge/binary_io.hpp"
#include "decoyforge/curation.hpp"
#include "decoyforge/error.hpp"
#include "decoyforge/rng.hpp"
#include "decoyforge/synthetic.hpp"
#include "support.hpp"

using namespace decoyforge;
using testing::make_atom;

namespace {

LigandCandidate ligand_of(const std::vector<std::pair<Element, Vec3>> &atoms, const std::string &resname = "LIG") {
  LigandCandidate l;
  l.residue = { "A", 401, ' ', resname };
  int serial = 100;
  for (const auto &[e, p]: atoms)
    l.atoms.push_back(make_atom(serial++, e, std::string(element_symbol(e)) + std::to_string(serial), p, "A", 401,
                                resname, true));
  return l;
}

// Ten carbons in a zig-zag along x, 120.11 Da.
std::vector<Atom> ten_carbon_ligand(const std::string &resname = "LIG") {
  std::vector<Atom> out;
  for (int k = 0; k < 10; ++k)
    out.push_back(make_atom(100 + k, Element::C, "C" + std::to_string(k + 1),
                            Vec3(1.25 * k, k % 2 ? 0.8 : 0.0, 0.0), "A", 401, resname, true));
  return out;
}

// A 4-atom chain whose nearest atom lies `gap` A from the ligand at (0,0,0)..(11.25,0.8,0).
std::vector<Atom> chain_at(const std::string &chain, double gap, int first_serial) {
  std::vector<Atom> out;
  for (int k = 0; k < 4; ++k)
    out.push_back(make_atom(first_serial + k, Element::C, "CA", Vec3(-gap - 1.5 * k, 0.0, 0.0), chain, k + 1,
                            "ALA", false));
  return out;
}

Structure entry(double resolution, std::vector<Atom> protein, std::vector<Atom> ligand) {
  Structure s;
  s.entry_id = "e1";
  s.resolution = resolution;
  s.atoms = std::move(protein);
  s.atoms.insert(s.atoms.end(), ligand.begin(), ligand.end());
  for (const Atom &a: s.atoms)
    s.chains.insert(a.residue.chain);
  return s;
}

double min_distance(const std::vector<Atom> &a, const std::vector<Atom> &b) {
  double best = std::numeric_limits<double>::infinity();
  for (const Atom &x: a)
    for (const Atom &y: b)
      best = std::min(best, (x.position - y.position).norm());
  return best;
}

std::vector<std::string> fixture_paths() {
  std::vector<std::string> out;
  for (const auto &e: std::filesystem::directory_iterator(std::string(DECOYFORGE_TEST_DATA) + "/curation"))
    out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("molecular weight from standard masses") {
  CHECK(molecular_weight(ligand_of({ { Element::C, Vec3::Zero() } })) == doctest::Approx(12.011).epsilon(1e-12));

  std::vector<std::pair<Element, Vec3>> benzene;
  for (int k = 0; k < 6; ++k) {
    benzene.push_back({ Element::C, Vec3(k, 0, 0) });
    benzene.push_back({ Element::H, Vec3(k, 1, 0) });
  }
  const double mw = molecular_weight(ligand_of(benzene));
  CHECK(mw == doctest::Approx(6 * 12.011 + 6 * 1.008).epsilon(1e-12));
  CHECK(std::abs(mw - 78.11) <= 0.01);

  const LigandCandidate methane = ligand_of({ { Element::C, Vec3::Zero() },
                                              { Element::H, Vec3(1, 0, 0) },
                                              { Element::H, Vec3(-1, 0, 0) },
                                              { Element::H, Vec3(0, 1, 0) },
                                              { Element::H, Vec3(0, -1, 0) } });
  CHECK(molecular_weight(methane) == doctest::Approx(16.043).epsilon(1e-12));

  CHECK_THROWS_AS(molecular_weight(ligand_of({ { Element::Unknown, Vec3::Zero() } })), Error);
}

TEST_CASE("methane is rejected by the weight window") {
  std::vector<Atom> lig { make_atom(100, Element::C, "C1", Vec3(0, 0, 0), "A", 401, "MTH", true),
                          make_atom(101, Element::H, "H1", Vec3(1.0, 0, 0), "A", 401, "MTH", true),
                          make_atom(102, Element::H, "H2", Vec3(-1.0, 0, 0), "A", 401, "MTH", true),
                          make_atom(103, Element::H, "H3", Vec3(0, 1.0, 0), "A", 401, "MTH", true),
                          make_atom(104, Element::H, "H4", Vec3(0, -1.0, 0), "A", 401, "MTH", true) };
  // A single heavy atom: the ion rule fires first in the cascade.
  auto out = curate_entry(entry(2.0, chain_at("A", 4.0, 1), lig), FilterConfig {});
  REQUIRE(out.reports.size() == 1);
  CHECK(out.reports[0].rule == RejectionRule::MonoatomicIon);

  // With a second heavy atom the weight (28 + 4H) is still below 50.
  lig[1] = make_atom(101, Element::C, "C2", Vec3(1.5, 0, 0), "A", 401, "MTH", true);
  out = curate_entry(entry(2.0, chain_at("A", 4.0, 1), lig), FilterConfig {});
  REQUIRE(out.reports.size() == 1);
  CHECK(out.reports[0].rule == RejectionRule::MolecularWeight);
}

TEST_CASE("resolution above the cut rejects the whole entry") {
  const auto out = curate_entry(entry(3.0, chain_at("A", 4.0, 1), ten_carbon_ligand()), FilterConfig {});
  CHECK(out.records.empty());
  REQUIRE(out.reports.size() == 1);
  CHECK(out.reports[0].rule == RejectionRule::Resolution);

  // 2.5 itself passes.
  CHECK(curate_entry(entry(2.5, chain_at("A", 4.0, 1), ten_carbon_ligand()), FilterConfig {}).records.size() == 1);

  Structure missing = entry(2.0, chain_at("A", 4.0, 1), ten_carbon_ligand());
  missing.resolution.reset();
  CHECK(curate_entry(missing, FilterConfig {}).reports.at(0).rule == RejectionRule::Resolution);
}

TEST_CASE("chain isolation keeps chains within the pocket radius") {
  std::vector<Atom> protein = chain_at("A", 9.5, 1);
  // Chain B: nearest atom 10.5 A from the ligand's last atom.
  for (int k = 0; k < 4; ++k)
    protein.push_back(make_atom(20 + k, Element::C, "CA", Vec3(11.25 + 10.5 + 1.5 * k, 0.8, 0.0), "B", k + 1, "GLY",
                                false));
  const std::vector<Atom> lig = ten_carbon_ligand();
  const auto out = curate_entry(entry(2.0, protein, lig), FilterConfig {});
  REQUIRE(out.records.size() == 1);
  const ComplexRecord &rec = out.records[0];
  CHECK(rec.complex_id == "e1_A_401_LIG");
  CHECK(rec.resolution == 2.0);
  CHECK(molecular_weight(rec.ligand) == doctest::Approx(120.11));

  std::set<std::string> kept;
  for (const Atom &a: rec.protein_atoms)
    kept.insert(a.residue.chain);
  CHECK(kept == std::set<std::string> { "A" });

  // Brute-force soundness for both chains.
  for (const std::string chain: { "A", "B" }) {
    std::vector<Atom> atoms;
    for (const Atom &a: protein)
      if (a.residue.chain == chain)
        atoms.push_back(a);
    const double d = min_distance(atoms, lig);
    CHECK((d <= 10.0) == kept.contains(chain));
  }
}

TEST_CASE("no chain near the ligand") {
  const auto out = curate_entry(entry(2.0, chain_at("A", 14.0, 1), ten_carbon_ligand()), FilterConfig {});
  CHECK(out.records.empty());
  REQUIRE(out.reports.size() == 1);
  CHECK(out.reports[0].rule == RejectionRule::NoPocketChain);
}

TEST_CASE("iron in a ligand fails the element filter") {
  std::vector<Atom> lig = ten_carbon_ligand();
  lig[4].element = Element::Fe;
  const auto out = curate_entry(entry(2.0, chain_at("A", 4.0, 1), lig), FilterConfig {});
  REQUIRE(out.reports.size() == 1);
  CHECK(out.reports[0].rule == RejectionRule::Element);

  // Whitelisting Fe moves the rejection to the metal rule.
  FilterConfig loose;
  loose.allowed_elements.insert(Element::Fe);
  const auto metal = curate_entry(entry(2.0, chain_at("A", 4.0, 1), lig), loose);
  REQUIRE(metal.reports.size() == 1);
  CHECK(metal.reports[0].rule == RejectionRule::MetalCluster);
}

TEST_CASE("cascade reports only the first failing rule") {
  // Excluded additive with a disallowed element: ExcludedResidue wins.
  std::vector<Atom> lig = ten_carbon_ligand("GOL");
  lig[0].element = Element::B;
  const auto out = curate_entry(entry(2.0, chain_at("A", 4.0, 1), lig), FilterConfig {});
  REQUIRE(out.reports.size() == 1);
  CHECK(out.reports[0].rule == RejectionRule::ExcludedResidue);

  // Disallowed element and bad weight: Element wins.
  std::vector<Atom> small { make_atom(1, Element::B, "B1", Vec3(0, 0, 0), "A", 401, "LIG", true),
                            make_atom(2, Element::C, "C1", Vec3(1.5, 0, 0), "A", 401, "LIG", true) };
  const auto out2 = curate_entry(entry(2.0, chain_at("A", 4.0, 10), small), FilterConfig {});
  REQUIRE(out2.reports.size() == 1);
  CHECK(out2.reports[0].rule == RejectionRule::Element);
}

TEST_CASE("corpus fixture: one pass, five distinct rejections") {
  const auto paths = fixture_paths();
  REQUIRE(paths.size() == 6);
  const CorpusResult r = curate_corpus(paths, FilterConfig {}, 1);
  CHECK(r.summary.entries == 6);
  CHECK(r.summary.retained == 1);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].complex_id == "cur001_A_401_LIG");
  REQUIRE(r.reports.size() == 5);
  std::set<RejectionRule> rules;
  for (const RejectionReport &rep: r.reports)
    rules.insert(rep.rule);
  CHECK(rules.size() == 5);
  CHECK(r.reports[0].rule == RejectionRule::Resolution);
  CHECK(r.reports[1].rule == RejectionRule::MonoatomicIon);
  CHECK(r.reports[2].rule == RejectionRule::ExcludedResidue);
  CHECK(r.reports[3].rule == RejectionRule::Element);
  CHECK(r.reports[4].rule == RejectionRule::MolecularWeight);
}

TEST_CASE("worker count does not change the output") {
  const auto paths = fixture_paths();
  const CorpusResult one = curate_corpus(paths, FilterConfig {}, 1);
  for (std::size_t w: { 4, 8 }) {
    const CorpusResult many = curate_corpus(paths, FilterConfig {}, w);
    CHECK(many.summary.to_json() == one.summary.to_json());
    CHECK(rejections_csv(many.reports) == rejections_csv(one.reports));
    REQUIRE(many.records.size() == one.records.size());
    for (std::size_t k = 0; k < one.records.size(); ++k) {
      CHECK(many.records[k].complex_id == one.records[k].complex_id);
      CHECK(many.records[k].protein_atoms == one.records[k].protein_atoms);
      CHECK(many.records[k].ligand.atoms == one.records[k].ligand.atoms);
    }
  }
}

TEST_CASE("empty corpus") {
  const CorpusResult r = curate_corpus({}, FilterConfig {}, 4);
  CHECK(r.summary.entries == 0);
  CHECK(r.summary.retained == 0);
  CHECK(r.records.empty());
  CHECK(r.reports.empty());
  CHECK(r.summary.io_errors.empty());
}

TEST_CASE("unreadable files are collected, not fatal") {
  testing::TempDir tmp;
  write_file(tmp.str("bad.pdb"), "ATOM      1  CA  ALA A   1\n");
  auto paths = fixture_paths();
  paths.push_back(tmp.str("bad.pdb"));
  paths.push_back(tmp.str("missing.pdb"));
  const CorpusResult r = curate_corpus(paths, FilterConfig {}, 2);
  CHECK(r.summary.entries == 8);
  CHECK(r.summary.retained == 1);
  CHECK(r.summary.io_errors.size() == 2);
}

TEST_CASE("manifest supplies missing resolutions") {
  testing::TempDir tmp;
  std::string text = read_file(fixture_paths()[0]);
  text = text.substr(text.find('\n') + 1);  // drop REMARK 2
  write_file(tmp.str("nores.pdb"), text);
  CHECK(curate_corpus({ tmp.str("nores.pdb") }, FilterConfig {}, 1).summary.retained == 0);

  write_file(tmp.str("entries.json"), R"({"nores": {"resolution": 1.7}})");
  const auto manifest = read_resolution_manifest(tmp.str("entries.json"));
  const CorpusResult r = curate_corpus({ tmp.str("nores.pdb") }, FilterConfig {}, 1, manifest);
  CHECK(r.summary.retained == 1);
  CHECK(r.records.at(0).resolution == 1.7);
}

TEST_CASE("loosening filters never decreases the retained count") {
  std::vector<SyntheticEntry> entries = curation_fixture();
  for (const SyntheticEntry &e: synthetic_corpus({ .complexes = 6, .seed = 3 }))
    entries.push_back(e);
  testing::TempDir tmp;
  const auto paths = write_entries(entries, tmp.str());

  const auto retained = [&](const FilterConfig &cfg) { return curate_corpus(paths, cfg, 1).summary.retained; };
  FilterConfig base;
  const std::size_t n0 = retained(base);

  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    FilterConfig wider = base;
    wider.mw_low = base.mw_low - rng.uniform(0, 40);
    wider.mw_high = base.mw_high + rng.uniform(0, 500);
    CHECK(retained(wider) >= n0);
  }
  FilterConfig with_boron = base;
  with_boron.allowed_elements.insert(Element::B);
  CHECK(retained(with_boron) >= n0);
  FilterConfig both = with_boron;
  both.mw_low = 10.0;
  CHECK(retained(both) >= retained(with_boron));
}

TEST_CASE("filter config JSON") {
  FilterConfig cfg;
  cfg.max_resolution = 2.0;
  cfg.allowed_elements.erase(Element::I);
  const FilterConfig back = filter_config_from_json(filter_config_to_json(cfg));
  CHECK(back.max_resolution == 2.0);
  CHECK(back.allowed_elements == cfg.allowed_elements);
  CHECK(back.excluded_residues == cfg.excluded_residues);
  CHECK(back.mw_low == cfg.mw_low);
  CHECK(back.mw_high == cfg.mw_high);

  CHECK_THROWS_AS(filter_config_from_json(R"({"bogus": 1})"), Error);
  CHECK_THROWS_AS(filter_config_from_json(R"({"mw_range": [700, 50]})"), Error);
  CHECK_THROWS_AS(filter_config_from_json(R"({"allowed_elements": ["Qq"]})"), Error);
}

TEST_CASE("rejections CSV") {
  const std::vector<RejectionReport> reports { { "x_A_1_LIG", RejectionRule::Element, "element B, atom B1" } };
  CHECK(rejections_csv(reports) == "complex_id,rule,detail\nx_A_1_LIG,Element,element B; atom B1\n");
}
