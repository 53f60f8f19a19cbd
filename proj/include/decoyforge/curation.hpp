//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_CURATION_HPP_
#define DECOYFORGE_CURATION_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "decoyforge/structure.hpp"

namespace decoyforge {

struct FilterConfig {
  double max_resolution = 2.5;
  // Open interval (low, high) in Daltons.
  double mw_low = 50.0;
  double mw_high = 700.0;
  std::set<Element> allowed_elements { Element::C,  Element::N, Element::O, Element::H,  Element::S,
                                       Element::P,  Element::F, Element::Cl, Element::Br, Element::I };
  std::set<std::string> excluded_residues { "HOH", "DOD", "SO4", "PO4", "GOL", "PEG",
                                            "EDO", "ACT", "DMS", "FMT", "MES", "TRS",
                                            "EPE", "CIT", "NO3", "BME" };
  double pocket_radius = 10.0;

  /// Throws Error{InvalidConfig}.
  void validate() const;
};

FilterConfig filter_config_from_json(std::string_view json_text);
std::string filter_config_to_json(const FilterConfig &cfg);

// Cascade order matches the enumerator order after Resolution.
enum class RejectionRule {
  Resolution,
  MonoatomicIon,
  ExcludedResidue,
  Element,
  MetalCluster,
  MolecularWeight,
  NoPocketChain,
};

inline constexpr std::array kAllRejectionRules {
  RejectionRule::Resolution, RejectionRule::MonoatomicIon, RejectionRule::ExcludedResidue,
  RejectionRule::Element,    RejectionRule::MetalCluster,  RejectionRule::MolecularWeight,
  RejectionRule::NoPocketChain,
};

std::string_view to_string(RejectionRule rule) noexcept;

struct RejectionReport {
  std::string complex_id;
  RejectionRule rule;
  std::string detail;
};

struct ComplexRecord {
  std::string complex_id;
  std::vector<Atom> protein_atoms;
  LigandCandidate ligand;
  double resolution = 0.0;
  std::optional<RejectionRule> rejection;
};

/// Sum of standard atomic masses. Throws Error{UnknownElement}.
double molecular_weight(const LigandCandidate &ligand);

struct CurationOutcome {
  std::vector<ComplexRecord> records;
  std::vector<RejectionReport> reports;
};

/**
 * Runs the filter cascade on one entry. Per ligand the first failing rule is
 * reported; survivors keep only the protein chains that come within
 * cfg.pocket_radius of a ligand heavy atom.
 */
CurationOutcome curate_entry(const Structure &s, const FilterConfig &cfg,
                             const BondRule &bonds = {});

struct CurationSummary {
  std::size_t entries = 0;
  std::size_t retained = 0;
  std::map<RejectionRule, std::size_t> rejected;
  std::vector<std::string> io_errors;  // "path: message"

  std::string to_json() const;
};

struct CorpusResult {
  std::vector<ComplexRecord> records;
  std::vector<RejectionReport> reports;
  CurationSummary summary;
};

/// entries.json sidecar: entry_id -> resolution.
using ResolutionManifest = std::map<std::string, double>;

ResolutionManifest read_resolution_manifest(const std::string &path);

/**
 * Curates files in parallel. Output is merged in entry-id order and is the
 * same for every worker count. Per-file read/parse failures are collected in
 * the summary.
 */
CorpusResult curate_corpus(const std::vector<std::string> &paths, const FilterConfig &cfg,
                           std::size_t workers, const ResolutionManifest &manifest = {});

/// complex_id,rule,detail
std::string rejections_csv(const std::vector<RejectionReport> &reports);

}  // namespace decoyforge

#endif  // DECOYFORGE_CURATION_HPP_
