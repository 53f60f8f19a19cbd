//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "decoyforge/curation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "decoyforge/error.hpp"

namespace decoyforge {

using nlohmann::json;

namespace {

std::string format_double(double v, const char *fmt = "%.3f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::vector<const Atom *> heavy_atoms(const LigandCandidate &ligand) {
  std::vector<const Atom *> out;
  for (const Atom &a: ligand.atoms) {
    if (!is_hydrogen(a.element))
      out.push_back(&a);
  }
  if (out.empty()) {
    for (const Atom &a: ligand.atoms)
      out.push_back(&a);
  }
  return out;
}

std::optional<RejectionReport> ligand_filters(const std::string &complex_id,
                                              const LigandCandidate &ligand,
                                              const FilterConfig &cfg) {
  const auto heavy = heavy_atoms(ligand);
  if (heavy.size() <= 1) {
    return RejectionReport { complex_id, RejectionRule::MonoatomicIon,
                             "single heavy atom group " + ligand.residue.name };
  }
  if (cfg.excluded_residues.contains(ligand.residue.name)) {
    return RejectionReport { complex_id, RejectionRule::ExcludedResidue,
                             "residue " + ligand.residue.name + " is an excluded additive" };
  }
  for (const Atom &a: ligand.atoms) {
    if (!cfg.allowed_elements.contains(a.element)) {
      return RejectionReport { complex_id, RejectionRule::Element,
                               "element " + std::string(element_symbol(a.element)) + " on atom "
                                   + a.name };
    }
  }
  for (const Atom &a: ligand.atoms) {
    if (is_metal(a.element)) {
      return RejectionReport { complex_id, RejectionRule::MetalCluster,
                               "metal " + std::string(element_symbol(a.element)) + " on atom "
                                   + a.name };
    }
  }
  const double mw = molecular_weight(ligand);
  if (!(mw > cfg.mw_low && mw < cfg.mw_high)) {
    return RejectionReport { complex_id, RejectionRule::MolecularWeight,
                             "molecular weight " + format_double(mw) + " Da" };
  }
  return std::nullopt;
}

}  // namespace

void FilterConfig::validate() const {
  if (!(mw_low < mw_high))
    throw Error(ErrorKind::InvalidConfig, "mw_range low must be below high");
  if (!(pocket_radius > 0.0))
    throw Error(ErrorKind::InvalidConfig, "pocket_radius must be positive");
  if (!(max_resolution > 0.0))
    throw Error(ErrorKind::InvalidConfig, "max_resolution must be positive");
}

FilterConfig filter_config_from_json(std::string_view json_text) {
  FilterConfig cfg;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception &e) {
    throw Error(ErrorKind::InvalidConfig, std::string("filters: ") + e.what());
  }
  try {
    for (const auto &[key, value]: j.items()) {
      if (key == "max_resolution") {
        cfg.max_resolution = value.get<double>();
      } else if (key == "mw_range") {
        auto range = value.get<std::vector<double>>();
        if (range.size() != 2)
          throw Error(ErrorKind::InvalidConfig, "mw_range needs two values");
        cfg.mw_low = range[0];
        cfg.mw_high = range[1];
      } else if (key == "allowed_elements") {
        cfg.allowed_elements.clear();
        for (const auto &sym: value.get<std::vector<std::string>>()) {
          const Element e = element_from_symbol(sym);
          if (e == Element::Unknown)
            throw Error(ErrorKind::InvalidConfig, "unknown element symbol " + sym);
          cfg.allowed_elements.insert(e);
        }
      } else if (key == "excluded_residues") {
        auto names = value.get<std::vector<std::string>>();
        cfg.excluded_residues = { names.begin(), names.end() };
      } else if (key == "pocket_radius") {
        cfg.pocket_radius = value.get<double>();
      } else {
        throw Error(ErrorKind::InvalidConfig, "unknown filter key " + key);
      }
    }
  } catch (const json::exception &e) {
    throw Error(ErrorKind::InvalidConfig, std::string("filters: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string filter_config_to_json(const FilterConfig &cfg) {
  json j;
  j["max_resolution"] = cfg.max_resolution;
  j["mw_range"] = { cfg.mw_low, cfg.mw_high };
  std::vector<std::string> elements;
  for (Element e: cfg.allowed_elements)
    elements.emplace_back(element_symbol(e));
  j["allowed_elements"] = elements;
  j["excluded_residues"] = cfg.excluded_residues;
  j["pocket_radius"] = cfg.pocket_radius;
  return j.dump(2);
}

std::string_view to_string(RejectionRule rule) noexcept {
  switch (rule) {
  case RejectionRule::Resolution:
    return "Resolution";
  case RejectionRule::MonoatomicIon:
    return "MonoatomicIon";
  case RejectionRule::ExcludedResidue:
    return "ExcludedResidue";
  case RejectionRule::Element:
    return "Element";
  case RejectionRule::MetalCluster:
    return "MetalCluster";
  case RejectionRule::MolecularWeight:
    return "MolecularWeight";
  case RejectionRule::NoPocketChain:
    return "NoPocketChain";
  }
  return "Unknown";
}

double molecular_weight(const LigandCandidate &ligand) {
  double total = 0.0;
  for (const Atom &a: ligand.atoms) {
    const auto mass = standard_atomic_mass(a.element);
    if (!mass)
      throw Error(ErrorKind::UnknownElement, "atom " + a.name + " has no recognized element");
    total += *mass;
  }
  return total;
}

CurationOutcome curate_entry(const Structure &s, const FilterConfig &cfg, const BondRule &bonds) {
  CurationOutcome out;

  if (!s.resolution || *s.resolution > cfg.max_resolution) {
    out.reports.push_back(
        { s.entry_id, RejectionRule::Resolution,
          s.resolution ? "resolution " + format_double(*s.resolution, "%.2f") + " A"
                       : std::string("resolution unavailable") });
    return out;
  }

  const double r2 = cfg.pocket_radius * cfg.pocket_radius;
  for (LigandCandidate &ligand: extract_ligands(s, bonds)) {
    const std::string complex_id = s.entry_id + "_" + ligand.residue.label();

    if (auto report = ligand_filters(complex_id, ligand, cfg)) {
      out.reports.push_back(std::move(*report));
      continue;
    }

    std::set<std::string> pocket_chains;
    const auto heavy = heavy_atoms(ligand);
    for (const Atom &a: s.atoms) {
      if (a.is_hetero || pocket_chains.contains(a.residue.chain))
        continue;
      for (const Atom *l: heavy) {
        if ((a.position - l->position).squaredNorm() <= r2) {
          pocket_chains.insert(a.residue.chain);
          break;
        }
      }
    }
    if (pocket_chains.empty()) {
      out.reports.push_back({ complex_id, RejectionRule::NoPocketChain,
                              "no protein chain within " + format_double(cfg.pocket_radius, "%.2f")
                                  + " A of the ligand" });
      continue;
    }

    ComplexRecord rec;
    rec.complex_id = complex_id;
    rec.resolution = *s.resolution;
    for (const Atom &a: s.atoms) {
      if (!a.is_hetero && pocket_chains.contains(a.residue.chain))
        rec.protein_atoms.push_back(a);
    }
    rec.ligand = std::move(ligand);
    out.records.push_back(std::move(rec));
  }
  return out;
}

std::string CurationSummary::to_json() const {
  json j;
  j["entries"] = entries;
  j["retained"] = retained;
  json rej = json::object();
  for (RejectionRule rule: kAllRejectionRules) {
    auto it = rejected.find(rule);
    rej[std::string(to_string(rule))] = it == rejected.end() ? 0 : it->second;
  }
  j["rejected"] = rej;
  j["io_errors"] = io_errors;
  return j.dump(2);
}

ResolutionManifest read_resolution_manifest(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::Io, "cannot open manifest " + path);
  ResolutionManifest out;
  try {
    const json j = json::parse(in);
    for (const auto &[id, entry]: j.items())
      out[id] = entry.at("resolution").get<double>();
  } catch (const json::exception &e) {
    throw Error(ErrorKind::Io, "bad manifest " + path + ": " + e.what());
  }
  return out;
}

CorpusResult curate_corpus(const std::vector<std::string> &paths, const FilterConfig &cfg,
                           std::size_t workers, const ResolutionManifest &manifest) {
  cfg.validate();

  struct Slot {
    std::string entry_id;
    CurationOutcome outcome;
    std::optional<std::string> error;
  };
  std::vector<Slot> slots(paths.size());

  std::atomic<std::size_t> next { 0 };
  auto work = [&] {
    for (std::size_t i = next++; i < paths.size(); i = next++) {
      Slot &slot = slots[i];
      try {
        Structure s = read_structure_file(paths[i]);
        slot.entry_id = s.entry_id;
        if (!s.resolution) {
          if (auto it = manifest.find(s.entry_id); it != manifest.end())
            s.resolution = it->second;
        }
        slot.outcome = curate_entry(s, cfg);
      } catch (const Error &e) {
        slot.entry_id = paths[i];
        slot.error = paths[i] + ": " + e.what();
      }
    }
  };

  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, paths.size()));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back(work);
  }

  std::vector<std::size_t> order(paths.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(slots[a].entry_id, paths[a]) < std::tie(slots[b].entry_id, paths[b]);
  });

  CorpusResult result;
  result.summary.entries = paths.size();
  for (std::size_t i: order) {
    Slot &slot = slots[i];
    if (slot.error) {
      result.summary.io_errors.push_back(*slot.error);
      continue;
    }
    for (auto &r: slot.outcome.reports) {
      ++result.summary.rejected[r.rule];
      result.reports.push_back(std::move(r));
    }
    for (auto &rec: slot.outcome.records)
      result.records.push_back(std::move(rec));
  }
  result.summary.retained = result.records.size();
  return result;
}

std::string rejections_csv(const std::vector<RejectionReport> &reports) {
  std::string out = "complex_id,rule,detail\n";
  for (const auto &r: reports) {
    std::string detail = r.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    out += r.complex_id + "," + std::string(to_string(r.rule)) + "," + detail + "\n";
  }
  return out;
}

}  // namespace decoyforge
