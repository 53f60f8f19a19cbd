//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "decoyforge/stats.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "decoyforge/error.hpp"

namespace decoyforge {

std::size_t Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t { 0 });
}

Histogram make_histogram(const std::vector<double> &values, double width) {
  if (!(width > 0.0))
    throw Error(ErrorKind::InvalidConfig, "histogram bin width must be positive");
  Histogram h;
  h.width = width;
  for (double v: values) {
    const auto bin = static_cast<std::size_t>(std::floor(std::max(0.0, v) / width));
    if (bin >= h.counts.size())
      h.counts.resize(bin + 1, 0);
    ++h.counts[bin];
  }
  return h;
}

DatasetStats compute_stats(const DatasetView &view, const StatsConfig &cfg) {
  DatasetStats s;
  s.complexes = view.size();
  s.d_max = view.d_max();
  std::vector<double> atoms, decoys, rmsds;
  for (std::size_t i = 0; i < view.size(); ++i) {
    const StoredComplex &c = view.at(i);
    atoms.push_back(static_cast<double>(c.n_atoms()));
    decoys.push_back(static_cast<double>(c.decoys.size()));
    for (const DecoyPose &d: c.decoys) {
      rmsds.push_back(d.rmsd);
      if (is_positive_pose(d.rmsd, view.positive_rmsd_max()))
        ++s.positives;
    }
  }
  s.decoys = rmsds.size();
  s.atoms = make_histogram(atoms, cfg.atoms_bin);
  s.decoys_per_complex = make_histogram(decoys, cfg.decoys_bin);
  s.rmsd = make_histogram(rmsds, cfg.rmsd_bin);
  std::size_t running = 0;
  for (std::size_t count: s.rmsd.counts) {
    running += count;
    s.rmsd_cdf.push_back(static_cast<double>(running) / static_cast<double>(rmsds.size()));
  }
  return s;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void histogram_rows(std::string &out, const char *panel, const Histogram &h) {
  for (std::size_t k = 0; k < h.counts.size(); ++k)
    out += std::string(panel) + "," + num(h.lo(k)) + "," + num(h.hi(k)) + ","
           + std::to_string(h.counts[k]) + "\n";
}

}  // namespace

std::string stats_csv(const DatasetStats &s) {
  std::string out = "panel,bin_lo,bin_hi,value\n";
  out += "complexes,,," + std::to_string(s.complexes) + "\n";
  out += "decoys,,," + std::to_string(s.decoys) + "\n";
  out += "positives,,," + std::to_string(s.positives) + "\n";
  out += "d_max,,," + (s.d_max ? num(*s.d_max) : std::string("null")) + "\n";
  histogram_rows(out, "atoms_per_complex", s.atoms);
  histogram_rows(out, "decoys_per_complex", s.decoys_per_complex);
  histogram_rows(out, "rmsd", s.rmsd);
  for (std::size_t k = 0; k < s.rmsd_cdf.size(); ++k)
    out += "rmsd_cdf," + num(s.rmsd.lo(k)) + "," + num(s.rmsd.hi(k)) + "," + num(s.rmsd_cdf[k]) + "\n";
  return out;
}

std::string stats_json(const DatasetStats &s) {
  nlohmann::json j;
  j["complexes"] = s.complexes;
  j["decoys"] = s.decoys;
  j["positives"] = s.positives;
  j["d_max"] = s.d_max ? nlohmann::json(*s.d_max) : nlohmann::json(nullptr);
  auto hist = [](const Histogram &h) {
    return nlohmann::json { { "bin_width", h.width }, { "counts", h.counts } };
  };
  j["atoms_per_complex"] = hist(s.atoms);
  j["decoys_per_complex"] = hist(s.decoys_per_complex);
  j["rmsd"] = hist(s.rmsd);
  j["rmsd_cdf"] = s.rmsd_cdf;
  return j.dump(2);
}

}  // namespace decoyforge
