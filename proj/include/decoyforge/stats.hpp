//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_STATS_HPP_
#define DECOYFORGE_STATS_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "decoyforge/dataset.hpp"

namespace decoyforge {

struct StatsConfig {
  double atoms_bin = 50.0;
  double decoys_bin = 10.0;
  double rmsd_bin = 1.0;
};

/// Half-open bins [lo, hi) from zero up to the bin holding the maximum.
struct Histogram {
  double width = 1.0;
  std::vector<std::size_t> counts;

  double lo(std::size_t k) const { return width * static_cast<double>(k); }
  double hi(std::size_t k) const { return width * static_cast<double>(k + 1); }
  std::size_t total() const;
};

Histogram make_histogram(const std::vector<double> &values, double width);

struct DatasetStats {
  std::size_t complexes = 0;
  std::size_t decoys = 0;
  std::size_t positives = 0;
  std::optional<double> d_max;
  Histogram atoms;
  Histogram decoys_per_complex;
  Histogram rmsd;
  std::vector<double> rmsd_cdf;  // fraction of decoys with rmsd < bin hi
};

DatasetStats compute_stats(const DatasetView &view, const StatsConfig &cfg = {});

/// panel,bin_lo,bin_hi,value with panels atoms, decoys, rmsd, rmsd_cdf and
/// leading summary rows.
std::string stats_csv(const DatasetStats &stats);
std::string stats_json(const DatasetStats &stats);

}  // namespace decoyforge

#endif  // DECOYFORGE_STATS_HPP_
