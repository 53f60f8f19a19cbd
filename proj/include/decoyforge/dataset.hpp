//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_DATASET_HPP_
#define DECOYFORGE_DATASET_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "decoyforge/curation.hpp"
#include "decoyforge/decoy.hpp"
#include "decoyforge/graph.hpp"

namespace decoyforge {

inline constexpr std::uint32_t kDatasetFormatVersion = 1;

/// One complex as persisted: protein pocket chains, ligand and its decoys.
struct StoredComplex {
  std::string complex_id;
  double resolution = 0.0;
  std::vector<Element> protein_elements;
  Coords protein_coords;
  std::vector<Element> ligand_elements;
  Coords ligand_coords;
  std::vector<std::string> ligand_names;  // at most 4 characters each
  BondList bonds;
  std::vector<DecoyPose> decoys;

  std::size_t n_atoms() const { return protein_coords.size() + ligand_coords.size(); }
  std::optional<double> max_rmsd() const;

  static StoredComplex from_record(const ComplexRecord &rec, std::vector<DecoyPose> decoys = {});
  /// Rebuilds a record; protein atoms carry only element and position.
  ComplexRecord to_record() const;
};

struct IndexEntry {
  std::string complex_id;
  std::size_t n_atoms = 0;
  std::size_t n_decoys = 0;
  std::size_t shard = 0;
  std::uint64_t offset = 0;
  std::optional<double> max_rmsd;
};

struct DatasetIndex {
  std::uint32_t format_version = kDatasetFormatVersion;
  std::optional<double> d_max;  // null when the dataset has no decoys
  double positive_rmsd_max = kPositiveRmsdMax;
  std::size_t shard_count = 0;
  std::vector<IndexEntry> complexes;  // sorted by complex_id

  std::string to_json() const;
  static DatasetIndex from_json(const std::string &text);
};

struct WriteOptions {
  std::size_t complexes_per_shard = 64;
  double positive_rmsd_max = kPositiveRmsdMax;
};

/**
 * Writes shard files and index.json into out_dir (created if missing).
 * Complexes are stored in complex_id order. Throws Error{Io}.
 */
DatasetIndex write_dataset(std::vector<StoredComplex> complexes, const std::string &out_dir,
                           const WriteOptions &options = {});

DatasetIndex write_dataset(const std::vector<ComplexRecord> &records,
                           const std::vector<std::vector<DecoyPose>> &decoys,
                           const std::string &out_dir, const WriteOptions &options = {});

std::string shard_file_name(std::size_t shard);

/// Immutable, fully loaded dataset directory.
class Dataset {
 public:
  /// Throws Error{Io} or Error{FormatVersion}.
  static std::shared_ptr<const Dataset> open(const std::string &dir);

  const DatasetIndex &index() const { return index_; }
  const std::vector<StoredComplex> &complexes() const { return complexes_; }
  const std::string &directory() const { return dir_; }

 private:
  std::string dir_;
  DatasetIndex index_;
  std::vector<StoredComplex> complexes_;
};

/// A subset of a dataset; d_max always reflects the members of the view.
class DatasetView {
 public:
  DatasetView() = default;
  explicit DatasetView(std::shared_ptr<const Dataset> ds);
  DatasetView(std::shared_ptr<const Dataset> ds, std::vector<std::size_t> members);

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const StoredComplex &at(std::size_t i) const;
  std::optional<std::size_t> find(const std::string &complex_id) const;
  std::vector<std::string> complex_ids() const;
  std::optional<double> d_max() const { return d_max_; }
  double positive_rmsd_max() const;
  const std::shared_ptr<const Dataset> &dataset() const { return ds_; }

  ComplexGraph native_graph(std::size_t i, double cutoff = kGraphCutoff) const;
  /// Throws Error{PoseOutOfRange}.
  ComplexGraph decoy_graph(std::size_t i, std::size_t decoy, double cutoff = kGraphCutoff) const;

 private:
  std::shared_ptr<const Dataset> ds_;
  std::vector<std::size_t> members_;
  std::optional<double> d_max_;
};

/// Removes the listed complexes and recomputes d_max over the remainder.
DatasetView exclusion_filter(const DatasetView &view, const std::set<std::string> &exclude_ids);

/// Full scan for d_max (reference for consistency checks).
std::optional<double> scan_d_max(const DatasetView &view);

// ---------------------------------------------------------------------------
// Pretraining batches

struct SamplerConfig {
  std::size_t batch_size = 8;
  std::size_t decoys_per_anchor = 10;
  std::size_t perturbed_per_anchor = 10;
  double sigma = 0.5;  // Gaussian ligand noise for the perturbed copies
  bool allow_replacement = true;
  double cutoff = kGraphCutoff;
};

/// Which complexes and poses a step uses, before any graph is built.
struct AnchorPlan {
  std::size_t member = 0;  // index into the view
  std::string complex_id;
  std::vector<std::size_t> decoys;  // indices into StoredComplex::decoys
  bool with_replacement = false;
  std::uint64_t noise_seed = 0;
};

struct BatchPlan {
  std::uint64_t epoch = 0;
  std::uint64_t step = 0;
  std::vector<AnchorPlan> anchors;
};

std::size_t steps_per_epoch(std::size_t n_complexes, std::size_t batch_size);

/**
 * Anchors are a seeded permutation of the view per epoch, sliced into
 * batches; decoys are drawn uniformly without replacement per anchor
 * (with replacement, flagged, when fewer exist and that is allowed).
 * Deterministic in (seed, step); epoch = step / steps_per_epoch.
 *
 * Throws Error{InsufficientDecoys} or Error{EmptyDataset}.
 */
BatchPlan plan_pretrain_batch(const DatasetView &view, const SamplerConfig &cfg,
                              std::uint64_t seed, std::uint64_t step);

struct DecoySample {
  std::size_t pose = 0;
  ComplexGraph graph;
  double rmsd = 0.0;
  bool is_positive = false;
};

struct AnchorSample {
  std::string complex_id;
  ComplexGraph anchor;
  std::vector<DecoySample> decoys;
  std::vector<PerturbedGraph> perturbed;
  std::optional<double> anchor_max_rmsd;
  bool with_replacement = false;
};

struct PretrainBatch {
  std::uint64_t epoch = 0;
  std::uint64_t step = 0;
  std::vector<AnchorSample> anchors;
  std::optional<double> d_max;
};

PretrainBatch materialize_batch(const DatasetView &view, const BatchPlan &plan,
                                const SamplerConfig &cfg);

PretrainBatch sample_pretrain_batch(const DatasetView &view, const SamplerConfig &cfg,
                                    std::uint64_t seed, std::uint64_t step);

// ---------------------------------------------------------------------------
// Labeled complexes for fine-tuning

enum class Split { Unassigned, Train, Validation, Test };

struct AffinityLabel {
  std::string complex_id;
  double affinity = 0.0;
  Split split = Split::Unassigned;
};

/// CSV with header complex_id,affinity[,split]; split in {train,val,test}.
std::vector<AffinityLabel> read_labels(const std::string &path);
std::vector<AffinityLabel> parse_labels(const std::string &csv_text);
std::string labels_csv(const std::vector<AffinityLabel> &labels);

struct LabeledComplex {
  std::string complex_id;
  ComplexGraph graph;
  double affinity = 0.0;
};

struct LabeledSplits {
  std::vector<LabeledComplex> train;
  std::vector<LabeledComplex> validation;
  std::vector<LabeledComplex> test;
};

/**
 * Joins labels with native graphs. Labels without a split are assigned by a
 * seeded shuffle with the given train/validation fractions; the rest is test.
 * Throws Error{UnknownComplex} for labels whose id is not in the view.
 */
LabeledSplits labeled_splits(const DatasetView &view, const std::vector<AffinityLabel> &labels,
                             std::uint64_t seed, double train_fraction = 0.8,
                             double validation_fraction = 0.1);

}  // namespace decoyforge

#endif  // DECOYFORGE_DATASET_HPP_
