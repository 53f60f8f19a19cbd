//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "decoyforge/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "decoyforge/binary_io.hpp"
#include "decoyforge/error.hpp"
#include "decoyforge/rng.hpp"

namespace decoyforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kShardMagic = "DFSHARD1";
constexpr std::size_t kNameWidth = 4;

void write_block(ByteWriter &w, const StoredComplex &c) {
  const auto n_protein = static_cast<std::uint32_t>(c.protein_coords.size());
  const auto n_ligand = static_cast<std::uint32_t>(c.ligand_coords.size());
  w.str(c.complex_id);
  w.f64(c.resolution);
  w.u32(n_protein);
  w.u32(n_ligand);
  w.u32(static_cast<std::uint32_t>(c.bonds.size()));
  w.u32(static_cast<std::uint32_t>(c.decoys.size()));
  for (Element e: c.protein_elements)
    w.u8(static_cast<std::uint8_t>(e));
  for (Element e: c.ligand_elements)
    w.u8(static_cast<std::uint8_t>(e));
  for (std::uint32_t k = 0; k < n_protein; ++k)
    w.u8(0);
  for (std::uint32_t k = 0; k < n_ligand; ++k)
    w.u8(1);
  for (const Vec3 &p: c.protein_coords) {
    w.f64(p.x());
    w.f64(p.y());
    w.f64(p.z());
  }
  for (const Vec3 &p: c.ligand_coords) {
    w.f64(p.x());
    w.f64(p.y());
    w.f64(p.z());
  }
  for (const std::string &name: c.ligand_names) {
    std::string padded = name.substr(0, kNameWidth);
    padded.resize(kNameWidth, ' ');
    w.bytes(padded);
  }
  for (auto [a, b]: c.bonds) {
    w.u32(static_cast<std::uint32_t>(a));
    w.u32(static_cast<std::uint32_t>(b));
  }
  for (const DecoyPose &d: c.decoys) {
    w.u32(static_cast<std::uint32_t>(d.pose_index));
    w.f64(d.rmsd);
    for (const Vec3 &p: d.ligand_coords) {
      w.f64(p.x());
      w.f64(p.y());
      w.f64(p.z());
    }
  }
}

Vec3 read_vec(ByteReader &r) {
  const double x = r.f64();
  const double y = r.f64();
  const double z = r.f64();
  return { x, y, z };
}

StoredComplex read_block(ByteReader &r) {
  StoredComplex c;
  c.complex_id = r.str();
  c.resolution = r.f64();
  const std::uint32_t n_protein = r.u32();
  const std::uint32_t n_ligand = r.u32();
  const std::uint32_t n_bonds = r.u32();
  const std::uint32_t n_decoys = r.u32();
  for (std::uint32_t k = 0; k < n_protein; ++k)
    c.protein_elements.push_back(static_cast<Element>(r.u8()));
  for (std::uint32_t k = 0; k < n_ligand; ++k)
    c.ligand_elements.push_back(static_cast<Element>(r.u8()));
  for (std::uint32_t k = 0; k < n_protein + n_ligand; ++k) {
    const std::uint8_t flag = r.u8();
    if ((flag & 1U) != (k >= n_protein ? 1U : 0U))
      throw Error(ErrorKind::Io, c.complex_id + ": inconsistent ligand flags");
  }
  for (std::uint32_t k = 0; k < n_protein; ++k)
    c.protein_coords.push_back(read_vec(r));
  for (std::uint32_t k = 0; k < n_ligand; ++k)
    c.ligand_coords.push_back(read_vec(r));
  for (std::uint32_t k = 0; k < n_ligand; ++k) {
    std::string name(r.bytes(kNameWidth));
    while (!name.empty() && name.back() == ' ')
      name.pop_back();
    c.ligand_names.push_back(std::move(name));
  }
  for (std::uint32_t k = 0; k < n_bonds; ++k) {
    const auto a = static_cast<int>(r.u32());
    const auto b = static_cast<int>(r.u32());
    if (a >= static_cast<int>(n_ligand) || b >= static_cast<int>(n_ligand) || a == b)
      throw Error(ErrorKind::Io, c.complex_id + ": bond index out of range");
    c.bonds.emplace_back(a, b);
  }
  for (std::uint32_t k = 0; k < n_decoys; ++k) {
    DecoyPose d;
    d.complex_id = c.complex_id;
    d.pose_index = static_cast<int>(r.u32());
    d.rmsd = r.f64();
    for (std::uint32_t a = 0; a < n_ligand; ++a)
      d.ligand_coords.push_back(read_vec(r));
    c.decoys.push_back(std::move(d));
  }
  return c;
}

std::optional<double> dmax_of(const std::vector<const StoredComplex *> &members) {
  std::optional<double> out;
  for (const StoredComplex *c: members) {
    if (auto m = c->max_rmsd(); m && (!out || *m > *out))
      out = m;
  }
  return out;
}

}  // namespace

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string &path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(ErrorKind::Io, "cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out)
    throw Error(ErrorKind::Io, "short write to " + path);
}

std::optional<double> StoredComplex::max_rmsd() const {
  std::optional<double> out;
  for (const DecoyPose &d: decoys) {
    if (!out || d.rmsd > *out)
      out = d.rmsd;
  }
  return out;
}

StoredComplex StoredComplex::from_record(const ComplexRecord &rec, std::vector<DecoyPose> decoys) {
  StoredComplex c;
  c.complex_id = rec.complex_id;
  c.resolution = rec.resolution;
  for (const Atom &a: rec.protein_atoms) {
    c.protein_elements.push_back(a.element);
    c.protein_coords.push_back(a.position);
  }
  for (const Atom &a: rec.ligand.atoms) {
    c.ligand_elements.push_back(a.element);
    c.ligand_coords.push_back(a.position);
    c.ligand_names.push_back(a.name);
  }
  c.bonds = rec.ligand.covalent_bonds;
  c.decoys = std::move(decoys);
  return c;
}

ComplexRecord StoredComplex::to_record() const {
  ComplexRecord rec;
  rec.complex_id = complex_id;
  rec.resolution = resolution;
  for (std::size_t k = 0; k < protein_coords.size(); ++k) {
    Atom a;
    a.serial = static_cast<int>(k + 1);
    a.element = protein_elements[k];
    a.position = protein_coords[k];
    rec.protein_atoms.push_back(std::move(a));
  }
  for (std::size_t k = 0; k < ligand_coords.size(); ++k) {
    Atom a;
    a.serial = static_cast<int>(protein_coords.size() + k + 1);
    a.element = ligand_elements[k];
    a.name = ligand_names[k];
    a.position = ligand_coords[k];
    a.is_hetero = true;
    rec.ligand.atoms.push_back(std::move(a));
  }
  rec.ligand.covalent_bonds = bonds;
  return rec;
}

std::string DatasetIndex::to_json() const {
  json j;
  j["format_version"] = format_version;
  j["d_max"] = d_max ? json(*d_max) : json(nullptr);
  j["positive_rmsd_max"] = positive_rmsd_max;
  j["prng"] = "mt19937_64 + splitmix64 seed mixing";
  j["shard_count"] = shard_count;
  auto &arr = j["complexes"] = json::array();
  for (const IndexEntry &e: complexes) {
    arr.push_back({ { "complex_id", e.complex_id },
                    { "n_atoms", e.n_atoms },
                    { "n_decoys", e.n_decoys },
                    { "shard", e.shard },
                    { "offset", e.offset },
                    { "max_rmsd", e.max_rmsd ? json(*e.max_rmsd) : json(nullptr) } });
  }
  return j.dump(2);
}

DatasetIndex DatasetIndex::from_json(const std::string &text) {
  DatasetIndex idx;
  try {
    const json j = json::parse(text);
    idx.format_version = j.at("format_version").get<std::uint32_t>();
    if (idx.format_version != kDatasetFormatVersion) {
      throw Error(ErrorKind::FormatVersion,
                  "dataset format version " + std::to_string(idx.format_version)
                      + ", expected " + std::to_string(kDatasetFormatVersion));
    }
    if (!j.at("d_max").is_null())
      idx.d_max = j.at("d_max").get<double>();
    idx.positive_rmsd_max = j.value("positive_rmsd_max", kPositiveRmsdMax);
    idx.shard_count = j.at("shard_count").get<std::size_t>();
    for (const json &e: j.at("complexes")) {
      IndexEntry entry;
      entry.complex_id = e.at("complex_id").get<std::string>();
      entry.n_atoms = e.at("n_atoms").get<std::size_t>();
      entry.n_decoys = e.at("n_decoys").get<std::size_t>();
      entry.shard = e.at("shard").get<std::size_t>();
      entry.offset = e.at("offset").get<std::uint64_t>();
      if (e.contains("max_rmsd") && !e.at("max_rmsd").is_null())
        entry.max_rmsd = e.at("max_rmsd").get<double>();
      idx.complexes.push_back(std::move(entry));
    }
  } catch (const json::exception &e) {
    throw Error(ErrorKind::Io, std::string("bad index.json: ") + e.what());
  }
  return idx;
}

std::string shard_file_name(std::size_t shard) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "shard-%05zu.bin", shard);
  return buf;
}

DatasetIndex write_dataset(std::vector<StoredComplex> complexes, const std::string &out_dir,
                           const WriteOptions &options) {
  std::sort(complexes.begin(), complexes.end(),
            [](const StoredComplex &a, const StoredComplex &b) { return a.complex_id < b.complex_id; });
  for (std::size_t k = 1; k < complexes.size(); ++k) {
    if (complexes[k].complex_id == complexes[k - 1].complex_id)
      throw Error(ErrorKind::Io, "duplicate complex id " + complexes[k].complex_id);
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw Error(ErrorKind::Io, "cannot create " + out_dir + ": " + ec.message());
  for (const auto &entry: fs::directory_iterator(out_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.starts_with("shard-") && name.ends_with(".bin"))
      fs::remove(entry.path());
  }

  DatasetIndex idx;
  idx.positive_rmsd_max = options.positive_rmsd_max;
  const std::size_t per_shard = std::max<std::size_t>(1, options.complexes_per_shard);
  idx.shard_count = (complexes.size() + per_shard - 1) / per_shard;

  for (std::size_t shard = 0; shard < idx.shard_count; ++shard) {
    ByteWriter w;
    w.bytes(kShardMagic);
    w.u32(kDatasetFormatVersion);
    const std::size_t first = shard * per_shard;
    const std::size_t last = std::min(complexes.size(), first + per_shard);
    w.u32(static_cast<std::uint32_t>(last - first));
    for (std::size_t k = first; k < last; ++k) {
      const StoredComplex &c = complexes[k];
      IndexEntry entry { c.complex_id, c.n_atoms(), c.decoys.size(), shard, w.size(), c.max_rmsd() };
      if (entry.max_rmsd && (!idx.d_max || *entry.max_rmsd > *idx.d_max))
        idx.d_max = entry.max_rmsd;
      idx.complexes.push_back(std::move(entry));
      write_block(w, c);
    }
    write_file((fs::path(out_dir) / shard_file_name(shard)).string(), w.data());
  }
  write_file((fs::path(out_dir) / "index.json").string(), idx.to_json() + "\n");
  return idx;
}

DatasetIndex write_dataset(const std::vector<ComplexRecord> &records,
                           const std::vector<std::vector<DecoyPose>> &decoys,
                           const std::string &out_dir, const WriteOptions &options) {
  std::vector<StoredComplex> complexes;
  complexes.reserve(records.size());
  for (std::size_t k = 0; k < records.size(); ++k)
    complexes.push_back(StoredComplex::from_record(records[k], k < decoys.size() ? decoys[k]
                                                                                 : std::vector<DecoyPose> {}));
  return write_dataset(std::move(complexes), out_dir, options);
}

std::shared_ptr<const Dataset> Dataset::open(const std::string &dir) {
  const fs::path root(dir);
  if (!fs::is_directory(root))
    throw Error(ErrorKind::Io, "not a dataset directory: " + dir);
  auto ds = std::make_shared<Dataset>();
  ds->dir_ = dir;
  ds->index_ = DatasetIndex::from_json(read_file((root / "index.json").string()));

  std::vector<std::string> shards(ds->index_.shard_count);
  for (std::size_t s = 0; s < shards.size(); ++s) {
    shards[s] = read_file((root / shard_file_name(s)).string());
    ByteReader header(shards[s]);
    if (header.bytes(kShardMagic.size()) != kShardMagic)
      throw Error(ErrorKind::Io, shard_file_name(s) + ": bad magic");
    if (const std::uint32_t v = header.u32(); v != kDatasetFormatVersion)
      throw Error(ErrorKind::FormatVersion, shard_file_name(s) + ": version " + std::to_string(v));
  }
  for (const IndexEntry &e: ds->index_.complexes) {
    if (e.shard >= shards.size())
      throw Error(ErrorKind::Io, e.complex_id + ": shard out of range");
    ByteReader r(shards[e.shard], e.offset);
    StoredComplex c = read_block(r);
    if (c.complex_id != e.complex_id)
      throw Error(ErrorKind::Io, "index entry " + e.complex_id + " points at " + c.complex_id);
    ds->complexes_.push_back(std::move(c));
  }
  return ds;
}

DatasetView::DatasetView(std::shared_ptr<const Dataset> ds)
    : DatasetView(ds, [&] {
        std::vector<std::size_t> all(ds->complexes().size());
        std::iota(all.begin(), all.end(), std::size_t { 0 });
        return all;
      }()) { }

DatasetView::DatasetView(std::shared_ptr<const Dataset> ds, std::vector<std::size_t> members)
    : ds_(std::move(ds)), members_(std::move(members)) {
  std::vector<const StoredComplex *> ptrs;
  for (std::size_t m: members_)
    ptrs.push_back(&ds_->complexes().at(m));
  d_max_ = dmax_of(ptrs);
}

const StoredComplex &DatasetView::at(std::size_t i) const {
  if (i >= members_.size())
    throw Error(ErrorKind::IndexOutOfRange, "view index " + std::to_string(i));
  return ds_->complexes()[members_[i]];
}

std::optional<std::size_t> DatasetView::find(const std::string &complex_id) const {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (at(i).complex_id == complex_id)
      return i;
  }
  return std::nullopt;
}

std::vector<std::string> DatasetView::complex_ids() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < members_.size(); ++i)
    out.push_back(at(i).complex_id);
  return out;
}

double DatasetView::positive_rmsd_max() const {
  return ds_ ? ds_->index().positive_rmsd_max : kPositiveRmsdMax;
}

ComplexGraph DatasetView::native_graph(std::size_t i, double cutoff) const {
  const StoredComplex &c = at(i);
  return build_graph(c.protein_elements, c.protein_coords, c.ligand_elements, c.ligand_coords,
                     c.bonds, cutoff);
}

ComplexGraph DatasetView::decoy_graph(std::size_t i, std::size_t decoy, double cutoff) const {
  const StoredComplex &c = at(i);
  if (decoy >= c.decoys.size()) {
    throw Error(ErrorKind::PoseOutOfRange, c.complex_id + ": pose " + std::to_string(decoy)
                                               + " of " + std::to_string(c.decoys.size()));
  }
  return build_graph(c.protein_elements, c.protein_coords, c.ligand_elements,
                     c.decoys[decoy].ligand_coords, c.bonds, cutoff);
}

DatasetView exclusion_filter(const DatasetView &view, const std::set<std::string> &exclude_ids) {
  if (!view.dataset())
    return view;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < view.size(); ++i) {
    const StoredComplex &c = view.at(i);
    if (!exclude_ids.contains(c.complex_id)) {
      // Recover the index in the underlying dataset.
      const auto &all = view.dataset()->complexes();
      keep.push_back(static_cast<std::size_t>(&c - all.data()));
    }
  }
  return DatasetView(view.dataset(), std::move(keep));
}

std::optional<double> scan_d_max(const DatasetView &view) {
  std::optional<double> out;
  for (std::size_t i = 0; i < view.size(); ++i) {
    for (const DecoyPose &d: view.at(i).decoys) {
      if (!out || d.rmsd > *out)
        out = d.rmsd;
    }
  }
  return out;
}

std::size_t steps_per_epoch(std::size_t n_complexes, std::size_t batch_size) {
  if (batch_size == 0)
    throw Error(ErrorKind::InvalidConfig, "batch_size must be positive");
  return (n_complexes + batch_size - 1) / batch_size;
}

BatchPlan plan_pretrain_batch(const DatasetView &view, const SamplerConfig &cfg,
                              std::uint64_t seed, std::uint64_t step) {
  if (view.empty())
    throw Error(ErrorKind::EmptyDataset, "empty dataset");
  const std::size_t n = view.size();
  const std::size_t spe = steps_per_epoch(n, cfg.batch_size);

  BatchPlan plan;
  plan.step = step;
  plan.epoch = step / spe;
  const std::size_t slot = step % spe;

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t { 0 });
  Rng perm_rng(mix_seed({ seed, plan.epoch, 0x7065726dULL }));
  for (std::size_t i = n; i > 1; --i)
    std::swap(perm[i - 1], perm[perm_rng.below(i)]);

  const std::size_t first = slot * cfg.batch_size;
  const std::size_t last = std::min(n, first + cfg.batch_size);
  for (std::size_t a = first; a < last; ++a) {
    AnchorPlan ap;
    ap.member = perm[a];
    const StoredComplex &c = view.at(ap.member);
    ap.complex_id = c.complex_id;

    Rng rng(mix_seed({ seed, step, a - first, 0x6465636fULL }));
    const std::size_t available = c.decoys.size();
    const std::size_t want = cfg.decoys_per_anchor;
    if (available >= want) {
      std::vector<std::size_t> pool(available);
      std::iota(pool.begin(), pool.end(), std::size_t { 0 });
      for (std::size_t k = 0; k < want; ++k)
        std::swap(pool[k], pool[k + rng.below(available - k)]);
      ap.decoys.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(want));
    } else if (cfg.allow_replacement && available > 0) {
      ap.with_replacement = true;
      for (std::size_t k = 0; k < want; ++k)
        ap.decoys.push_back(rng.below(available));
    } else {
      throw Error(ErrorKind::InsufficientDecoys, c.complex_id + " has " + std::to_string(available)
                                                     + " decoys, " + std::to_string(want)
                                                     + " required");
    }
    ap.noise_seed = rng.next_u64();
    plan.anchors.push_back(std::move(ap));
  }
  return plan;
}

PretrainBatch materialize_batch(const DatasetView &view, const BatchPlan &plan,
                                const SamplerConfig &cfg) {
  PretrainBatch batch;
  batch.epoch = plan.epoch;
  batch.step = plan.step;
  batch.d_max = view.d_max();
  const double threshold = view.positive_rmsd_max();

  for (const AnchorPlan &ap: plan.anchors) {
    const StoredComplex &c = view.at(ap.member);
    AnchorSample s;
    s.complex_id = c.complex_id;
    s.anchor = view.native_graph(ap.member, cfg.cutoff);
    s.anchor_max_rmsd = c.max_rmsd();
    s.with_replacement = ap.with_replacement;
    for (std::size_t d: ap.decoys) {
      DecoySample ds;
      ds.pose = d;
      ds.graph = view.decoy_graph(ap.member, d, cfg.cutoff);
      ds.rmsd = c.decoys[d].rmsd;
      ds.is_positive = is_positive_pose(ds.rmsd, threshold);
      s.decoys.push_back(std::move(ds));
    }
    Rng noise(ap.noise_seed);
    for (std::size_t k = 0; k < cfg.perturbed_per_anchor; ++k)
      s.perturbed.push_back(perturb_ligand(s.anchor, cfg.sigma, noise));
    batch.anchors.push_back(std::move(s));
  }
  return batch;
}

PretrainBatch sample_pretrain_batch(const DatasetView &view, const SamplerConfig &cfg,
                                    std::uint64_t seed, std::uint64_t step) {
  return materialize_batch(view, plan_pretrain_batch(view, cfg, seed, step), cfg);
}

std::vector<AffinityLabel> parse_labels(const std::string &csv_text) {
  std::vector<AffinityLabel> out;
  std::istringstream in(csv_text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string col; std::getline(ls, col, ',');)
      cols.push_back(col);
    if (line_no == 1 && !cols.empty() && cols[0] == "complex_id")
      continue;
    if (cols.size() < 2)
      throw Error(ErrorKind::Io, "labels line " + std::to_string(line_no) + ": expected id,affinity");
    AffinityLabel label;
    label.complex_id = cols[0];
    try {
      std::size_t used = 0;
      label.affinity = std::stod(cols[1], &used);
      if (used != cols[1].size())
        throw std::invalid_argument("trailing characters");
    } catch (const std::exception &) {
      throw Error(ErrorKind::Io, "labels line " + std::to_string(line_no) + ": bad affinity");
    }
    if (!std::isfinite(label.affinity))
      throw Error(ErrorKind::Io, "labels line " + std::to_string(line_no) + ": non-finite affinity");
    if (cols.size() >= 3 && !cols[2].empty()) {
      if (cols[2] == "train")
        label.split = Split::Train;
      else if (cols[2] == "val")
        label.split = Split::Validation;
      else if (cols[2] == "test")
        label.split = Split::Test;
      else
        throw Error(ErrorKind::Io, "labels line " + std::to_string(line_no) + ": bad split " + cols[2]);
    }
    out.push_back(std::move(label));
  }
  return out;
}

std::vector<AffinityLabel> read_labels(const std::string &path) { return parse_labels(read_file(path)); }

std::string labels_csv(const std::vector<AffinityLabel> &labels) {
  std::string out = "complex_id,affinity,split\n";
  for (const AffinityLabel &l: labels) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", l.affinity);
    const char *split = l.split == Split::Train        ? "train"
                        : l.split == Split::Validation ? "val"
                        : l.split == Split::Test       ? "test"
                                                       : "";
    out += l.complex_id + "," + buf + "," + split + "\n";
  }
  return out;
}

LabeledSplits labeled_splits(const DatasetView &view, const std::vector<AffinityLabel> &labels,
                             std::uint64_t seed, double train_fraction, double validation_fraction) {
  LabeledSplits out;
  std::vector<const AffinityLabel *> unassigned;
  auto make = [&](const AffinityLabel &l) {
    const auto member = view.find(l.complex_id);
    if (!member)
      throw Error(ErrorKind::UnknownComplex, "label for unknown complex " + l.complex_id);
    return LabeledComplex { l.complex_id, view.native_graph(*member), l.affinity };
  };

  for (const AffinityLabel &l: labels) {
    switch (l.split) {
    case Split::Train:
      out.train.push_back(make(l));
      break;
    case Split::Validation:
      out.validation.push_back(make(l));
      break;
    case Split::Test:
      out.test.push_back(make(l));
      break;
    case Split::Unassigned:
      unassigned.push_back(&l);
      break;
    }
  }

  Rng rng(mix_seed({ seed, 0x73706c74ULL }));
  for (std::size_t i = unassigned.size(); i > 1; --i)
    std::swap(unassigned[i - 1], unassigned[rng.below(i)]);
  const auto n = static_cast<double>(unassigned.size());
  const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * n));
  const auto n_val = static_cast<std::size_t>(std::floor(validation_fraction * n));
  for (std::size_t k = 0; k < unassigned.size(); ++k) {
    if (k < n_train)
      out.train.push_back(make(*unassigned[k]));
    else if (k < n_train + n_val)
      out.validation.push_back(make(*unassigned[k]));
    else
      out.test.push_back(make(*unassigned[k]));
  }
  return out;
}

}  // namespace decoyforge
