//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "decoyforge/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "decoyforge/binary_io.hpp"
#include "decoyforge/checkpoint.hpp"
#include "decoyforge/curation.hpp"
#include "decoyforge/dataset.hpp"
#include "decoyforge/decoy.hpp"
#include "decoyforge/error.hpp"
#include "decoyforge/gradcheck.hpp"
#include "decoyforge/stats.hpp"
#include "decoyforge/synthetic.hpp"
#include "decoyforge/trainer.hpp"

namespace decoyforge {

namespace fs = std::filesystem;
using nlohmann::json;

std::string version_string() { return DECOYFORGE_VERSION; }

namespace {

struct Globals {
  std::uint64_t seed = 0;
  bool json_output = false;
  std::size_t workers = 1;
};

// Flags first, then the config file on top.
json layered(const std::string &flags_json, const std::string &config_path, const char *section) {
  json j = json::parse(flags_json);
  if (!config_path.empty()) {
    json file;
    try {
      file = json::parse(read_file(config_path));
    } catch (const json::exception &e) {
      throw Error(ErrorKind::InvalidConfig, config_path + ": " + e.what());
    }
    if (section) {
      if (file.contains(section))
        j.merge_patch(file[section]);
    } else {
      j.merge_patch(file);
    }
  }
  return j;
}

void write_run_json(const fs::path &path, const std::string &command, const Globals &g,
                    const std::vector<std::string> &args, json config) {
  json j;
  j["command"] = command;
  j["version"] = version_string();
  j["seed"] = g.seed;
  j["workers"] = g.workers;
  j["args"] = std::vector<std::string>(args.begin() + 1, args.end());
  j["config"] = std::move(config);
  write_file(path.string(), j.dump(2) + "\n");
}

std::vector<std::string> structure_files(const std::string &dir) {
  if (!fs::is_directory(dir))
    throw Error(ErrorKind::Io, "input directory " + dir + " does not exist");
  std::vector<std::string> out;
  for (const auto &entry: fs::directory_iterator(dir)) {
    if (!entry.is_regular_file())
      continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pdb" || ext == ".ent")
      out.push_back(entry.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void ensure_parent(const fs::path &file) {
  if (file.has_parent_path())
    fs::create_directories(file.parent_path());
}

fs::path beside(const std::string &file, const char *name) {
  const fs::path p(file);
  return p.has_parent_path() ? p.parent_path() / name : fs::path(name);
}

DatasetView open_view(const std::string &dir) {
  if (!fs::is_directory(dir))
    throw Error(ErrorKind::Io, "dataset directory " + dir + " does not exist");
  return DatasetView(Dataset::open(dir));
}

DatasetView open_nonempty(const std::string &dir) {
  DatasetView view = open_view(dir);
  if (view.empty())
    throw Error(ErrorKind::EmptyDataset, "empty dataset");
  return view;
}

template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn fn) {
  std::atomic<std::size_t> next { 0 };
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n)
        return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
      }
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, n));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back(work);
  }
  if (failure)
    std::rethrow_exception(failure);
}

json sampler_to_json(const SamplerConfig &s) {
  return { { "decoys_per_anchor", s.decoys_per_anchor },
           { "perturbed_per_anchor", s.perturbed_per_anchor },
           { "allow_replacement", s.allow_replacement } };
}

SamplerConfig sampler_from_json(const json &j) {
  SamplerConfig s;
  for (const auto &[key, value]: j.items()) {
    if (key == "decoys_per_anchor")
      s.decoys_per_anchor = value.get<std::size_t>();
    else if (key == "perturbed_per_anchor")
      s.perturbed_per_anchor = value.get<std::size_t>();
    else if (key == "allow_replacement")
      s.allow_replacement = value.get<bool>();
    else
      throw Error(ErrorKind::InvalidConfig, "unknown sampler key " + key);
  }
  return s;
}

std::string fmt(double v, const char *spec = "%.6g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void print_epoch(std::ostream &out, const char *phase, const EpochLog &e) {
  out << phase << " epoch " << e.epoch << " train_loss " << fmt(e.train_loss);
  if (e.val_loss)
    out << " val_loss " << fmt(*e.val_loss);
  out << "\n";
}

// ---------------------------------------------------------------------------
// Commands

struct SynthArgs {
  std::string out;
  std::size_t complexes = 32;
  std::string dataset;
  double intercept = 3.0;
  double slope = 0.04;
};

int cmd_synth_corpus(const SynthArgs &a, const Globals &g, std::ostream &out) {
  SyntheticOptions opt;
  opt.complexes = a.complexes;
  opt.seed = g.seed;
  const auto paths = write_entries(synthetic_corpus(opt), a.out);
  if (g.json_output)
    out << json({ { "files", paths.size() }, { "out", a.out } }).dump() << "\n";
  else
    out << "wrote " << paths.size() << " structures to " << a.out << "\n";
  return kExitOk;
}

int cmd_synth_curation(const SynthArgs &a, const Globals &g, std::ostream &out) {
  const auto paths = write_entries(curation_fixture(), a.out);
  if (g.json_output)
    out << json({ { "files", paths.size() }, { "out", a.out } }).dump() << "\n";
  else
    out << "wrote " << paths.size() << " structures to " << a.out << "\n";
  return kExitOk;
}

int cmd_synth_labels(const SynthArgs &a, const Globals &g, std::ostream &out) {
  const DatasetView view = open_nonempty(a.dataset);
  const auto labels = synthetic_labels(view, a.intercept, a.slope);
  ensure_parent(a.out);
  write_file(a.out, labels_csv(labels));
  if (g.json_output)
    out << json({ { "labels", labels.size() }, { "out", a.out } }).dump() << "\n";
  else
    out << "wrote " << labels.size() << " labels to " << a.out << "\n";
  return kExitOk;
}

struct BuildArgs {
  std::string in, out, config, manifest;
};

int cmd_build(const BuildArgs &a, const Globals &g, const std::vector<std::string> &args,
              std::ostream &out, std::ostream &err) {
  const std::vector<std::string> files = structure_files(a.in);
  FilterConfig cfg = filter_config_from_json(
      layered(filter_config_to_json(FilterConfig {}), a.config, nullptr).dump());
  ResolutionManifest manifest;
  if (!a.manifest.empty())
    manifest = read_resolution_manifest(a.manifest);

  const CorpusResult result = curate_corpus(files, cfg, g.workers, manifest);
  write_dataset(result.records, std::vector<std::vector<DecoyPose>>(result.records.size()), a.out);
  const fs::path dir(a.out);
  write_file((dir / "rejections.csv").string(), rejections_csv(result.reports));
  write_file((dir / "curation.json").string(), result.summary.to_json() + "\n");
  write_run_json(dir / "run.json", "build", g, args, json::parse(filter_config_to_json(cfg)));

  for (const std::string &e: result.summary.io_errors)
    err << "warning: " << e << "\n";
  if (g.json_output) {
    out << result.summary.to_json() << "\n";
  } else {
    out << "entries " << result.summary.entries << "\n";
    out << "retained " << result.summary.retained << "\n";
    for (RejectionRule rule: kAllRejectionRules) {
      auto it = result.summary.rejected.find(rule);
      out << "rejected." << to_string(rule) << " " << (it == result.summary.rejected.end() ? 0 : it->second)
          << "\n";
    }
  }
  return kExitOk;
}

struct DecoyArgs {
  std::string dataset, config, poses_dir;
  int poses = -1;
};

int cmd_decoys_generate(const DecoyArgs &a, const Globals &g, const std::vector<std::string> &args,
                        std::ostream &out, std::ostream &err) {
  const DatasetView view = open_view(a.dataset);
  DecoyGenConfig flags;
  flags.rng_seed = g.seed;
  if (a.poses >= 0)
    flags.poses_per_complex = a.poses;
  const DecoyGenConfig cfg =
      decoy_config_from_json(layered(decoy_config_to_json(flags), a.config, nullptr).dump());

  std::vector<StoredComplex> complexes = view.dataset()->complexes();
  std::vector<std::string> failures(complexes.size());
  std::vector<int> exhausted(complexes.size(), 0);
  parallel_for(complexes.size(), g.workers, [&](std::size_t i) {
    StoredComplex &c = complexes[i];
    try {
      DecoyGeneration gen = generate_decoys(c.to_record(), cfg);
      c.decoys = std::move(gen.poses);
      exhausted[i] = gen.exhausted;
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::NoValidPose)
        throw;
      c.decoys.clear();
      failures[i] = c.complex_id + ": " + e.what();
    }
  });

  std::size_t total = 0, dropped = 0, without = 0;
  for (std::size_t i = 0; i < complexes.size(); ++i) {
    total += complexes[i].decoys.size();
    dropped += static_cast<std::size_t>(exhausted[i]);
    if (!failures[i].empty()) {
      ++without;
      err << "warning: " << failures[i] << "\n";
    }
  }
  const DatasetIndex idx = write_dataset(std::move(complexes), a.dataset,
                                         { 64, view.dataset()->index().positive_rmsd_max });
  write_run_json(fs::path(a.dataset) / "run.decoys.json", "decoys generate", g, args,
                 json::parse(decoy_config_to_json(cfg)));

  json summary { { "complexes", idx.complexes.size() }, { "decoys", total },
                 { "exhausted_poses", dropped }, { "complexes_without_decoys", without },
                 { "d_max", idx.d_max ? json(*idx.d_max) : json(nullptr) } };
  if (g.json_output)
    out << summary.dump() << "\n";
  else
    out << "generated " << total << " decoys for " << idx.complexes.size() << " complexes\n";
  return kExitOk;
}

int cmd_decoys_ingest(const DecoyArgs &a, const Globals &g, const std::vector<std::string> &args,
                      std::ostream &out) {
  const DatasetView view = open_view(a.dataset);
  const std::vector<std::string> files = structure_files(a.poses_dir);
  std::vector<StoredComplex> complexes = view.dataset()->complexes();
  std::size_t total = 0, touched = 0;
  for (StoredComplex &c: complexes) {
    std::vector<std::string> mine;
    for (const std::string &f: files) {
      const std::string stem = fs::path(f).stem().string();
      if (stem == c.complex_id || stem.starts_with(c.complex_id + "."))
        mine.push_back(f);
    }
    if (mine.empty())
      continue;
    c.decoys = ingest_poses(c.to_record(), mine, 0);
    total += c.decoys.size();
    ++touched;
  }
  const DatasetIndex idx = write_dataset(std::move(complexes), a.dataset,
                                         { 64, view.dataset()->index().positive_rmsd_max });
  write_run_json(fs::path(a.dataset) / "run.decoys.json", "decoys ingest", g, args,
                 { { "poses", a.poses_dir } });
  if (g.json_output)
    out << json({ { "complexes", touched }, { "decoys", total } }).dump() << "\n";
  else
    out << "ingested " << total << " poses for " << touched << " complexes\n";
  (void)idx;
  return kExitOk;
}

struct StatsArgs {
  std::string dataset, out;
  StatsConfig cfg;
};

int cmd_stats(const StatsArgs &a, const Globals &g, const std::vector<std::string> &args,
              std::ostream &out) {
  const DatasetView view = open_nonempty(a.dataset);
  const DatasetStats stats = compute_stats(view, a.cfg);
  const std::string csv = stats_csv(stats);
  if (!a.out.empty()) {
    ensure_parent(a.out);
    write_file(a.out, csv);
    write_run_json(beside(a.out, "run.json"), "stats", g, args,
                   { { "atoms_bin", a.cfg.atoms_bin }, { "decoys_bin", a.cfg.decoys_bin },
                     { "rmsd_bin", a.cfg.rmsd_bin } });
  }
  out << (g.json_output ? stats_json(stats) + "\n" : csv);
  return kExitOk;
}

struct TrainArgs {
  std::string dataset, out, config, labels, init = "none", checkpoint, split = "test";
  int epochs = -1;
  double lr = -1.0;
  double train_fraction = 0.8;
  double val_fraction = 0.1;
  int hidden = -1;
  int layers = -1;
};

struct ResolvedTraining {
  EncoderConfig encoder;
  ObjectiveConfig objective;
  TrainConfig train;
  SamplerConfig sampler;

  json to_json() const {
    return { { "encoder", json::parse(encoder_config_to_json(encoder)) },
             { "objective", json::parse(objective_config_to_json(objective)) },
             { "train", json::parse(train_config_to_json(train)) },
             { "sampler", sampler_to_json(sampler) } };
  }
};

ResolvedTraining resolve_training(const TrainArgs &a, const Globals &g, bool finetuning) {
  EncoderConfig enc;
  enc.init_seed = g.seed;
  if (a.hidden > 0)
    enc.hidden_dim = a.hidden;
  if (a.layers > 0)
    enc.layers = a.layers;
  TrainConfig train;
  train.seed = g.seed;
  if (a.epochs >= 0)
    (finetuning ? train.finetune_max_epochs : train.pretrain_epochs) = a.epochs;
  if (a.lr >= 0.0)
    train.lr = a.lr;

  ResolvedTraining r;
  r.encoder = encoder_config_from_json(layered(encoder_config_to_json(enc), a.config, "encoder").dump());
  r.objective = objective_config_from_json(
      layered(objective_config_to_json(ObjectiveConfig {}), a.config, "objective").dump());
  r.train = train_config_from_json(layered(train_config_to_json(train), a.config, "train").dump());
  r.sampler = sampler_from_json(layered(sampler_to_json(SamplerConfig {}).dump(), a.config, "sampler"));
  return r;
}

int cmd_pretrain(const TrainArgs &a, const Globals &g, const std::vector<std::string> &args,
                 std::ostream &out, std::ostream &err) {
  const ResolvedTraining cfg = resolve_training(a, g, false);
  const DatasetView view = open_nonempty(a.dataset);
  ensure_parent(a.out);

  const PretrainResult result =
      pretrain(view, Encoder(cfg.encoder), cfg.objective, cfg.train, cfg.sampler,
               [&](const EpochLog &e) {
                 if (!g.json_output)
                   print_epoch(out, "pretrain", e);
               });
  save_checkpoint(a.out, result.model);
  write_file(beside(a.out, "losscurve.csv").string(), loss_curve_csv(result.curve));
  write_run_json(beside(a.out, "run.json"), "pretrain", g, args, cfg.to_json());
  if (g.json_output) {
    out << json({ { "epochs", result.curve.size() },
                  { "final_train_loss", result.curve.empty() ? json(nullptr) : json(result.curve.back().train_loss) },
                  { "diverged", result.diverged } })
               .dump()
        << "\n";
  }
  if (result.diverged) {
    err << "training diverged: " << result.divergence << "; kept the last finite checkpoint\n";
    return kExitDivergence;
  }
  return kExitOk;
}

LabeledSplits load_splits(const DatasetView &view, const TrainArgs &a, std::uint64_t seed) {
  if (!(a.train_fraction > 0.0 && a.val_fraction > 0.0 && a.train_fraction + a.val_fraction <= 1.0))
    throw Error(ErrorKind::InvalidConfig, "split fractions must be positive and sum to at most 1");
  return labeled_splits(view, read_labels(a.labels), seed, a.train_fraction, a.val_fraction);
}

int cmd_finetune(const TrainArgs &a, const Globals &g, const std::vector<std::string> &args,
                 std::ostream &out) {
  const ResolvedTraining cfg = resolve_training(a, g, true);
  const DatasetView view = open_nonempty(a.dataset);
  if (a.init != "none" && !fs::is_regular_file(a.init))
    throw Error(ErrorKind::Io, "checkpoint " + a.init + " does not exist");
  const LabeledSplits splits = load_splits(view, a, g.seed);
  ensure_parent(a.out);

  Encoder init = a.init == "none" ? Encoder(cfg.encoder) : load_checkpoint(a.init);
  const FinetuneResult result = finetune(std::move(init), splits, cfg.train, [&](const EpochLog &e) {
    if (!g.json_output)
      print_epoch(out, "finetune", e);
  });
  save_checkpoint(a.out, result.model);
  write_file(beside(a.out, "losscurve.csv").string(), loss_curve_csv(result.curve));
  json metrics = json::parse(result.test ? result.test->to_json() : result.validation.to_json());
  metrics["split"] = result.test ? "test" : "validation";
  metrics["best_epoch"] = result.best_epoch;
  metrics["epochs_run"] = result.epochs_run;
  metrics["validation"] = json::parse(result.validation.to_json());
  write_file(beside(a.out, "metrics.json").string(), metrics.dump(2) + "\n");
  json echo = cfg.to_json();
  echo["init"] = a.init;
  echo["labels"] = a.labels;
  echo["train_fraction"] = a.train_fraction;
  echo["val_fraction"] = a.val_fraction;
  write_run_json(beside(a.out, "run.json"), "finetune", g, args, echo);
  if (g.json_output)
    out << metrics.dump() << "\n";
  else
    out << "best_epoch " << result.best_epoch << " validation_rmse " << fmt(result.validation.rmse) << "\n";
  return kExitOk;
}

int cmd_eval(const TrainArgs &a, const Globals &g, const std::vector<std::string> &args,
             std::ostream &out) {
  if (!fs::is_regular_file(a.checkpoint))
    throw Error(ErrorKind::Io, "checkpoint " + a.checkpoint + " does not exist");
  const DatasetView view = open_nonempty(a.dataset);
  const Encoder model = load_checkpoint(a.checkpoint);
  const LabeledSplits splits = load_splits(view, a, g.seed);
  std::vector<LabeledComplex> chosen;
  const auto take = [&](const std::vector<LabeledComplex> &v) { chosen.insert(chosen.end(), v.begin(), v.end()); };
  if (a.split == "train" || a.split == "all")
    take(splits.train);
  if (a.split == "val" || a.split == "all")
    take(splits.validation);
  if (a.split == "test" || a.split == "all")
    take(splits.test);
  const MetricReport m = evaluate(model, chosen);
  if (!a.out.empty()) {
    ensure_parent(a.out);
    write_file(a.out, m.to_json() + "\n");
    write_run_json(beside(a.out, "run.json"), "eval", g, args,
                   { { "checkpoint", a.checkpoint }, { "labels", a.labels }, { "split", a.split },
                     { "train_fraction", a.train_fraction }, { "val_fraction", a.val_fraction } });
  }
  if (g.json_output) {
    out << json::parse(m.to_json()).dump() << "\n";
  } else {
    out << "n " << m.n << "\nrmse " << fmt(m.rmse) << "\npearson_r "
        << (m.pearson_r ? fmt(*m.pearson_r) : std::string("null")) << "\n";
  }
  return kExitOk;
}

struct GradArgs {
  std::size_t seeds = 100;
};

int cmd_gradcheck(const GradArgs &a, const Globals &g, std::ostream &out) {
  struct Worst {
    std::size_t failures = 0;
    double rel = 0.0;
  };
  std::map<std::string, Worst> per_case;
  const GradSuiteResult r = run_gradient_suite(g.seed, a.seeds, {}, [&](const GradCase &c) {
    Worst &w = per_case[c.name];
    w.rel = std::max(w.rel, c.result.max_rel_error);
    if (!c.result.ok)
      ++w.failures;
  });
  if (g.json_output) {
    json j { { "ok", r.ok }, { "seeds", a.seeds }, { "cases", json::object() } };
    for (const auto &[name, w]: per_case)
      j["cases"][name] = { { "failures", w.failures }, { "max_rel_error", w.rel } };
    out << j.dump() << "\n";
  } else {
    for (const auto &[name, w]: per_case)
      out << (w.failures ? "FAIL " : "ok   ") << name << " max_rel_error " << fmt(w.rel, "%.3g") << "\n";
    out << (r.ok ? "gradient suite passed" : "gradient suite FAILED") << " (" << r.cases.size()
        << " checks)\n";
  }
  return r.ok ? kExitOk : kExitDivergence;
}

struct GraphArgs {
  std::string dataset, id, out;
  int pose = -1;
};

int cmd_graph_export(const GraphArgs &a, std::ostream &out) {
  const DatasetView view = open_nonempty(a.dataset);
  const auto i = view.find(a.id);
  if (!i)
    throw Error(ErrorKind::UnknownComplex, "unknown complex " + a.id);
  const ComplexGraph graph = a.pose < 0 ? view.native_graph(*i)
                                        : view.decoy_graph(*i, static_cast<std::size_t>(a.pose));
  const std::string text = graph_to_json(graph);
  if (a.out.empty()) {
    out << text << "\n";
  } else {
    ensure_parent(a.out);
    write_file(a.out, text + "\n");
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app { "Decoy-augmented protein-ligand corpus builder and pretraining toolkit", "decoyforge" };
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random stream")->capture_default_str();
  app.add_flag("--json", g.json_output, "Machine-readable output");
  app.add_option("--workers", g.workers, "Worker threads for curation and decoy generation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  SynthArgs synth;
  CLI::App *synth_cmd = app.add_subcommand("synth", "Write synthetic fixtures");
  synth_cmd->require_subcommand(1);
  CLI::App *synth_corpus = synth_cmd->add_subcommand("corpus", "Synthetic complexes as PDB files");
  synth_corpus->add_option("--out", synth.out, "Output directory")->required();
  synth_corpus->add_option("--complexes", synth.complexes, "Number of complexes")->capture_default_str();
  CLI::App *synth_curation = synth_cmd->add_subcommand("curation", "Six-entry curation fixture");
  synth_curation->add_option("--out", synth.out, "Output directory")->required();
  CLI::App *synth_labels = synth_cmd->add_subcommand("labels", "Affinity labels from interactive edges");
  synth_labels->add_option("--dataset", synth.dataset, "Dataset directory")->required();
  synth_labels->add_option("--out", synth.out, "Labels CSV")->required();
  synth_labels->add_option("--intercept", synth.intercept)->capture_default_str();
  synth_labels->add_option("--slope", synth.slope)->capture_default_str();

  BuildArgs build;
  CLI::App *build_cmd = app.add_subcommand("build", "Curate structures into a dataset");
  build_cmd->add_option("--in", build.in, "Directory of .pdb/.ent files")->required();
  build_cmd->add_option("--out", build.out, "Dataset directory")->required();
  build_cmd->add_option("--config", build.config, "filters.json")->check(CLI::ExistingFile);
  build_cmd->add_option("--manifest", build.manifest, "entries.json with resolutions")->check(CLI::ExistingFile);

  DecoyArgs decoys;
  CLI::App *decoys_cmd = app.add_subcommand("decoys", "Generate or ingest decoy poses");
  decoys_cmd->require_subcommand(1);
  CLI::App *generate_cmd = decoys_cmd->add_subcommand("generate", "Seeded perturbation decoys");
  generate_cmd->add_option("--dataset", decoys.dataset, "Dataset directory")->required();
  generate_cmd->add_option("--config", decoys.config, "decoys.json")->check(CLI::ExistingFile);
  generate_cmd->add_option("--poses", decoys.poses, "Poses per complex");
  CLI::App *ingest_cmd = decoys_cmd->add_subcommand("ingest", "Read external poses");
  ingest_cmd->add_option("--dataset", decoys.dataset, "Dataset directory")->required();
  ingest_cmd->add_option("--poses", decoys.poses_dir, "Directory of <complex_id>[.*].pdb files")->required();

  StatsArgs stats;
  CLI::App *stats_cmd = app.add_subcommand("stats", "Dataset histograms as CSV");
  stats_cmd->add_option("--dataset", stats.dataset, "Dataset directory")->required();
  stats_cmd->add_option("--out", stats.out, "Also write the CSV here");
  stats_cmd->add_option("--atoms-bin", stats.cfg.atoms_bin)->check(CLI::PositiveNumber)->capture_default_str();
  stats_cmd->add_option("--decoys-bin", stats.cfg.decoys_bin)->check(CLI::PositiveNumber)->capture_default_str();
  stats_cmd->add_option("--rmsd-bin", stats.cfg.rmsd_bin)->check(CLI::PositiveNumber)->capture_default_str();

  TrainArgs train;
  CLI::App *pretrain_cmd = app.add_subcommand("pretrain", "Contrastive + denoising pretraining");
  pretrain_cmd->add_option("--dataset", train.dataset, "Dataset directory")->required();
  pretrain_cmd->add_option("--out", train.out, "Checkpoint path")->required();
  pretrain_cmd->add_option("--config", train.config, "JSON with encoder/objective/train/sampler sections")
      ->check(CLI::ExistingFile);
  pretrain_cmd->add_option("--epochs", train.epochs, "Pretraining epochs");
  pretrain_cmd->add_option("--lr", train.lr, "Learning rate");
  pretrain_cmd->add_option("--hidden", train.hidden, "Hidden width");
  pretrain_cmd->add_option("--layers", train.layers, "Message-passing layers");

  CLI::App *finetune_cmd = app.add_subcommand("finetune", "Affinity regression with a fresh head");
  finetune_cmd->add_option("--dataset", train.dataset, "Dataset directory")->required();
  finetune_cmd->add_option("--train-fraction", train.train_fraction, "Share of unsplit labels used for training")
      ->capture_default_str();
  finetune_cmd->add_option("--val-fraction", train.val_fraction, "Share of unsplit labels used for validation")
      ->capture_default_str();
  finetune_cmd->add_option("--labels", train.labels, "complex_id,affinity[,split] CSV")
      ->required()
      ->check(CLI::ExistingFile);
  finetune_cmd->add_option("--init", train.init, "Checkpoint or 'none'")->capture_default_str();
  finetune_cmd->add_option("--out", train.out, "Checkpoint path")->required();
  finetune_cmd->add_option("--config", train.config, "JSON with encoder/train sections")->check(CLI::ExistingFile);
  finetune_cmd->add_option("--epochs", train.epochs, "Maximum epochs");
  finetune_cmd->add_option("--lr", train.lr, "Learning rate");
  finetune_cmd->add_option("--hidden", train.hidden, "Hidden width (with --init none)");
  finetune_cmd->add_option("--layers", train.layers, "Message-passing layers (with --init none)");

  CLI::App *eval_cmd = app.add_subcommand("eval", "RMSE and Pearson r of a checkpoint");
  eval_cmd->add_option("--checkpoint", train.checkpoint, "Checkpoint path")->required();
  eval_cmd->add_option("--dataset", train.dataset, "Dataset directory")->required();
  eval_cmd->add_option("--train-fraction", train.train_fraction, "Share of unsplit labels used for training")
      ->capture_default_str();
  eval_cmd->add_option("--val-fraction", train.val_fraction, "Share of unsplit labels used for validation")
      ->capture_default_str();
  eval_cmd->add_option("--labels", train.labels, "Labels CSV")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--split", train.split, "train, val, test or all")
      ->check(CLI::IsMember({ "train", "val", "test", "all" }))
      ->capture_default_str();
  eval_cmd->add_option("--out", train.out, "metrics.json path");

  GradArgs grad;
  CLI::App *grad_cmd = app.add_subcommand("gradcheck", "Finite-difference gradient suite");
  grad_cmd->add_option("--seeds", grad.seeds, "Number of seeds, starting at --seed")->capture_default_str();

  GraphArgs graph;
  CLI::App *graph_cmd = app.add_subcommand("graph", "Graph utilities");
  graph_cmd->require_subcommand(1);
  CLI::App *export_cmd = graph_cmd->add_subcommand("export", "Export one complex graph as JSON");
  export_cmd->add_option("--dataset", graph.dataset, "Dataset directory")->required();
  export_cmd->add_option("--id", graph.id, "Complex id")->required();
  export_cmd->add_option("--pose", graph.pose, "Decoy pose index (native when omitted)");
  export_cmd->add_option("--out", graph.out, "Write to a file instead of stdout");

  std::vector<const char *> argv;
  for (const std::string &a: args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion &) {
    out << "decoyforge " << version_string() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*synth_corpus)
      return cmd_synth_corpus(synth, g, out);
    if (*synth_curation)
      return cmd_synth_curation(synth, g, out);
    if (*synth_labels)
      return cmd_synth_labels(synth, g, out);
    if (*build_cmd)
      return cmd_build(build, g, args, out, err);
    if (*generate_cmd)
      return cmd_decoys_generate(decoys, g, args, out, err);
    if (*ingest_cmd)
      return cmd_decoys_ingest(decoys, g, args, out);
    if (*stats_cmd)
      return cmd_stats(stats, g, args, out);
    if (*pretrain_cmd)
      return cmd_pretrain(train, g, args, out, err);
    if (*finetune_cmd)
      return cmd_finetune(train, g, args, out);
    if (*eval_cmd)
      return cmd_eval(train, g, args, out);
    if (*grad_cmd)
      return cmd_gradcheck(grad, g, out);
    if (*export_cmd)
      return cmd_graph_export(graph, out);
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    if (e.kind() == ErrorKind::InvalidConfig)
      return kExitUsage;
    if (e.kind() == ErrorKind::DivergedLoss)
      return kExitDivergence;
    return kExitData;
  } catch (const fs::filesystem_error &e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace decoyforge
