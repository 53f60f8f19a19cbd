//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdint>
#include <optional>
#include <string>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "decoyforge/dataset.hpp"
#include "decoyforge/error.hpp"
#include "decoyforge/graph.hpp"

namespace py = pybind11;
using namespace decoyforge;

namespace {

struct GraphArrays {
  py::array_t<double> positions;
  py::array_t<double> features;
  py::array_t<std::int64_t> edges;
  py::array_t<bool> ligand_mask;
};

// Copies: the graph is built on demand, so there is no storage to share.
GraphArrays to_arrays(const ComplexGraph &g) {
  const auto n = static_cast<py::ssize_t>(g.num_nodes());
  GraphArrays out;
  out.positions = py::array_t<double>({ n, py::ssize_t { 3 } });
  auto pos = out.positions.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i)
    for (py::ssize_t k = 0; k < 3; ++k)
      pos(i, k) = g.positions[i][k];

  const auto m = static_cast<py::ssize_t>(g.features.cols());
  out.features = py::array_t<double>({ n, m });
  auto feat = out.features.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i)
    for (py::ssize_t k = 0; k < m; ++k)
      feat(i, k) = g.features(i, k);

  const auto e = static_cast<py::ssize_t>(g.edges.size());
  out.edges = py::array_t<std::int64_t>({ e, py::ssize_t { 3 } });
  auto edges = out.edges.mutable_unchecked<2>();
  for (py::ssize_t k = 0; k < e; ++k) {
    edges(k, 0) = g.edges[k].i;
    edges(k, 1) = g.edges[k].j;
    edges(k, 2) = static_cast<std::int64_t>(g.edges[k].type);
  }

  out.ligand_mask = py::array_t<bool>(n);
  auto mask = out.ligand_mask.mutable_unchecked<1>();
  for (py::ssize_t i = 0; i < n; ++i)
    mask(i) = false;
  for (int l: g.ligand_nodes)
    mask(l) = true;
  return out;
}

SamplerConfig sampler_config(std::size_t batch_size, std::size_t decoys, std::size_t perturbed, double sigma,
                             bool allow_replacement) {
  SamplerConfig cfg;
  cfg.batch_size = batch_size;
  cfg.decoys_per_anchor = decoys;
  cfg.perturbed_per_anchor = perturbed;
  cfg.sigma = sigma;
  cfg.allow_replacement = allow_replacement;
  return cfg;
}

std::size_t member_of(const DatasetView &view, const std::string &complex_id) {
  const auto i = view.find(complex_id);
  if (!i)
    throw Error(ErrorKind::UnknownComplex, "unknown complex " + complex_id);
  return *i;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "decoyforge dataset reader and pretraining batch sampler";
  m.attr("__version__") = DECOYFORGE_VERSION;

  py::register_exception<Error>(m, "DecoyforgeError", PyExc_RuntimeError);

  py::class_<GraphArrays>(m, "GraphArrays")
      .def_readonly("positions", &GraphArrays::positions)
      .def_readonly("features", &GraphArrays::features)
      .def_readonly("edges", &GraphArrays::edges)
      .def_readonly("ligand_mask", &GraphArrays::ligand_mask);

  py::class_<DatasetView>(m, "Dataset")
      .def("__len__", &DatasetView::size)
      .def_property_readonly("d_max", &DatasetView::d_max)
      .def_property_readonly("complex_ids", &DatasetView::complex_ids)
      .def("num_decoys",
           [](const DatasetView &v, const std::string &id) { return v.at(member_of(v, id)).decoys.size(); });

  m.def(
      "open_dataset", [](const std::string &path) { return DatasetView(Dataset::open(path)); }, py::arg("path"),
      "Opens a dataset directory. Raises DecoyforgeError on a missing directory or version mismatch.");

  m.def(
      "get_graph",
      [](const DatasetView &view, const std::string &complex_id, std::optional<std::size_t> pose_index) {
        const std::size_t i = member_of(view, complex_id);
        return to_arrays(pose_index ? view.decoy_graph(i, *pose_index) : view.native_graph(i));
      },
      py::arg("dataset"), py::arg("complex_id"), py::arg("pose_index") = py::none());

  m.def(
      "plan_batch",
      [](const DatasetView &view, std::uint64_t seed, std::uint64_t step, std::size_t batch_size,
         std::size_t decoys, bool allow_replacement) {
        const BatchPlan plan =
            plan_pretrain_batch(view, sampler_config(batch_size, decoys, 0, 0.5, allow_replacement), seed, step);
        py::list out;
        for (const AnchorPlan &a: plan.anchors) {
          py::dict d;
          d["complex_id"] = a.complex_id;
          d["decoys"] = a.decoys;
          d["with_replacement"] = a.with_replacement;
          out.append(d);
        }
        return out;
      },
      py::arg("dataset"), py::arg("seed"), py::arg("step"), py::arg("batch_size") = 8, py::arg("decoys") = 10,
      py::arg("allow_replacement") = true, "Complex ids and decoy indices of one step, without building graphs.");

  m.def(
      "sample_batch",
      [](const DatasetView &view, std::uint64_t seed, std::uint64_t step, std::size_t batch_size,
         std::size_t decoys, std::size_t perturbed, double sigma, bool allow_replacement) {
        const SamplerConfig cfg = sampler_config(batch_size, decoys, perturbed, sigma, allow_replacement);
        const PretrainBatch batch = sample_pretrain_batch(view, cfg, seed, step);
        py::list out;
        for (const AnchorSample &a: batch.anchors) {
          py::dict d;
          d["complex_id"] = a.complex_id;
          d["anchor"] = to_arrays(a.anchor);
          py::list ds;
          for (const DecoySample &s: a.decoys) {
            py::dict x;
            x["pose"] = s.pose;
            x["rmsd"] = s.rmsd;
            x["is_positive"] = s.is_positive;
            x["graph"] = to_arrays(s.graph);
            ds.append(x);
          }
          d["decoys"] = ds;
          py::list ps;
          for (const PerturbedGraph &p: a.perturbed) {
            py::array_t<double> noise({ static_cast<py::ssize_t>(p.noise.size()), py::ssize_t { 3 } });
            auto nz = noise.mutable_unchecked<2>();
            for (std::size_t k = 0; k < p.noise.size(); ++k)
              for (int c = 0; c < 3; ++c)
                nz(static_cast<py::ssize_t>(k), c) = p.noise[k][c];
            py::dict x;
            x["graph"] = to_arrays(p.graph);
            x["noise"] = noise;
            x["sigma"] = p.sigma;
            ps.append(x);
          }
          d["perturbed"] = ps;
          d["with_replacement"] = a.with_replacement;
          out.append(d);
        }
        return out;
      },
      py::arg("dataset"), py::arg("seed"), py::arg("step"), py::arg("batch_size") = 8, py::arg("decoys") = 10,
      py::arg("perturbed") = 10, py::arg("sigma") = 0.5, py::arg("allow_replacement") = true,
      "One anchor, its decoys and perturbed copies per batch entry, as numpy arrays.");
}
