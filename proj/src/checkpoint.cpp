//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "decoyforge/checkpoint.hpp"

#include "decoyforge/binary_io.hpp"
#include "decoyforge/error.hpp"

namespace decoyforge {

namespace {
constexpr std::string_view kMagic = "DFCKPT01";
}

std::string checkpoint_bytes(const Encoder &model) {
  ByteWriter w;
  w.bytes(kMagic);
  w.str(encoder_config_to_json(model.config()));
  const ParameterSet &ps = model.params();
  w.u32(static_cast<std::uint32_t>(ps.names().size()));
  for (const std::string &name: ps.names()) {
    const ad::Matrix &v = ps.at(name).value();
    w.str(name);
    w.u32(static_cast<std::uint32_t>(v.rows()));
    w.u32(static_cast<std::uint32_t>(v.cols()));
    for (ad::Index i = 0; i < v.size(); ++i)
      w.f64(v.data()[i]);
  }
  return w.data();
}

Encoder checkpoint_from_bytes(std::string_view data) {
  ByteReader r(data);
  if (data.size() < kMagic.size() || r.bytes(kMagic.size()) != kMagic)
    throw Error(ErrorKind::FormatVersion, "not a decoyforge checkpoint");
  Encoder model(encoder_config_from_json(r.str()));
  ParameterSet loaded;
  const std::uint32_t count = r.u32();
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::string name = r.str();
    const std::uint32_t rows = r.u32();
    const std::uint32_t cols = r.u32();
    ad::Matrix v(rows, cols);
    for (ad::Index i = 0; i < v.size(); ++i)
      v.data()[i] = r.f64();
    loaded.add(name, std::move(v));
  }
  if (r.position() != data.size())
    throw Error(ErrorKind::Io, "trailing bytes in checkpoint");
  if (loaded.names().size() != model.params().names().size())
    throw Error(ErrorKind::FormatVersion, "checkpoint parameter set does not match the encoder");
  model.load_values(loaded);
  return model;
}

void save_checkpoint(const std::string &path, const Encoder &model) {
  write_file(path, checkpoint_bytes(model));
}

Encoder load_checkpoint(const std::string &path) { return checkpoint_from_bytes(read_file(path)); }

}  // namespace decoyforge
