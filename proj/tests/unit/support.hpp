//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_TEST_SUPPORT_HPP_
#define DECOYFORGE_TEST_SUPPORT_HPP_

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "decoyforge/curation.hpp"
#include "decoyforge/dataset.hpp"
#include "decoyforge/structure.hpp"

namespace testing {

namespace fs = std::filesystem;

/// Removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter { 0 };
    path_ = fs::temp_directory_path()
            / ("decoyforge-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const fs::path &path() const { return path_; }
  std::string str(const std::string &child = {}) const {
    return child.empty() ? path_.string() : (path_ / child).string();
  }

 private:
  fs::path path_;
};

/// Fixed-column PDB record written independently of the library formatter.
inline std::string pdb_line(bool het, int serial, const std::string &name, const std::string &resname,
                            char chain, int seq, double x, double y, double z,
                            const std::string &element) {
  std::string padded = name.size() < 4 && element.size() == 1 ? " " + name : name;
  char buf[100];
  std::snprintf(buf, sizeof buf, "%-6s%5d %-4s %3s %c%4d    %8.3f%8.3f%8.3f%6.2f%6.2f          %2s",
                het ? "HETATM" : "ATOM", serial, padded.c_str(), resname.c_str(), chain, seq, x, y, z,
                1.0, 0.0, element.c_str());
  return buf;
}

inline decoyforge::Atom make_atom(int serial, decoyforge::Element e, const std::string &name,
                                  decoyforge::Vec3 pos, const std::string &chain, int seq,
                                  const std::string &resname, bool het) {
  decoyforge::Atom a;
  a.serial = serial;
  a.element = e;
  a.name = name;
  a.position = pos;
  a.residue = { chain, seq, ' ', resname };
  a.is_hetero = het;
  return a;
}

// A small complex: a two-atom ligand at the origin with a ring of protein
// atoms 3.5 A away. Decoy rmsd values are taken as given.
inline decoyforge::StoredComplex stored_complex(const std::string &id, const std::vector<double> &rmsds) {
  decoyforge::StoredComplex c;
  c.complex_id = id;
  c.resolution = 1.5;
  c.ligand_elements = { decoyforge::Element::C, decoyforge::Element::O };
  c.ligand_coords = { decoyforge::Vec3(0, 0, 0), decoyforge::Vec3(1.2, 0, 0) };
  c.ligand_names = { "C1", "O1" };
  c.bonds = { { 0, 1 } };
  for (int k = 0; k < 6; ++k) {
    const double t = k * 1.0471975511965976;
    c.protein_elements.push_back(k % 2 ? decoyforge::Element::N : decoyforge::Element::C);
    c.protein_coords.push_back(decoyforge::Vec3(0.6, 3.5 * std::cos(t), 3.5 * std::sin(t)));
  }
  for (std::size_t k = 0; k < rmsds.size(); ++k) {
    decoyforge::DecoyPose p;
    p.complex_id = id;
    p.pose_index = static_cast<int>(k);
    p.ligand_coords = { decoyforge::Vec3(0.1 * k, 0, 0), decoyforge::Vec3(1.2 + 0.1 * k, 0, 0) };
    p.rmsd = rmsds[k];
    c.decoys.push_back(p);
  }
  return c;
}

}  // namespace testing

#endif  // DECOYFORGE_TEST_SUPPORT_HPP_
