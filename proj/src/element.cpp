//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "decoyforge/element.hpp"

#include <array>
#include <cctype>
#include <string>

#include "decoyforge/error.hpp"

namespace decoyforge {

namespace {

struct ElementInfo {
  Element element;
  std::string_view symbol;
  double mass;
  double covalent_radius;
  bool metal;
};

// clang-format off
constexpr std::array kElements {
  ElementInfo { Element::H,  "H",    1.008,  0.31, false },
  ElementInfo { Element::He, "He",   4.0026, 0.28, false },
  ElementInfo { Element::Li, "Li",   6.94,   1.28, true  },
  ElementInfo { Element::Be, "Be",   9.0122, 0.96, true  },
  ElementInfo { Element::B,  "B",   10.81,   0.84, false },
  ElementInfo { Element::C,  "C",   12.011,  0.76, false },
  ElementInfo { Element::N,  "N",   14.007,  0.71, false },
  ElementInfo { Element::O,  "O",   15.999,  0.66, false },
  ElementInfo { Element::F,  "F",   18.998,  0.57, false },
  ElementInfo { Element::Ne, "Ne",  20.180,  0.58, false },
  ElementInfo { Element::Na, "Na",  22.990,  1.66, true  },
  ElementInfo { Element::Mg, "Mg",  24.305,  1.41, true  },
  ElementInfo { Element::Al, "Al",  26.982,  1.21, true  },
  ElementInfo { Element::Si, "Si",  28.085,  1.11, false },
  ElementInfo { Element::P,  "P",   30.974,  1.07, false },
  ElementInfo { Element::S,  "S",   32.06,   1.05, false },
  ElementInfo { Element::Cl, "Cl",  35.45,   1.02, false },
  ElementInfo { Element::Ar, "Ar",  39.948,  1.06, false },
  ElementInfo { Element::K,  "K",   39.098,  2.03, true  },
  ElementInfo { Element::Ca, "Ca",  40.078,  1.76, true  },
  ElementInfo { Element::V,  "V",   50.942,  1.53, true  },
  ElementInfo { Element::Cr, "Cr",  51.996,  1.39, true  },
  ElementInfo { Element::Mn, "Mn",  54.938,  1.39, true  },
  ElementInfo { Element::Fe, "Fe",  55.845,  1.32, true  },
  ElementInfo { Element::Co, "Co",  58.933,  1.26, true  },
  ElementInfo { Element::Ni, "Ni",  58.693,  1.24, true  },
  ElementInfo { Element::Cu, "Cu",  63.546,  1.32, true  },
  ElementInfo { Element::Zn, "Zn",  65.38,   1.22, true  },
  ElementInfo { Element::Ga, "Ga",  69.723,  1.22, true  },
  ElementInfo { Element::As, "As",  74.922,  1.19, false },
  ElementInfo { Element::Se, "Se",  78.971,  1.20, false },
  ElementInfo { Element::Br, "Br",  79.904,  1.20, false },
  ElementInfo { Element::Rb, "Rb",  85.468,  2.20, true  },
  ElementInfo { Element::Sr, "Sr",  87.62,   1.95, true  },
  ElementInfo { Element::Mo, "Mo",  95.95,   1.54, true  },
  ElementInfo { Element::Ru, "Ru", 101.07,   1.46, true  },
  ElementInfo { Element::Rh, "Rh", 102.91,   1.42, true  },
  ElementInfo { Element::Pd, "Pd", 106.42,   1.39, true  },
  ElementInfo { Element::Ag, "Ag", 107.87,   1.45, true  },
  ElementInfo { Element::Cd, "Cd", 112.41,   1.44, true  },
  ElementInfo { Element::Sn, "Sn", 118.71,   1.39, true  },
  ElementInfo { Element::Sb, "Sb", 121.76,   1.39, false },
  ElementInfo { Element::Te, "Te", 127.60,   1.38, false },
  ElementInfo { Element::I,  "I",  126.90,   1.39, false },
  ElementInfo { Element::Xe, "Xe", 131.29,   1.40, false },
  ElementInfo { Element::Cs, "Cs", 132.91,   2.44, true  },
  ElementInfo { Element::Ba, "Ba", 137.33,   2.15, true  },
  ElementInfo { Element::W,  "W",  183.84,   1.62, true  },
  ElementInfo { Element::Re, "Re", 186.21,   1.51, true  },
  ElementInfo { Element::Os, "Os", 190.23,   1.44, true  },
  ElementInfo { Element::Ir, "Ir", 192.22,   1.41, true  },
  ElementInfo { Element::Pt, "Pt", 195.08,   1.36, true  },
  ElementInfo { Element::Au, "Au", 196.97,   1.36, true  },
  ElementInfo { Element::Hg, "Hg", 200.59,   1.32, true  },
  ElementInfo { Element::Pb, "Pb", 207.2,    1.46, true  },
};
// clang-format on

const ElementInfo *find_info(Element e) noexcept {
  for (const auto &info: kElements) {
    if (info.element == e)
      return &info;
  }
  return nullptr;
}

}  // namespace

Element element_from_symbol(std::string_view symbol) noexcept {
  while (!symbol.empty() && std::isspace(static_cast<unsigned char>(symbol.front())))
    symbol.remove_prefix(1);
  while (!symbol.empty() && std::isspace(static_cast<unsigned char>(symbol.back())))
    symbol.remove_suffix(1);
  if (symbol.empty() || symbol.size() > 2)
    return Element::Unknown;

  std::string canon;
  canon.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(symbol[0]))));
  if (symbol.size() == 2)
    canon.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(symbol[1]))));

  for (const auto &info: kElements) {
    if (info.symbol == canon)
      return info.element;
  }
  return Element::Unknown;
}

std::string_view element_symbol(Element e) noexcept {
  const ElementInfo *info = find_info(e);
  return info != nullptr ? info->symbol : std::string_view("X");
}

bool is_recognized(Element e) noexcept { return find_info(e) != nullptr; }

bool is_metal(Element e) noexcept {
  const ElementInfo *info = find_info(e);
  return info != nullptr && info->metal;
}

bool is_hydrogen(Element e) noexcept { return e == Element::H; }

std::optional<double> standard_atomic_mass(Element e) noexcept {
  const ElementInfo *info = find_info(e);
  if (info == nullptr)
    return std::nullopt;
  return info->mass;
}

std::optional<double> covalent_radius(Element e) noexcept {
  const ElementInfo *info = find_info(e);
  if (info == nullptr)
    return std::nullopt;
  return info->covalent_radius;
}

int element_vocab_index(Element e) noexcept {
  switch (e) {
  case Element::H:
    return 0;
  case Element::C:
    return 1;
  case Element::N:
    return 2;
  case Element::O:
    return 3;
  case Element::F:
    return 4;
  case Element::P:
    return 5;
  case Element::S:
    return 6;
  case Element::Cl:
    return 7;
  case Element::Br:
    return 8;
  case Element::I:
    return 9;
  default:
    return 10;
  }
}

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
  case ErrorKind::MalformedRecord:
    return "MalformedRecord";
  case ErrorKind::EmptyStructure:
    return "EmptyStructure";
  case ErrorKind::UnknownElement:
    return "UnknownElement";
  case ErrorKind::LengthMismatch:
    return "LengthMismatch";
  case ErrorKind::NoValidPose:
    return "NoValidPose";
  case ErrorKind::AtomNameMismatch:
    return "AtomNameMismatch";
  case ErrorKind::AmbiguousAtomNames:
    return "AmbiguousAtomNames";
  case ErrorKind::EmptyPocket:
    return "EmptyPocket";
  case ErrorKind::Io:
    return "IoError";
  case ErrorKind::FormatVersion:
    return "FormatVersion";
  case ErrorKind::InsufficientDecoys:
    return "InsufficientDecoys";
  case ErrorKind::UnknownComplex:
    return "UnknownComplex";
  case ErrorKind::PoseOutOfRange:
    return "PoseOutOfRange";
  case ErrorKind::EmptyDataset:
    return "EmptyDataset";
  case ErrorKind::ShapeMismatch:
    return "ShapeMismatch";
  case ErrorKind::IndexOutOfRange:
    return "IndexOutOfRange";
  case ErrorKind::NotAScalar:
    return "NotAScalar";
  case ErrorKind::GraphFreed:
    return "GraphFreed";
  case ErrorKind::NonFiniteActivation:
    return "NonFiniteActivation";
  case ErrorKind::ZeroVector:
    return "ZeroVector";
  case ErrorKind::NoNegatives:
    return "NoNegatives";
  case ErrorKind::NoPositivePairsInBatch:
    return "NoPositivePairsInBatch";
  case ErrorKind::DmaxUnavailable:
    return "DmaxUnavailable";
  case ErrorKind::NonFiniteScore:
    return "NonFiniteScore";
  case ErrorKind::DivergedLoss:
    return "DivergedLoss";
  case ErrorKind::EmptySplit:
    return "EmptySplit";
  case ErrorKind::ZeroVariance:
    return "ZeroVariance";
  case ErrorKind::InvalidConfig:
    return "InvalidConfig";
  }
  return "Error";
}

}  // namespace decoyforge
