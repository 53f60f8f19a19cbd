//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_ELEMENT_HPP_
#define DECOYFORGE_ELEMENT_HPP_

#include <cstdint>
#include <optional>
#include <string_view>

namespace decoyforge {

// Values are stable: they are written to dataset shards as u8 codes.
enum class Element : std::uint8_t {
  Unknown = 0,
  H = 1,
  He = 2,
  Li = 3,
  Be = 4,
  B = 5,
  C = 6,
  N = 7,
  O = 8,
  F = 9,
  Ne = 10,
  Na = 11,
  Mg = 12,
  Al = 13,
  Si = 14,
  P = 15,
  S = 16,
  Cl = 17,
  Ar = 18,
  K = 19,
  Ca = 20,
  V = 23,
  Cr = 24,
  Mn = 25,
  Fe = 26,
  Co = 27,
  Ni = 28,
  Cu = 29,
  Zn = 30,
  Ga = 31,
  As = 33,
  Se = 34,
  Br = 35,
  Rb = 37,
  Sr = 38,
  Mo = 42,
  Ru = 44,
  Rh = 45,
  Pd = 46,
  Ag = 47,
  Cd = 48,
  Sn = 50,
  Sb = 51,
  Te = 52,
  I = 53,
  Xe = 54,
  Cs = 55,
  Ba = 56,
  W = 74,
  Re = 75,
  Os = 76,
  Ir = 77,
  Pt = 78,
  Au = 79,
  Hg = 80,
  Pb = 82,
};

// Case-insensitive; surrounding blanks ignored. Unrecognized symbols map to
// Element::Unknown.
Element element_from_symbol(std::string_view symbol) noexcept;

std::string_view element_symbol(Element e) noexcept;

bool is_recognized(Element e) noexcept;

bool is_metal(Element e) noexcept;

bool is_hydrogen(Element e) noexcept;

// Standard atomic weight in Daltons; nullopt for Element::Unknown.
std::optional<double> standard_atomic_mass(Element e) noexcept;

// Single-bond covalent radius in Angstrom (Cordero et al. values).
std::optional<double> covalent_radius(Element e) noexcept;

// Element vocabulary used for node features: H C N O F P S Cl Br I, then one
// shared slot for everything else.
inline constexpr int kElementVocabSize = 11;

int element_vocab_index(Element e) noexcept;

}  // namespace decoyforge

#endif  // DECOYFORGE_ELEMENT_HPP_
