#pragma once

// Equivalence as polynomial systems in the unknown Taylor coefficients of the
// group element, Groebner inconsistency, exhaustive solving over finite
// fields, and orbit splitting under a finite field extension.
//
// Convention: Phi_Y o f = ftilde o Phi_X (R: f = ftilde o Phi_X). For K_lin the
// unknown matrix is M' with M' * f = ftilde o Phi_X; for C and K the unknown
// contact part is C' with C'(x, f) = ftilde o Phi_X.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "germ/descent.hpp"
#include "germ/poly.hpp"

namespace germ {

enum class UnknownRole { Right, Left, Matrix, Contact, Inverse };

struct UnknownInfo {
  UnknownRole role = UnknownRole::Right;
  std::size_t comp = 0;  // component, matrix entry r*m+c, or 0
  std::size_t mono = 0;  // monomial index in the part's ring
};

struct PolySystem {
  Field field;
  std::vector<std::string> unknowns;
  std::vector<Poly> equations;
  std::vector<std::string> provenance;  // one tag per equation
  // Layout for assembling solutions (absent for systems read from JSON).
  std::optional<GroupKind> kind;
  JetRing source, target;
  std::vector<UnknownInfo> roles;

  std::size_t index_of(const std::string& name) const;
};

PolySystem compile_system(const MapGerm& f, const MapGerm& ftilde, GroupKind kind, std::optional<int> level = {},
                          std::optional<Filtration> filt = {});

GroebnerResult groebner_inconsistent(const PolySystem& s, std::size_t spair_cap = spair_cap_from_env());

struct BruteOptions {
  std::uint64_t cap = 100000000;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// All points of field^unknowns satisfying every equation, in enumeration order.
std::vector<std::vector<FieldElem>> brute_solve(const PolySystem& s, const Field& field, BruteOptions opt = {});

/// Group element (in act convention) from a solution of a compiled system.
GroupElement assemble(const PolySystem& s, const std::vector<FieldElem>& solution);

struct OrbitCensus {
  std::vector<MapGerm> representatives;  // over k, canonical order
  std::vector<std::uint64_t> sizes;
  std::uint64_t big_orbit_size = 0;      // K-orbit of f
  std::uint64_t rational_points = 0;     // K-orbit intersected with k-maps
  std::uint64_t group_size_small = 0;
  std::uint64_t group_size_big = 0;
};

/// Splits the k-rational part of the K-orbit of f into k-orbits by
/// enumerating the jet groups. Both fields must be finite.
OrbitCensus orbit_split(const MapGerm& f, GroupKind kind, const Extension& ext, std::uint64_t cap = 10000000);

/// Every element of the jet group over a finite field (cap on the count of
/// parameter vectors).
std::vector<GroupElement> enumerate_group(GroupKind kind, const JetRing& source, const JetRing& target,
                                          std::uint64_t cap);

std::string system_to_json(const PolySystem& s);
PolySystem system_from_json(const std::string& text);

}  // namespace germ
