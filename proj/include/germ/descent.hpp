#pragma once

// Unipotent descent of equivalences from K down to k, family trivialization
// over the (t)-adic filtration, and witness checking.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "germ/tangent.hpp"

namespace germ {

struct DescentProblem {
  GroupKind kind = GroupKind::R;
  MapGerm f, ftilde;            // over k
  std::optional<Extension> ext;  // k -> K; absent means K = k
  GroupElement witness;          // over K, act(witness, f) = ftilde
  int j = 1;
  Filtration filt;               // on the source of f
};

struct PeelStep {
  int iteration = 0;
  TangentVector xi;  // over k
  int order = 0;     // residual order before the step
};

struct DescentCertificate {
  GroupElement g;  // over k
  std::vector<PeelStep> log;
};

struct WitnessCheck {
  bool ok = false;
  int level = -1;
  std::string diagnostics;
};

/// True iff act(g, f) = ftilde at jet level and group_level(g) >= j.
WitnessCheck verify_witness(const GroupElement& g, const MapGerm& f, const MapGerm& ftilde, int j,
                            const Filtration& filt);

DescentCertificate descend(const DescentProblem& p);

/// An element s of level >= j with act(s, f) = f, drawn from the stabilizer
/// algebra with a seeded generator. Identity when the stabilizer is trivial.
GroupElement stabilizer_sample(const MapGerm& f, GroupKind kind, int j, const Filtration& filt,
                               std::uint64_t seed);

/// Given a family f_t and a K-witness with act(witness, f_t) = f_0, returns a
/// k-trivialization of level >= 1 for the (t)-adic filtration.
DescentCertificate family_trivialize(GroupKind kind, const MapGerm& ft, const std::optional<Extension>& ext,
                                     const GroupElement& witness);

/// The element with every part restricted to t = 0.
GroupElement restrict_t_zero(const GroupElement& g);
/// f with every component restricted to t = 0.
MapGerm restrict_t_zero(const MapGerm& f);

}  // namespace germ
