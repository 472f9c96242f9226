#pragma once

// Map-germs between jet-level scheme-germs and the groups acting on them.
//
// Conventions: a right element stores Phi and acts by f -> f o Phi^-1; a left
// element stores Phi_Y and acts by f -> Phi_Y o f; K_lin acts by
// f -> M * (f o Phi^-1); contact elements act by f -> C(x, f o Phi^-1).

#include <optional>
#include <string>
#include <vector>

#include "germ/jets.hpp"

namespace germ {

enum class GroupKind { R, L, LR, C, K, Klin };

GroupKind parse_group(std::string_view name);
std::string group_name(GroupKind g);
bool has_right(GroupKind g);
bool has_left(GroupKind g);
bool has_matrix(GroupKind g);
bool has_contact(GroupKind g);

/// Ring in the source variables x followed by the target variables y, with
/// the source ideal. Target names clashing with source names get a suffix.
JetRing product_ring(const JetRing& source, const JetRing& target);
/// Ring with the identical variables and parameters but no ideal.
JetRing free_ring(const JetRing& ring);
/// Inverse of an automorphism given by its components (free ring, any field).
std::vector<Jet> invert_aut(const std::vector<Jet>& phi);
/// Embeds a jet of `from` into `to` by renaming the variables positionally,
/// starting at variable `offset` of `to`.
Jet lift(const Jet& j, const JetRing& to, std::size_t offset);
/// Identity components (the variables) of a ring, optionally from an offset.
std::vector<Jet> ring_variables(const JetRing& ring, std::size_t offset, std::size_t count);

class MapGerm {
 public:
  MapGerm() = default;
  static MapGerm make(const JetRing& source, const JetRing& target, std::vector<Jet> comps);

  const JetRing& source() const { return source_; }
  const JetRing& target() const { return target_; }
  const std::vector<Jet>& comps() const { return comps_; }
  std::size_t m() const { return comps_.size(); }
  Vec vec() const { return stack(comps_); }
  bool operator==(const MapGerm& o) const { return comps_ == o.comps_; }
  bool operator!=(const MapGerm& o) const { return !(*this == o); }
  std::string to_string() const;

  MapGerm base_change(const Extension& ext) const;
  std::optional<MapGerm> descend(const Extension& ext, const JetRing& source, const JetRing& target) const;

 private:
  JetRing source_, target_;
  std::vector<Jet> comps_;
};

class GroupElement {
 public:
  GroupElement() = default;

  static GroupElement identity(GroupKind kind, const JetRing& source, const JetRing& target);
  /// Validating constructor. Unused parts may be left empty (identity).
  static GroupElement make(GroupKind kind, const JetRing& source, const JetRing& target,
                           std::vector<Jet> phi, std::vector<Jet> psi = {},
                           std::vector<Jet> matrix = {}, std::vector<Jet> contact = {});

  GroupKind kind() const { return kind_; }
  const JetRing& source() const { return source_; }
  const JetRing& target() const { return target_; }
  const JetRing& xy() const { return xy_; }
  /// Phi_X (source automorphism; identity when absent).
  const std::vector<Jet>& phi() const { return phi_; }
  const std::vector<Jet>& phi_inverse() const { return phi_inv_; }
  /// Phi_Y (target automorphism).
  const std::vector<Jet>& psi() const { return psi_; }
  /// K_lin matrix, row-major m x m.
  const std::vector<Jet>& matrix() const { return mat_; }
  /// Contact components C(x, y) in the product ring.
  const std::vector<Jet>& contact() const { return contact_; }

  MapGerm act(const MapGerm& f) const;
  /// this o other: act(compose(a, b), f) = act(a, act(b, f)).
  GroupElement compose(const GroupElement& other) const;
  GroupElement inverse() const;
  bool is_identity() const;
  bool operator==(const GroupElement& o) const;

  GroupElement base_change(const Extension& ext) const;
  std::optional<GroupElement> descend(const Extension& ext, const JetRing& source, const JetRing& target) const;

  /// Factor elements of a composite (each of kind R, L, Klin or C).
  std::vector<GroupElement> factors() const;

  std::string to_string() const;

 private:
  void fill_identity_parts();
  void validate() const;
  void compute_inverse_cache();

  GroupKind kind_ = GroupKind::R;
  JetRing source_, target_, xy_;
  std::vector<Jet> phi_, phi_inv_, psi_, psi_inv_, mat_, contact_;
};

/// Level of g with respect to a filtration on the source ring: the largest
/// j (capped at the last filtration level) with g acting as the identity on
/// every quotient M^d / M^(d+j). -1 if g does not preserve the filtration.
int group_level(const GroupElement& g, const Filtration& filt);

/// Per-term shift used by the nonlinear factors: for a multiplier monomial
/// (index in the source ring) and power b, min over d of
/// minord(mono * Pow(M^d, b)) - d.
class PowerShifts {
 public:
  explicit PowerShifts(const Filtration& filt);
  int shift(std::size_t mono, int b) const;
  const Filtration& filtration() const { return filt_; }

 private:
  Filtration filt_;
  // pow_[d][b] = monomial set of products of b monomials of M^d
  std::vector<std::vector<std::vector<bool>>> pow_;
  int maxb_ = 0;
};

}  // namespace germ
