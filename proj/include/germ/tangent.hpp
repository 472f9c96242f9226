#pragma once

// Tangent vectors of the groups, their infinitesimal action on maps, image
// tangent spaces (filtered and unfiltered), exp/log, and the jet-level
// Artin-Rees bound.

#include <optional>
#include <vector>

#include "germ/germs.hpp"

namespace germ {

/// Tangent vector of a group. All parts are present; unused parts are zero.
///   right:   xi_X = sum right[i] d/dx_i        (R, LR, K, Klin)
///   left:    xi_Y = sum left[k] d/dy_k         (L, LR)
///   matrix:  A, row-major m x m over the source  (Klin)
///   contact: sum contact[k](x, y) d/dy_k        (C, K)
struct TangentVector {
  GroupKind kind = GroupKind::R;
  JetRing source, target, xy;
  std::vector<Jet> right, left, matrix, contact;

  static TangentVector zero(GroupKind kind, const JetRing& source, const JetRing& target);
  TangentVector operator+(const TangentVector& o) const;
  TangentVector scaled(const FieldElem& c) const;
  bool is_zero() const;
  bool operator==(const TangentVector& o) const;
  /// All coefficients stacked (right, left, matrix, contact).
  Vec coeffs() const;
  std::string to_string() const;

  TangentVector base_change(const Extension& ext) const;
  std::optional<TangentVector> descend(const Extension& ext, const JetRing& source, const JetRing& target) const;
};

/// The first-order motion of f along xi (stacked m-component vector).
Vec tangent_image(const TangentVector& xi, const MapGerm& f);

/// Level of a tangent vector: largest j with xi(M^d) in M^(d+j); capped at
/// the last filtration level, -1 when xi lowers the filtration.
int vector_level(const TangentVector& xi, const Filtration& filt);

struct TangentSpace {
  std::vector<TangentVector> vectors;  // spanning set of the vector side
  std::vector<Vec> images;              // xi . f for each vector
  SubspaceBasis basis;                  // span of the images
};

/// Vector side of T_G (j = 0) or T_{G^(j)} (j >= 1): logarithmic vectors of
/// filtration level >= j.
std::vector<TangentVector> filtered_vectors(GroupKind kind, const JetRing& source, const JetRing& target,
                                            int j, const Filtration& filt);

TangentSpace tangent_space(GroupKind kind, const MapGerm& f, int j, const Filtration& filt);

/// Logarithmic derivations of the source ideal, as a row-reduced basis of the
/// stacked coefficient space, with the corresponding vector fields.
struct DerLog {
  SubspaceBasis basis;
  std::vector<TangentVector> vectors;
};
DerLog der_log(const JetRing& space);

/// exp(xi) as a group element (characteristic 0, order-raising xi).
GroupElement exp_vf(const TangentVector& xi);
/// The unique xi with exp(xi) = g (characteristic 0, g of level >= 1).
TangentVector log_aut(const GroupElement& g);

struct ArtinReesResult {
  std::optional<int> d;
  SubspaceBasis intersection;  // T_G f intersected with M^d
  SubspaceBasis filtered;      // T_{G^(j)} f
  SubspaceBasis full;          // T_G f
};
ArtinReesResult artin_rees_bound(GroupKind kind, const MapGerm& f, int j, const Filtration& filt);

}  // namespace germ
