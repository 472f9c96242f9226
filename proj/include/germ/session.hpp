#pragma once

// Line-oriented session files:
//
//   field Q
//   extend a^2-2
//   jet 3
//   tjet 1 params: t
//   source vars: x,y ideal: (x*y)
//   target vars: u ideal: ()
//   filtration F = madic | tadic | chain[(x,y);(y,x^2)]
//   map f = (x^2)
//   aut P = (x+y^2, y)            source automorphism
//   laut Q = (u+u^2)              target automorphism
//   matrix M = (1+x, 0, 0, 1)     row-major m x m
//   vf v = x^2 d/dx + x*y d/dy
//   contact C = ((1+x)*u)
//
// '#' starts a comment. Objects may use the generator of the extension;
// each object is kept over k when its coefficients allow it.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "germ/tangent.hpp"

namespace germ {

struct SessionObject {
  enum class Kind { Map, Aut, LAut, Matrix, Vf, Contact, Filtration };
  Kind kind = Kind::Map;
  std::string name;
  bool over_ext = false;   // coefficients need the extension
  std::vector<Jet> comps;  // map / aut / laut / matrix / contact
  TangentVector vf;
  Filtration filt;
  std::size_t line = 0;
};

struct Session {
  Field field;
  std::optional<Extension> ext;
  std::string ext_poly;  // minimal polynomial text of the extension
  int jet = -1;
  int tjet = 0;
  std::vector<std::string> tvars;
  std::vector<std::string> source_vars, target_vars;
  std::vector<std::string> source_ideal, target_ideal;  // generator texts
  JetRing source, target;  // over field
  std::vector<SessionObject> objects;

  const SessionObject& get(const std::string& name) const;
  const SessionObject* find(const std::string& name) const;
  /// Source/target over the field an object needs.
  JetRing source_over(bool ext_field) const;
  JetRing target_over(bool ext_field) const;
  /// Ring of the field of the extension (or of k without one).
  const Field& top_field() const;
};

Session parse_session(std::string_view text);
std::string serialize_session(const Session& s);

/// madic | tadic | chain[(m,...);(...)] on a ring.
Filtration parse_filtration(std::string_view spec, const JetRing& ring);

/// "x^2 d/dx + (1+y) d/dy": source variables give the right part, target
/// variables the left part. Kind is R, L or LR by the parts present.
TangentVector parse_vector_field(std::string_view text, const JetRing& source, const JetRing& target,
                                 std::size_t line = 1, std::size_t column_offset = 0);

}  // namespace germ
