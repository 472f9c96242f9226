#include "germ/session.hpp"

#include <cctype>
#include <sstream>

#include "germ/expr.hpp"

namespace germ {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

[[noreturn]] void syntax(std::size_t line, std::size_t col, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg, line, col);
}

bool is_ident(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

std::vector<std::string> split_names(const std::string& text, std::size_t line) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string t = trim(item);
    if (t.empty()) continue;
    if (!is_ident(t)) throw ParseError(at_line(line) + "invalid variable name '" + t + "'", line, 1);
    out.push_back(t);
  }
  return out;
}

/// Checks that `text` is a parenthesized tuple and returns its items with
/// their columns (1-based, within the line).
std::vector<std::pair<std::string, std::size_t>> tuple_items(const std::string& text, std::size_t line,
                                                             std::size_t col0) {
  int depth = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    if (text[i] == ')' && --depth < 0) syntax(line, col0 + i, "unbalanced parenthesis");
  }
  if (depth != 0) syntax(line, col0 + text.size(), "unbalanced parenthesis");
  if (text.size() < 2 || text.front() != '(' || text.back() != ')') syntax(line, col0, "expected a parenthesized tuple");
  std::string inner = text.substr(1, text.size() - 2);
  if (trim(inner).empty()) return {};
  return expr::split_top_level(inner, ',', line, col0);
}

std::string ext_poly_of(const Extension& e) {
  std::string s = e.top().spec();
  auto a = s.find("/(");
  return s.substr(a + 2, s.size() - a - 3);
}

std::vector<Jet> descend_all(const std::vector<Jet>& v, const JetRing& r, const Extension& e, bool& ok) {
  std::vector<Jet> out;
  ok = true;
  for (auto& j : v) {
    auto d = j.descend(r, e);
    if (!d) {
      ok = false;
      return v;
    }
    out.push_back(*d);
  }
  return out;
}

std::string tuple_string(const std::vector<Jet>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s + ")";
}

}  // namespace

// ---- helpers -------------------------------------------------------------------------------

Filtration parse_filtration(std::string_view spec_in, const JetRing& ring) {
  std::string spec = trim(spec_in);
  if (spec == "madic") return Filtration::madic(ring);
  if (spec == "tadic") return Filtration::tadic(ring);
  if (spec.rfind("chain[", 0) != 0 || spec.back() != ']')
    throw Error(ErrorCode::Syntax, "unknown filtration '" + spec + "' (madic | tadic | chain[(...);(...)])");
  std::string body = spec.substr(6, spec.size() - 7);
  std::vector<std::vector<Exponent>> levels;
  std::stringstream ss(body);
  std::string level;
  while (std::getline(ss, level, ';')) {
    std::string t = trim(level);
    if (t.size() < 2 || t.front() != '(' || t.back() != ')')
      throw Error(ErrorCode::Syntax, "chain level '" + t + "' must be a parenthesized monomial list");
    std::vector<Exponent> gens;
    std::stringstream ls(t.substr(1, t.size() - 2));
    std::string mono;
    while (std::getline(ls, mono, ',')) {
      std::string mt = trim(mono);
      if (mt.empty()) continue;
      std::size_t idx = ring.parse_monomial(mt);
      if (idx == JetRing::npos) throw Error(ErrorCode::Semantic, "chain generator '" + mt + "' is beyond the jet order");
      gens.push_back(ring.monomial(idx));
    }
    levels.push_back(gens);
  }
  return Filtration::chain(ring, levels);
}

TangentVector parse_vector_field(std::string_view text_in, const JetRing& source, const JetRing& target,
                                 std::size_t line, std::size_t col0) {
  std::string text(text_in);
  // Split into signed terms at depth 0.
  std::vector<std::pair<std::string, std::size_t>> terms;
  int depth = 0;
  std::size_t start = 0;
  auto prev_nonspace = [&](std::size_t i) {
    while (i > 0) {
      --i;
      if (!std::isspace(static_cast<unsigned char>(text[i]))) return text[i];
    }
    return '\0';
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(') ++depth;
    if (c == ')' && --depth < 0) syntax(line, col0 + i, "unbalanced parenthesis");
    if (depth == 0 && (c == '+' || c == '-') && i > start) {
      char p = prev_nonspace(i);
      if (p != '\0' && std::string("+-*/^(").find(p) == std::string::npos) {
        terms.emplace_back(text.substr(start, i - start), col0 + start);
        start = i;
      }
    }
  }
  if (depth != 0) syntax(line, col0 + text.size(), "unbalanced parenthesis");
  terms.emplace_back(text.substr(start), col0 + start);

  bool has_r = false, has_l = false;
  std::vector<Jet> right(source.nvars(), source.zero()), left(target.nvars(), target.zero());
  for (auto& [raw, col] : terms) {
    std::string t = trim(raw);
    if (t.empty()) syntax(line, col, "empty vector field term");
    auto d = t.rfind("d/d");
    if (d == std::string::npos) syntax(line, col, "vector field term '" + t + "' lacks d/d<variable>");
    std::string var = trim(t.substr(d + 3));
    std::string coef = trim(t.substr(0, d));
    while (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
    bool neg = false;
    if (coef == "-" || coef == "+") {
      neg = coef == "-";
      coef = "1";
    } else if (coef.empty()) {
      coef = "1";
    }
    std::size_t offset = col + raw.find(coef.empty() ? t : coef) - 1;
    bool found = false;
    for (std::size_t i = 0; i < source.nvars() && !found; ++i)
      if (source.vars()[i] == var) {
        Jet c = source.parse(coef, line, offset);
        right[i] = right[i] + (neg ? -c : c);
        has_r = found = true;
      }
    for (std::size_t k = 0; k < target.nvars() && !found; ++k)
      if (target.vars()[k] == var) {
        Jet c = target.parse(coef, line, offset);
        left[k] = left[k] + (neg ? -c : c);
        has_l = found = true;
      }
    if (!found) syntax(line, col, "unknown variable '" + var + "' in d/d" + var);
  }
  GroupKind kind = has_r && has_l ? GroupKind::LR : (has_l ? GroupKind::L : GroupKind::R);
  TangentVector v = TangentVector::zero(kind, source, target);
  v.right = right;
  v.left = left;
  return v;
}

// ---- Session ---------------------------------------------------------------------------

const SessionObject* Session::find(const std::string& name) const {
  for (auto& o : objects)
    if (o.name == name) return &o;
  return nullptr;
}

const SessionObject& Session::get(const std::string& name) const {
  if (auto* o = find(name)) return *o;
  throw Error(ErrorCode::Semantic, "unknown name '" + name + "'");
}

const Field& Session::top_field() const { return ext ? ext->top() : field; }

JetRing Session::source_over(bool e) const { return e && ext ? source.over(ext->top()) : source; }
JetRing Session::target_over(bool e) const { return e && ext ? target.over(ext->top()) : target; }

Session parse_session(std::string_view text) {
  Session s;
  s.field = Field::rationals();
  bool have_field = false;
  bool rings_built = false;
  bool have_source = false, have_target = false;

  auto build_rings = [&](std::size_t line) {
    if (rings_built) return;
    if (s.jet < 0) throw Error(ErrorCode::Semantic, at_line(line) + "jet order must be given before objects");
    if (!have_source || !have_target)
      throw Error(ErrorCode::Semantic, at_line(line) + "source and target must be declared before objects");
    auto make = [&](const std::vector<std::string>& vars, std::vector<std::string>& ideal) {
      JetRing free(s.field, vars, s.jet, s.tvars, s.tjet);
      std::vector<Jet> gens;
      for (auto& g : ideal) gens.push_back(free.parse(g));
      ideal.clear();
      for (auto& g : gens) ideal.push_back(g.to_string());
      return gens.empty() ? free : free.with_ideal(gens);
    };
    s.source = make(s.source_vars, s.source_ideal);
    s.target = make(s.target_vars, s.target_ideal);
    rings_built = true;
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string content = raw.substr(0, raw.find('#'));
    std::string l = trim(content);
    if (l.empty()) continue;
    std::size_t lead = content.find_first_not_of(" \t");
    std::size_t sp = l.find_first_of(" \t");
    std::string key = l.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(l.substr(sp));
    std::size_t rest_col = lead + 1 + (sp == std::string::npos ? l.size() : l.find(rest, sp));
    try {
      if (key == "field") {
        if (rings_built) throw Error(ErrorCode::Semantic, "field must precede the spaces");
        s.field = Field::parse(rest);
        have_field = true;
      } else if (key == "extend") {
        s.ext = make_extension(s.field, rest);
        s.ext_poly = ext_poly_of(*s.ext);
      } else if (key == "jet" || key == "tjet") {
        std::string num = rest.substr(0, rest.find_first_of(" \t"));
        int v = 0;
        try {
          v = std::stoi(num);
        } catch (...) {
          syntax(line, rest_col, "expected an integer after '" + key + "'");
        }
        if (v < (key == "jet" ? 1 : 0)) throw Error(ErrorCode::Semantic, key + " order out of range");
        if (key == "jet") {
          s.jet = v;
        } else {
          s.tjet = v;
          auto p = rest.find("params:");
          s.tvars = p == std::string::npos ? std::vector<std::string>{"t"} : split_names(rest.substr(p + 7), line);
        }
      } else if (key == "source" || key == "target") {
        auto vp = rest.find("vars:");
        if (vp == std::string::npos) syntax(line, rest_col, "expected 'vars:'");
        auto ip = rest.find("ideal:");
        std::string vars = rest.substr(vp + 5, ip == std::string::npos ? std::string::npos : ip - vp - 5);
        std::vector<std::string> ideal;
        if (ip != std::string::npos) {
          std::string tup = trim(rest.substr(ip + 6));
          for (auto& [item, col] : tuple_items(tup, line, rest_col + rest.find(tup, ip)))
            if (!trim(item).empty()) ideal.push_back(trim(item));
        }
        auto names = split_names(vars, line);
        if (names.empty()) throw Error(ErrorCode::Semantic, "no variables declared");
        if (key == "source") {
          s.source_vars = names;
          s.source_ideal = ideal;
          have_source = true;
        } else {
          s.target_vars = names;
          s.target_ideal = ideal;
          have_target = true;
        }
      } else if (key == "map" || key == "aut" || key == "laut" || key == "matrix" || key == "vf" || key == "contact" ||
                 key == "filtration") {
        int depth = 0;
        for (std::size_t i = 0; i < rest.size(); ++i) {
          if (rest[i] == '(') ++depth;
          if (rest[i] == ')' && --depth < 0) syntax(line, rest_col + i, "unbalanced parenthesis");
        }
        if (depth != 0) syntax(line, rest_col + rest.size(), "unbalanced parenthesis");
        build_rings(line);
        auto eq = rest.find('=');
        if (eq == std::string::npos) syntax(line, rest_col, "expected 'NAME = ...'");
        std::string name = trim(rest.substr(0, eq));
        if (!is_ident(name)) syntax(line, rest_col, "invalid name '" + name + "'");
        if (s.find(name)) throw Error(ErrorCode::Semantic, "duplicate name '" + name + "'");
        std::string body = trim(rest.substr(eq + 1));
        std::size_t body_col = rest_col + rest.find(body, eq + 1);
        if (body.empty()) syntax(line, body_col, "missing definition of '" + name + "'");

        SessionObject o;
        o.name = name;
        o.line = line;
        bool big = s.ext.has_value();
        JetRing X = s.source_over(big), Y = s.target_over(big);
        JetRing XY = product_ring(X, Y);
        auto parse_items = [&](const JetRing& r) {
          std::vector<Jet> out;
          for (auto& [item, col] : tuple_items(body, line, body_col)) out.push_back(r.parse(item, line, col - 1));
          return out;
        };
        auto settle = [&](const JetRing& small) {
          if (!big) return;
          bool ok = false;
          auto d = descend_all(o.comps, small, *s.ext, ok);
          if (ok) o.comps = d;
          o.over_ext = !ok;
        };
        if (key == "filtration") {
          o.kind = SessionObject::Kind::Filtration;
          o.filt = parse_filtration(body, s.source);
        } else if (key == "map") {
          o.kind = SessionObject::Kind::Map;
          o.comps = parse_items(X);
          settle(s.source);
          JetRing Xo = s.source_over(o.over_ext), Yo = s.target_over(o.over_ext);
          MapGerm::make(Xo, Yo, o.comps);
        } else if (key == "aut") {
          o.kind = SessionObject::Kind::Aut;
          o.comps = parse_items(X);
          settle(s.source);
          GroupElement::make(GroupKind::R, s.source_over(o.over_ext), s.target_over(o.over_ext), o.comps);
        } else if (key == "laut") {
          o.kind = SessionObject::Kind::LAut;
          o.comps = parse_items(Y);
          settle(s.target);
          GroupElement::make(GroupKind::L, s.source_over(o.over_ext), s.target_over(o.over_ext), {}, o.comps);
        } else if (key == "matrix") {
          o.kind = SessionObject::Kind::Matrix;
          o.comps = parse_items(X);
          std::size_t m = s.target.nvars();
          if (o.comps.size() != m * m)
            throw Error(ErrorCode::Semantic, "matrix needs " + std::to_string(m * m) + " entries (row-major)");
          settle(s.source);
          GroupElement::make(GroupKind::Klin, s.source_over(o.over_ext), s.target_over(o.over_ext), {}, {}, o.comps);
        } else if (key == "contact") {
          o.kind = SessionObject::Kind::Contact;
          o.comps = parse_items(XY);
          settle(product_ring(s.source, s.target));
          GroupElement::make(GroupKind::C, s.source_over(o.over_ext), s.target_over(o.over_ext), {}, {}, {}, o.comps);
        } else {
          o.kind = SessionObject::Kind::Vf;
          o.vf = parse_vector_field(body, X, Y, line, body_col - 1);
          if (big) {
            auto d = o.vf.descend(*s.ext, s.source, s.target);
            if (d) o.vf = *d;
            o.over_ext = !d;
          }
        }
        s.objects.push_back(std::move(o));
      } else {
        syntax(line, lead + 1, "unknown stanza '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      std::string msg = e.what();
      if (msg.rfind("line ", 0) == 0) throw;
      throw Error(e.code(), at_line(line) + msg);
    }
  }
  (void)have_field;
  if (!rings_built && s.jet >= 1 && have_source && have_target) build_rings(line);
  return s;
}

std::string serialize_session(const Session& s) {
  std::string out = "field " + s.field.spec() + "\n";
  if (s.ext) out += "extend " + s.ext_poly + "\n";
  if (s.jet >= 0) out += "jet " + std::to_string(s.jet) + "\n";
  if (!s.tvars.empty()) {
    out += "tjet " + std::to_string(s.tjet) + " params: ";
    for (std::size_t i = 0; i < s.tvars.size(); ++i) out += (i ? "," : "") + s.tvars[i];
    out += "\n";
  }
  auto space = [&](const char* key, const std::vector<std::string>& vars, const std::vector<std::string>& ideal) {
    if (vars.empty()) return;
    out += std::string(key) + " vars: ";
    for (std::size_t i = 0; i < vars.size(); ++i) out += (i ? "," : "") + vars[i];
    out += " ideal: (";
    for (std::size_t i = 0; i < ideal.size(); ++i) out += (i ? ", " : "") + ideal[i];
    out += ")\n";
  };
  space("source", s.source_vars, s.source_ideal);
  space("target", s.target_vars, s.target_ideal);
  for (auto& o : s.objects) {
    switch (o.kind) {
      case SessionObject::Kind::Filtration: out += "filtration " + o.name + " = " + o.filt.spec(); break;
      case SessionObject::Kind::Map: out += "map " + o.name + " = " + tuple_string(o.comps); break;
      case SessionObject::Kind::Aut: out += "aut " + o.name + " = " + tuple_string(o.comps); break;
      case SessionObject::Kind::LAut: out += "laut " + o.name + " = " + tuple_string(o.comps); break;
      case SessionObject::Kind::Matrix: out += "matrix " + o.name + " = " + tuple_string(o.comps); break;
      case SessionObject::Kind::Contact: out += "contact " + o.name + " = " + tuple_string(o.comps); break;
      case SessionObject::Kind::Vf: out += "vf " + o.name + " = " + o.vf.to_string(); break;
    }
    out += "\n";
  }
  return out;
}

}  // namespace germ
