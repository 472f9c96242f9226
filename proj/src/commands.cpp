#include "germ/commands.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "germ/polysys.hpp"
#include "germ/session.hpp"
#include "json.hpp"

namespace germ {

namespace {

using json = nlohmann::ordered_json;

std::string code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Syntax: return "Syntax";
    case ErrorCode::Semantic: return "Semantic";
    case ErrorCode::Mismatch: return "Mismatch";
    case ErrorCode::Domain: return "Domain";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::Obstruction: return "Obstruction";
    case ErrorCode::Io: return "Io";
  }
  return "Error";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// ---- JSON views ---------------------------------------------------------------------

json jet_json(const Jet& j) {
  json o = json::object();
  for (auto& [m, c] : j.terms()) o[m] = c;
  return o;
}

json jets_json(const std::vector<Jet>& v) {
  json a = json::array();
  for (auto& j : v) a.push_back(jet_json(j));
  return a;
}

json map_json(const MapGerm& f) {
  json o;
  o["field"] = f.source().field().spec();
  o["components"] = jets_json(f.comps());
  o["text"] = f.to_string();
  return o;
}

json element_json(const GroupElement& g) {
  json o;
  GroupKind k = g.kind();
  o["group"] = group_name(k);
  o["field"] = g.source().field().spec();
  if (has_right(k)) o["phi"] = jets_json(g.phi());
  if (has_left(k)) o["psi"] = jets_json(g.psi());
  if (has_matrix(k)) o["matrix"] = jets_json(g.matrix());
  if (has_contact(k)) o["contact"] = jets_json(g.contact());
  o["text"] = g.to_string();
  return o;
}

json vector_json(const TangentVector& v) {
  json o;
  GroupKind k = v.kind;
  o["group"] = group_name(k);
  if (has_right(k)) o["right"] = jets_json(v.right);
  if (has_left(k)) o["left"] = jets_json(v.left);
  if (has_matrix(k)) o["matrix"] = jets_json(v.matrix);
  if (has_contact(k)) o["contact"] = jets_json(v.contact);
  o["text"] = v.to_string();
  return o;
}

Jet jet_from_json(const json& o, const JetRing& r) {
  if (!o.is_object()) throw Error(ErrorCode::Syntax, "jet JSON must be an object {monomial: scalar}");
  Jet out = r.zero();
  for (auto& [mono, val] : o.items()) {
    std::size_t idx = r.parse_monomial(mono);
    if (idx == JetRing::npos) continue;
    out = out + r.monomial_jet(idx, r.field().parse_scalar(val.get<std::string>()));
  }
  return out;
}

std::vector<Jet> jets_from_json(const json& a, const JetRing& r) {
  std::vector<Jet> out;
  for (auto& j : a) out.push_back(jet_from_json(j, r));
  return out;
}

// ---- session resolution ------------------------------------------------------------------

struct Env {
  Session s;

  bool big(const std::string& name) const { return s.get(name).over_ext; }

  MapGerm map(const std::string& name, bool to_big) const {
    const SessionObject& o = s.get(name);
    if (o.kind != SessionObject::Kind::Map) throw Error(ErrorCode::Semantic, "'" + name + "' is not a map");
    MapGerm f = MapGerm::make(s.source_over(o.over_ext), s.target_over(o.over_ext), o.comps);
    if (to_big && !o.over_ext && s.ext) return f.base_change(*s.ext);
    return f;
  }

  GroupElement element(GroupKind kind, const std::string& names, bool force_big = false) const {
    bool b = force_big && s.ext;
    for (auto& n : split_commas(names)) b = b || big(n);
    JetRing X = s.source_over(b), Y = s.target_over(b);
    JetRing XY = product_ring(X, Y);
    std::vector<Jet> phi, psi, mat, con;
    for (auto& n : split_commas(names)) {
      const SessionObject& o = s.get(n);
      auto lift = [&](const JetRing& r) {
        std::vector<Jet> out;
        for (auto& j : o.comps) out.push_back(b && !o.over_ext ? j.base_change(r, *s.ext) : j);
        return out;
      };
      switch (o.kind) {
        case SessionObject::Kind::Aut: phi = lift(X); break;
        case SessionObject::Kind::LAut: psi = lift(Y); break;
        case SessionObject::Kind::Matrix: mat = lift(X); break;
        case SessionObject::Kind::Contact: con = lift(XY); break;
        default: throw Error(ErrorCode::Semantic, "'" + n + "' is not a group element part (aut, laut, matrix, contact)");
      }
    }
    auto need = [&](bool part, const std::vector<Jet>& v, const char* what) {
      if (!part && !v.empty())
        throw Error(ErrorCode::Mismatch, std::string("group ") + group_name(kind) + " has no " + what + " part");
    };
    need(has_right(kind), phi, "source automorphism");
    need(has_left(kind), psi, "target automorphism");
    need(has_matrix(kind), mat, "matrix");
    need(has_contact(kind), con, "contact");
    return GroupElement::make(kind, X, Y, phi, psi, mat, con);
  }

  TangentVector vf(const std::string& name) const {
    const SessionObject& o = s.get(name);
    if (o.kind != SessionObject::Kind::Vf) throw Error(ErrorCode::Semantic, "'" + name + "' is not a vector field");
    return o.vf;
  }

  Filtration filtration(const std::string& spec, const JetRing& ring) const {
    if (spec.rfind("chain:", 0) == 0) return parse_filtration(read_file(spec.substr(6)), ring);
    if (spec == "madic" || spec == "tadic" || spec.rfind("chain[", 0) == 0) return parse_filtration(spec, ring);
    const SessionObject& o = s.get(spec);
    if (o.kind != SessionObject::Kind::Filtration) throw Error(ErrorCode::Semantic, "'" + spec + "' is not a filtration");
    return o.filt.on(ring);
  }

  GroupElement witness(GroupKind kind, const std::string& arg) const {
    if (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json") {
      json j;
      try {
        j = json::parse(read_file(arg));
      } catch (const json::exception& e) {
        throw Error(ErrorCode::Syntax, std::string("invalid witness JSON: ") + e.what());
      }
      if (j.contains("witness")) j = j["witness"];
      if (j.contains("group") && parse_group(j["group"].get<std::string>()) != kind)
        throw Error(ErrorCode::Mismatch, "witness group " + j["group"].get<std::string>() + " differs from " + group_name(kind));
      bool b = s.ext.has_value();
      JetRing X = s.source_over(b), Y = s.target_over(b);
      JetRing XY = product_ring(X, Y);
      auto part = [&](const char* key, const JetRing& r) {
        return j.contains(key) ? jets_from_json(j[key], r) : std::vector<Jet>{};
      };
      return GroupElement::make(kind, X, Y, part("phi", X), part("psi", Y), part("matrix", X), part("contact", XY));
    }
    return element(kind, arg, true);
  }
};

Env load(const std::string& path) {
  if (path.empty()) throw Error(ErrorCode::Semantic, "--session is required");
  return Env{parse_session(read_file(path))};
}

json level_json(int level, int cap) {
  json o;
  o["level"] = level;
  if (level >= cap) o["display"] = ">= " + std::to_string(cap);
  return o;
}

std::string status_name(GroebnerStatus s) {
  switch (s) {
    case GroebnerStatus::Inconsistent: return "inconsistent";
    case GroebnerStatus::Consistent: return "consistent";
    case GroebnerStatus::Undecided: return "undecided";
  }
  return "undecided";
}

PolySystem load_system(const std::string& path) {
  std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Syntax, std::string("invalid system JSON: ") + e.what());
  }
  if (j.contains("result")) return system_from_json(j["result"].dump());
  return system_from_json(text);
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& args) {
  CommandResult res;
  CLI::App app{"Exact computations with jets of map-germs", "germ"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "germ 1.0.0");

  std::string session, group = "R", elem, map, from, to, filt = "madic", vfname, witness, field, ext, sysfile;
  int level = 1, jet = 0;
  std::uint64_t seed = 1, cap = 0;
  bool level_given = false;

  auto with_session = [&](CLI::App* sc) { sc->add_option("--session", session, "session file")->required(); };
  auto with_group = [&](CLI::App* sc) { sc->add_option("--group", group, "R | L | LR | C | K | Klin"); };
  auto with_filt = [&](CLI::App* sc) {
    sc->add_option("--filtration", filt, "madic | tadic | NAME | chain:<file> | chain[...]");
  };
  auto with_level = [&](CLI::App* sc) {
    sc->add_option_function<int>("--level", [&](const int& v) { level = v; level_given = true; }, "filtration level j");
  };

  auto* c_parse = app.add_subcommand("parse", "validate a session and print its canonical form");
  with_session(c_parse);
  auto* c_act = app.add_subcommand("act", "act on a map by a group element");
  with_session(c_act);
  with_group(c_act);
  c_act->add_option("--elem", elem, "element parts, comma separated")->required();
  c_act->add_option("--map", map)->required();
  auto* c_level = app.add_subcommand("level", "filtration level of a group element");
  with_session(c_level);
  with_group(c_level);
  with_filt(c_level);
  c_level->add_option("--elem", elem)->required();
  auto* c_tangent = app.add_subcommand("tangent", "image tangent space of a map");
  with_session(c_tangent);
  with_group(c_tangent);
  with_filt(c_tangent);
  with_level(c_tangent);
  c_tangent->add_option("--map", map)->required();
  auto* c_exp = app.add_subcommand("exp", "exponential of a vector field");
  with_session(c_exp);
  with_filt(c_exp);
  c_exp->add_option("--vf", vfname)->required();
  auto* c_log = app.add_subcommand("log", "logarithm of a group element");
  with_session(c_log);
  with_group(c_log);
  c_log->add_option("--elem", elem)->required();
  auto* c_ar = app.add_subcommand("artin-rees", "jet-level Artin-Rees bound");
  with_session(c_ar);
  with_group(c_ar);
  with_filt(c_ar);
  with_level(c_ar);
  c_ar->add_option("--map", map)->required();
  auto* c_desc = app.add_subcommand("descend", "descend an equivalence from K to k");
  with_session(c_desc);
  with_group(c_desc);
  with_filt(c_desc);
  with_level(c_desc);
  c_desc->add_option("--from", from)->required();
  c_desc->add_option("--to", to)->required();
  c_desc->add_option("--witness", witness, "witness JSON file or element parts")->required();
  auto* c_verify = app.add_subcommand("verify", "check a witness");
  with_session(c_verify);
  with_group(c_verify);
  with_filt(c_verify);
  with_level(c_verify);
  c_verify->add_option("--elem", elem)->required();
  c_verify->add_option("--from", from)->required();
  c_verify->add_option("--to", to)->required();
  auto* c_stab = app.add_subcommand("stabilizer", "sample a stabilizer element");
  with_session(c_stab);
  with_group(c_stab);
  with_filt(c_stab);
  with_level(c_stab);
  c_stab->add_option("--map", map)->required();
  c_stab->add_option("--seed", seed);
  auto* c_family = app.add_subcommand("family", "trivialize a family over k");
  with_session(c_family);
  with_group(c_family);
  c_family->add_option("--map", map)->required();
  c_family->add_option("--witness", witness)->required();
  auto* c_system = app.add_subcommand("system", "compile equivalence into a polynomial system");
  with_session(c_system);
  with_group(c_system);
  with_filt(c_system);
  c_system->add_option_function<int>("--level", [&](const int& v) { level = v; level_given = true; });
  c_system->add_option("--from", from)->required();
  c_system->add_option("--to", to)->required();
  auto* c_gb = app.add_subcommand("groebner", "decide consistency over the algebraic closure");
  c_gb->add_option("system", sysfile)->required();
  auto* c_solve = app.add_subcommand("solve", "solve a system over a finite field by enumeration");
  c_solve->add_option("--field", field)->required();
  c_solve->add_option("--cap", cap);
  c_solve->add_option("system", sysfile)->required();
  auto* c_orbits = app.add_subcommand("orbits", "split a K-orbit into k-orbits");
  with_session(c_orbits);
  with_group(c_orbits);
  c_orbits->add_option("--ext", ext, "minimal polynomial of K over k")->required();
  c_orbits->add_option("--jet", jet);
  c_orbits->add_option("--map", map)->required();
  c_orbits->add_option("--cap", cap);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  std::ostringstream cli_out, cli_err;
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, cli_out, cli_err);
    res.out = cli_out.str();
    res.err = cli_err.str();
    res.exit_code = code == 0 ? 0 : 1;
    return res;
  }

  CLI::App* sub = app.get_subcommands().front();
  std::string name = sub->get_name();
  json report;
  report["command"] = name;
  try {
    json r;
    int exit_code = 0;
    GroupKind G = parse_group(group);
    if (name == "parse") {
      Env env = load(session);
      r["session"] = serialize_session(env.s);
      r["objects"] = env.s.objects.size();
    } else if (name == "act") {
      Env env = load(session);
      GroupElement g = env.element(G, elem);
      bool b = g.source().field() != env.s.field;
      MapGerm f = env.map(map, b);
      r["map"] = map_json(g.act(f));
    } else if (name == "level") {
      Env env = load(session);
      GroupElement g = env.element(G, elem);
      Filtration fl = env.filtration(filt, g.source());
      r = level_json(group_level(g, fl), fl.max_level());
    } else if (name == "tangent") {
      Env env = load(session);
      MapGerm f = env.map(map, false);
      int j = level_given ? level : 0;
      Filtration fl = env.filtration(filt, f.source());
      TangentSpace ts = tangent_space(G, f, j, fl);
      r["group"] = group_name(G);
      r["level"] = j;
      r["dimension"] = ts.basis.rank();
      r["codimension"] = ts.basis.dim() - ts.basis.rank();
      json basis = json::array();
      for (auto& row : ts.basis.rows()) basis.push_back(jets_json(unstack(f.source(), row, f.m())));
      r["basis"] = basis;
    } else if (name == "exp") {
      Env env = load(session);
      TangentVector v = env.vf(vfname);
      Filtration fl = env.filtration(filt, v.source);
      GroupElement g = exp_vf(v);
      r["element"] = element_json(g);
      r["vector_level"] = vector_level(v, fl);
      r["element_level"] = group_level(g, fl);
    } else if (name == "log") {
      Env env = load(session);
      r["vector"] = vector_json(log_aut(env.element(G, elem)));
    } else if (name == "artin-rees") {
      Env env = load(session);
      MapGerm f = env.map(map, false);
      Filtration fl = env.filtration(filt, f.source());
      ArtinReesResult ar = artin_rees_bound(G, f, level, fl);
      r["d"] = ar.d ? json(*ar.d) : json(nullptr);
      r["verified_up_to_jet_order"] = f.source().jet_order();
      r["full_dimension"] = ar.full.rank();
      r["filtered_dimension"] = ar.filtered.rank();
      r["intersection_dimension"] = ar.d ? json(ar.intersection.rank()) : json(nullptr);
      if (!ar.d) exit_code = 2;
    } else if (name == "descend") {
      Env env = load(session);
      if (env.big(from) || env.big(to)) throw Error(ErrorCode::Semantic, "descend needs maps with coefficients in " + env.s.field.spec());
      DescentProblem p;
      p.kind = G;
      p.f = env.map(from, false);
      p.ftilde = env.map(to, false);
      p.ext = env.s.ext;
      p.witness = env.witness(G, witness);
      p.j = level;
      p.filt = env.filtration(filt, p.f.source());
      DescentCertificate cert = descend(p);
      r["witness"] = element_json(cert.g);
      json logj = json::array();
      for (auto& step : cert.log) {
        json e;
        e["iteration"] = step.iteration;
        e["order"] = step.order;
        e["xi"] = vector_json(step.xi);
        logj.push_back(e);
      }
      r["peeling_log"] = logj;
      r["verified"] = true;
    } else if (name == "verify") {
      Env env = load(session);
      GroupElement g = env.element(G, elem);
      bool b = g.source().field() != env.s.field;
      MapGerm f = env.map(from, b), ft = env.map(to, b);
      int j = level_given ? level : 0;
      WitnessCheck w = verify_witness(g, f, ft, j, env.filtration(filt, f.source()));
      r["ok"] = w.ok;
      r["level"] = w.level;
      r["diagnostics"] = w.diagnostics;
      if (!w.ok) exit_code = 2;
    } else if (name == "stabilizer") {
      Env env = load(session);
      MapGerm f = env.map(map, false);
      GroupElement g = stabilizer_sample(f, G, level, env.filtration(filt, f.source()), seed);
      r["element"] = element_json(g);
      r["identity"] = g.is_identity();
    } else if (name == "family") {
      Env env = load(session);
      MapGerm f = env.map(map, false);
      DescentCertificate cert = family_trivialize(G, f, env.s.ext, env.witness(G, witness));
      r["witness"] = element_json(cert.g);
      r["steps"] = cert.log.size();
      r["result"] = map_json(cert.g.act(f));
      r["verified"] = true;
    } else if (name == "system") {
      Env env = load(session);
      bool b = env.big(from) || env.big(to);
      MapGerm f = env.map(from, b), ft = env.map(to, b);
      std::optional<int> lv;
      if (level_given) lv = level;
      PolySystem S = compile_system(f, ft, G, lv, env.filtration(filt, f.source()));
      r = json::parse(system_to_json(S));
    } else if (name == "groebner") {
      PolySystem S = load_system(sysfile);
      GroebnerResult gr = groebner_inconsistent(S);
      r["status"] = status_name(gr.status);
      r["spairs"] = gr.spairs;
      json basis = json::array();
      for (auto& p : gr.basis) basis.push_back(p.to_string(S.unknowns));
      r["basis"] = basis;
      if (gr.status == GroebnerStatus::Inconsistent) {
        r["certificate"] = gr.trace;
        exit_code = 2;
      }
    } else if (name == "solve") {
      PolySystem S = load_system(sysfile);
      Field F = Field::parse(field);
      BruteOptions opt;
      if (cap) opt.cap = cap;
      auto sols = brute_solve(S, F, opt);
      r["field"] = F.spec();
      r["count"] = sols.size();
      json arr = json::array();
      for (auto& s : sols) {
        json o;
        for (std::size_t i = 0; i < s.size(); ++i) o[S.unknowns[i]] = s[i].to_string();
        arr.push_back(o);
      }
      r["solutions"] = arr;
      if (sols.empty()) {
        r["message"] = "no solutions";
        exit_code = 2;
      }
    } else if (name == "orbits") {
      Env env = load(session);
      if (jet > 0 && jet != env.s.jet) {
        std::string text = serialize_session(env.s);
        std::string from_line = "jet " + std::to_string(env.s.jet) + "\n";
        auto pos = text.find(from_line);
        text.replace(pos, from_line.size(), "jet " + std::to_string(jet) + "\n");
        env.s = parse_session(text);
      }
      Extension e = make_extension(env.s.field, ext);
      OrbitCensus c = orbit_split(env.map(map, false), G, e, cap ? cap : 10000000);
      r["k"] = e.base().spec();
      r["K"] = e.top().spec();
      r["big_orbit_size"] = c.big_orbit_size;
      r["rational_points"] = c.rational_points;
      json reps = json::array();
      for (std::size_t i = 0; i < c.representatives.size(); ++i) {
        json o = map_json(c.representatives[i]);
        o["orbit_size"] = c.sizes[i];
        reps.push_back(o);
      }
      r["orbits"] = reps;
      r["count"] = c.representatives.size();
    }
    report["result"] = r;
    res.exit_code = exit_code;
  } catch (const Error& e) {
    report["error"] = {{"code", code_name(e.code())}, {"message", e.what()}};
    res.err = std::string("error: ") + e.what() + "\n";
    res.exit_code = 1;
  } catch (const std::exception& e) {
    report["error"] = {{"code", "Internal"}, {"message", e.what()}};
    res.err = std::string("error: ") + e.what() + "\n";
    res.exit_code = 1;
  }
  res.out = report.dump(2) + "\n";
  return res;
}

}  // namespace germ
