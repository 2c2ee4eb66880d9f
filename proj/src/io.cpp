#include "rw/io.hpp"

#include <fstream>
#include <sstream>

#include "rw/error.hpp"

namespace rw::io {

namespace {

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::MalformedInput, (where.empty() ? std::string("document") : where) + ": " + what);
}

const ordered_json& field(const ordered_json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) malformed(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) malformed(where, std::string("missing '") + key + "'");
  return *it;
}

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }
std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

int as_int(const ordered_json& v, const std::string& where) {
  if (!v.is_number_integer()) malformed(where, "expected an integer");
  return v.get<int>();
}

std::string as_string(const ordered_json& v, const std::string& where) {
  if (!v.is_string()) malformed(where, "expected a string");
  return v.get<std::string>();
}

const ordered_json& as_array(const ordered_json& v, const std::string& where) {
  if (!v.is_array()) malformed(where, "expected an array");
  return v;
}

std::vector<int> int_array(const ordered_json& v, const std::string& where) {
  std::vector<int> out;
  for (std::size_t i = 0; i < as_array(v, where).size(); ++i) out.push_back(as_int(v[i], at(where, i)));
  return out;
}

}  // namespace

ordered_json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, path.string() + ": cannot open");
  try {
    return ordered_json::parse(in);
  } catch (const ordered_json::parse_error& e) {
    throw Error(ErrorCode::MalformedInput, path.string() + ": byte " + std::to_string(e.byte) + ": not valid JSON");
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Usage, path.string() + ": cannot write");
  out << text;
}

Catalog parse_catalog(const ordered_json& doc) {
  const auto& sig_doc = field(doc, "signature", "");
  std::vector<RelationSymbol> rels;
  std::vector<std::string> consts;
  if (sig_doc.contains("relations")) {
    const auto& rs = as_array(sig_doc["relations"], "signature.relations");
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const auto w = at("signature.relations", i);
      rels.push_back({as_string(field(rs[i], "name", w), w + ".name"), as_int(field(rs[i], "arity", w), w + ".arity")});
      if (rels.back().arity < 0) malformed(w + ".arity", "negative arity");
    }
  }
  if (sig_doc.contains("constants")) {
    const auto& cs = as_array(sig_doc["constants"], "signature.constants");
    for (std::size_t i = 0; i < cs.size(); ++i) consts.push_back(as_string(cs[i], at("signature.constants", i)));
  }
  const Signature sig(rels, consts);

  Catalog out;
  const auto& ss = as_array(field(doc, "structures", ""), "structures");
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const auto w = at("structures", i);
    const auto name = as_string(field(ss[i], "name", w), w + ".name");
    const int size = as_int(field(ss[i], "size", w), w + ".size");
    std::vector<std::vector<Tuple>> tables(rels.size());
    if (ss[i].contains("relations")) {
      const auto& rdoc = ss[i]["relations"];
      if (!rdoc.is_object()) malformed(w + ".relations", "expected an object");
      for (const auto& [rname, tuples] : rdoc.items()) {
        const auto rw = join(w + ".relations", rname);
        const auto idx = sig.relation_index(rname);
        if (!idx) malformed(rw, "relation not in the signature");
        for (std::size_t j = 0; j < as_array(tuples, rw).size(); ++j) {
          auto t = int_array(tuples[j], at(rw, j));
          if (static_cast<int>(t.size()) != rels[*idx].arity) malformed(at(rw, j), "wrong arity");
          for (int x : t)
            if (x < 0 || x >= size) malformed(at(rw, j), "element out of range");
          tables[*idx].push_back(std::move(t));
        }
      }
    }
    std::vector<int> cvals(consts.size(), -1);
    if (ss[i].contains("constants")) {
      const auto& cdoc = ss[i]["constants"];
      if (!cdoc.is_object()) malformed(w + ".constants", "expected an object");
      for (const auto& [cname, v] : cdoc.items()) {
        const auto idx = sig.constant_index(cname);
        if (!idx) malformed(join(w + ".constants", cname), "constant not in the signature");
        cvals[*idx] = as_int(v, join(w + ".constants", cname));
      }
    }
    for (std::size_t c = 0; c < consts.size(); ++c)
      if (cvals[c] < 0) malformed(w + ".constants", "missing value for '" + consts[c] + "'");
    try {
      out.structures.emplace_back(sig, size, std::move(tables), cvals);
    } catch (const Error& e) {
      malformed(w, e.what());
    }
    out.names.push_back(name);
  }
  return out;
}

ordered_json catalog_to_json(const Catalog& catalog) {
  ordered_json doc;
  ordered_json rels = ordered_json::array();
  Signature sig;
  if (!catalog.structures.empty()) sig = catalog.structures.front().signature();
  for (const auto& r : sig.relations()) rels.push_back({{"name", r.name}, {"arity", r.arity}});
  doc["signature"] = {{"relations", rels}, {"constants", sig.constants()}};
  ordered_json ss = ordered_json::array();
  for (std::size_t i = 0; i < catalog.structures.size(); ++i) {
    const auto& s = catalog.structures[i];
    ordered_json rdoc = ordered_json::object();
    for (int r = 0; r < s.relation_count(); ++r) rdoc[sig.relations()[r].name] = s.relation(r);
    ordered_json entry{{"name", catalog.names[i]}, {"size", s.size()}, {"relations", rdoc}};
    if (!sig.constants().empty()) {
      ordered_json cdoc = ordered_json::object();
      for (std::size_t c = 0; c < sig.constants().size(); ++c) cdoc[sig.constants()[c]] = s.constant(c);
      entry["constants"] = cdoc;
    }
    ss.push_back(entry);
  }
  doc["structures"] = ss;
  return doc;
}

CategoryTables parse_tables(const ordered_json& doc) {
  CategoryTables t;
  const auto& objs = as_array(field(doc, "objects", ""), "objects");
  for (std::size_t i = 0; i < objs.size(); ++i) t.objects.push_back(as_string(objs[i], at("objects", i)));
  const auto& homs = field(doc, "homs", "");
  if (!homs.is_object()) malformed("homs", "expected an object");
  for (const auto& [key, ms] : homs.items()) {
    const auto w = join("homs", key);
    const auto arrow = key.find("->");
    if (arrow == std::string::npos) malformed(w, "key must read 'source->target'");
    CategoryTables::HomSet h{key.substr(0, arrow), key.substr(arrow + 2), {}};
    for (std::size_t i = 0; i < as_array(ms, w).size(); ++i) h.morphisms.push_back(as_string(ms[i], at(w, i)));
    t.homs.push_back(std::move(h));
  }
  if (doc.contains("compose")) {
    const auto& comp = doc["compose"];
    if (!comp.is_object()) malformed("compose", "expected an object");
    static const std::string circ = "∘";
    for (const auto& [key, v] : comp.items()) {
      const auto w = join("compose", key);
      const auto pos = key.find(circ);
      if (pos == std::string::npos) malformed(w, "key must read 'g∘f'");
      t.compose.push_back({key.substr(0, pos), key.substr(pos + circ.size()), as_string(v, w)});
    }
  }
  const auto& ids = field(doc, "identities", "");
  if (!ids.is_object()) malformed("identities", "expected an object");
  for (const auto& [obj, m] : ids.items()) t.identities.emplace_back(obj, as_string(m, join("identities", obj)));
  return t;
}

ordered_json tables_to_json(const FiniteCategory& cat) {
  ordered_json doc;
  ordered_json objs = ordered_json::array();
  for (ObjectId a = 0; a < cat.object_count(); ++a) objs.push_back(cat.object_name(a));
  doc["objects"] = objs;
  ordered_json homs = ordered_json::object();
  ordered_json comp = ordered_json::object();
  for (ObjectId a = 0; a < cat.object_count(); ++a)
    for (ObjectId b = 0; b < cat.object_count(); ++b) {
      const auto hom = cat.hom(a, b);
      if (hom.empty()) continue;
      ordered_json names = ordered_json::array();
      for (MorphismId m : hom) names.push_back(cat.morphism_name(m));
      homs[cat.object_name(a) + "->" + cat.object_name(b)] = names;
    }
  for (ObjectId a = 0; a < cat.object_count(); ++a)
    for (ObjectId b = 0; b < cat.object_count(); ++b)
      for (MorphismId f : cat.hom(a, b))
        for (ObjectId c = 0; c < cat.object_count(); ++c)
          for (MorphismId g : cat.hom(b, c))
            comp[cat.morphism_name(g) + "∘" + cat.morphism_name(f)] = cat.morphism_name(cat.compose(g, f));
  doc["homs"] = homs;
  doc["compose"] = comp;
  ordered_json ids = ordered_json::object();
  for (ObjectId a = 0; a < cat.object_count(); ++a) ids[cat.object_name(a)] = cat.morphism_name(cat.identity(a));
  doc["identities"] = ids;
  return doc;
}

bool is_catalog(const ordered_json& doc) { return doc.is_object() && doc.contains("structures"); }

FiniteCategory load_category(const ordered_json& doc, Execution exec) {
  if (is_catalog(doc)) {
    auto cat = parse_catalog(doc);
    return FiniteCategory::from_structures(std::move(cat.names), std::move(cat.structures), exec);
  }
  if (doc.is_object() && doc.contains("objects")) {
    try {
      return FiniteCategory::from_tables(parse_tables(doc));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::MalformedInput) throw;
      throw Error(ErrorCode::MalformedInput, e.what());
    }
  }
  malformed("", "neither a structure catalog nor an abstract category");
}

ObjectId object_ref(const FiniteCategory& cat, const std::string& name) {
  const auto id = cat.find_object(name);
  if (!id) throw Error(ErrorCode::Usage, "no object named '" + name + "'");
  return *id;
}

ObjectId object_ref(const FiniteCategory& cat, const ordered_json& ref, const std::string& where) {
  const auto name = as_string(ref, where);
  const auto id = cat.find_object(name);
  if (!id) malformed(where, "no object named '" + name + "'");
  return *id;
}

MorphismId morphism_ref(const FiniteCategory& cat, const ordered_json& ref, const std::string& where) {
  const auto name = as_string(ref, where);
  const auto id = cat.find_morphism(name);
  if (!id) malformed(where, "no morphism named '" + name + "'");
  return *id;
}

TruncatedSequence parse_sequence(const FiniteCategory& cat, const ordered_json& doc) {
  TruncatedSequence s;
  const auto& objs = as_array(field(doc, "objects", ""), "objects");
  if (objs.empty()) malformed("objects", "a sequence needs at least one object");
  for (std::size_t i = 0; i < objs.size(); ++i) s.objects.push_back(object_ref(cat, objs[i], at("objects", i)));
  const int n = s.length();
  std::map<std::pair<int, int>, MorphismId> given;
  if (doc.contains("bonding")) {
    const auto& b = doc["bonding"];
    if (!b.is_object()) malformed("bonding", "expected an object");
    for (const auto& [key, spec] : b.items()) {
      const auto w = join("bonding", key);
      const auto arrow = key.find("->");
      int from = -1, to = -1;
      try {
        if (arrow == std::string::npos) throw std::invalid_argument("");
        from = std::stoi(key.substr(0, arrow));
        to = std::stoi(key.substr(arrow + 2));
      } catch (const std::exception&) {
        malformed(w, "key must read 'n->m'");
      }
      if (from < 0 || to >= n || from >= to) malformed(w, "levels out of range");
      MorphismId m;
      if (spec.is_string()) {
        m = morphism_ref(cat, spec, w);
      } else {
        const auto map = int_array(spec, w);
        const auto found = cat.find_by_map(s.objects[from], s.objects[to], map);
        if (!found) malformed(w, "not an arrow between the two levels");
        m = *found;
      }
      if (cat.source(m) != s.objects[from] || cat.target(m) != s.objects[to]) malformed(w, "arrow has the wrong ends");
      given[{from, to}] = m;
    }
  }
  for (int i = 0; i + 1 < n; ++i) {
    const auto it = given.find({i, i + 1});
    if (it == given.end())
      malformed("bonding", "missing '" + std::to_string(i) + "->" + std::to_string(i + 1) + "'");
    s.bonding.push_back(it->second);
  }
  for (const auto& [key, m] : given)
    if (s.bond(cat, key.first, key.second) != m)
      malformed(join("bonding", std::to_string(key.first) + "->" + std::to_string(key.second)),
                "disagrees with the composite of the consecutive bonds");
  return s;
}

ordered_json sequence_to_json(const FiniteCategory& cat, const TruncatedSequence& s) {
  ordered_json objs = ordered_json::array();
  for (ObjectId x : s.objects) objs.push_back(cat.object_name(x));
  ordered_json bond = ordered_json::object();
  for (int i = 0; i + 1 < s.length(); ++i)
    bond[std::to_string(i) + "->" + std::to_string(i + 1)] = cat.morphism_name(s.bonding[i]);
  return {{"objects", objs}, {"bonding", bond}};
}

ordered_json coloring_to_json(const Coloring& chi) { return {{"k", chi.k}, {"values", chi.values}}; }

Coloring coloring_from_json(const FiniteCategory& cat, ObjectId a, ObjectId c, const ordered_json& doc,
                            const std::string& where) {
  Coloring chi;
  const auto hom = cat.hom(a, c);
  chi.domain.assign(hom.begin(), hom.end());
  chi.k = as_int(field(doc, "k", where), join(where, "k"));
  chi.values = int_array(field(doc, "values", where), join(where, "values"));
  if (chi.values.size() != chi.domain.size()) malformed(join(where, "values"), "one color per arrow expected");
  for (int v : chi.values)
    if (v < 0 || v >= chi.k) malformed(join(where, "values"), "color outside the palette");
  return chi;
}

std::map<ObjectId, int> parse_degrees(const FiniteCategory& cat, const ordered_json& doc) {
  std::map<ObjectId, int> out;
  if (!doc.is_object()) malformed("degrees", "expected an object");
  for (const auto& [name, v] : doc.items()) {
    const auto id = cat.find_object(name);
    if (!id) malformed(join("degrees", name), "no object with this name");
    const int t = as_int(v, join("degrees", name));
    if (t < 1) malformed(join("degrees", name), "degrees are at least 1");
    out[*id] = t;
  }
  return out;
}

ordered_json degrees_to_json(const ExpansionContext& ctx) {
  ordered_json out = ordered_json::object();
  for (int r = 0; r < ctx.rep_count(); ++r)
    if (ctx.degree(r) != 1) out[ctx.category().object_name(ctx.representatives()[r])] = ctx.degree(r);
  return out;
}

ExpandedObject parse_expanded(const ExpansionContext& ctx, const ordered_json& doc, const std::string& where) {
  const auto& cat = ctx.category();
  ExpandedObject x;
  x.base = object_ref(cat, field(doc, "base", where), join(where, "base"));
  x.theta.resize(ctx.rep_count());
  for (int r = 0; r < ctx.rep_count(); ++r)
    x.theta[r].assign(cat.hom(ctx.representatives()[r], x.base).size(), 0);
  if (doc.contains("theta")) {
    const auto& th = doc["theta"];
    if (!th.is_object()) malformed(join(where, "theta"), "expected an object");
    for (const auto& [name, colors] : th.items()) {
      const auto w = join(join(where, "theta"), name);
      const auto id = cat.find_object(name);
      if (!id) malformed(w, "no object with this name");
      const auto& reps = ctx.representatives();
      const auto pos = std::find(reps.begin(), reps.end(), *id);
      if (pos == reps.end()) malformed(w, "not a skeleton representative");
      x.theta[pos - reps.begin()] = int_array(colors, w);
    }
  }
  try {
    validate_expanded(ctx, x);
  } catch (const Error& e) {
    malformed(where, e.what());
  }
  return x;
}

ordered_json expanded_to_json(const ExpansionContext& ctx, const ExpandedObject& x) {
  const auto& cat = ctx.category();
  ordered_json th = ordered_json::object();
  for (int r = 0; r < ctx.rep_count(); ++r)
    if (ctx.degree(r) > 1 && !x.theta[r].empty()) th[cat.object_name(ctx.representatives()[r])] = x.theta[r];
  return {{"base", cat.object_name(x.base)}, {"theta", th}};
}

}  // namespace rw::io
