#include "rw/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ostream>
#include <set>

#include <CLI11.hpp>

#include "replay.hpp"
#include "rw/amalgam.hpp"
#include "rw/degrees.hpp"
#include "rw/error.hpp"
#include "rw/io.hpp"

namespace rw::cli {

using io::ordered_json;

int exit_code(Status s) {
  switch (s) {
    case Status::Holds: return 0;
    case Status::Fails: return 1;
    case Status::Unknown: return 2;
  }
  return 3;
}

namespace {

struct Options {
  std::string out_path;
  bool verbose = false;
  std::uint64_t seed = 0;
  bool timing = false;
  std::optional<std::uint64_t> nodes;
  std::optional<double> secs;
  bool serial = false;
  int max_certs = 200;
  bool op = false;
  std::string catalog;
  std::vector<std::string> domain;
  int max_size = 0;

  std::string c, b, a;
  int k = 2, t = 1;
  bool oracle = false;
  std::string cnf;

  int kmax = 2, max_b_size = 0, lower_k = 0, lower_n = 2;
  bool no_lf = false;

  bool wap = false, chain = false, claim1 = false;
  int two_of_k = 0, depth = 3;
  std::vector<std::string> f_list, g_list;
  std::string d;

  std::string seq, s;
  int m_max = -1, seq_k_max = -1;
  bool ultra = false;

  std::string write, f;
  int max_candidates = 0;

  int gen_max = 5;
  std::string report;
};

class Session {
 public:
  explicit Session(const Options& o) : o_(o) {}

  ordered_json config = ordered_json::object();
  ordered_json result = ordered_json::object();
  ordered_json input = ordered_json::object();
  ordered_json notes = ordered_json::array();
  std::optional<Status> status;

  void cert(ordered_json c) {
    if (static_cast<int>(certs_.size()) < o_.max_certs) certs_.push_back(std::move(c));
    else ++omitted_;
  }
  void exhaustion(std::string claim, std::optional<std::uint64_t> nodes = {}) {
    ordered_json e{{"claim", std::move(claim)}};
    if (nodes) e["nodes"] = *nodes;
    if (static_cast<int>(exhaustion_.size()) < o_.max_certs) exhaustion_.push_back(std::move(e));
    else ++omitted_;
  }
  void note(std::string n) { notes.push_back(std::move(n)); }

  ordered_json document(const std::vector<std::string>& args, double seconds) const {
    ordered_json doc;
    doc["command"] = args;
    doc["config"] = config;
    doc["status"] = status ? std::string(to_string(*status)) : std::string("DONE");
    doc["result"] = result;
    doc["certificates"] = certs_;
    doc["exhaustion"] = exhaustion_;
    doc["omitted"] = omitted_;
    doc["notes"] = notes;
    doc["input"] = input;
    if (o_.timing) doc["timing"] = {{"seconds", seconds}};
    return doc;
  }

  std::size_t certificate_count() const { return certs_.size(); }

 private:
  const Options& o_;
  ordered_json certs_ = ordered_json::array();
  ordered_json exhaustion_ = ordered_json::array();
  int omitted_ = 0;
};

Execution exec_of(const Options& o) { return o.serial ? Execution::Serial : Execution::Parallel; }

std::uint64_t env_u64(const char* name) {
  const char* v = std::getenv(name);
  if (!v) return 0;
  try {
    std::size_t used = 0;
    const auto x = std::stoull(v, &used);
    if (used != std::string(v).size() || x == 0) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Usage, std::string(name) + " must be a positive integer");
  }
}

double env_double(const char* name) {
  const char* v = std::getenv(name);
  if (!v) return 0;
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != std::string(v).size() || !(x > 0)) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Usage, std::string(name) + " must be a positive number of seconds");
  }
}

ArrowOptions arrow_options(const Options& o, Session& s) {
  ArrowOptions a;
  a.exec = exec_of(o);
  if (auto n = env_u64("RW_BUDGET_NODES")) a.limits.node_budget = n;
  if (auto t = env_double("RW_BUDGET_SECS"); t > 0) a.limits.time_budget_secs = t;
  if (o.nodes) {
    if (*o.nodes == 0) throw Error(ErrorCode::Usage, "--nodes must be positive");
    a.limits.node_budget = *o.nodes;
  }
  if (o.secs) {
    if (!(*o.secs > 0)) throw Error(ErrorCode::Usage, "--secs must be positive");
    a.limits.time_budget_secs = *o.secs;
  }
  s.config["node_budget"] = a.limits.node_budget;
  s.config["time_budget_secs"] = a.limits.time_budget_secs;
  return a;
}

struct Loaded {
  ordered_json doc;
  FiniteCategory cat;
};

Loaded load(const Options& o, Session& s) {
  if (o.catalog.empty()) throw Error(ErrorCode::Usage, "--catalog is required");
  Loaded l{io::read_json(o.catalog), {}};
  l.cat = io::load_category(l.doc, exec_of(o));
  if (o.op) l.cat = l.cat.op();
  s.input["catalog"] = l.doc;
  return l;
}

ObjectId object(const FiniteCategory& cat, const std::string& name, const char* flag) {
  if (name.empty()) throw Error(ErrorCode::Usage, std::string(flag) + " is required");
  return io::object_ref(cat, name);
}

MorphismId morphism(const FiniteCategory& cat, const std::string& name) {
  const auto m = cat.find_morphism(name);
  if (!m) throw Error(ErrorCode::Usage, "no morphism named '" + name + "'");
  return *m;
}

std::vector<ObjectId> domain_of(const Options& o, const FiniteCategory& cat, Session& s) {
  std::vector<ObjectId> out;
  if (!o.domain.empty()) {
    for (const auto& n : o.domain) out.push_back(io::object_ref(cat, n));
    s.config["domain"] = o.domain;
  } else if (o.max_size > 0) {
    for (ObjectId x = 0; x < cat.object_count(); ++x)
      if (cat.has_structure(x) && cat.structure(x).size() <= o.max_size) out.push_back(x);
    s.config["max_size"] = o.max_size;
  }
  return out;
}

std::vector<ObjectId> all_objects(const FiniteCategory& cat) {
  std::vector<ObjectId> out(cat.object_count());
  for (ObjectId x = 0; x < cat.object_count(); ++x) out[x] = x;
  return out;
}

std::string name(const FiniteCategory& cat, MorphismId m) { return cat.morphism_name(m); }

ordered_json names(const FiniteCategory& cat, std::span<const MorphismId> ms) {
  ordered_json out = ordered_json::array();
  for (MorphismId m : ms) out.push_back(cat.morphism_name(m));
  return out;
}

ordered_json object_names(const FiniteCategory& cat, std::span<const ObjectId> xs) {
  ordered_json out = ordered_json::array();
  for (ObjectId x : xs) out.push_back(cat.object_name(x));
  return out;
}

ordered_json structure_json(const Structure& st) {
  io::Catalog one{{"colimit"}, {st}};
  return io::catalog_to_json(one);
}

ordered_json bad_coloring_cert(const FiniteCategory& cat, ObjectId c, ObjectId b, ObjectId a, int t,
                               const Coloring& chi) {
  return {{"kind", "bad_coloring"}, {"C", cat.object_name(c)}, {"B", cat.object_name(b)},
          {"A", cat.object_name(a)}, {"t", t}, {"coloring", io::coloring_to_json(chi)}};
}

ordered_json amalgam_cert(const FiniteCategory& cat, std::optional<MorphismId> over, MorphismId g, MorphismId h,
                          const AmalgamWitness& w) {
  ordered_json c{{"kind", "amalgam"}};
  if (over) c["over"] = name(cat, *over);
  c["g"] = name(cat, g);
  c["h"] = name(cat, h);
  c["D"] = cat.object_name(w.d);
  c["r"] = name(cat, w.r);
  c["s"] = name(cat, w.s);
  return c;
}

// ---- cat ----

void cmd_cat_check(const Options& o, Session& s) {
  auto [doc, cat] = load(o, s);
  AxiomOptions ao;
  ao.check_local_finiteness = !o.no_lf;
  s.config["local_finiteness"] = !o.no_lf;
  const auto r = check_axioms(cat, ao);
  auto st = [](bool b) { return std::string(to_string(b ? Status::Holds : Status::Fails)); };
  s.result = {{"objects", cat.object_count()},
              {"morphisms", cat.morphism_count()},
              {"identity_laws", st(r.identity_laws)},
              {"associativity", st(r.associativity)},
              {"all_mono", st(r.all_mono)},
              {"all_epi", st(r.all_epi)},
              {"directed", st(r.directed)},
              {"dually_directed", st(r.dually_directed)}};
  if (!o.no_lf) s.result["local_finiteness"] = std::string(to_string(r.local_finiteness));
  ordered_json below = ordered_json::object(), above = ordered_json::object();
  for (ObjectId x = 0; x < cat.object_count(); ++x) {
    below[cat.object_name(x)] = object_names(cat, r.below[x]);
    above[cat.object_name(x)] = object_names(cat, r.above[x]);
  }
  s.result["below"] = below;
  s.result["above"] = above;
  if (r.mono_failure) {
    const auto [f, g, h] = *r.mono_failure;
    s.cert({{"kind", "mono_failure"}, {"f", name(cat, f)}, {"g", name(cat, g)}, {"h", name(cat, h)}});
  }
  if (r.epi_failure) {
    const auto [f, g, h] = *r.epi_failure;
    s.cert({{"kind", "epi_failure"}, {"f", name(cat, f)}, {"g", name(cat, g)}, {"h", name(cat, h)}});
  }
  if (r.directed_failure)
    s.exhaustion("no object receives both " + cat.object_name(r.directed_failure->first) + " and " +
                 cat.object_name(r.directed_failure->second));
  if (r.dually_directed_failure)
    s.exhaustion("no object maps into both " + cat.object_name(r.dually_directed_failure->first) + " and " +
                 cat.object_name(r.dually_directed_failure->second));
  if (r.identity_laws && r.associativity) s.exhaustion("identity and associativity laws checked on every composable pair and triple");
  s.note("finite objects: every object is in the catalog, so the finite-objects requirement is vacuous");
  s.status = (r.identity_laws && r.associativity) ? Status::Holds : Status::Fails;
}

void cmd_cat_skeleton(const Options& o, Session& s) {
  auto [doc, cat] = load(o, s);
  const auto sk = skeletonize(cat);
  ordered_json classes = ordered_json::object();
  for (ObjectId x = 0; x < cat.object_count(); ++x)
    classes[cat.object_name(x)] = {{"representative", cat.object_name(sk.representative_of(x))},
                                   {"iso", name(cat, sk.canon_iso[x])}};
  s.result = {{"representatives", object_names(cat, sk.representatives)}, {"classes", classes}};
}

void cmd_cat_op(const Options& o, Session& s) {
  auto [doc, cat] = load(o, s);
  s.result = {{"category", io::tables_to_json(cat.op())}};
}

// ---- arrow ----

void cmd_arrow(const Options& o, Session& s) {
  auto [doc, cat] = load(o, s);
  const auto opts = arrow_options(o, s);
  const ObjectId c = object(cat, o.c, "--C"), b = object(cat, o.b, "--B"), a = object(cat, o.a, "--A");
  s.config["C"] = o.c;
  s.config["B"] = o.b;
  s.config["A"] = o.a;
  s.config["k"] = o.k;
  s.config["t"] = o.t;
  s.config["oracle"] = o.oracle;
  if (!o.cnf.empty()) {
    io::write_text(o.cnf, export_cnf(cat, c, b, a, o.k, o.t));
    s.config["cnf"] = o.cnf;
  }
  ArrowVerdict v;
  try {
    v = o.oracle ? oracle_arrow_check(cat, c, b, a, o.k, o.t) : arrow_check(cat, c, b, a, o.k, o.t, opts);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EmptyHom) throw;
    s.result = {{"degenerate", true}};
    s.note("hom(A, B) is empty: the relation holds vacuously");
    s.status = Status::Holds;
    return;
  }
  s.result = {{"hom_AC", cat.hom(a, c).size()}, {"hom_BC", cat.hom(b, c).size()}, {"nodes", v.stats.nodes}};
  if (v.status == Status::Fails) s.cert(bad_coloring_cert(cat, c, b, a, o.t, *v.bad_coloring));
  if (v.status == Status::Holds)
    s.exhaustion("every " + std::to_string(o.k) + "-coloring of hom(" + o.a + ", " + o.c + ") has a copy of " + o.b +
                     " with at most " + std::to_string(o.t) + " colors",
                 v.stats.nodes);
  if (v.status == Status::Unknown) s.note("search budget exhausted before a verdict");
  s.status = v.status;
}

// ---- degree ----

void cmd_degree(const Options& o, Session& s) {
  auto [doc, cat] = load(o, s);
  DegreeOptions d{arrow_options(o, s), o.max_b_size};
  const ObjectId a = object(cat, o.a, "--A");
  s.config["A"] = o.a;
  s.config["k_max"] = o.kmax;
  s.config["max_b_size"] = o.max_b_size;
  const auto up = degree_upper(cat, a, o.kmax, d);
  ordered_json upper{{"degree", up.degree ? ordered_json(*up.degree) : ordered_json(nullptr)},
                     {"status", std::string(to_string(up.status))},
                     {"k_max", up.k_max}};
  const std::string n_up = up.degree ? std::to_string(*up.degree) : std::string("n");
  ordered_json wit = ordered_json::array();
  for (const auto& c : up.certificates) {
    wit.push_back({{"B", cat.object_name(c.b)}, {"k", c.k}, {"witness", cat.object_name(c.witness)}});
    s.exhaustion(cat.object_name(c.witness) + " -> (" + cat.object_name(c.b) + ")^" + o.a + "_{" +
                 std::to_string(c.k) + "," + n_up + "}");
  }
  upper["witnesses"] = wit;
  ordered_json rej = ordered_json::array();
  for (const auto& [n, c] : up.rejections) {
    rej.push_back({{"n", n}, {"B", cat.object_name(c.b)}, {"k", c.k}});
    s.exhaustion("no catalog object C has C -> (" + cat.object_name(c.b) + ")^" + o.a + "_{" + std::to_string(c.k) +
                 "," + std::to_string(n) + "}");
  }
  upper["rejections"] = rej;
  s.result["upper"] = upper;
  s.status = up.status;
  if (o.lower_k > 0) {
    s.config["lower_k"] = o.lower_k;
    s.config["lower_n"] = o.lower_n;
    const auto lo = degree_lower(cat, a, o.lower_k, o.lower_n, d);
    ordered_json lower{{"k", o.lower_k}, {"n", o.lower_n},
                       {"B", lo.b ? ordered_json(cat.object_name(*lo.b)) : ordered_json(nullptr)},
                       {"incomplete", lo.incomplete}};
    for (const auto& c : lo.certificates) s.cert(bad_coloring_cert(cat, c.c, *lo.b, a, o.lower_n - 1, c.bad_coloring));
    s.result["lower"] = lower;
    *s.status = *s.status && (lo.b ? Status::Holds : lo.incomplete ? Status::Unknown : Status::Fails);
  }
  s.note("degrees are relative to the loaded catalog and k <= k_max");
}

// ---- amalgam ----

void cmd_amalgam(const Options& o, Session& s) {
  auto [doc, cat] = load(o, s);
  const auto dom_objects = domain_of(o, cat, s);
  const Domain dom = dom_objects.empty() ? Domain{} : Domain{std::span<const ObjectId>(dom_objects)};
  const int modes = int(o.wap) + int(o.chain) + int(o.claim1) + int(o.two_of_k > 0);
  if (modes != 1) throw Error(ErrorCode::Usage, "choose exactly one of --wap, --two-of-k, --chain, --claim1");
  s.note("D ranges over the whole loaded category; the other objects over the domain");

  if (o.wap) {
    s.config["mode"] = "wap";
    const auto r = wap_check(cat, dom, exec_of(o));
    ordered_json entries = ordered_json::array();
    for (const auto& e : r.entries) {
      ordered_json en{{"A", cat.object_name(e.a)}, {"candidates_tried", e.candidates_tried}};
      en["arrow"] = e.arrow ? ordered_json(name(cat, e.arrow->f)) : ordered_json(nullptr);
      entries.push_back(en);
      if (e.arrow)
        for (const auto& w : e.arrow->witnesses) s.cert(amalgam_cert(cat, e.arrow->f, w.g, w.h, w.witness));
      else
        s.exhaustion("no arrow out of " + cat.object_name(e.a) + " is an amalgamation arrow");
    }
    s.result = {{"entries", entries}};
    s.status = r.status;
  } else if (o.two_of_k > 0) {
    s.config["mode"] = "two_of_k";
    s.config["k"] = o.two_of_k;
    s.config["A"] = o.a;
    const ObjectId a = object(cat, o.a, "--A");
    const auto r = two_of_k_check(cat, a, o.two_of_k, dom);
    s.result = {{"morphisms", r.morphisms}, {"refutation", names(cat, r.refutation)}};
    if (r.status == Status::Fails)
      s.exhaustion("the refutation arrows are pairwise non-amalgamable over " + o.a);
    else
      s.exhaustion("no " + std::to_string(o.two_of_k) + " arrows out of " + o.a + " are pairwise non-amalgamable");
    s.status = r.status;
  } else if (o.chain) {
    s.config["mode"] = "chain";
    s.config["A"] = o.a;
    s.config["depth"] = o.depth;
    const ObjectId a = object(cat, o.a, "--A");
    const auto ch = failure_chain(cat, a, o.depth, dom, exec_of(o));
    ordered_json steps = ordered_json::array();
    for (const auto& st : ch.steps) steps.push_back({{"f", name(cat, st.f)}, {"g", name(cat, st.g)}, {"h", name(cat, st.h)}});
    s.result = {{"steps", steps}, {"arrows", names(cat, ch.arrows)},
                {"reached_amalgamation_arrow", ch.reached_amalgamation_arrow}};
    s.note("the chain is cut at depth " + std::to_string(o.depth) + "; WAP failure is never asserted from it");
    s.status = ch.reached_amalgamation_arrow ? Status::Holds : Status::Unknown;
  } else {
    s.config["mode"] = "claim1";
    s.config["A"] = o.a;
    s.config["f"] = o.f_list;
    const auto opts = arrow_options(o, s);
    const ObjectId a = object(cat, o.a, "--A");
    std::vector<MorphismId> fs, gs;
    for (const auto& n : o.f_list) fs.push_back(morphism(cat, n));
    for (const auto& n : o.g_list) gs.push_back(morphism(cat, n));
    Claim1Transcript t;
    if (!o.c.empty() || !o.d.empty()) {
      s.config["C"] = o.c;
      s.config["D"] = o.d;
      s.config["g"] = o.g_list;
      t = claim1_extract(cat, a, static_cast<int>(fs.size()), object(cat, o.c, "--C"), object(cat, o.d, "--D"), gs,
                         fs, opts);
    } else {
      t = claim1_search(cat, a, fs, opts);
    }
    const int i = t.color, j = t.avoided;
    s.result = {{"C", cat.object_name(cat.source(t.x))}, {"D", cat.object_name(t.amalgam.d)}, {"x", name(cat, t.x)},
                {"avoided", j}, {"color", i}};
    s.cert({{"kind", "claim1"},
            {"A", o.a},
            {"k", static_cast<int>(fs.size())},
            {"f", o.f_list},
            {"chi", io::coloring_to_json(t.chi)},
            {"D", cat.object_name(t.amalgam.d)},
            {"x", name(cat, t.x)},
            {"avoided", j},
            {"color", i},
            {"r", name(cat, t.amalgam.r)},
            {"s", name(cat, t.amalgam.s)}});
    s.status = Status::Holds;
  }
}

// ---- seq ----

TruncatedSequence load_sequence(const Options& o, const FiniteCategory& cat, Session& s) {
  if (o.seq.empty()) throw Error(ErrorCode::Usage, "--seq is required");
  const auto doc = io::read_json(o.seq);
  auto seq = io::parse_sequence(cat, doc);
  s.input["sequence"] = doc;
  return seq;
}

void cmd_seq_colim(const Options& o, Session& s) {
  auto [doc, cat] = load(o, s);
  const auto seq = load_sequence(o, cat, s);
  const auto col = colimit(cat, seq);
  ordered_json nm = ordered_json::array();
  for (const auto& [n, e] : col.names) nm.push_back({n, e});
  s.result = {{"size", col.structure.size()}, {"names", nm}};
  s.cert({{"kind", "cocone"}, {"colimit", structure_json(col.structure)}, {"maps", col.cocone}});
  s.note("the colimit of a truncated chain is its top stage with points named by least (level, element)");
  s.status = Status::Holds;
}

void cmd_seq_wfcheck(const Options& o, Session& s) {
  auto [doc, cat] = load(o, s);
  const auto seq = load_sequence(o, cat, s);
  auto catalog = domain_of(o, cat, s);
  if (catalog.empty()) catalog = all_objects(cat);
  const int last = seq.length() - 1;
  const int m_max = o.m_max >= 0 ? o.m_max : last, k_max = o.seq_k_max >= 0 ? o.seq_k_max : last;
  s.config["m_max"] = m_max;
  s.config["k_max"] = k_max;
  const auto r = weak_fraisse_check(cat, seq, catalog, m_max, k_max);
  ordered_json entry = ordered_json::object();
  for (const auto& [x, n] : r.entry_level) {
    entry[cat.object_name(x)] = n ? ordered_json(*n) : ordered_json(nullptr);
    if (n)
      s.cert({{"kind", "entry"}, {"object", cat.object_name(x)}, {"level", *n},
              {"arrow", name(cat, cat.hom(x, seq.objects[*n]).front())}});
  }
  ordered_json levels = ordered_json::array();
  for (const auto& l : r.levels) {
    levels.push_back({{"n", l.n}, {"m", l.m ? ordered_json(*l.m) : ordered_json(nullptr)}, {"witnesses", l.witnesses.size()}});
    for (const auto& w : l.witnesses)
      s.cert({{"kind", "fraisse"}, {"n", l.n}, {"m", *l.m}, {"k", w.k}, {"C", cat.object_name(w.c)},
              {"f", name(cat, w.f)}, {"g", name(cat, w.g)}});
  }
  s.result = {{"cofinal", std::string(to_string(r.cofinal))}, {"absorbing", std::string(to_string(r.absorbing))},
              {"entry_level", entry}, {"levels", levels}};
  if (r.status == Status::Holds)
    s.exhaustion("every f out of W_m into a catalog object was matched by a fraisse certificate");
  s.note("truncation: cofinality means phi(last) = last; existential levels are bounded by m_max and k_max");
  s.status = r.status;
}

void cmd_seq_whom(const Options& o, Session& s) {
  auto [doc, cat] = load(o, s);
  auto catalog = domain_of(o, cat, s);
  if (catalog.empty()) catalog = all_objects(cat);
  const ObjectId target = object(cat, o.s, "--S");
  s.config["S"] = o.s;
  s.config["ultra"] = o.ultra;
  const auto r = weak_homogeneity_check(cat, target, catalog);
  for (const auto& w : r.witnesses) {
    ordered_json jh = ordered_json::array();
    for (const auto& [j, h] : w.j_to_h) jh.push_back({name(cat, j), name(cat, h)});
    s.cert({{"kind", "homogeneity"}, {"S", o.s}, {"f", name(cat, w.f)}, {"B", cat.object_name(w.b)},
            {"e", name(cat, w.e)}, {"i", name(cat, w.i)}, {"j_to_h", jh}});
  }
  if (r.failure)
    s.exhaustion("no catalog B works for " + name(cat, r.failure->second));
  s.result = {{"witnesses", r.witnesses.size()},
              {"failure", r.failure ? ordered_json(name(cat, r.failure->second)) : ordered_json(nullptr)}};
  if (o.ultra) {
    const auto u = ultrahomogeneity_check(cat, target, catalog);
    s.result["ultrahomogeneous"] = std::string(to_string(u.status));
    for (const auto& [e1, e2, g] : u.witnesses)
      s.cert({{"kind", "automorphism"}, {"e1", name(cat, e1)}, {"e2", name(cat, e2)}, {"g", name(cat, g)}});
    if (u.failure)
      s.exhaustion("no automorphism sends " + name(cat, u.failure->first) + " to " + name(cat, u.failure->second));
  }
  s.status = r.status;
}

// ---- expand ----

struct Expanded {
  Loaded base;
  std::unique_ptr<ExpansionContext> ctx;
  ExpandedCatalog fibers;
  bool listed = false;  // fibers came from the file
};

Expanded load_expanded(const Options& o, Session& s) {
  Expanded e{load(o, s), nullptr, {}, false};
  const auto& doc = e.base.doc;
  std::map<ObjectId, int> degrees;
  if (doc.contains("degrees")) degrees = io::parse_degrees(e.base.cat, doc["degrees"]);
  e.ctx = std::make_unique<ExpansionContext>(e.base.cat, degrees);
  if (doc.contains("expansions")) {
    e.listed = true;
    e.fibers.assign(e.base.cat.object_count(), {});
    const auto& xs = doc["expansions"];
    if (!xs.is_array()) throw Error(ErrorCode::MalformedInput, "expansions: expected an array");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      auto x = io::parse_expanded(*e.ctx, xs[i], "expansions[" + std::to_string(i) + "]");
      e.fibers[x.base].push_back(std::move(x));
    }
  } else {
    e.fibers = expand_catalog(*e.ctx);
  }
  s.config["fibers"] = e.listed ? "listed" : "enumerated";
  return e;
}

ordered_json expanded_morphism_cert(const ExpansionContext& ctx, MorphismId f, const ExpandedObject& src,
                                    const ExpandedObject& dst) {
  return {{"kind", "expanded_morphism"}, {"f", name(ctx.category(), f)}, {"source", io::expanded_to_json(ctx, src)},
          {"target", io::expanded_to_json(ctx, dst)}};
}

void cmd_expand_build(const Options& o, Session& s) {
  auto e = load_expanded(o, s);
  const auto& cat = e.base.cat;
  ordered_json counts = ordered_json::object();
  ordered_json list = ordered_json::array();
  for (ObjectId x = 0; x < cat.object_count(); ++x) {
    counts[cat.object_name(x)] = e.fibers[x].size();
    for (const auto& xs : e.fibers[x]) list.push_back(io::expanded_to_json(*e.ctx, xs));
  }
  s.result = {{"degrees", io::degrees_to_json(*e.ctx)}, {"fiber_sizes", counts}};
  if (!o.write.empty()) {
    auto out = e.base.doc;
    out["degrees"] = io::degrees_to_json(*e.ctx);
    out["expansions"] = list;
    io::write_text(o.write, out.dump(2) + "\n");
    s.config["write"] = o.write;
  }
}

void cmd_expand_check(const Options& o, Session& s) {
  auto e = load_expanded(o, s);
  const auto& cat = e.base.cat;
  const auto r = check_forgetful(*e.ctx, e.fibers);
  auto st = [](Status x) { return std::string(to_string(x)); };
  ordered_json counts = ordered_json::object();
  for (ObjectId x = 0; x < cat.object_count(); ++x)
    counts[cat.object_name(x)] = {r.fiber_counts[x].first, r.fiber_counts[x].second};
  s.result = {{"surjective", st(r.surjective)},     {"injective_on_homs", st(r.injective_on_homs)},
              {"reasonable", st(r.reasonable)},     {"unique_restrictions", st(r.unique_restrictions)},
              {"precompact", st(r.precompact)},     {"fiber_counts", counts},
              {"counts_match", r.counts_match},     {"reasonable_checked", r.reasonable_checked},
              {"restrictions_checked", r.restrictions_checked}};
  for (const auto& w : r.reasonable_witnesses) {
    const ObjectId a = cat.source(w.e), b = cat.target(w.e);
    s.cert(expanded_morphism_cert(*e.ctx, w.e, e.fibers[a][w.a_star], e.fibers[b][w.b_star]));
  }
  if (r.empty_fiber) s.exhaustion("empty fiber over " + cat.object_name(*r.empty_fiber));
  if (r.injective_failure) s.exhaustion(*r.injective_failure);
  if (r.reasonable_failure)
    s.exhaustion("expansion " + std::to_string(r.reasonable_failure->first) + " does not extend along " +
                 name(cat, r.reasonable_failure->second));
  if (r.restriction_failure)
    s.exhaustion("expansion " + std::to_string(r.restriction_failure->first) + " has no unique restriction along " +
                 name(cat, r.restriction_failure->second));
  if (r.unique_restrictions == Status::Holds)
    s.exhaustion("every restriction occurs exactly once in its fiber (" + std::to_string(r.restrictions_checked) +
                 " checked)");
  s.status = r.status();
}

void cmd_expand_orbits(const Options& o, Session& s) {
  auto e = load_expanded(o, s);
  const auto& cat = e.base.cat;
  const ObjectId f = object(cat, o.f, "--F");
  s.config["F"] = o.f;
  const auto dom = domain_of(o, cat, s);
  const auto r = orbit_age_analysis(*e.ctx, f, dom.empty() ? ObjectFilter{} : ObjectFilter{std::span<const ObjectId>(dom)});
  ordered_json expansions = ordered_json::array();
  for (const auto& x : r.expansions) expansions.push_back(io::expanded_to_json(*e.ctx, x));
  ordered_json ages = ordered_json::array();
  for (const auto& a : r.ages) ages.push_back(a.size());
  s.result = {{"catalog", object_names(cat, r.catalog)},
              {"expansions", r.expansions.size()},
              {"orbits", r.orbits},
              {"age_of", r.age_of},
              {"age_sizes", ages},
              {"minimal_ages", r.minimal_ages},
              {"selected", r.selected},
              {"selected_expansion", expansions[r.selected]},
              {"orbit_invariance", std::string(to_string(r.orbit_invariance))}};
  const auto auts = cat.automorphisms(f);
  for (const auto& x : r.expansions)
    for (MorphismId g : auts) {
      const auto y = logical_action(*e.ctx, x, g);
      s.cert({{"kind", "action"}, {"g", name(cat, g)}, {"f_star", io::expanded_to_json(*e.ctx, x)},
              {"result", io::expanded_to_json(*e.ctx, y)}});
    }
  if (r.invariance_failure)
    s.exhaustion("expansions " + std::to_string(r.invariance_failure->first) + " and " +
                 std::to_string(r.invariance_failure->second) + " share an orbit but not an age");
  s.note("orbit closures are the orbits themselves: fibers are finite and discrete");
  s.status = r.orbit_invariance;
}

void cmd_expand_ep(const Options& o, Session& s) {
  auto e = load_expanded(o, s);
  const auto& cat = e.base.cat;
  s.config["max_candidates"] = o.max_candidates;
  const auto r = expansion_property_check(*e.ctx, e.fibers, o.max_candidates);
  ordered_json entries = ordered_json::array();
  for (const auto& en : r.entries) {
    entries.push_back({{"A", cat.object_name(en.a)},
                       {"B", en.b ? ordered_json(cat.object_name(*en.b)) : ordered_json(nullptr)},
                       {"candidates_tried", en.candidates_tried}});
    if (!en.b) {
      s.exhaustion("no candidate B absorbs every expansion of " + cat.object_name(en.a));
      continue;
    }
    for (const auto& as : e.fibers[en.a])
      for (const auto& bs : e.fibers[*en.b]) {
        std::optional<MorphismId> hit;
        for (MorphismId m : cat.hom(en.a, *en.b))
          if (is_expanded_morphism(*e.ctx, m, as, bs)) {
            hit = m;
            break;
          }
        if (!hit) throw Error(ErrorCode::CorruptCertificate, "expansion property entry without a morphism");
        s.cert(expanded_morphism_cert(*e.ctx, *hit, as, bs));
      }
  }
  s.result = {{"direct", std::string(to_string(r.direct))},
              {"alternative", std::string(to_string(r.alternative))},
              {"disagreement", r.disagreement},
              {"entries", entries}};
  s.status = r.direct;
}

// ---- gen ----

std::string graph_name(const Structure& g, int index_in_size) {
  const int n = g.size();
  const auto key = canonical_form(g).structure;
  if (n >= 2 && key == canonical_form(path_graph(n)).structure && n != 2) return "P" + std::to_string(n);
  if (key == canonical_form(complete_graph(n)).structure) return "K" + std::to_string(n);
  if (key == canonical_form(empty_graph(n)).structure) return "E" + std::to_string(n);
  return "G" + std::to_string(n) + "_" + std::to_string(index_in_size);
}

void cmd_gen(const std::string& kind, const Options& o, std::ostream& out) {
  if (o.gen_max < 1) throw Error(ErrorCode::Usage, "--max must be positive");
  io::Catalog cat;
  if (kind == "lo") {
    for (int n = 1; n <= o.gen_max; ++n) {
      cat.names.push_back("LO" + std::to_string(n));
      cat.structures.push_back(linear_order(n));
    }
  } else {
    int prev = 0, idx = 0;
    for (const auto& g : all_graphs(o.gen_max)) {
      idx = g.size() == prev ? idx + 1 : 0;
      prev = g.size();
      cat.names.push_back(graph_name(g, idx));
      cat.structures.push_back(g);
    }
  }
  const auto text = io::catalog_to_json(cat).dump(2) + "\n";
  if (o.out_path.empty()) out << text;
  else io::write_text(o.out_path, text);
}

void human(const ordered_json& doc, std::ostream& os) {
  os << "status: " << doc["status"].get<std::string>() << "\n";
  for (const auto& [k, v] : doc["result"].items())
    if (v.is_primitive()) os << k << ": " << v.dump() << "\n";
  os << "certificates: " << doc["certificates"].size() << " (" << doc["omitted"].get<int>() << " omitted)\n";
  for (const auto& n : doc["notes"]) os << "note: " << n.get<std::string>() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Ramsey degrees, amalgamation and expansions over finite categories", "rw"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", o.out_path, "Write the report (or generated catalog) here");
  app.add_flag("-v,--verbose", o.verbose, "Also print a human summary");
  app.add_option("--seed", o.seed, "Recorded in every report");
  app.add_flag("--timing", o.timing, "Include wall-clock time in the report");
  app.add_option("--nodes", o.nodes, "Search node budget (overrides RW_BUDGET_NODES)");
  app.add_option("--secs", o.secs, "Search time budget (overrides RW_BUDGET_SECS)");
  app.add_flag("--serial", o.serial, "Use the serial search kernels");
  app.add_option("--max-certs", o.max_certs, "Cap on emitted certificates")->check(CLI::NonNegativeNumber);
  app.add_flag("--op", o.op, "Run on the opposite category");
  app.add_option("--catalog", o.catalog, "Catalog or abstract category file");
  app.add_option("--domain", o.domain, "Objects the universal quantifiers range over")->delimiter(',');
  app.add_option("--max-size", o.max_size, "Domain: objects with at most this many elements");

  auto* cat = app.add_subcommand("cat", "Category tables");
  cat->require_subcommand(1);
  auto* cat_check = cat->add_subcommand("check", "Category axioms and structural properties");
  cat_check->add_flag("--no-local-finiteness", o.no_lf);
  auto* cat_skel = cat->add_subcommand("skeleton", "Isomorphism classes and representatives");
  auto* cat_op = cat->add_subcommand("op", "Opposite category as tables");

  auto* arrow = app.add_subcommand("arrow", "Decide C -> (B)^A_{k,t}");
  arrow->add_option("--C", o.c)->required();
  arrow->add_option("--B", o.b)->required();
  arrow->add_option("--A", o.a)->required();
  arrow->add_option("-k", o.k)->check(CLI::PositiveNumber);
  arrow->add_option("-t", o.t)->check(CLI::PositiveNumber);
  arrow->add_flag("--oracle", o.oracle, "Brute-force enumeration instead of the pruned search");
  arrow->add_option("--cnf", o.cnf, "Write the DIMACS encoding here");

  auto* degree = app.add_subcommand("degree", "Catalog-relative small Ramsey degree of A");
  degree->add_option("--A", o.a)->required();
  degree->add_option("--kmax", o.kmax)->check(CLI::PositiveNumber);
  degree->add_option("--max-b-size", o.max_b_size)->check(CLI::NonNegativeNumber);
  degree->add_option("--lower-k", o.lower_k, "Also search a lower-bound certificate with k colors");
  degree->add_option("--lower-n", o.lower_n, "Lower bound to certify");

  auto* amalgam = app.add_subcommand("amalgam", "Amalgamation properties");
  amalgam->add_flag("--wap", o.wap);
  amalgam->add_option("--two-of-k", o.two_of_k);
  amalgam->add_flag("--chain", o.chain);
  amalgam->add_flag("--claim1", o.claim1);
  amalgam->add_option("--A", o.a);
  amalgam->add_option("--depth", o.depth);
  amalgam->add_option("--f", o.f_list, "Arrows f_i out of A (repeatable)");
  amalgam->add_option("--g", o.g_list, "Arrows g_i: B_i -> C (repeatable)");
  amalgam->add_option("--C", o.c);
  amalgam->add_option("--D", o.d);

  auto* seq = app.add_subcommand("seq", "Truncated sequences");
  seq->require_subcommand(1);
  auto* seq_colim = seq->add_subcommand("colim", "Colimit and cocone");
  auto* seq_wf = seq->add_subcommand("wfcheck", "Weak Fraisse sequence check");
  auto* seq_whom = seq->add_subcommand("whom", "Weak homogeneity of an object");
  for (auto* sc : {seq_colim, seq_wf}) sc->add_option("--seq", o.seq)->required();
  seq_wf->add_option("--m-max", o.m_max);
  seq_wf->add_option("--k-max", o.seq_k_max);
  seq_whom->add_option("--S", o.s)->required();
  seq_whom->add_flag("--ultra", o.ultra, "Also check ultrahomogeneity");

  auto* expand = app.add_subcommand("expand", "Expansions");
  expand->require_subcommand(1);
  auto* ex_build = expand->add_subcommand("build", "Enumerate the fibers");
  ex_build->add_option("--write", o.write, "Write the expanded catalog here");
  auto* ex_check = expand->add_subcommand("check", "Forgetful functor properties");
  auto* ex_orbits = expand->add_subcommand("orbits", "Logical action orbits and ages");
  ex_orbits->add_option("--F", o.f)->required();
  auto* ex_ep = expand->add_subcommand("ep", "Expansion property");
  ex_ep->add_option("--max-candidates", o.max_candidates)->check(CLI::NonNegativeNumber);

  auto* replay_cmd = app.add_subcommand("replay", "Re-verify the certificates of a report");
  replay_cmd->add_option("report", o.report)->required();

  auto* gen = app.add_subcommand("gen", "Write a standard catalog");
  gen->require_subcommand(1);
  auto* gen_lo = gen->add_subcommand("lo", "Linear orders LO1..LOn");
  auto* gen_graphs = gen->add_subcommand("graphs", "Graphs up to isomorphism");
  for (auto* g : {gen_lo, gen_graphs}) g->add_option("--max", o.gen_max);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 3;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (gen->parsed()) {
      cmd_gen(gen_lo->parsed() ? "lo" : "graphs", o, out);
      return 0;
    }
    Session s(o);
    s.config["seed"] = o.seed;
    s.config["serial"] = o.serial;
    s.config["op"] = o.op;
    s.config["max_certs"] = o.max_certs;
    if (replay_cmd->parsed()) {
      const auto summary = replay(io::read_json(o.report));
      s.result = {{"verified", summary.verified}, {"by_kind", summary.by_kind}, {"exhaustion", summary.exhaustion}};
      s.note("exhaustion statements are counted, not re-searched");
      s.status = Status::Holds;
    } else if (cat_check->parsed()) cmd_cat_check(o, s);
    else if (cat_skel->parsed()) cmd_cat_skeleton(o, s);
    else if (cat_op->parsed()) cmd_cat_op(o, s);
    else if (arrow->parsed()) cmd_arrow(o, s);
    else if (degree->parsed()) cmd_degree(o, s);
    else if (amalgam->parsed()) cmd_amalgam(o, s);
    else if (seq_colim->parsed()) cmd_seq_colim(o, s);
    else if (seq_wf->parsed()) cmd_seq_wfcheck(o, s);
    else if (seq_whom->parsed()) cmd_seq_whom(o, s);
    else if (ex_build->parsed()) cmd_expand_build(o, s);
    else if (ex_check->parsed()) cmd_expand_check(o, s);
    else if (ex_orbits->parsed()) cmd_expand_orbits(o, s);
    else if (ex_ep->parsed()) cmd_expand_ep(o, s);

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto doc = s.document(args, secs);
    const auto text = doc.dump(2) + "\n";
    if (o.out_path.empty()) out << text;
    else io::write_text(o.out_path, text);
    if (o.verbose) human(doc, o.out_path.empty() ? err : out);
    return s.status ? exit_code(*s.status) : 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::BudgetExceeded ? 2 : 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace rw::cli
