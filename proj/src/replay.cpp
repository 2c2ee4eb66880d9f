#include "replay.hpp"

#include <memory>
#include <set>

#include "rw/error.hpp"

namespace rw::cli {

using io::ordered_json;

namespace {

struct Corrupt {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw Corrupt{why};
}

class Replayer {
 public:
  explicit Replayer(const ordered_json& report) : report_(report) {
    require(report.contains("input") && report["input"].contains("catalog"), "report has no embedded catalog");
    const auto& doc = report["input"]["catalog"];
    cat_ = io::load_category(doc, Execution::Serial);
    if (report.contains("config") && report["config"].value("op", false)) cat_ = cat_.op();
    if (report["input"].contains("sequence")) seq_ = io::parse_sequence(cat_, report["input"]["sequence"]);
  }

  void check(const ordered_json& c) {
    const auto kind = c.at("kind").get<std::string>();
    if (kind == "bad_coloring") bad_coloring(c);
    else if (kind == "amalgam") amalgam(c);
    else if (kind == "claim1") claim1(c);
    else if (kind == "fraisse") fraisse(c);
    else if (kind == "entry") entry(c);
    else if (kind == "homogeneity") homogeneity(c);
    else if (kind == "automorphism") automorphism(c);
    else if (kind == "cocone") cocone(c);
    else if (kind == "expanded_morphism") expanded_morphism(c);
    else if (kind == "action") action(c);
    else if (kind == "mono_failure") mono_failure(c);
    else if (kind == "epi_failure") epi_failure(c);
    else throw Corrupt{"unknown certificate kind '" + kind + "'"};
  }

 private:
  ObjectId obj(const ordered_json& c, const char* key) { return io::object_ref(cat_, c.at(key), key); }
  MorphismId mor(const ordered_json& c, const char* key) { return io::morphism_ref(cat_, c.at(key), key); }
  MorphismId mor(const ordered_json& v) { return io::morphism_ref(cat_, v, "arrow"); }

  bool is_aut(MorphismId h, ObjectId s) {
    return cat_.source(h) == s && cat_.target(h) == s && cat_.inverse(h).has_value();
  }

  const TruncatedSequence& seq() {
    require(seq_.has_value(), "report has no embedded sequence");
    return *seq_;
  }

  const ExpansionContext& ctx() {
    if (!ctx_) {
      const auto& doc = report_["input"]["catalog"];
      std::map<ObjectId, int> degrees;
      if (doc.contains("degrees")) degrees = io::parse_degrees(cat_, doc["degrees"]);
      ctx_ = std::make_unique<ExpansionContext>(cat_, degrees);
    }
    return *ctx_;
  }

  void bad_coloring(const ordered_json& c) {
    const ObjectId cc = obj(c, "C"), b = obj(c, "B"), a = obj(c, "A");
    const int t = c.at("t").get<int>();
    const auto chi = io::coloring_from_json(cat_, a, cc, c.at("coloring"), "coloring");
    for (MorphismId w : cat_.hom(b, cc)) {
      std::set<int> seen;
      for (MorphismId f : cat_.hom(a, b)) seen.insert(chi.values[cat_.index_in_hom(cat_.compose(w, f))]);
      require(static_cast<int>(seen.size()) > t, "copy " + cat_.morphism_name(w) + " sees at most t colors");
    }
  }

  void amalgam(const ordered_json& c) {
    MorphismId g = mor(c, "g"), h = mor(c, "h");
    const MorphismId r = mor(c, "r"), s = mor(c, "s");
    const ObjectId d = obj(c, "D");
    if (c.contains("over")) {
      const MorphismId f = mor(c, "over");
      require(cat_.source(g) == cat_.target(f) && cat_.source(h) == cat_.target(f), "g, h do not leave target(f)");
      g = cat_.compose(g, f);
      h = cat_.compose(h, f);
    }
    require(cat_.source(g) == cat_.source(h), "g and h have different sources");
    require(cat_.source(r) == cat_.target(g) && cat_.source(s) == cat_.target(h), "r, s do not compose");
    require(cat_.target(r) == d && cat_.target(s) == d, "r, s do not land in D");
    require(cat_.compose(r, g) == cat_.compose(s, h), "r . g != s . h");
  }

  void claim1(const ordered_json& c) {
    const ObjectId a = obj(c, "A"), d = obj(c, "D");
    const int k = c.at("k").get<int>();
    std::vector<MorphismId> fs;
    for (const auto& f : c.at("f")) fs.push_back(mor(f));
    require(static_cast<int>(fs.size()) == k, "expected k arrows f_i");
    for (MorphismId f : fs) require(cat_.source(f) == a, "f_i does not start at A");
    const auto chi = io::coloring_from_json(cat_, a, d, c.at("chi"), "chi");
    const MorphismId x = mor(c, "x");
    require(cat_.target(x) == d, "x does not land in D");
    const int j = c.at("avoided").get<int>(), i = c.at("color").get<int>();
    require(0 <= i && i < k && 0 <= j && j < k && i != j, "bad color indices");
    std::set<int> seen;
    for (MorphismId e : cat_.hom(a, cat_.source(x))) seen.insert(chi.values[cat_.index_in_hom(cat_.compose(x, e))]);
    require(static_cast<int>(seen.size()) <= k - 1, "x sees all k colors");
    require(!seen.count(j), "the avoided color occurs on x");
    const MorphismId r = mor(c, "r"), s = mor(c, "s");
    require(cat_.source(s) == cat_.target(fs[j]) && cat_.source(r) == cat_.target(fs[i]), "r, s do not compose");
    require(cat_.target(r) == d && cat_.target(s) == d, "r, s do not land in D");
    const MorphismId u = cat_.compose(s, fs[j]);
    require(chi.values[cat_.index_in_hom(u)] == i, "chi(s . f_j) is not the reported color");
    require(cat_.compose(r, fs[i]) == u, "r . f_i != s . f_j");
  }

  void fraisse(const ordered_json& c) {
    const auto& w = seq();
    const int n = c.at("n").get<int>(), m = c.at("m").get<int>(), k = c.at("k").get<int>();
    require(0 <= n && n <= m && m <= k && k < w.length(), "levels out of order");
    const ObjectId cc = obj(c, "C");
    const MorphismId f = mor(c, "f"), g = mor(c, "g");
    require(cat_.source(f) == w.objects[m] && cat_.target(f) == cc, "f is not W_m -> C");
    require(cat_.source(g) == cc && cat_.target(g) == w.objects[k], "g is not C -> W_k");
    require(cat_.compose(g, cat_.compose(f, w.bond(cat_, n, m))) == w.bond(cat_, n, k), "g . f . w_n^m != w_n^k");
  }

  void entry(const ordered_json& c) {
    const auto& w = seq();
    const int n = c.at("level").get<int>();
    require(0 <= n && n < w.length(), "level out of range");
    const MorphismId e = mor(c, "arrow");
    require(cat_.source(e) == obj(c, "object") && cat_.target(e) == w.objects[n], "arrow has the wrong ends");
  }

  void homogeneity(const ordered_json& c) {
    const ObjectId s = obj(c, "S"), b = obj(c, "B");
    const MorphismId f = mor(c, "f"), e = mor(c, "e"), i = mor(c, "i");
    require(cat_.target(f) == s && cat_.source(e) == cat_.source(f) && cat_.target(e) == b, "f, e have wrong ends");
    require(cat_.source(i) == b && cat_.target(i) == s, "i is not B -> S");
    require(cat_.compose(i, e) == f, "i . e != f");
    std::set<MorphismId> js;
    for (const auto& pair : c.at("j_to_h")) {
      const MorphismId j = mor(pair.at(0)), h = mor(pair.at(1));
      require(cat_.source(j) == b && cat_.target(j) == s, "j is not B -> S");
      require(is_aut(h, s), "h is not an automorphism of S");
      require(cat_.compose(h, cat_.compose(j, e)) == f, "h . j . e != i . e");
      js.insert(j);
    }
    const auto hom = cat_.hom(b, s);
    require(js.size() == hom.size() && std::set<MorphismId>(hom.begin(), hom.end()) == js, "j does not cover hom(B, S)");
  }

  void automorphism(const ordered_json& c) {
    const MorphismId e1 = mor(c, "e1"), e2 = mor(c, "e2"), g = mor(c, "g");
    require(is_aut(g, cat_.target(e1)), "g is not an automorphism");
    require(cat_.compose(g, e1) == e2, "g . e1 != e2");
  }

  void cocone(const ordered_json& c) {
    const auto& w = seq();
    const auto col = io::parse_catalog(c.at("colimit"));
    require(col.structures.size() == 1, "expected one colimit structure");
    const auto& top = col.structures.front();
    const auto maps = c.at("maps").get<std::vector<ElementMap>>();
    require(static_cast<int>(maps.size()) == w.length(), "one cocone map per level expected");
    for (int n = 0; n < w.length(); ++n) {
      const auto& xn = cat_.structure(w.objects[n]);
      require(static_cast<int>(maps[n].size()) == xn.size(), "cocone map has the wrong length");
      for (int v : maps[n]) require(0 <= v && v < top.size(), "cocone map leaves the colimit");
      require(is_embedding(xn, top, maps[n]), "cocone map is not an embedding");
      if (n + 1 < w.length())
        require(compose_maps(maps[n + 1], cat_.morphism_map(w.bonding[n])) == maps[n], "cocone triangle fails");
    }
  }

  // f: src -> dst preserves colors: theta_dst(f . e) = theta_src(e).
  void colors_preserved(MorphismId f, const ExpandedObject& src, const ExpandedObject& dst) {
    const auto& x = ctx();
    require(cat_.source(f) == src.base && cat_.target(f) == dst.base, "arrow has the wrong ends");
    for (int r = 0; r < x.rep_count(); ++r) {
      const auto hom = cat_.hom(x.representatives()[r], src.base);
      for (std::size_t idx = 0; idx < hom.size(); ++idx)
        require(src.theta[r][idx] == dst.theta[r][cat_.index_in_hom(cat_.compose(f, hom[idx]))],
                "a color changes along " + cat_.morphism_name(f));
    }
  }

  void expanded_morphism(const ordered_json& c) {
    colors_preserved(mor(c, "f"), io::parse_expanded(ctx(), c.at("source"), "source"),
                     io::parse_expanded(ctx(), c.at("target"), "target"));
  }

  void action(const ordered_json& c) {
    const auto f_star = io::parse_expanded(ctx(), c.at("f_star"), "f_star");
    const auto moved = io::parse_expanded(ctx(), c.at("result"), "result");
    const MorphismId g = mor(c, "g");
    require(is_aut(g, f_star.base), "g is not an automorphism");
    colors_preserved(g, moved, f_star);
  }

  void mono_failure(const ordered_json& c) {
    const MorphismId f = mor(c, "f"), g = mor(c, "g"), h = mor(c, "h");
    require(g != h && cat_.target(g) == cat_.source(f) && cat_.target(h) == cat_.source(f), "not a cancellation pair");
    require(cat_.compose(f, g) == cat_.compose(f, h), "f . g != f . h");
  }

  void epi_failure(const ordered_json& c) {
    const MorphismId f = mor(c, "f"), g = mor(c, "g"), h = mor(c, "h");
    require(g != h && cat_.source(g) == cat_.target(f) && cat_.source(h) == cat_.target(f), "not a cancellation pair");
    require(cat_.compose(g, f) == cat_.compose(h, f), "g . f != h . f");
  }

  const ordered_json& report_;
  FiniteCategory cat_;
  std::optional<TruncatedSequence> seq_;
  std::unique_ptr<ExpansionContext> ctx_;
};

}  // namespace

ReplaySummary replay(const ordered_json& report) {
  ReplaySummary sum;
  if (!report.is_object()) throw Error(ErrorCode::CorruptCertificate, "a report is a JSON object");
  if (report.contains("exhaustion")) sum.exhaustion = static_cast<int>(report["exhaustion"].size());
  if (!report.contains("certificates") || report["certificates"].empty()) return sum;
  std::unique_ptr<Replayer> r;
  try {
    r = std::make_unique<Replayer>(report);
  } catch (const Corrupt& e) {
    throw Error(ErrorCode::CorruptCertificate, e.why);
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptCertificate, std::string("embedded input: ") + e.what());
  }
  const auto& certs = report["certificates"];
  for (std::size_t i = 0; i < certs.size(); ++i) {
    const std::string where = "certificates[" + std::to_string(i) + "]";
    try {
      r->check(certs[i]);
    } catch (const Corrupt& e) {
      throw Error(ErrorCode::CorruptCertificate, where + ": " + e.why);
    } catch (const Error& e) {
      throw Error(ErrorCode::CorruptCertificate, where + ": " + e.what());
    } catch (const ordered_json::exception& e) {
      throw Error(ErrorCode::CorruptCertificate, where + ": " + e.what());
    }
    ++sum.verified;
    ++sum.by_kind[certs[i]["kind"].get<std::string>()];
  }
  return sum;
}

}  // namespace rw::cli
