#pragma once

// Chains, brute-force transformation enumeration and random transformations
// shared by the sequence tests and the acceptance suite.

#include <functional>
#include <random>

#include "rw/error.hpp"
#include "rw/sequences.hpp"

namespace seqtest {

using namespace rw;

// LO chain through the given object ids, each bond being the given map.
inline TruncatedSequence chain(const FiniteCategory& c, std::vector<ObjectId> objs, bool shift = false) {
  TruncatedSequence s{objs, {}};
  for (std::size_t n = 0; n + 1 < objs.size(); ++n) {
    const int k = c.structure(objs[n]).size();
    auto map = identity_map(k);
    if (shift)
      for (int& v : map) v += c.structure(objs[n + 1]).size() - k;
    s.bonding.push_back(*c.find_by_map(objs[n], objs[n + 1], map));
  }
  return s;
}

inline ElementMap bond_map(const FiniteCategory& c, const TruncatedSequence& s, int n, int m) {
  ElementMap out = identity_map(c.structure(s.objects[n]).size());
  for (int i = n; i < m; ++i) out = compose_maps(c.morphism_map(s.bonding[i]), out);
  return out;
}

// Bonds are embeddings, so agreement at some level is agreement at the last one.
inline bool oracle_equiv(const FiniteCategory& c, const TruncatedSequence& y, const Transformation& a,
                  const Transformation& b) {
  const int last = y.length() - 1;
  for (std::size_t n = 0; n < a.phi.size(); ++n) {
    const auto fa = compose_maps(bond_map(c, y, a.phi[n], last), c.morphism_map(a.components[n]));
    const auto fb = compose_maps(bond_map(c, y, b.phi[n], last), c.morphism_map(b.components[n]));
    if (fa != fb) return false;
  }
  return true;
}

inline std::vector<Transformation> all_transformations(const FiniteCategory& c, const TruncatedSequence& x,
                                                const TruncatedSequence& y) {
  std::vector<Transformation> out;
  Transformation t;
  std::function<void(int)> go = [&](int n) {
    if (n == x.length()) {
      try {
        validate_transformation(c, x, y, t);
        out.push_back(t);
      } catch (const Error&) {
      }
      return;
    }
    for (int p = n == 0 ? 0 : t.phi.back(); p < y.length(); ++p)
      for (MorphismId f : c.hom(x.objects[n], y.objects[p])) {
        t.phi.push_back(p);
        t.components.push_back(f);
        go(n + 1);
        t.phi.pop_back();
        t.components.pop_back();
      }
  };
  go(0);
  return out;
}

inline TruncatedSequence random_chain(const FiniteCategory& c, std::mt19937& rng, int len, int top) {
  TruncatedSequence s;
  s.objects.resize(len);
  s.objects[len - 1] = top;
  for (int n = len - 2; n >= 0; --n) s.objects[n] = std::uniform_int_distribution<int>(0, s.objects[n + 1])(rng);
  for (int n = 0; n + 1 < len; ++n) {
    const auto hom = c.hom(s.objects[n], s.objects[n + 1]);
    s.bonding.push_back(hom[std::uniform_int_distribution<std::size_t>(0, hom.size() - 1)(rng)]);
  }
  return s;
}

// Picks the top component, then factors each lower one through a random level of Y.
inline Transformation random_transformation(const FiniteCategory& c, const TruncatedSequence& x, const TruncatedSequence& y,
                                     std::mt19937& rng) {
  const int nx = x.length();
  Transformation t;
  t.phi.assign(nx, y.length() - 1);
  t.components.assign(nx, 0);
  const auto top = c.hom(x.objects[nx - 1], y.objects.back());
  t.components[nx - 1] = top[std::uniform_int_distribution<std::size_t>(0, top.size() - 1)(rng)];
  for (int n = nx - 2; n >= 0; --n) {
    const MorphismId target = c.compose(t.components[n + 1], x.bonding[n]);
    for (int p = std::uniform_int_distribution<int>(0, t.phi[n + 1])(rng);; ++p) {
      if (auto g = factor_through(c, target, y.bond(c, p, t.phi[n + 1]))) {
        t.phi[n] = p;
        t.components[n] = *g;
        break;
      }
    }
  }
  return t;
}

}  // namespace seqtest
