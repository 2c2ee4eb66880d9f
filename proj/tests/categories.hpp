#pragma once

// Catalog builders shared by the tests.

#include <string>
#include <vector>

#include "rw/category.hpp"

namespace testcat {

inline rw::FiniteCategory lo(int max) {
  std::vector<std::string> names;
  std::vector<rw::Structure> cat;
  for (int n = 1; n <= max; ++n) {
    names.push_back("LO" + std::to_string(n));
    cat.push_back(rw::linear_order(n));
  }
  return rw::FiniteCategory::from_structures(names, cat);
}

inline rw::FiniteCategory graphs(int max) {
  const auto g = rw::all_graphs(max);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < g.size(); ++i) names.push_back("G" + std::to_string(i));
  return rw::FiniteCategory::from_structures(names, g);
}

inline rw::ObjectId find_structure(const rw::FiniteCategory& c, const rw::Structure& s) {
  const auto key = rw::canonical_form(s).structure;
  for (rw::ObjectId x = 0; x < c.object_count(); ++x)
    if (rw::canonical_form(c.structure(x)).structure == key) return x;
  return -1;
}

}  // namespace testcat
