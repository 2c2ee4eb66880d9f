#pragma once

// JSON reading and writing for catalogs, abstract categories, sequences and
// expanded catalogs. Every parse error is a MalformedInput naming the path
// inside the document, e.g. `structures[2].relations.E[0]`.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rw/arrows.hpp"
#include "rw/expansion.hpp"
#include "rw/sequences.hpp"

namespace rw::io {

using nlohmann::ordered_json;

struct Catalog {
  std::vector<std::string> names;
  std::vector<Structure> structures;
};

ordered_json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

Catalog parse_catalog(const ordered_json& doc);
ordered_json catalog_to_json(const Catalog& catalog);

CategoryTables parse_tables(const ordered_json& doc);
/// The abstract form of any category (composition table included).
ordered_json tables_to_json(const FiniteCategory& cat);

/// A document with `structures` is a catalog, one with `objects` an abstract category.
FiniteCategory load_category(const ordered_json& doc, Execution exec = Execution::Parallel);
bool is_catalog(const ordered_json& doc);

ObjectId object_ref(const FiniteCategory& cat, const ordered_json& ref, const std::string& where);
ObjectId object_ref(const FiniteCategory& cat, const std::string& name);
MorphismId morphism_ref(const FiniteCategory& cat, const ordered_json& ref, const std::string& where);

/// {objects: [name], bonding: {"n->m": embedding}}; an embedding is a morphism
/// name or an element map. Consecutive bonds are required; others must agree
/// with the composite.
TruncatedSequence parse_sequence(const FiniteCategory& cat, const ordered_json& doc);
ordered_json sequence_to_json(const FiniteCategory& cat, const TruncatedSequence& s);

ordered_json coloring_to_json(const Coloring& chi);
Coloring coloring_from_json(const FiniteCategory& cat, ObjectId a, ObjectId c, const ordered_json& doc,
                            const std::string& where);

/// `degrees: {name: t}` of an expanded catalog file.
std::map<ObjectId, int> parse_degrees(const FiniteCategory& cat, const ordered_json& doc);
ordered_json degrees_to_json(const ExpansionContext& ctx);
/// {base, theta: {rep name: [colors in hom order]}}.
ExpandedObject parse_expanded(const ExpansionContext& ctx, const ordered_json& doc, const std::string& where);
ordered_json expanded_to_json(const ExpansionContext& ctx, const ExpandedObject& x);

}  // namespace rw::io
