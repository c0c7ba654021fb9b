#pragma once

#include <string>
#include <variant>

#include "json.hpp"

#include "cartan/crossed_product.hpp"
#include "cartan/equiv_rel.hpp"
#include "cartan/extraction.hpp"

namespace cartan {

using json = nlohmann::json;

// Parsers throw MalformedInput (or the constructor's own error) on bad input.

json to_json(const Rational& r);
Rational rational_from_json(const json& j);

json to_json(const WeightedSet& w);
WeightedSet weighted_set_from_json(const json& j);

json to_json(const Groupoid& g);
Groupoid groupoid_from_json(const json& j);

// Elements, mul triples and idempotent embedding listed in id order.
json to_json(const InvSemigroup& I);
InvSemigroup isg_from_json(const json& j);

// Rows of [re, im] pairs.
json to_json(const Mat& m);
Mat mat_from_json(const json& j);

json to_json(const MultiMatrixAlgebra& a);
MultiMatrixAlgebra algebra_from_json(const json& j);
json to_json(const Element& x);

json to_json(const Inclusion& inc);
Inclusion inclusion_from_json(const json& j);

json to_json(const CocycleAction& a);
CocycleAction action_from_json(const json& j);

json to_json(const EquivRel& r);
EquivRel relation_from_json(const json& j, const WeightedSet& base);
json to_json(const SubInclusion& inc);
SubInclusion subinclusion_from_json(const json& j);

json to_json(const Report& r);
json to_json(const Extraction& ex);

// Tagged instance files: {"kind": ..., ...}.
using Instance = std::variant<Groupoid, InvSemigroup, Inclusion, CocycleAction, SubInclusion>;
std::string kind_of(const Instance& x);
json instance_json(const Instance& x);
Instance instance_from_json(const json& j);

// FNV-1a over the canonical dump, as 16 hex digits.
std::string digest(const json& j);

} // namespace cartan
