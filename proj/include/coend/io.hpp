#pragma once
// JSON formats for functors, finite structures, structures on ℕ with finite
// relations, and finite presheaves. Every loader throws LoadError with a
// 1-based line and column.
//
// functor:    {"name": "F", "bound": 2, "values": [["a","b"], ["*"], ["*"]],
//              "actions": {"0->1:": [0, 0], "1->1:0": [0], ...}}
//             one entry per function [k] -> [l], k, l <= bound, keyed "k->l:v_0,...,v_{k-1}";
//             each maps element indices of F[k] to element indices of F[l].
// structure:  {"carrier": ["0","1"], "relations": [{"name": "R", "arity": 3, "tuples": [[1,0,0], ["0","1","0"]]}]}
//             tuple entries are carrier indices or labels.
// nat:        {"name": "s", "relations": [{"name": "E", "arity": 2, "tuples": [[0,1], [1,2]]}]}
// presheaf:   {"objects": [{"name": "v", "labels": ["0","1"]}],
//              "edges": [{"name": "e", "source": "v", "target": "v", "map": [1, 0]}]}

#include <string>

#include "coend/functor.hpp"
#include "coend/nat_structure.hpp"
#include "coend/presheaf.hpp"
#include "coend/relational.hpp"
#include "json.hpp"

namespace coend {

std::string read_text_file(const std::string& path);

TruncatedFunctor load_functor(const std::string& text);
nlohmann::json functor_to_json(const TruncatedFunctor& f);

RelStructure load_structure(const std::string& text);
nlohmann::json structure_to_json(const RelStructure& a);

NatStructure load_nat_structure(const std::string& text);

FinitePresheaf load_presheaf(const std::string& text);
nlohmann::json presheaf_to_json(const FinitePresheaf& p);

/// A built-in name ("rep:<s>", "pow", "ine", "ine2") or a path to a functor file.
TruncatedFunctor resolve_functor(const std::string& spec, std::size_t bound);
/// "one-in-three", "two-point", "singleton" or a structure file.
RelStructure resolve_structure(const std::string& spec);
/// "nat-order" or a nat structure file.
NatStructure resolve_nat_structure(const std::string& spec);
/// "one-in-three", "two-point", "singleton" or a presheaf file.
FinitePresheaf resolve_presheaf(const std::string& spec);

}  // namespace coend
