#pragma once
// JSON wire formats:
//   tree/trace:  {"label": null|0|1, "children": [ ... ]}   (root label is null)
//   shape:       {"kind":"kary","k":K,"d":D} | {"kind":"spider","n":N,"d":D}
//   censored-away trace on the CLI stream: the JSON literal `null`
// Label strings accept either a 0/1 string of length n or "0x"-prefixed hex
// whose value, written in binary and left-padded to n bits, gives the labels
// most-significant bit first.

#include <string>

#include "json.hpp"
#include "treerec/tree.hpp"

namespace treerec {

nlohmann::json tree_to_json(const LabeledOrderedTree& t);
LabeledOrderedTree tree_from_json(const nlohmann::json& j);

nlohmann::json shape_to_json(const TreeShape& s);
TreeShape shape_from_json(const nlohmann::json& j);

Labels parse_labels(const std::string& text, std::int64_t n);
std::string labels_to_bit_string(const Labels& labels);

}  // namespace treerec
