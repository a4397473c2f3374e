#include "cgaedit/operation_chain.hpp"

#include <cmath>

#include "cgaedit/errors.hpp"

namespace cgaedit {

std::string_view to_string(OpKind kind) {
  switch (kind) {
    case OpKind::translate: return "translate";
    case OpKind::rotate: return "rotate";
    case OpKind::dilate: return "dilate";
    case OpKind::affine: return "affine";
  }
  return "unknown";
}

OpKind op_kind_from_string(std::string_view name) {
  if (name == "translate") return OpKind::translate;
  if (name == "rotate") return OpKind::rotate;
  if (name == "dilate") return OpKind::dilate;
  if (name == "affine") return OpKind::affine;
  throw ConfigError("unknown operation kind: " + std::string(name));
}

nlohmann::ordered_json chain_to_json(const OperationChain &chain) {
  auto doc = nlohmann::ordered_json::array();
  for (const auto &op : chain.ops) doc.push_back({{"op", to_string(op.kind)}, {"params", op.params}});
  return doc;
}

// Besides the canonical {"op", "params"} form, task files may use the
// friendlier {"op":"translate","v":[..]}, {"op":"rotate","axis":[..],
// "angle_rad":a} and {"op":"dilate","factor":s} spellings.
OperationChain chain_from_json(const nlohmann::ordered_json &doc) {
  if (!doc.is_array()) throw ConfigError("operation chain must be an array");
  OperationChain chain;
  try {
    for (const auto &item : doc) {
      ChainOp op;
      op.kind = op_kind_from_string(item.at("op").get<std::string>());
      if (item.contains("params")) {
        op.params = item.at("params").get<std::vector<double>>();
      } else if (op.kind == OpKind::translate) {
        op.params = item.at("v").get<std::vector<double>>();
      } else if (op.kind == OpKind::rotate) {
        auto axis = item.at("axis").get<std::vector<double>>();
        const double angle = item.at("angle_rad").get<double>();
        if (axis.size() != 3) throw ConfigError("rotate axis must have 3 entries");
        const double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
        if (n == 0.0) throw ConfigError("rotate axis must be nonzero");
        op.params = {axis[0] / n * angle, axis[1] / n * angle, axis[2] / n * angle};
      } else if (op.kind == OpKind::dilate) {
        op.params = {item.at("factor").get<double>()};
      } else {
        throw ConfigError("affine operations need explicit params");
      }
      chain.ops.push_back(std::move(op));
    }
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("malformed operation chain: ") + e.what());
  }
  return chain;
}

}  // namespace cgaedit
