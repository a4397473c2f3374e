#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cgaedit {

// translate: {dx, dy, dz}
// rotate:    rotation vector {rx, ry, rz} = unit axis * angle (right-handed)
// dilate:    {s}
// affine:    the 12 upper rows of a matrix that is neither a pure
//            translation nor a pure rotation
enum class OpKind { translate, rotate, dilate, affine };

std::string_view to_string(OpKind kind);
OpKind op_kind_from_string(std::string_view name);

struct ChainOp {
  OpKind kind = OpKind::translate;
  std::vector<double> params;

  bool operator==(const ChainOp &) const = default;
};

// Representation-neutral operations in execution order.
struct OperationChain {
  std::vector<ChainOp> ops;

  bool operator==(const OperationChain &) const = default;
};

nlohmann::ordered_json chain_to_json(const OperationChain &chain);
OperationChain chain_from_json(const nlohmann::ordered_json &doc);

}  // namespace cgaedit
