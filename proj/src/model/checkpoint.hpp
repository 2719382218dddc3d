#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "num/tensor.hpp"

namespace hicd::model {

// One container file for every model kind: "HICD" magic, a u32 format
// version, a u64 manifest length, the JSON manifest, then each array's
// values as raw little-endian 32-bit floats in manifest order.
inline constexpr uint32_t kCheckpointFormatVersion = 1;

struct Checkpoint {
  nlohmann::json manifest;
  std::vector<num::Matrix> arrays;

  const num::Matrix& array(const std::string& name) const;
};

// `manifest` must not contain the reserved "arrays" key; shapes and names
// are recorded from `arrays`.
void write_checkpoint(const std::string& path, nlohmann::json manifest,
                      const std::vector<num::ParamRef>& arrays);

Checkpoint read_checkpoint(const std::string& path);

// Rounds every value through 32-bit precision. Models are quantized before
// final metrics are computed and before writing, so a reloaded checkpoint
// reproduces identical numbers.
void quantize_f32(num::Matrix& m);
void quantize_f32(std::vector<num::ParamRef> refs);

}  // namespace hicd::model
