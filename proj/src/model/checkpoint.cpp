#include "model/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "common/error.hpp"

namespace hicd::model {

using nlohmann::json;

namespace {

void put_u32(std::string& out, uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u64(std::string& out, uint64_t v) {
  put_u32(out, static_cast<uint32_t>(v & 0xffffffffULL));
  put_u32(out, static_cast<uint32_t>(v >> 32));
}

uint32_t get_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint64_t get_u64(const unsigned char* p) {
  return static_cast<uint64_t>(get_u32(p)) | (static_cast<uint64_t>(get_u32(p + 4)) << 32);
}

}  // namespace

const num::Matrix& Checkpoint::array(const std::string& name) const {
  const json& list = manifest.at("arrays");
  for (size_t i = 0; i < list.size(); ++i)
    if (list[i].at("name").get<std::string>() == name) return arrays[i];
  throw DataError("checkpoint has no array named '" + name + "'");
}

void write_checkpoint(const std::string& path, json manifest,
                      const std::vector<num::ParamRef>& arrays) {
  if (manifest.contains("arrays"))
    throw std::invalid_argument("manifest must not predefine 'arrays'");
  json list = json::array();
  for (const num::ParamRef& r : arrays)
    list.push_back({{"name", r.name}, {"rows", r.value->rows}, {"cols", r.value->cols}});
  manifest["arrays"] = list;

  std::string manifest_bytes = manifest.dump();
  std::string header = "HICD";
  put_u32(header, kCheckpointFormatVersion);
  put_u64(header, manifest_bytes.size());

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint: " + path);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(manifest_bytes.data(), static_cast<std::streamsize>(manifest_bytes.size()));

  std::string buf;
  for (const num::ParamRef& r : arrays) {
    buf.clear();
    buf.reserve(r.value->a.size() * 4);
    for (double d : r.value->a) {
      float f = static_cast<float>(d);
      uint32_t bits;
      std::memcpy(&bits, &f, 4);
      put_u32(buf, bits);
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw DataError("failed writing checkpoint: " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() < 16 || data.compare(0, 4, "HICD") != 0)
    throw DataError("not a checkpoint file: " + path);
  const auto* p = reinterpret_cast<const unsigned char*>(data.data());
  uint32_t version = get_u32(p + 4);
  if (version != kCheckpointFormatVersion)
    throw DataError("unsupported checkpoint format version " + std::to_string(version));
  uint64_t manifest_len = get_u64(p + 8);
  if (16 + manifest_len > data.size()) throw DataError("truncated checkpoint manifest");

  Checkpoint ckpt;
  try {
    ckpt.manifest = json::parse(data.substr(16, manifest_len));
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid checkpoint manifest: ") + e.what());
  }

  size_t offset = 16 + manifest_len;
  for (const json& entry : ckpt.manifest.at("arrays")) {
    int rows = entry.at("rows").get<int>();
    int cols = entry.at("cols").get<int>();
    num::Matrix m(rows, cols);
    size_t need = m.a.size() * 4;
    if (offset + need > data.size()) throw DataError("truncated checkpoint arrays");
    for (size_t i = 0; i < m.a.size(); ++i) {
      uint32_t bits = get_u32(p + offset + i * 4);
      float f;
      std::memcpy(&f, &bits, 4);
      m.a[i] = static_cast<double>(f);
    }
    offset += need;
    ckpt.arrays.push_back(std::move(m));
  }
  return ckpt;
}

void quantize_f32(num::Matrix& m) {
  for (double& d : m.a) d = static_cast<double>(static_cast<float>(d));
}

void quantize_f32(std::vector<num::ParamRef> refs) {
  for (num::ParamRef& r : refs) quantize_f32(*r.value);
}

}  // namespace hicd::model
