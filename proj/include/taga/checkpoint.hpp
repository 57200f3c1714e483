// Versioned binary checkpoints: magic + version + JSON header (architecture,
// dimensions, provider and view configuration, training echo) followed by raw
// little-endian f32 parameter payloads, layer by layer.
#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <taga/embedding.hpp>
#include <taga/gnn.hpp>
#include <taga/train.hpp>
#include <taga/views.hpp>

namespace taga {

inline constexpr char kCheckpointMagic[8] = {'T', 'A', 'G', 'A', 'C', 'K', 'P', '1'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  GnnParameters<float> params;
  ProviderDescriptor provider;
  ViewConfig view;
  TrainConfig train;
  std::size_t steps_trained = 0;
};

namespace detail {

inline void write_u32_le(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8), static_cast<char>(v >> 16),
               static_cast<char>(v >> 24)};
  out.write(b, 4);
}

inline void write_u64_le(std::ostream& out, std::uint64_t v) {
  write_u32_le(out, static_cast<std::uint32_t>(v));
  write_u32_le(out, static_cast<std::uint32_t>(v >> 32));
}

inline std::uint32_t read_u32_le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline std::uint64_t read_u64_le(std::istream& in) {
  const std::uint64_t lo = read_u32_le(in);
  const std::uint64_t hi = read_u32_le(in);
  return lo | (hi << 32);
}

inline void write_f32_le(std::ostream& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  write_u32_le(out, bits);
}

inline float read_f32_le(std::istream& in) {
  const std::uint32_t bits = read_u32_le(in);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

}  // namespace detail

inline nlohmann::json checkpoint_header(const Checkpoint& ckpt) {
  nlohmann::json header;
  header["arch"] = arch_name(ckpt.params.arch);
  header["num_layers"] = ckpt.params.num_layers;
  header["dim"] = ckpt.params.dim;
  header["seed"] = ckpt.params.seed;
  header["steps_trained"] = ckpt.steps_trained;
  header["provider"] = {
      {"kind", ckpt.provider.kind == ProviderKind::hash ? "hash" : "remote"},
      {"dimension", ckpt.provider.dimension},
      {"model_name", ckpt.provider.model_name},
      {"endpoint", ckpt.provider.endpoint},
      {"normalize", ckpt.provider.normalize}};
  header["view"] = {
      {"max_order", ckpt.view.max_order},
      {"tofg_mode", ckpt.view.tofg_mode == TofgMode::full ? "full" : "random_walk"},
      {"walk",
       {{"jump_probability", ckpt.view.walk.jump_probability},
        {"max_length", ckpt.view.walk.max_length},
        {"num_walks", ckpt.view.walk.num_walks},
        {"seed", ckpt.view.walk.seed}}}};
  header["train"] = {{"steps", ckpt.train.steps},
                     {"batch_size", ckpt.train.batch_size},
                     {"learning_rate", ckpt.train.learning_rate},
                     {"decay", ckpt.train.decay},
                     {"decay_every", ckpt.train.decay_every},
                     {"optimizer", ckpt.train.optimizer == Optimizer::adam ? "adam" : "sgd"},
                     {"l0_only", ckpt.train.l0_only},
                     {"seed", ckpt.train.seed}};
  return header;
}

inline void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  out.write(kCheckpointMagic, 8);
  detail::write_u32_le(out, kCheckpointVersion);
  const std::string header = checkpoint_header(ckpt).dump();
  detail::write_u64_le(out, header.size());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const auto& layer : ckpt.params.layers) {
    for (float v : layer.weight.data) detail::write_f32_le(out, v);
    for (float v : layer.weight_neigh.data) detail::write_f32_le(out, v);
    for (float v : layer.bias) detail::write_f32_le(out, v);
    if (ckpt.params.arch == GnnArch::gin) detail::write_f32_le(out, layer.epsilon);
  }
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kCheckpointMagic, 8) != 0)
    throw std::runtime_error("not a checkpoint file: " + path);
  const std::uint32_t version = detail::read_u32_le(in);
  if (version != kCheckpointVersion)
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  const std::uint64_t header_len = detail::read_u64_le(in);
  if (!in || header_len > (1ull << 20))
    throw std::runtime_error("corrupt checkpoint header length: " + path);
  std::string header_text(header_len, '\0');
  in.read(header_text.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw std::runtime_error("truncated checkpoint header: " + path);
  nlohmann::json header = nlohmann::json::parse(header_text, nullptr, false);
  if (header.is_discarded())
    throw std::runtime_error("corrupt checkpoint header: " + path);

  Checkpoint ckpt;
  const auto arch = arch_from_name(header.at("arch").get<std::string>());
  const auto num_layers = header.at("num_layers").get<std::size_t>();
  const auto dim = header.at("dim").get<std::size_t>();
  ckpt.params = init_params<float>(arch, num_layers, dim,
                                   header.at("seed").get<std::uint64_t>());
  ckpt.steps_trained = header.at("steps_trained").get<std::size_t>();

  const auto& prov = header.at("provider");
  ckpt.provider.kind = prov.at("kind").get<std::string>() == "hash" ? ProviderKind::hash
                                                                    : ProviderKind::remote;
  ckpt.provider.dimension = prov.at("dimension").get<std::size_t>();
  ckpt.provider.model_name = prov.at("model_name").get<std::string>();
  ckpt.provider.endpoint = prov.at("endpoint").get<std::string>();
  ckpt.provider.normalize = prov.at("normalize").get<bool>();

  const auto& view = header.at("view");
  ckpt.view.max_order = view.at("max_order").get<int>();
  ckpt.view.tofg_mode = view.at("tofg_mode").get<std::string>() == "full"
                            ? TofgMode::full
                            : TofgMode::random_walk;
  const auto& walk = view.at("walk");
  ckpt.view.walk.jump_probability = walk.at("jump_probability").get<double>();
  ckpt.view.walk.max_length = walk.at("max_length").get<std::size_t>();
  ckpt.view.walk.num_walks = walk.at("num_walks").get<std::size_t>();
  ckpt.view.walk.seed = walk.at("seed").get<std::uint64_t>();

  const auto& train = header.at("train");
  ckpt.train.steps = train.at("steps").get<std::size_t>();
  ckpt.train.batch_size = train.at("batch_size").get<std::size_t>();
  ckpt.train.learning_rate = train.at("learning_rate").get<double>();
  ckpt.train.decay = train.at("decay").get<double>();
  ckpt.train.decay_every = train.at("decay_every").get<std::size_t>();
  ckpt.train.optimizer = train.at("optimizer").get<std::string>() == "adam" ? Optimizer::adam
                                                                            : Optimizer::sgd;
  ckpt.train.l0_only = train.at("l0_only").get<bool>();
  ckpt.train.seed = train.at("seed").get<std::uint64_t>();

  for (auto& layer : ckpt.params.layers) {
    for (auto& v : layer.weight.data) v = detail::read_f32_le(in);
    for (auto& v : layer.weight_neigh.data) v = detail::read_f32_le(in);
    for (auto& v : layer.bias) v = detail::read_f32_le(in);
    if (ckpt.params.arch == GnnArch::gin) layer.epsilon = detail::read_f32_le(in);
  }
  if (!in) throw std::runtime_error("truncated checkpoint payload: " + path);
  return ckpt;
}

}  // namespace taga
