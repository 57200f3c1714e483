// Run configuration: one structured text file drives every command. The
// format is a key/value subset of TOML — `key = value` lines grouped under
// bracketed table headers, `#` comments, quoted strings, booleans, integers,
// floats, and integer lists. serialize() writes every field with doubles at
// full precision, so parse(serialize(c)) reproduces c exactly.
#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <taga/embedding.hpp>
#include <taga/gnn.hpp>
#include <taga/train.hpp>
#include <taga/views.hpp>

namespace taga {

struct EvalConfig {
  std::vector<std::size_t> shots{0, 1, 3, 5, 10, 20, 50, 100};
  std::size_t seeds = 20;          // independent split/adapter seeds per shot
  std::string mode = "taga";       // taga | taga-rw | tofg-k | glo-goft
  int text_order = -1;             // tofg-k document order; -1 = checkpoint max
  std::string label_template;      // "{}" replaced by the label; empty = raw label
  std::size_t few_shot_epochs = 100;
  double few_shot_learning_rate = 0.05;

  bool operator==(const EvalConfig&) const = default;
};

struct RunConfig {
  std::string dataset;             // dataset directory, or the literal "toy"
  std::string checkpoint;          // input checkpoint for embed/eval
  std::string out = "out";         // output directory
  GnnArch arch = GnnArch::gcn;
  ProviderDescriptor provider;
  ViewConfig view;
  TrainConfig train;
  EvalConfig eval;

  bool operator==(const RunConfig&) const = default;
};

inline const std::vector<std::string>& eval_mode_names() {
  static const std::vector<std::string> names{"taga", "taga-rw", "tofg-k", "glo-goft"};
  return names;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// Strips a trailing comment, honoring quotes so '#' inside a string survives.
inline std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

struct ConfigValue {
  std::string raw;   // trimmed literal text
  int line = 0;
};

// Flat view of a parsed file: "table.key" -> literal value text.
using ConfigMap = std::map<std::string, ConfigValue>;

inline ConfigMap parse_key_values(const std::string& text) {
  ConfigMap out;
  std::string table;
  int line_no = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": unterminated table header");
      auto name = trim(body.substr(1, body.size() - 2));
      if (name.empty())
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": empty table header");
      table = std::string(name);
      continue;
    }
    auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    auto key = trim(body.substr(0, eq));
    auto value = trim(body.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
    std::string full = table.empty() ? std::string(key) : table + "." + std::string(key);
    if (out.count(full))
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": duplicate key " + full);
    out[full] = {std::string(value), line_no};
  }
  return out;
}

inline std::string parse_string(const std::string& key, const ConfigValue& v) {
  const std::string& s = v.raw;
  if (s.size() < 2 || s.front() != '"' || s.back() != '"')
    throw std::invalid_argument("config key " + key + ": expected a quoted string");
  std::string out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
      if (i + 1 >= s.size() || (s[i] != '"' && s[i] != '\\'))
        throw std::invalid_argument("config key " + key + ": bad escape");
    } else if (s[i] == '"') {
      throw std::invalid_argument("config key " + key + ": stray quote");
    }
    out += s[i];
  }
  return out;
}

inline bool parse_bool(const std::string& key, const ConfigValue& v) {
  if (v.raw == "true") return true;
  if (v.raw == "false") return false;
  throw std::invalid_argument("config key " + key + ": expected true or false");
}

inline long long parse_integer(const std::string& key, const ConfigValue& v) {
  const std::string& s = v.raw;
  std::size_t pos = 0;
  long long n = 0;
  try {
    n = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": expected an integer");
  }
  if (pos != s.size())
    throw std::invalid_argument("config key " + key + ": trailing characters after integer");
  return n;
}

inline std::size_t parse_size(const std::string& key, const ConfigValue& v) {
  long long n = parse_integer(key, v);
  if (n < 0) throw std::invalid_argument("config key " + key + ": must be nonnegative");
  return static_cast<std::size_t>(n);
}

inline double parse_double(const std::string& key, const ConfigValue& v) {
  const std::string& s = v.raw;
  std::size_t pos = 0;
  double d = 0;
  try {
    d = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": expected a number");
  }
  if (pos != s.size())
    throw std::invalid_argument("config key " + key + ": trailing characters after number");
  return d;
}

inline std::vector<std::size_t> parse_size_list(const std::string& key, const ConfigValue& v) {
  const std::string& s = v.raw;
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw std::invalid_argument("config key " + key + ": expected [a, b, ...]");
  std::vector<std::size_t> out;
  std::string body = s.substr(1, s.size() - 2);
  std::istringstream in(body);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto t = trim(item);
    if (t.empty()) {
      if (out.empty() && in.eof()) break;  // "[]"
      throw std::invalid_argument("config key " + key + ": empty list element");
    }
    out.push_back(parse_size(key, {std::string(t), v.line}));
  }
  return out;
}

inline GnnArch parse_arch(const std::string& key, const ConfigValue& v) {
  std::string s = parse_string(key, v);
  if (s == "gcn") return GnnArch::gcn;
  if (s == "sage") return GnnArch::sage;
  if (s == "gin") return GnnArch::gin;
  throw std::invalid_argument("config key " + key + ": unknown architecture " + s);
}

inline ProviderKind parse_provider_kind(const std::string& key, const ConfigValue& v) {
  std::string s = parse_string(key, v);
  if (s == "hash") return ProviderKind::hash;
  if (s == "remote") return ProviderKind::remote;
  throw std::invalid_argument("config key " + key + ": unknown provider kind " + s);
}

inline TofgMode parse_tofg_mode(const std::string& key, const ConfigValue& v) {
  std::string s = parse_string(key, v);
  if (s == "full") return TofgMode::full;
  if (s == "random-walk" || s == "random_walk") return TofgMode::random_walk;
  throw std::invalid_argument("config key " + key + ": unknown text-view mode " + s);
}

inline Optimizer parse_optimizer(const std::string& key, const ConfigValue& v) {
  std::string s = parse_string(key, v);
  if (s == "adam") return Optimizer::adam;
  if (s == "sgd") return Optimizer::sgd;
  throw std::invalid_argument("config key " + key + ": unknown optimizer " + s);
}

}  // namespace detail

inline std::string serialize(const RunConfig& c) {
  using detail::format_double;
  using detail::quote;
  std::string s;
  s += "dataset = " + quote(c.dataset) + "\n";
  s += "checkpoint = " + quote(c.checkpoint) + "\n";
  s += "out = " + quote(c.out) + "\n";
  s += "arch = " + quote(arch_name(c.arch)) + "\n";
  s += "\n[provider]\n";
  s += "kind = " + quote(c.provider.kind == ProviderKind::hash ? "hash" : "remote") + "\n";
  s += "dimension = " + std::to_string(c.provider.dimension) + "\n";
  s += "model_name = " + quote(c.provider.model_name) + "\n";
  s += "endpoint = " + quote(c.provider.endpoint) + "\n";
  s += std::string("normalize = ") + (c.provider.normalize ? "true" : "false") + "\n";
  s += "\n[view]\n";
  s += "max_order = " + std::to_string(c.view.max_order) + "\n";
  s += "tofg_mode = " +
       quote(c.view.tofg_mode == TofgMode::full ? "full" : "random-walk") + "\n";
  s += "\n[view.walk]\n";
  s += "jump_probability = " + format_double(c.view.walk.jump_probability) + "\n";
  s += "max_length = " + std::to_string(c.view.walk.max_length) + "\n";
  s += "num_walks = " + std::to_string(c.view.walk.num_walks) + "\n";
  s += "seed = " + std::to_string(c.view.walk.seed) + "\n";
  s += "\n[train]\n";
  s += "steps = " + std::to_string(c.train.steps) + "\n";
  s += "batch_size = " + std::to_string(c.train.batch_size) + "\n";
  s += "learning_rate = " + format_double(c.train.learning_rate) + "\n";
  s += "decay = " + format_double(c.train.decay) + "\n";
  s += "decay_every = " + std::to_string(c.train.decay_every) + "\n";
  s += "seed = " + std::to_string(c.train.seed) + "\n";
  s += "optimizer = " + quote(c.train.optimizer == Optimizer::adam ? "adam" : "sgd") + "\n";
  s += "beta1 = " + format_double(c.train.beta1) + "\n";
  s += "beta2 = " + format_double(c.train.beta2) + "\n";
  s += "adam_eps = " + format_double(c.train.adam_eps) + "\n";
  s += std::string("l0_only = ") + (c.train.l0_only ? "true" : "false") + "\n";
  s += "log_every = " + std::to_string(c.train.log_every) + "\n";
  s += "threads = " + std::to_string(c.train.threads) + "\n";
  s += "\n[eval]\n";
  s += "shots = [";
  for (std::size_t i = 0; i < c.eval.shots.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(c.eval.shots[i]);
  }
  s += "]\n";
  s += "seeds = " + std::to_string(c.eval.seeds) + "\n";
  s += "mode = " + quote(c.eval.mode) + "\n";
  s += "text_order = " + std::to_string(c.eval.text_order) + "\n";
  s += "label_template = " + quote(c.eval.label_template) + "\n";
  s += "few_shot_epochs = " + std::to_string(c.eval.few_shot_epochs) + "\n";
  s += "few_shot_learning_rate = " + format_double(c.eval.few_shot_learning_rate) + "\n";
  return s;
}

// Keys present in the text overwrite the matching fields of `c`; absent keys
// keep their incoming values, so defaults -> file -> flags lay cleanly.
inline RunConfig parse_config(const std::string& text, RunConfig c = {}) {
  using namespace detail;
  auto kv = parse_key_values(text);
  for (const auto& [key, value] : kv) {
    if (key == "dataset") c.dataset = parse_string(key, value);
    else if (key == "checkpoint") c.checkpoint = parse_string(key, value);
    else if (key == "out") c.out = parse_string(key, value);
    else if (key == "arch") c.arch = parse_arch(key, value);
    else if (key == "provider.kind") c.provider.kind = parse_provider_kind(key, value);
    else if (key == "provider.dimension") c.provider.dimension = parse_size(key, value);
    else if (key == "provider.model_name") c.provider.model_name = parse_string(key, value);
    else if (key == "provider.endpoint") c.provider.endpoint = parse_string(key, value);
    else if (key == "provider.normalize") c.provider.normalize = parse_bool(key, value);
    else if (key == "view.max_order")
      c.view.max_order = static_cast<int>(parse_integer(key, value));
    else if (key == "view.tofg_mode") c.view.tofg_mode = parse_tofg_mode(key, value);
    else if (key == "view.walk.jump_probability")
      c.view.walk.jump_probability = parse_double(key, value);
    else if (key == "view.walk.max_length") c.view.walk.max_length = parse_size(key, value);
    else if (key == "view.walk.num_walks") c.view.walk.num_walks = parse_size(key, value);
    else if (key == "view.walk.seed")
      c.view.walk.seed = static_cast<std::uint64_t>(parse_integer(key, value));
    else if (key == "train.steps") c.train.steps = parse_size(key, value);
    else if (key == "train.batch_size") c.train.batch_size = parse_size(key, value);
    else if (key == "train.learning_rate") c.train.learning_rate = parse_double(key, value);
    else if (key == "train.decay") c.train.decay = parse_double(key, value);
    else if (key == "train.decay_every") c.train.decay_every = parse_size(key, value);
    else if (key == "train.seed")
      c.train.seed = static_cast<std::uint64_t>(parse_integer(key, value));
    else if (key == "train.optimizer") c.train.optimizer = parse_optimizer(key, value);
    else if (key == "train.beta1") c.train.beta1 = parse_double(key, value);
    else if (key == "train.beta2") c.train.beta2 = parse_double(key, value);
    else if (key == "train.adam_eps") c.train.adam_eps = parse_double(key, value);
    else if (key == "train.l0_only") c.train.l0_only = parse_bool(key, value);
    else if (key == "train.log_every") c.train.log_every = parse_size(key, value);
    else if (key == "train.threads")
      c.train.threads = static_cast<int>(parse_integer(key, value));
    else if (key == "eval.shots") c.eval.shots = parse_size_list(key, value);
    else if (key == "eval.seeds") c.eval.seeds = parse_size(key, value);
    else if (key == "eval.mode") c.eval.mode = parse_string(key, value);
    else if (key == "eval.text_order")
      c.eval.text_order = static_cast<int>(parse_integer(key, value));
    else if (key == "eval.label_template") c.eval.label_template = parse_string(key, value);
    else if (key == "eval.few_shot_epochs") c.eval.few_shot_epochs = parse_size(key, value);
    else if (key == "eval.few_shot_learning_rate")
      c.eval.few_shot_learning_rate = parse_double(key, value);
    else
      throw std::invalid_argument("config line " + std::to_string(value.line) +
                                  ": unknown key " + key);
  }
  return c;
}

// Structural checks shared by every command. `needs_dataset` is off for
// commands that work purely from a checkpoint.
inline void validate_config(const RunConfig& c, bool needs_dataset = true) {
  if (c.view.max_order < 1)
    throw std::invalid_argument("view.max_order must be at least 1");
  if (c.provider.dimension < 1)
    throw std::invalid_argument("provider.dimension must be at least 1");
  if (c.provider.kind == ProviderKind::remote && c.provider.endpoint.empty())
    throw std::invalid_argument("remote provider requires provider.endpoint");
  if (c.train.batch_size < 1) throw std::invalid_argument("train.batch_size must be positive");
  if (c.train.decay_every < 1) throw std::invalid_argument("train.decay_every must be positive");
  if (c.eval.seeds < 1) throw std::invalid_argument("eval.seeds must be at least 1");
  if (c.eval.shots.empty()) throw std::invalid_argument("eval.shots must be nonempty");
  bool known_mode = false;
  for (const auto& m : eval_mode_names()) known_mode = known_mode || m == c.eval.mode;
  if (!known_mode) throw std::invalid_argument("eval.mode must be one of taga, taga-rw, tofg-k, glo-goft");
  if (needs_dataset) {
    if (c.dataset.empty()) throw std::invalid_argument("dataset is required");
    if (c.dataset != "toy" && !std::filesystem::is_directory(c.dataset))
      throw std::invalid_argument("dataset directory does not exist: " + c.dataset);
  }
  if (!c.checkpoint.empty() && !std::filesystem::exists(c.checkpoint))
    throw std::invalid_argument("checkpoint file does not exist: " + c.checkpoint);
}

inline RunConfig load_config(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

inline void save_config(const std::string& path, const RunConfig& c) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  out << serialize(c);
}

}  // namespace taga
