#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include "embedded_default_config.hpp"

namespace fuzzyshape {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void type_error(const std::string &path, std::string_view expected) {
  throw Error(ErrorCode::ParseError, fmt::format("at {}: expected {}", path, expected));
}

class Reader {
 public:
  Reader(std::string source, const ShapeSystemRegistry *fallback) : source_(std::move(source)), fallback_(fallback) {}

  ShapeSystemRegistry read(const json &root) {
    expect_object(root, "/");
    reject_unknown(root, "", {"engine", "systems"});

    EngineSettings engine = fallback_ ? fallback_->engine() : EngineSettings{};
    if (const json *e = member(root, "", "engine")) {
      expect_object(*e, "/engine");
      reject_unknown(*e, "/engine", {"resolution", "rounding_decimals"});
      if (const json *v = member(*e, "/engine", "resolution")) engine.resolution = as_int(*v, "/engine/resolution");
      if (const json *v = member(*e, "/engine", "rounding_decimals")) {
        engine.rounding_decimals = as_int(*v, "/engine/rounding_decimals");
      }
    }

    std::array<SystemParams, 4> params;
    if (fallback_) params = fallback_->params();
    const json *systems = member(root, "", "systems");
    if (systems) {
      expect_object(*systems, "/systems");
      reject_unknown(*systems, "/systems", {"eye", "eyebrow", "nose", "lip"});
    }
    for (auto key : kAllSystems) {
      const std::string name(to_token(key));
      const json *block = systems ? member(*systems, "/systems", name) : nullptr;
      if (block) read_system(*block, "/systems/" + name, params[static_cast<std::size_t>(key)]);
    }
    if (!unknown_.empty()) throw ValidationError(std::move(unknown_));
    return ShapeSystemRegistry(std::move(params), engine);
  }

 private:
  void read_system(const json &j, const std::string &path, SystemParams &p) {
    expect_object(j, path);
    reject_unknown(j, path, {"universe", "input", "output", "rules"});
    if (const json *u = member(j, path, "universe")) {
      const auto v = as_doubles(*u, path + "/universe");
      if (v.size() != 2) type_error(path + "/universe", "[lo, hi]");
      p.universe = {v[0], v[1]};
    }
    if (const json *in = member(j, path, "input")) {
      const std::string ip = path + "/input";
      expect_object(*in, ip);
      reject_unknown(*in, ip, {"name", "labels", "peaks"});
      if (const json *v = member(*in, ip, "name")) p.input_name = as_string(*v, ip + "/name");
      if (const json *v = member(*in, ip, "labels")) p.input_labels = as_strings(*v, ip + "/labels");
      if (const json *v = member(*in, ip, "peaks")) p.input_peaks = as_doubles(*v, ip + "/peaks");
    }
    if (const json *out = member(j, path, "output")) {
      const std::string op = path + "/output";
      expect_object(*out, op);
      reject_unknown(*out, op, {"name", "labels", "peaks", "fou_inset", "fou_lower_height"});
      if (const json *v = member(*out, op, "name")) p.output_name = as_string(*v, op + "/name");
      if (const json *v = member(*out, op, "labels")) p.output_labels = as_strings(*v, op + "/labels");
      if (const json *v = member(*out, op, "peaks")) p.output_peaks = as_doubles(*v, op + "/peaks");
      if (const json *v = member(*out, op, "fou_inset")) p.fou_inset = as_double(*v, op + "/fou_inset");
      if (const json *v = member(*out, op, "fou_lower_height")) {
        p.fou_lower_height = as_double(*v, op + "/fou_lower_height");
      }
    }
    if (const json *rules = member(j, path, "rules")) {
      const std::string rp = path + "/rules";
      if (!rules->is_array()) type_error(rp, "an array of {\"if\", \"then\"} objects");
      p.rules.clear();
      for (std::size_t i = 0; i < rules->size(); ++i) {
        const json &r = (*rules)[i];
        const std::string ep = fmt::format("{}/{}", rp, i);
        expect_object(r, ep);
        reject_unknown(r, ep, {"if", "then"});
        if (!r.contains("if") || !r.contains("then")) type_error(ep, "both \"if\" and \"then\"");
        p.rules.push_back({as_string(r["if"], ep + "/if"), as_string(r["then"], ep + "/then")});
      }
    }
  }

  // Returns nullptr, with a notice or an error, when the key is absent.
  const json *member(const json &obj, const std::string &path, const std::string &key) {
    if (auto it = obj.find(key); it != obj.end()) return &*it;
    if (!fallback_) {
      throw Error(ErrorCode::ParseError, fmt::format("{}: missing required key {}/{}", source_, path, key));
    }
    spdlog::info("{}: {}/{} not set; using default", source_, path, key);
    return nullptr;
  }

  void reject_unknown(const json &obj, const std::string &path, std::initializer_list<std::string_view> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
        unknown_.push_back({DiagnosticKind::InvalidParameter, fmt::format("unknown key {}/{}", path, it.key())});
      }
    }
  }

  static void expect_object(const json &j, const std::string &path) {
    if (!j.is_object()) type_error(path, "an object");
  }
  static std::string as_string(const json &j, const std::string &path) {
    if (!j.is_string()) type_error(path, "a string");
    return j.get<std::string>();
  }
  static double as_double(const json &j, const std::string &path) {
    if (!j.is_number()) type_error(path, "a number");
    return j.get<double>();
  }
  static int as_int(const json &j, const std::string &path) {
    if (!j.is_number_integer()) type_error(path, "an integer");
    return j.get<int>();
  }
  static std::vector<double> as_doubles(const json &j, const std::string &path) {
    if (!j.is_array()) type_error(path, "an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_double(j[i], fmt::format("{}/{}", path, i)));
    return out;
  }
  static std::vector<std::string> as_strings(const json &j, const std::string &path) {
    if (!j.is_array()) type_error(path, "an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_string(j[i], fmt::format("{}/{}", path, i)));
    return out;
  }

  std::string source_;
  const ShapeSystemRegistry *fallback_;
  std::vector<Diagnostic> unknown_;
};

}  // namespace

std::string_view embedded_default_config() { return kEmbeddedDefaultConfig; }

ShapeSystemRegistry parse_config(std::string_view text, std::string_view source,
                                 const ShapeSystemRegistry *fallback) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::ParseError, fmt::format("{}: byte {}: {}", source, e.byte, e.what()));
  }
  return Reader(std::string(source), fallback).read(root);
}

ShapeSystemRegistry load_config(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, fmt::format("{}: cannot open config file", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string(), &default_registry());
}

std::string serialize_config(const ShapeSystemRegistry &reg) {
  json root;
  root["engine"] = {{"resolution", reg.engine().resolution},
                    {"rounding_decimals", reg.engine().rounding_decimals}};
  json systems = json::object();
  const auto params = reg.params();
  for (auto key : kAllSystems) {
    const SystemParams &p = params[static_cast<std::size_t>(key)];
    json rules = json::array();
    for (const auto &r : p.rules) rules.push_back({{"if", r.antecedent}, {"then", r.consequent}});
    json s;
    s["universe"] = {p.universe.lo, p.universe.hi};
    s["input"] = {{"name", p.input_name}, {"labels", p.input_labels}, {"peaks", p.input_peaks}};
    s["output"] = {{"name", p.output_name},
                   {"labels", p.output_labels},
                   {"peaks", p.output_peaks},
                   {"fou_inset", p.fou_inset},
                   {"fou_lower_height", p.fou_lower_height}};
    s["rules"] = std::move(rules);
    systems[std::string(to_token(key))] = std::move(s);
  }
  root["systems"] = std::move(systems);
  return root.dump(2) + "\n";
}

std::string config_fingerprint(const ShapeSystemRegistry &reg) {
  const std::string text = serialize_config(reg);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::InvalidArgument, "SHA-256 digest failed");
  }
  std::string out = "sha256:";
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

}  // namespace fuzzyshape
