#include "belhd/manifest.h"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#include "belhd/errors.h"
#include "json.hpp"

namespace belhd {
namespace {

using nlohmann::json;

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw Error("cannot initialise SHA-256");
    }
  }

  void update(const void *data, std::size_t n) {
    EVP_DigestUpdate(ctx_.get(), data, n);
  }

  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int n = 0;
    EVP_DigestFinal_ex(ctx_.get(), digest.data(), &n);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < n; ++i) {
      out += kHex[digest[i] >> 4];
      out += kHex[digest[i] & 15];
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

json files_to_json(const std::vector<ManifestFile> &files) {
  json out = json::array();
  for (const ManifestFile &f : files) {
    out.push_back({{"role", f.role}, {"path", f.path}, {"sha256", f.sha256}});
  }
  return out;
}

std::vector<ManifestFile> files_from_json(const json &j) {
  std::vector<ManifestFile> out;
  for (const json &f : j) {
    out.push_back({f.at("role").get<std::string>(),
                   f.at("path").get<std::string>(),
                   f.at("sha256").get<std::string>()});
  }
  return out;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

void RunManifest::add_input(std::string role,
                            const std::filesystem::path &path) {
  inputs.push_back({std::move(role), path.string(), sha256_file(path)});
}

void RunManifest::add_output(std::string role,
                             const std::filesystem::path &path) {
  outputs.push_back({std::move(role), path.string(), sha256_file(path)});
}

void write_manifest(const RunManifest &m, const std::filesystem::path &path) {
  const json j = {{"subcommand", m.subcommand},
                  {"tool_version", m.tool_version},
                  {"seed", m.seed},
                  {"config_digest", m.config_digest},
                  {"inputs", files_to_json(m.inputs)},
                  {"outputs", files_to_json(m.outputs)},
                  {"started_at", m.started_at},
                  {"seconds", m.seconds}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open manifest " + path.string());
  const json j = json::parse(in);
  RunManifest m;
  m.subcommand = j.at("subcommand").get<std::string>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.config_digest = j.at("config_digest").get<std::string>();
  m.inputs = files_from_json(j.at("inputs"));
  m.outputs = files_from_json(j.at("outputs"));
  m.started_at = j.at("started_at").get<std::string>();
  m.seconds = j.at("seconds").get<double>();
  return m;
}

std::vector<std::string> verify_manifest(const RunManifest &manifest) {
  std::vector<std::string> mismatched;
  for (const auto *files : {&manifest.inputs, &manifest.outputs}) {
    for (const ManifestFile &f : *files) {
      if (!std::filesystem::exists(f.path) || sha256_file(f.path) != f.sha256) {
        mismatched.push_back(f.path);
      }
    }
  }
  return mismatched;
}

}  // namespace belhd
