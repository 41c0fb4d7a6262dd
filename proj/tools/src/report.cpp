#include "sepi_cli/report.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sepi/errors.hpp"

#ifndef SEPI_VERSION
#define SEPI_VERSION "0.0.0"
#endif

namespace sepi::cli {

void Report::add(std::string name, const Quantity& q, std::string note) {
  entries_.push_back({std::move(name), q.value(), q.uncertainty(), std::string(unit_name(q.unit())), std::move(note)});
}

void Report::add(std::string name, double value, double uncertainty, std::string unit, std::string note) {
  entries_.push_back({std::move(name), value, uncertainty, std::move(unit), std::move(note)});
}

void Report::add_text(std::string name, std::string value) {
  Entry e;
  e.name = std::move(name);
  e.text = std::move(value);
  e.is_text = true;
  entries_.push_back(std::move(e));
}

void Report::input(const std::filesystem::path& path) { inputs_.push_back({path.string(), sha256_file(path)}); }

const Entry* Report::find(const std::string& name) const {
  for (const auto& e : entries_)
    if (!e.is_text && e.name == name) return &e;
  return nullptr;
}

std::string Report::field(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.is_text && e.name == name) return e.text;
  return {};
}

std::string format_value(double v) {
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string Report::text() const {
  std::ostringstream o;
  o << "# sepi " << SEPI_VERSION << " " << subcommand_ << "\n";
  for (const auto& in : inputs_) o << "# input " << in.path << " sha256:" << in.sha256 << "\n";
  for (const auto& e : entries_) {
    if (e.is_text) {
      o << e.name << " = " << e.text << "\n";
      continue;
    }
    o << e.name << " = " << format_value(e.value) << " # " << e.unit << " ± " << format_value(e.uncertainty);
    if (!e.note.empty()) o << " (" << e.note << ")";
    o << "\n";
  }
  for (const auto& n : notes_) o << "# note: " << n << "\n";
  for (const auto& w : warnings_) o << "# warning: " << w << "\n";
  return o.str();
}

std::string Report::json() const {
  nlohmann::ordered_json j;
  j["tool"] = "sepi";
  j["version"] = SEPI_VERSION;
  j["subcommand"] = subcommand_;
  j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& in : inputs_) j["inputs"].push_back({{"path", in.path}, {"sha256", in.sha256}});
  j["fields"] = nlohmann::ordered_json::object();
  j["quantities"] = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    if (e.is_text) {
      j["fields"][e.name] = e.text;
      continue;
    }
    nlohmann::ordered_json q{{"name", e.name}, {"value", e.value}, {"uncertainty", e.uncertainty}, {"unit", e.unit}};
    if (!e.note.empty()) q["note"] = e.note;
    j["quantities"].push_back(std::move(q));
  }
  j["notes"] = notes_;
  j["warnings"] = warnings_;
  return j.dump(2) + "\n";
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file: " + path.string());
  return sha256_hex(std::string(std::istreambuf_iterator<char>(in), {}));
}

}  // namespace sepi::cli
