#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sepi/units.hpp"

namespace sepi::cli {

struct Entry {
  std::string name;
  double value = 0.0;
  double uncertainty = 0.0;
  std::string unit;
  std::string note;
  std::string text;  // non-numeric field when is_text
  bool is_text = false;
};

struct InputDigest {
  std::string path;
  std::string sha256;
};

/// Ordered record of one invocation. Text form is `key = value # unit ± u`.
class Report {
 public:
  explicit Report(std::string subcommand) : subcommand_(std::move(subcommand)) {}

  void add(std::string name, const Quantity& q, std::string note = {});
  void add(std::string name, double value, double uncertainty, std::string unit, std::string note = {});
  void add_text(std::string name, std::string value);
  void note(std::string text) { notes_.push_back(std::move(text)); }
  void warn(std::string text) { warnings_.push_back(std::move(text)); }
  void input(const std::filesystem::path& path);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const Entry* find(const std::string& name) const;
  std::string field(const std::string& name) const;  // empty if absent
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  std::string text() const;
  std::string json() const;

 private:
  std::string subcommand_;
  std::vector<InputDigest> inputs_;
  std::vector<Entry> entries_;
  std::vector<std::string> notes_;
  std::vector<std::string> warnings_;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// %.12g, with "-0" folded to "0".
std::string format_value(double v);

}  // namespace sepi::cli
