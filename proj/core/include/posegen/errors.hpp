#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace posegen {

/// Invalid or unreadable generation config (syntax, type, range, unknown key).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure; the message carries the offending path.
class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, const std::filesystem::path& path)
      : std::runtime_error(what + ": " + path.string()), path_(path) {}
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

enum class ParseErrorKind {
  missing_inter_lc_file,
  missing_posegraph,
  token_count,
  non_numeric,
  unknown_record,
  non_contiguous_agents,
  inconsistent_graph,
};

const char* to_string(ParseErrorKind kind);

/// Malformed multi-g2o content. `line` is 1-based, 0 when not line specific.
class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, const std::filesystem::path& file, std::size_t line,
             const std::string& detail);

  ParseErrorKind kind() const { return kind_; }
  const std::filesystem::path& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  ParseErrorKind kind_;
  std::filesystem::path file_;
  std::size_t line_;
};

}  // namespace posegen
