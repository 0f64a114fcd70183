#pragma once

#include "relcrypt/cli.hpp"

#include <map>
#include <optional>
#include <string>

namespace relcrypt::cli::detail {

// A located view into a scenario document; every accessor reports its JSON
// pointer on failure.
struct Cursor {
  std::string source;
  std::string pointer;
  const Json* node;
  const std::map<std::string, SpaceTimePoint>* points;

  std::string path() const;
  Cursor operator[](const std::string& key) const;
  Cursor operator[](std::size_t i) const;
  bool has(const std::string& key) const;
  std::optional<Cursor> get(const std::string& key) const;
  [[noreturn]] void fail(const std::string& what) const;

  std::string string() const;
  bool boolean() const;
  Rational rational() const;
  long long integer() const;
  double real() const;
  // A named point or a coordinate array [t, x0, x1, x2].
  SpaceTimePoint point() const;
};

}  // namespace relcrypt::cli::detail
