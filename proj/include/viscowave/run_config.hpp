#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "viscowave/asymptotics.hpp"
#include "viscowave/fd_oracle.hpp"
#include "viscowave/grid.hpp"
#include "viscowave/medium.hpp"
#include "viscowave/problem.hpp"
#include "viscowave/spectral_kernel.hpp"

namespace viscowave {

/// Flat key/value run configuration. Every key has a typed default; files and
/// --set overrides may only touch known keys and must keep the type.
class RunConfig {
 public:
  RunConfig();

  /// Merges a flat JSON object from `path`. A `schema_version` key is accepted
  /// and ignored.
  void merge_file(const std::filesystem::path& path);
  void merge(const nlohmann::json& object);
  /// "key=value". The value is read as JSON when the key is not a string;
  /// list keys also accept a bare comma-separated list.
  void set(std::string_view assignment);
  void set_value(const std::string& key, nlohmann::json value);

  /// Checks every domain constraint by building the derived objects.
  void validate() const;

  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> texts(const std::string& key) const;

  /// The resolved configuration with `schema_version`.
  nlohmann::json resolved() const;
  static std::vector<std::string> keys();

  MediumParams medium() const;
  Grid grid() const;
  Truncation truncation() const;
  BoundExponents exponents() const;
  OracleConfig oracle() const;
  SourceMode source_mode() const;
  GreenKind kind() const;
  SweepDomain sweep_domain() const;
  std::vector<Theorem> theorems() const;
  std::filesystem::path out_dir() const;

  /// Preset expressions with per-datum overrides, CSV samples where given.
  /// Sampled data must agree with the configured grid.
  NeumannProblem problem() const;

 private:
  const nlohmann::json& at(const std::string& key) const;
  nlohmann::json values_;
};

}  // namespace viscowave
