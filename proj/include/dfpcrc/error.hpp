#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dfpcrc {

/// Pipeline stage that raised an error; used to prefix diagnostics.
enum class Stage { ingest, textprep, taxonomy, graph, correlation, dfp, eval, synth, cli };

std::string_view stage_name(Stage stage) noexcept;

/// Bad input data or a violated precondition. Maps to CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  DataError(Stage stage, const std::string& message);

  Stage stage() const noexcept { return stage_; }

 private:
  Stage stage_;
};

/// An internal invariant does not hold. Maps to CLI exit code 3.
class InvariantError : public std::logic_error {
 public:
  InvariantError(Stage stage, const std::string& message);

  Stage stage() const noexcept { return stage_; }

 private:
  Stage stage_;
};

}  // namespace dfpcrc
