#include "dfpcrc/error.hpp"

namespace dfpcrc {

std::string_view stage_name(Stage stage) noexcept {
  switch (stage) {
    case Stage::ingest: return "ingest";
    case Stage::textprep: return "textprep";
    case Stage::taxonomy: return "taxonomy";
    case Stage::graph: return "graph";
    case Stage::correlation: return "correlation";
    case Stage::dfp: return "dfp";
    case Stage::eval: return "eval";
    case Stage::synth: return "synth";
    case Stage::cli: return "cli";
  }
  return "unknown";
}

namespace {
std::string prefixed(Stage stage, const std::string& message) {
  std::string out(stage_name(stage));
  out += ": ";
  out += message;
  return out;
}
}  // namespace

DataError::DataError(Stage stage, const std::string& message)
    : std::runtime_error(prefixed(stage, message)), stage_(stage) {}

InvariantError::InvariantError(Stage stage, const std::string& message)
    : std::logic_error(prefixed(stage, message)), stage_(stage) {}

}  // namespace dfpcrc
