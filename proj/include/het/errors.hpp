#pragma once

#include <stdexcept>
#include <string>

namespace het {

// Invalid raster/box dimensions.
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rectangle or patch falls outside the image.
struct BoundsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad configuration value or parameter combination.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// API precondition violated (mismatched lengths, out-of-range argument).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

// A local search had no in-bounds candidate.
struct SearchDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every sub-patch left the frame; the track cannot continue.
struct TrackLostError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable/unwritable files, missing directories.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed text input (config files, box strings, ground truth).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace het
