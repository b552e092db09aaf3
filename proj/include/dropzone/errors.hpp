#pragma once

#include <stdexcept>
#include <string>

namespace dropzone {

// Domain error taxonomy. The names are part of the tool contract: the CLI
// prints Error::name() on the diagnostic stream and exits with code 1.
enum class Errc {
  length_mismatch = 1,
  too_short,
  degenerate_motion,
  insufficient_pairs,
  empty_trajectory,
  empty_cloud,
  class_absent,
  out_of_bounds,
  goal_out_of_bounds,
  unknown_scene,
  config_invalid,
  io_error,
  no_candidates,
  invalid_argument,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }
  const char* name() const { return errc_name(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace dropzone
