#include "dropzone/errors.hpp"

namespace dropzone {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::length_mismatch:
      return "LengthMismatch";
    case Errc::too_short:
      return "TooShort";
    case Errc::degenerate_motion:
      return "DegenerateMotion";
    case Errc::insufficient_pairs:
      return "InsufficientPairs";
    case Errc::empty_trajectory:
      return "EmptyTrajectory";
    case Errc::empty_cloud:
      return "EmptyCloud";
    case Errc::class_absent:
      return "ClassAbsent";
    case Errc::out_of_bounds:
      return "OutOfBounds";
    case Errc::goal_out_of_bounds:
      return "GoalOutOfBounds";
    case Errc::unknown_scene:
      return "UnknownScene";
    case Errc::config_invalid:
      return "ConfigInvalid";
    case Errc::io_error:
      return "IoError";
    case Errc::no_candidates:
      return "NoCandidates";
    case Errc::invalid_argument:
      return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace dropzone
