#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dysnav {

enum class ErrorCode {
  MalformedTimestamp,
  EmptyInput,
  InvalidEpsilon,
  InvalidOmega,
  InvalidTau,
  EdgeNotPresent,
  NodeNotPresent,
  EmptyCluster,
  EmptyClustering,
  SingleColumn,
  NotForwardInTime,
  InvalidCell,
  EmptyGraph,
  RootNotInTree,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every failure the library reports carries one of the codes above so the
// CLI and the HTTP layer can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dysnav
