#include "dysnav/error.hpp"

namespace dysnav {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedTimestamp: return "MalformedTimestamp";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::InvalidOmega: return "InvalidOmega";
    case ErrorCode::InvalidTau: return "InvalidTau";
    case ErrorCode::EdgeNotPresent: return "EdgeNotPresent";
    case ErrorCode::NodeNotPresent: return "NodeNotPresent";
    case ErrorCode::EmptyCluster: return "EmptyCluster";
    case ErrorCode::EmptyClustering: return "EmptyClustering";
    case ErrorCode::SingleColumn: return "SingleColumn";
    case ErrorCode::NotForwardInTime: return "NotForwardInTime";
    case ErrorCode::InvalidCell: return "InvalidCell";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::RootNotInTree: return "RootNotInTree";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace dysnav
