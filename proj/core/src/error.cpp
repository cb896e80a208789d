#include "sentinel/error.hpp"

namespace sentinel {

std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::SelfLoopRejected: return "SelfLoopRejected";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::InvalidSpecPair: return "InvalidSpecPair";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DegenerateVariance: return "DegenerateVariance";
    case ErrorKind::DegenerateGraph: return "DegenerateGraph";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::InvalidSize: return "InvalidSize";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::TimeBudgetExceeded: return "TimeBudgetExceeded";
    case ErrorKind::InsufficientReplicates: return "InsufficientReplicates";
    case ErrorKind::MismatchedNullSpec: return "MismatchedNullSpec";
  }
  return "Unknown";
}

}  // namespace sentinel
