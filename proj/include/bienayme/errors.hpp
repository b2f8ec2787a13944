#pragma once

#include <stdexcept>
#include <string>

namespace bienayme {

enum class ErrorKind {
  kConfig,
  kInvalidArgument,
  kNonConvergence,
  kReducibleCriticalBlock,
  kSingularSubcriticalBlock,
  kNotCritical,
  kNoConvergence,
  kDegenerateDirection,
  kRootType,
  kDecorationMismatch,
  kInadmissible,
  kInfeasible,
  kBudgetExhausted,
  kTruncationTooCoarse,
  kInsufficientData,
  kMixedConditioning,
};

const char* to_string(ErrorKind kind);

// Every failure surfaced by the library carries a kind so the CLI can map it
// to an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "ConfigError";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kNonConvergence: return "NonConvergence";
    case ErrorKind::kReducibleCriticalBlock: return "ReducibleCriticalBlock";
    case ErrorKind::kSingularSubcriticalBlock: return "SingularSubcriticalBlock";
    case ErrorKind::kNotCritical: return "NotCritical";
    case ErrorKind::kNoConvergence: return "NoConvergence";
    case ErrorKind::kDegenerateDirection: return "DegenerateDirection";
    case ErrorKind::kRootType: return "RootTypeError";
    case ErrorKind::kDecorationMismatch: return "DecorationMismatch";
    case ErrorKind::kInadmissible: return "Inadmissible";
    case ErrorKind::kInfeasible: return "Infeasible";
    case ErrorKind::kBudgetExhausted: return "BudgetExhausted";
    case ErrorKind::kTruncationTooCoarse: return "TruncationTooCoarse";
    case ErrorKind::kInsufficientData: return "InsufficientData";
    case ErrorKind::kMixedConditioning: return "MixedConditioning";
  }
  return "Error";
}

}  // namespace bienayme
