#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cid {

enum class Errc {
  kInsufficientData,
  kSingularDesign,
  kDomain,
  kUsage,
  kBaselineEmpty,
  kDegenerateScaling,
  kSupportOffGrid,
  kEmptyCurve,
  kSnapshotOffGrid,
  kConfig,
  kIo,
};

std::string_view ErrcName(Errc code);

// Every failure raised by the toolkit carries a machine-checkable code next to
// the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace cid
