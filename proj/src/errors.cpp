#include "cid/errors.hpp"

namespace cid {

std::string_view ErrcName(Errc code) {
  switch (code) {
    case Errc::kInsufficientData:
      return "insufficient data";
    case Errc::kSingularDesign:
      return "singular design";
    case Errc::kDomain:
      return "domain error";
    case Errc::kUsage:
      return "usage error";
    case Errc::kBaselineEmpty:
      return "baseline category empty";
    case Errc::kDegenerateScaling:
      return "degenerate scaling";
    case Errc::kSupportOffGrid:
      return "support off grid";
    case Errc::kEmptyCurve:
      return "empty curve";
    case Errc::kSnapshotOffGrid:
      return "snapshot off grid";
    case Errc::kConfig:
      return "config error";
    case Errc::kIo:
      return "i/o error";
  }
  return "unknown";
}

}  // namespace cid
