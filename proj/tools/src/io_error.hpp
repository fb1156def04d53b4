#pragma once

#include "qfluct/error.hpp"

namespace qfluct::cli {

/// File could not be opened, read or written (exit code 3).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qfluct::cli
