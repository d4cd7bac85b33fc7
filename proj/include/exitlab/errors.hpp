// SPDX-License-Identifier: Apache-2.0
// Exception taxonomy; the CLI maps each class to a distinct exit code.
#pragma once

#include <stdexcept>
#include <string>

namespace exitlab {

//! Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Invalid configuration: unknown key, bad value, violated precondition. Exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

//! Numerical failure: non-finite state, singular operator. Exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

//! Filesystem failure: unwritable output, missing input file. Exit code 4.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace exitlab
