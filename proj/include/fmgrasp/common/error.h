/*
 * Copyright 2026 The fmgrasp Authors. All rights reserved.
 * This file is licensed to you under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software distributed under
 * the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR REPRESENTATIONS
 * OF ANY KIND, either express or implied. See the License for the specific language
 * governing permissions and limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fmgrasp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. The message carries "path:line: reason".
class FormatError : public Error {
public:
  FormatError(const std::string& path, int line, const std::string& reason)
      : Error(path + ":" + std::to_string(line) + ": " + reason), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

/// Input violates a structural invariant (degenerate faces, bad indices, ...).
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Configuration value out of its declared range.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Solver failed to converge or hit a singular system it could not recover from.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Grasp filtering left nothing to transfer.
class NoGraspsError : public Error {
public:
  using Error::Error;
};

/// No ranked grasp could be made feasible on the target.
class UnreachableError : public Error {
public:
  UnreachableError(const std::string& what, std::vector<std::string> reports = {})
      : Error(what), reports_(std::move(reports)) {}
  const std::vector<std::string>& reports() const { return reports_; }

private:
  std::vector<std::string> reports_;
};

}  // namespace fmgrasp
