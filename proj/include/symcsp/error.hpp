// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace symcsp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class NotInSpan : public Error {
 public:
  using Error::Error;
};

class IncompleteAssignment : public Error {
 public:
  using Error::Error;
};

// Enumeration or materialization would exceed the configured budget.
class SizeError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class Side { Spoiler, Duplicator };

class StrategyViolation : public Error {
 public:
  StrategyViolation(Side side, const std::string& what) : Error(what), side_(side) {}
  Side side() const noexcept { return side_; }

 private:
  Side side_;
};

}  // namespace symcsp
