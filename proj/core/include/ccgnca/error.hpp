// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccgnca {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed logical-form text; `position` is the offending token index.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& what)
      : Error("syntax error at token " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownRole : public Error {
 public:
  explicit UnknownRole(const std::string& role) : Error("unknown role: " + role) {}
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// No typing rule applies to a content token.
class DerivationGap : public Error {
 public:
  DerivationGap(std::size_t token, const std::string& what)
      : Error("no type for token " + std::to_string(token) + ": " + what), token_(token) {}
  std::size_t token() const noexcept { return token_; }

 private:
  std::size_t token_;
};

class NoParse : public Error {
 public:
  using Error::Error;
};

class AmbiguousParse : public Error {
 public:
  using Error::Error;
};

class RoleExhausted : public Error {
 public:
  using Error::Error;
};

class NonFinite : public Error {
 public:
  using Error::Error;
};

/// Malformed data file; `line` is 1-based.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class MissingEmbedding : public Error {
 public:
  using Error::Error;
};

class CoverageError : public Error {
 public:
  using Error::Error;
};

}  // namespace ccgnca
