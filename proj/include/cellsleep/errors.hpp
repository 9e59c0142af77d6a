// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace cellsleep {

// Errors caused by bad input data (config files, CSVs, checkpoints). The CLI
// maps these to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public DataError {
 public:
  ConfigError(std::string key, const std::string& what)
      : DataError("config: " + key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class SchemaError : public DataError {
 public:
  explicit SchemaError(std::string column)
      : DataError("missing mandatory column: " + column),
        column_(std::move(column)) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

class RowError : public DataError {
 public:
  RowError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class CheckpointError : public DataError {
 public:
  enum class Kind { Io, VersionMismatch, CountMismatch, CorruptedPayload };
  CheckpointError(Kind kind, const std::string& what)
      : DataError("checkpoint: " + what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Demand that no finite PRB count can satisfy (zero SINR).
class InfeasibleDemand : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NoCoverage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IllegalAction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite loss or gradient during an update.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cellsleep
