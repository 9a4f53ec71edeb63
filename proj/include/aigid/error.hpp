/* Copyright 2026 The aigid Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef AIGID_ERROR_HPP_
#define AIGID_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace aigid {

// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  kSuccess = 0,
  kOther = 1,
  kDataError = 2,
  kNumericFailure = 3,
  kCheckpointMismatch = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::kOther; }
};

// Everything that goes wrong while reading a corpus.
class DataError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kDataError; }
};

class MissingFile : public DataError {
 public:
  explicit MissingFile(const std::string& path)
      : DataError("missing file: " + path), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class MalformedRecord : public DataError {
 public:
  MalformedRecord(const std::string& file, int line_no, const std::string& why)
      : DataError(file + ":" + std::to_string(line_no) + ": malformed record: " + why),
        line_no_(line_no) {}
  int line_no() const noexcept { return line_no_; }

 private:
  int line_no_;
};

class UnknownClass : public DataError {
 public:
  explicit UnknownClass(const std::string& name)
      : DataError("unknown class name: " + name), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class WriteError : public DataError {
 public:
  explicit WriteError(const std::string& path) : DataError("cannot write: " + path) {}
};

class DecodeError : public DataError {
 public:
  explicit DecodeError(const std::string& path)
      : DataError("cannot decode image: " + path), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class BadFractions : public DataError {
 public:
  using DataError::DataError;
};

class EmptyDataset : public DataError {
 public:
  using DataError::DataError;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class NonFiniteOutput : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kNumericFailure; }
};

class NonFiniteLoss : public Error {
 public:
  NonFiniteLoss(long step, long last_good_step, double loss)
      : Error("non-finite loss " + std::to_string(loss) + " at step " + std::to_string(step) +
              " (last good step " + std::to_string(last_good_step) + ")"),
        step_(step),
        last_good_step_(last_good_step) {}
  long step() const noexcept { return step_; }
  long last_good_step() const noexcept { return last_good_step_; }
  ExitCode exit_code() const noexcept override { return ExitCode::kNumericFailure; }

 private:
  long step_;
  long last_good_step_;
};

class CheckpointMismatch : public Error {
 public:
  CheckpointMismatch(const std::string& tensor_name, const std::string& why)
      : Error("checkpoint mismatch at tensor '" + tensor_name + "': " + why),
        tensor_name_(tensor_name) {}
  const std::string& tensor_name() const noexcept { return tensor_name_; }
  ExitCode exit_code() const noexcept override { return ExitCode::kCheckpointMismatch; }

 private:
  std::string tensor_name_;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

}  // namespace aigid

#endif  // AIGID_ERROR_HPP_
