// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fragqa {

// Base for all pipeline failures that are not plain argument errors
// (those use std::invalid_argument).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IngestError : public Error {
 public:
  using Error::Error;
};

class ManifestError : public Error {
 public:
  using Error::Error;
};

class AnnotationError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class EmitError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string record_id, std::string field, const std::string& reason)
      : Error("record '" + record_id + "', field '" + field + "': " + reason),
        record_id_(std::move(record_id)),
        field_(std::move(field)) {}

  const std::string& record_id() const noexcept { return record_id_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string record_id_;
  std::string field_;
};

class ScoringError : public Error {
 public:
  explicit ScoringError(std::vector<std::string> ids);

  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  std::vector<std::string> ids_;
};

}  // namespace fragqa
