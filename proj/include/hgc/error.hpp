// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace hgc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or argument. Messages carry the offending field path
// when one exists, e.g. "coarse.theta: must be in [0, 1]".
class ValidationError : public Error {
 public:
  using Error::Error;
};

class InvalidRangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// Zero-norm operand passed to a similarity computation.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class PlanIntegrityError : public Error {
 public:
  using Error::Error;
};

// A cache was read before the step that is supposed to fill it.
class CacheOrderError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hgc
