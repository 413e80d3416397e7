// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace iotact {

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error
{
  public:
    using Error::Error;
};

/// A numerical routine could not reach the requested accuracy. Carries the
/// best estimate it had when it gave up (real part for complex results) and
/// the modulus of that estimate.
class AccuracyError : public Error
{
  public:
    AccuracyError(const std::string& what, double best_estimate, double error_estimate)
        : AccuracyError(what, best_estimate, error_estimate, std::abs(best_estimate))
    {
    }

    AccuracyError(const std::string& what, double best_estimate, double error_estimate, double best_modulus)
        : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate), best_modulus_(best_modulus)
    {
    }

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }
    double best_modulus() const noexcept { return best_modulus_; }

  private:
    double best_estimate_;
    double error_estimate_;
    double best_modulus_;
};

class ConfigError : public Error
{
  public:
    using Error::Error;
};

class ResourceError : public Error
{
  public:
    using Error::Error;
};

class EstimationError : public Error
{
  public:
    using Error::Error;
};

class UsageError : public Error
{
  public:
    using Error::Error;
};

class IoError : public Error
{
  public:
    using Error::Error;
};

/// Raised by the activation performance index when q_a = 0.
class UnboundedIndexError : public Error
{
  public:
    using Error::Error;
};

}  // namespace iotact
