#pragma once

#include <stdexcept>
#include <string>

namespace trustrate {

/// Base of every error raised by the harness.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input to a generator, checker or statistical routine.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Campaign configuration could not be loaded or validated.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Contingency table with fewer than two non-empty rows or columns.
class DegenerateTable : public Error {
 public:
  using Error::Error;
};

/// Back-door adjustment hit a stratum with P(x, z) = 0 while P(z) > 0.
class PositivityViolation : public Error {
 public:
  PositivityViolation(const std::string& stratum, const std::string& treatment)
      : Error("positivity violated: stratum '" + stratum +
              "' has no mass under treatment '" + treatment + "'"),
        stratum_(stratum) {}
  const std::string& stratum() const noexcept { return stratum_; }

 private:
  std::string stratum_;
};

/// The collected evidence is too poor to assign a label.
class Unratable : public Error {
 public:
  using Error::Error;
};

/// Too many invocations failed; the campaign cannot be rated.
class CampaignAborted : public Error {
 public:
  CampaignAborted(double failure_fraction, const std::string& detail)
      : Error("campaign aborted: failure fraction " +
              std::to_string(failure_fraction) + " (" + detail + ")"),
        failure_fraction_(failure_fraction) {}
  double failure_fraction() const noexcept { return failure_fraction_; }

 private:
  double failure_fraction_;
};

}  // namespace trustrate
