#pragma once

#include <stdexcept>
#include <string>

namespace aoi {

// Parameter outside the model's domain (unstable load, beta outside [0,1], ...).
class DomainError : public std::domain_error {
public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A simulation run produced too few deliveries to estimate an average age.
class DegenerateRun : public std::runtime_error {
public:
  explicit DegenerateRun(const std::string& what) : std::runtime_error(what) {}
};

// Age trace with no defined age anywhere in the requested horizon.
class EmptyTrace : public std::invalid_argument {
public:
  explicit EmptyTrace(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace aoi
