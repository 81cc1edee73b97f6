#ifndef HELMFCI_CORE_ERROR_HPP
#define HELMFCI_CORE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace helmfci
{

// Operand sizes disagree (vector vs. operator, or two vectors).
class DimensionError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// NaN or Inf appeared in a vector that must stay finite.
class NonFiniteError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Invalid grid, FFT setup, or solver parameters.
class ConfigurationError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// Inconsistent wavespeed model (e.g. a sampling rate below l_min).
class ModelError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// A file could not be opened, read or written.
class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// An iteration grew instead of contracting; usually a spectral box that is too small.
class DivergenceError : public std::runtime_error
{
public:
  DivergenceError(const std::string &what, double factor)
    : std::runtime_error(what), factor_(factor)
  {
  }
  double factor() const noexcept { return factor_; }

private:
  double factor_;
};

}  // namespace helmfci

#endif  // HELMFCI_CORE_ERROR_HPP
