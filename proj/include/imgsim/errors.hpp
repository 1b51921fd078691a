#pragma once

#include <stdexcept>
#include <string>

namespace imgsim {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidConfig : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

// Wavenumber pair lies on or outside the steerable disk |k| < 2k.
class OutsideSteerableDisk : public Error {
public:
  using Error::Error;
};

class GrazingAngle : public Error {
public:
  using Error::Error;
};

class FitFailure : public Error {
public:
  using Error::Error;
};

class AnalysisError : public Error {
public:
  using Error::Error;
};

// Config / scene / echo file parsing. Message names the key or line.
class ParseError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace imgsim
