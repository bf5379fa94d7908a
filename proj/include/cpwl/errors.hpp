#pragma once

#include <stdexcept>
#include <string>

namespace cpwl {

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error
{
public:
  using Error::Error;
};

class DegenerateSimplex : public Error
{
public:
  using Error::Error;
};

class InvalidArgument : public Error
{
public:
  using Error::Error;
};

/// Point lies outside the convex hull covered by a triangulation.
class OutOfDomain : public Error
{
public:
  using Error::Error;
};

class NotSymmetric : public Error
{
public:
  using Error::Error;
};

class NoConvergence : public Error
{
public:
  using Error::Error;
};

class SingularMatrix : public Error
{
public:
  using Error::Error;
};

/// Malformed triangulation file; the message names the offending field.
class ParseError : public Error
{
public:
  using Error::Error;
};

} // namespace cpwl
