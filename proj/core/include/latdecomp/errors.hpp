// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace latdecomp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generator preconditions or geometry validation failed.
class InvalidGeometryError : public Error {
 public:
  using Error::Error;
};

/// Geometry file could not be decoded. `kind()` tells the failure apart.
class GeometryParseError : public Error {
 public:
  enum class Kind { BadHeader, Truncated, DuplicateCoord, OutOfBounds, BadRecord };

  GeometryParseError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Least-squares system does not determine every observed site type.
class UnderdeterminedFitError : public Error {
 public:
  using Error::Error;
};

/// Block seeding asked for more parts than there are non-empty blocks.
class InfeasibleSeedError : public Error {
 public:
  using Error::Error;
};

/// Bad partition request (nparts, tolerance, size mismatch, part ids).
class PartitionError : public Error {
 public:
  using Error::Error;
};

/// LB state produced a NaN or non-positive density.
class NumericalDivergenceError : public Error {
 public:
  NumericalDivergenceError(std::size_t site, const std::string& what)
      : Error(what), site_(site) {}
  std::size_t site() const noexcept { return site_; }

 private:
  std::size_t site_;
};

/// Timed region too short relative to the clock granularity.
class UnreliableMeasurementError : public Error {
 public:
  using Error::Error;
};

/// CSV or text file does not have the expected columns.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace latdecomp
