#pragma once

#include <stdexcept>
#include <string>

namespace csl {

// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionMismatch : public Error {
  public:
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

class ArityMismatch : public Error {
  public:
    explicit ArityMismatch(const std::string& msg) : Error(msg) {}
};

class NotHermitian : public Error {
  public:
    NotHermitian(const std::string& msg, double residual) : Error(msg), residual_(residual) {}
    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

class CentroidNotZero : public Error {
  public:
    CentroidNotZero(const std::string& msg, double norm) : Error(msg), norm_(norm) {}
    double centroid_norm() const noexcept { return norm_; }

  private:
    double norm_;
};

class NoConvergence : public Error {
  public:
    NoConvergence(const std::string& msg, int iterations) : Error(msg), iterations_(iterations) {}
    int iterations() const noexcept { return iterations_; }

  private:
    int iterations_;
};

class ParseError : public Error {
  public:
    ParseError(const std::string& msg, std::size_t position) : Error(msg), position_(position) {}
    std::size_t position() const noexcept { return position_; }

  private:
    std::size_t position_;
};

class IoError : public Error {
  public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

class ChecksumMismatch : public Error {
  public:
    ChecksumMismatch(const std::string& msg, std::size_t record_index)
        : Error(msg), record_index_(record_index) {}
    std::size_t record_index() const noexcept { return record_index_; }

  private:
    std::size_t record_index_;
};

}  // namespace csl
