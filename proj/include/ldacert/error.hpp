#pragma once

#include <stdexcept>
#include <string>

namespace ldacert {

// Exit status used by the command line front end.
enum class Status : int { ok = 0, rejected = 2, accuracy = 3 };

class Error : public std::runtime_error {
public:
  Error(const std::string& what, Status s) : std::runtime_error(what), status_(s) {}
  Status status() const { return status_; }

private:
  Status status_;
};

struct ParamError : Error {
  explicit ParamError(const std::string& w) : Error(w, Status::rejected) {}
};

struct InvalidField : Error {
  explicit InvalidField(const std::string& w) : Error(w, Status::rejected) {}
};

struct FileError : Error {
  explicit FileError(const std::string& w) : Error(w, Status::rejected) {}
};

struct SupportError : Error {
  explicit SupportError(const std::string& w) : Error(w, Status::rejected) {}
};

struct GeometryError : Error {
  explicit GeometryError(const std::string& w) : Error(w, Status::rejected) {}
};

struct DegenerateError : Error {
  explicit DegenerateError(const std::string& w) : Error(w, Status::rejected) {}
};

struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w) : Error(w, Status::rejected) {}
};

struct SolverError : Error {
  explicit SolverError(const std::string& w) : Error(w, Status::accuracy) {}
};

struct AccuracyError : Error {
  AccuracyError(const std::string& w, double estimate)
      : Error(w, Status::accuracy), estimate(estimate) {}
  double estimate;
};

}  // namespace ldacert
