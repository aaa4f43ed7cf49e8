#pragma once

#include <stdexcept>
#include <string>

#include "config.hpp"
#include "output.hpp"

namespace ramsey::app {

/// A numerical routine gave up (quadrature, degenerate protocol, ...); exit status 3.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(std::string operation, const std::string& detail)
      : std::runtime_error(operation + ": " + detail), operation_(std::move(operation)) {}
  const std::string& operation() const { return operation_; }

 private:
  std::string operation_;
};

/// Computes everything the config asks for and stages the files; nothing is written yet.
/// `resolved_yaml` is stored verbatim so the run can be repeated from the output alone.
StagedOutput run_job(const RunConfig& config, const std::string& resolved_yaml);

}  // namespace ramsey::app
