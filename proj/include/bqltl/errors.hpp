#pragma once

#include <stdexcept>
#include <string>

namespace bqltl {

// Structured failure of a bounded construction: names the pipeline stage that
// blew the budget instead of letting the blowup happen.
struct ResourceError : std::runtime_error {
  std::string stage;
  ResourceError(std::string stage_, const std::string& what)
      : std::runtime_error("resource limit exceeded in " + stage_ + ": " + what),
        stage(std::move(stage_)) {}
};

}  // namespace bqltl
