#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace chainbar {

// Every library failure derives from Error. kind() is a stable machine-readable
// tag, used verbatim by the CLI's error line and the experiment CSV.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

  private:
    std::string kind_;
};

class ParameterError : public Error {
  public:
    explicit ParameterError(const std::string& what) : Error("ParameterError", what) {}
};

class InsufficientSensors : public Error {
  public:
    InsufficientSensors(std::size_t have, std::size_t need)
        : Error("InsufficientSensors", "need at least " + std::to_string(need) +
                                           " sensors, got " + std::to_string(have)),
          have_(have), need_(need) {}
    std::size_t have() const noexcept { return have_; }
    std::size_t need() const noexcept { return need_; }

  private:
    std::size_t have_;
    std::size_t need_;
};

// Raised when an iteration budget runs out. diagnostics() carries a
// human-readable snapshot of the state at the point of failure.
class NoConvergence : public Error {
  public:
    explicit NoConvergence(const std::string& what, std::string diagnostics = {})
        : Error("NoConvergence", what), diagnostics_(std::move(diagnostics)) {}
    const std::string& diagnostics() const noexcept { return diagnostics_; }

  private:
    std::string diagnostics_;
};

class NumericalFailure : public Error {
  public:
    NumericalFailure(std::uint32_t body, const std::string& what)
        : Error("NumericalFailure", what), body_(body) {}
    std::uint32_t body() const noexcept { return body_; }

  private:
    std::uint32_t body_;
};

class SingleGraph : public Error {
  public:
    SingleGraph() : Error("SingleGraph", "forest has a single chain graph; no external sensors") {}
};

class IoError : public Error {
  public:
    explicit IoError(const std::string& what) : Error("IoError", what) {}
};

}  // namespace chainbar
