#pragma once

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>

namespace avi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRejected = 3;

/// Set by the chosen subcommand's parse callback; main() runs it.
using Action = std::function<int()>;

void add_monitor(CLI::App& app, Action& action);
void add_experiment(CLI::App& app, Action& action);
void add_lab(CLI::App& app, Action& action);

/// Bad flag values discovered after parsing; reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// stdout for "-", otherwise a truncated file.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw std::runtime_error("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

/// stdin for "-", otherwise the named file.
class InputSource {
 public:
  explicit InputSource(const std::string& path) : name_(path == "-" ? "<stdin>" : path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ifstream>(path);
    if (!*file_) throw std::runtime_error("cannot open '" + path + "'");
  }
  std::istream& stream() { return file_ ? *file_ : std::cin; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::unique_ptr<std::ifstream> file_;
};

/// CLI11 check for a level strictly inside (0, 1).
inline const CLI::Validator kOpenUnitInterval(
    [](std::string& s) -> std::string {
      double v = 0.0;
      try {
        v = std::stod(s);
      } catch (const std::exception&) {
        return "not a number: " + s;
      }
      return v > 0.0 && v < 1.0 ? std::string() : "must lie strictly between 0 and 1";
    },
    "(0,1)");

}  // namespace avi::cli
