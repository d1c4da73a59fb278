#pragma once

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace circa {

/// Machine-readable failure categories. Every error the library throws maps
/// onto exactly one kind; the CLI serializes them as snake_case strings.
enum class ErrorKind {
  Parse,
  Validation,
  DimensionMismatch,
  NotErgodic,
  NonConvergence,
  InfeasibleMass,
  ZeroColumn,
  EmptyPart,
  BadLength,
  CyclicFluxMismatch,
  TooLarge,
  IsolatedVertex,
  EulerViolation,
  NotGenusZero,
  NoSuchFace,
  CannotTriangulate,
  InconsistentPotential,
  InsufficientConnectivity,
  BadComponentCount,
  MismatchCirculation,
  Io,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::NotErgodic: return "not_ergodic";
    case ErrorKind::NonConvergence: return "non_convergence";
    case ErrorKind::InfeasibleMass: return "infeasible_mass";
    case ErrorKind::ZeroColumn: return "zero_column";
    case ErrorKind::EmptyPart: return "empty_part";
    case ErrorKind::BadLength: return "bad_length";
    case ErrorKind::CyclicFluxMismatch: return "cyclic_flux_mismatch";
    case ErrorKind::TooLarge: return "too_large";
    case ErrorKind::IsolatedVertex: return "isolated_vertex";
    case ErrorKind::EulerViolation: return "euler_violation";
    case ErrorKind::NotGenusZero: return "not_genus_zero";
    case ErrorKind::NoSuchFace: return "no_such_face";
    case ErrorKind::CannotTriangulate: return "cannot_triangulate";
    case ErrorKind::InconsistentPotential: return "inconsistent_potential";
    case ErrorKind::InsufficientConnectivity: return "insufficient_connectivity";
    case ErrorKind::BadComponentCount: return "bad_component_count";
    case ErrorKind::MismatchCirculation: return "mismatch_circulation";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

/// Library-wide exception. `value()` carries a kind-specific payload:
/// the residual for InconsistentPotential, the genus for NotGenusZero,
/// the component count for BadComponentCount, and so on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, double value = 0.0)
      : std::runtime_error(message), kind_(kind), value_(value) {}

  ErrorKind kind() const { return kind_; }
  double value() const { return value_; }

 private:
  ErrorKind kind_;
  double value_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message, double value = 0.0) {
  throw Error(kind, message, value);
}

/// Numeric tolerances. Defaults are library-wide; callers may override any
/// of them per run (see the problem-file `options.tolerances` block).
struct Tolerances {
  double row = 1e-9;         // stochasticity / normalization checks
  double fixpoint = 1e-9;    // stationarity residual and current balance
  double divergence = 1e-9;  // zero-row-sum check on net-flux fields
  double psi = 1e-9;         // dual-edge consistency of the curl potential
  double flux_snap = 1e-12;  // |flux| below this is snapped to exact zero

  /// Set the CLI-overridable epsilons (row / fixpoint / divergence / psi)
  /// to one common value.
  Tolerances& set_uniform(double eps) {
    row = fixpoint = divergence = psi = eps;
    return *this;
  }
};

namespace log {

enum class Level { Off = 0, ErrorOnly = 1, Info = 2, Debug = 3 };

inline Level level_from_env() {
  const char* raw = std::getenv("CIRCA_LOG");
  if (!raw) return Level::ErrorOnly;
  std::string v(raw);
  if (v == "off") return Level::Off;
  if (v == "error") return Level::ErrorOnly;
  if (v == "info") return Level::Info;
  if (v == "debug") return Level::Debug;
  return Level::ErrorOnly;
}

inline Level& level() {
  static Level lvl = level_from_env();
  return lvl;
}

inline void info(const std::string& msg) {
  if (level() >= Level::Info) std::fprintf(stderr, "[circa] %s\n", msg.c_str());
}

inline void debug(const std::string& msg) {
  if (level() >= Level::Debug) std::fprintf(stderr, "[circa:debug] %s\n", msg.c_str());
}

}  // namespace log

}  // namespace circa
