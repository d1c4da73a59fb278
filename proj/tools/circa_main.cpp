// circa: macroscopic circulation of probability flows on planar graphs.
//
//   circa analyze <file> [--out p] [--brute-check] [--include-outer]
//                        [--center-flux] [--tol eps] [--timing]
//   circa brute-force <file> [--connected] [--max-n k]
//   circa export-dot <file> --what {flux|dual|triangulated|partition} [--out p]
//
// Exit codes: 0 ok, 1 input did not validate, 2 pipeline failure.
// Set CIRCA_LOG=off|error|info|debug for stderr logging.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "circa/circa.hpp"

namespace {

const char* module_of(circa::ErrorKind k) {
  using K = circa::ErrorKind;
  switch (k) {
    case K::NotErgodic:
    case K::NonConvergence:
    case K::InfeasibleMass:
    case K::ZeroColumn:
      return "flowfield";
    case K::EmptyPart:
    case K::BadLength:
    case K::CyclicFluxMismatch:
    case K::TooLarge:
      return "partition";
    case K::IsolatedVertex:
    case K::EulerViolation:
    case K::NotGenusZero:
    case K::NoSuchFace:
    case K::CannotTriangulate:
      return "embedding";
    case K::InconsistentPotential:
      return "potential";
    case K::InsufficientConnectivity:
    case K::BadComponentCount:
    case K::MismatchCirculation:
      return "extract";
    default:
      return "cli";
  }
}

int exit_code_of(circa::ErrorKind k) {
  using K = circa::ErrorKind;
  switch (k) {
    case K::Parse:
    case K::Io:
    case K::Validation:
    case K::DimensionMismatch:
    case K::BadLength:
    case K::NotErgodic:
    case K::EmptyPart:
    case K::TooLarge:
      return 1;
    default:
      return 2;
  }
}

void write_output(const std::string& text, const std::optional<std::string>& out_path) {
  if (out_path) {
    std::ofstream out(*out_path);
    if (!out) circa::fail(circa::ErrorKind::Io, "cannot write " + *out_path);
    out << text;
  } else {
    std::cout << text;
  }
}

int report_error(const circa::Error& e) {
  circa::ordered_json err;
  err["error"] = {{"kind", circa::to_string(e.kind())},
                  {"module", module_of(e.kind())},
                  {"message", e.what()}};
  std::cout << err.dump(2) << "\n";
  return exit_code_of(e.kind());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"macroscopic circulation of probability flows on planar graphs"};
  app.require_subcommand(1);

  std::string input_path;
  std::optional<std::string> out_path;

  auto* analyze = app.add_subcommand("analyze", "run the full circulation pipeline");
  analyze->add_option("file", input_path, "problem file (JSON)")->required();
  analyze->add_option("--out", out_path, "write the report here instead of stdout");
  bool brute_check = false, include_outer = false, center_flux = false, timing = false;
  std::optional<double> tol;
  analyze->add_flag("--brute-check", brute_check, "append a brute-force cross-check");
  analyze->add_flag("--include-outer", include_outer, "triangulate the outer face too");
  analyze->add_flag("--center-flux", center_flux,
                    "project the flux field onto zero row sums before validation");
  analyze->add_option("--tol", tol, "override row/fixpoint/divergence/psi tolerances");
  analyze->add_flag("--timing", timing, "include wall-clock timing in the report");

  auto* brute = app.add_subcommand("brute-force", "exhaustive 3-partition search");
  brute->add_option("file", input_path, "problem file (JSON)")->required();
  bool connected = false;
  int max_n = 12;
  brute->add_flag("--connected", connected, "restrict to partitions with connected parts");
  brute->add_option("--max-n", max_n, "refuse instances larger than this");

  auto* exp = app.add_subcommand("export-dot", "emit a Graphviz view of the instance");
  exp->add_option("file", input_path, "problem file (JSON)")->required();
  std::string what;
  exp->add_option("--what", what, "flux | dual | triangulated | partition")->required();
  exp->add_option("--out", out_path, "write the DOT text here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    circa::ProblemFile problem = circa::load_problem(input_path);

    if (analyze->parsed()) {
      circa::AnalyzeFlags flags;
      flags.brute_check = brute_check;
      flags.include_outer = include_outer;
      flags.center_flux = center_flux;
      flags.timing = timing;
      flags.tol_override = tol;
      circa::ordered_json report = circa::analyze(problem, flags);
      write_output(report.dump(2) + "\n", out_path);
      return 0;
    }

    if (brute->parsed()) {
      circa::ordered_json report = circa::brute_force_report(problem, connected, max_n);
      write_output(report.dump(2) + "\n", out_path);
      return 0;
    }

    // export-dot
    circa::ProblemOptions opts = problem.options;
    circa::NetFluxField flux = circa::build_flux(problem, opts);
    circa::FlowGraph graph = circa::FlowGraph::from_flux(flux);
    std::string dot;
    if (what == "flux") {
      dot = circa::export_flux_dot(graph);
    } else if (what == "triangulated" || what == "dual" || what == "partition") {
      circa::PlanarEmbedding embedding = circa::build_embedding(problem, graph);
      circa::TriangulatedGraph tri = circa::triangulate(
          graph, embedding, opts.include_outer, opts.chords ? &*opts.chords : nullptr);
      if (what == "triangulated") {
        dot = circa::export_triangulated_dot(tri);
      } else {
        circa::DualGraph d = circa::dual(tri.embedding, tri.graph);
        circa::CurlPotential psi = circa::compute_psi(tri, d, opts.tol);
        if (what == "dual") {
          dot = circa::export_dual_dot(d, &psi);
        } else {
          circa::ExtractionResult ex =
              circa::extract_max_circulation_partition(flux, tri, d, psi, opts.tol);
          dot = circa::export_partition_dot(graph, ex.partition);
        }
      }
    } else {
      circa::fail(circa::ErrorKind::Validation,
                  "--what must be one of flux, dual, triangulated, partition");
    }
    write_output(dot, out_path);
    return 0;
  } catch (const circa::Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    circa::ordered_json err;
    err["error"] = {{"kind", "internal"}, {"module", "cli"}, {"message", e.what()}};
    std::cout << err.dump(2) << "\n";
    return 2;
  }
}
