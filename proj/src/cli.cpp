#include "unimoments/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "unimoments/bounds.hpp"
#include "unimoments/clifford.hpp"
#include "unimoments/correlation.hpp"
#include "unimoments/extremality.hpp"
#include "unimoments/io.hpp"
#include "unimoments/matkernel.hpp"
#include "unimoments/moments.hpp"

namespace unimoments::cli {

namespace {

using io::json;

struct Options {
  Tolerance tol;
  std::uint64_t seed = 0;
  Index cap = 8;
  bool real_mode = false;
  std::string output;
};

Index cap_from_env() {
  const char* env = std::getenv("UNIMOMENTS_CAP");
  if (env == nullptr || *env == '\0') return 8;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == nullptr || *end != '\0' || v < 1) {
    fail(ErrorKind::ParseError,
         std::string("UNIMOMENTS_CAP must be a positive integer, got \"") +
             env + "\"");
  }
  return static_cast<Index>(v);
}

void emit(const json& report, const Options& opt, std::ostream& out) {
  const std::string text = report.dump(2);
  if (opt.output.empty()) {
    out << text << "\n";
    return;
  }
  std::ofstream f(opt.output, std::ios::binary);
  if (!f) {
    fail(ErrorKind::IoError, "cannot open " + opt.output + " for writing");
  }
  f << text << "\n";
  if (!f) {
    fail(ErrorKind::IoError, "cannot write " + opt.output);
  }
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

int cmd_validate(const std::string& file, const Options& opt,
                 std::ostream& out) {
  const CMatrix m = io::load_matrix(file);
  json report;
  report["command"] = "validate";
  try {
    const CorrelationMatrix x = validate(m, opt.tol);
    report["valid"] = true;
    report["n"] = x.n();
    report["is_real"] = x.is_real();
    report["rank"] = rank_and_support(x.matrix(), opt.tol).rank;
    report["min_eigenvalue"] = min_eigenvalue(x.matrix());
    emit(report, opt, out);
    return 0;
  } catch (const Error& e) {
    if (exit_code(e.kind()) != 2) throw;
    report["valid"] = false;
    report["violation"] = error_kind_name(e.kind());
    report["message"] = e.what();
    emit(report, opt, out);
    return 2;
  }
}

int cmd_factor(const std::string& file, const Options& opt, std::ostream& out) {
  const CorrelationMatrix x = validate(io::load_matrix(file), opt.tol);
  const Frame f = frame_factor(x, opt.tol);
  json report;
  report["command"] = "factor";
  report["n"] = x.n();
  report["r"] = f.r();
  report["real"] = f.real;
  report["reconstruction_error"] = max_abs(gram(f) - x.matrix());
  report["frame"] = io::frame_to_json(f);
  emit(report, opt, out);
  return 0;
}

int cmd_extreme(const std::string& file, const Options& opt,
                std::ostream& out) {
  const CorrelationMatrix x = validate(io::load_matrix(file), opt.tol);
  const ExtremalityReport rep = is_extreme(x, opt.real_mode, opt.tol);
  json report;
  report["command"] = "extreme";
  report["n"] = x.n();
  report["real_mode"] = opt.real_mode;
  report["rank"] = rep.rank;
  report["rank_bound_satisfied"] = rep.rank_bound_satisfied;
  report["perturbation_dimension"] = rep.perturbation_dimension;
  report["is_extreme"] = rep.is_extreme;
  report["witness"] =
      rep.witness ? io::matrix_to_json(*rep.witness) : json(nullptr);
  if (!opt.real_mode) {
    const GnExclusionReport gn = gn_exclusion_rank2(x, opt.tol);
    json g;
    g["rank"] = gn.rank;
    g["extreme"] = gn.extreme;
    g["rank_one"] = gn.rank_one;
    g["certified_outside"] = gn.certified_outside;
    g["commuting_realizable"] = gn.rank_one ? json(true)
                                : gn.certified_outside ? json(false)
                                                       : json(nullptr);
    g["reason"] = gn.reason;
    report["trace_set_exclusion"] = std::move(g);
  }
  emit(report, opt, out);
  return 0;
}

int cmd_decompose(const std::string& file, const Options& opt,
                  std::ostream& out) {
  const CorrelationMatrix x = validate(io::load_matrix(file), opt.tol);
  const ExtremeDecomposition dec = decompose_extreme(x, opt.real_mode, opt.tol);
  CMatrix recon = CMatrix::Zero(x.n(), x.n());
  double wsum = 0.0;
  bool leaves_extreme = true;
  for (const auto& term : dec.terms) {
    recon += term.weight * term.matrix.matrix();
    wsum += term.weight;
    if (!is_extreme(term.matrix, opt.real_mode, opt.tol).is_extreme) {
      leaves_extreme = false;
    }
  }
  const double err = max_abs(recon - x.matrix());
  json report;
  report["command"] = "decompose";
  report["n"] = x.n();
  report["real_mode"] = opt.real_mode;
  report["term_count"] = dec.terms.size();
  report["weights_sum"] = wsum;
  report["reconstruction_error"] = err;
  report["leaves_extreme"] = leaves_extreme;
  report["decomposition"] = io::decomposition_to_json(dec);
  emit(report, opt, out);
  if (!leaves_extreme || err > 1e-8 || std::abs(wsum - 1.0) > 1e-10) {
    fail(ErrorKind::Internal,
         "decomposition failed re-verification: error " + std::to_string(err));
  }
  return 0;
}

int cmd_realize(const std::string& file, const Options& opt,
                std::ostream& out) {
  const CorrelationMatrix x = validate(io::load_matrix(file), opt.tol);
  const UnitaryTuple t = realize_real(x, opt.tol, opt.cap);
  const MomentMatrix mm = moment_matrix(t, opt.tol, Provenance::clifford);
  json report;
  report["command"] = "realize";
  report["n"] = x.n();
  report["rank"] = rank_and_support(x.matrix(), opt.tol).rank;
  report["k"] = t.k;
  report["round_trip_error"] = max_abs(mm.matrix.matrix() - x.matrix());
  report["tuple"] = io::tuple_to_json(t);
  emit(report, opt, out);
  return 0;
}

int cmd_bound(const std::string& file, const Options& opt, std::ostream& out) {
  const CorrelationMatrix x = validate(io::load_matrix(file), opt.tol);
  const BoundCertificate cert = best_lower_bound(x, opt.tol);
  const CertificateCheck chk = verify_certificate(cert, x, opt.tol, opt.cap);
  json report;
  report["command"] = "bound";
  report["n"] = x.n();
  report["certificate"] = io::certificate_to_json(cert);
  report["verification"] = io::check_to_json(chk);
  emit(report, opt, out);
  if (!chk.ok) {
    fail(ErrorKind::Internal, "emitted certificate failed re-verification");
  }
  return 0;
}

int cmd_verify(const std::string& tuple_file, const std::string& matrix_file,
               const Options& opt, std::ostream& out) {
  const UnitaryTuple t = io::tuple_from_json(io::load_json(tuple_file));
  const CorrelationMatrix x = validate(io::load_matrix(matrix_file), opt.tol);
  if (t.n() != x.n()) {
    fail(ErrorKind::DimensionMismatch,
         "tuple length does not match matrix size");
  }
  const double unit_err = tuple_unitarity_error(t);
  const MomentMatrix mm = moment_matrix(t, opt.tol);
  const double moment_err = max_abs(mm.matrix.matrix() - x.matrix());
  const CMatrix kernel = nullspace(x.matrix(), opt.tol);
  json kernels = json::array();
  bool kernels_ok = true;
  for (Index j = 0; j < kernel.cols(); ++j) {
    const CVector c = kernel.col(j);
    const double residual = kernel_relation_residual(t, c);
    // ||sum c_i V_i||^2 is at most k times the quadratic form of X at c
    const double form =
        std::max(0.0, (c.adjoint() * x.matrix() * c)(0, 0).real());
    const double allowed =
        std::sqrt(form * static_cast<double>(t.k)) + 1e-8;
    json entry;
    entry["vector"] = io::vector_to_json(c);
    entry["residual"] = residual;
    entry["allowed"] = allowed;
    entry["ok"] = residual <= allowed;
    if (residual > allowed) kernels_ok = false;
    kernels.push_back(std::move(entry));
  }
  const bool ok = unit_err <= 1e-9 && moment_err <= 1e-8 && kernels_ok;
  json report;
  report["command"] = "verify";
  report["n"] = x.n();
  report["k"] = t.k;
  report["unitarity_error"] = unit_err;
  report["moment_error"] = moment_err;
  report["kernel_relations"] = std::move(kernels);
  report["ok"] = ok;
  emit(report, opt, out);
  return ok ? 0 : 2;
}

int cmd_sample(Index n, Index k, const Options& opt, std::ostream& out) {
  const UnitaryTuple t = haar_tuple(n, k, opt.seed);
  const MomentMatrix mm = moment_matrix(t, opt.tol, Provenance::haar);
  json report;
  report["command"] = "sample";
  report["n"] = n;
  report["k"] = k;
  report["seed"] = opt.seed;
  report["moment_matrix"] = io::matrix_to_json(mm.matrix.matrix());
  report["tuple"] = io::tuple_to_json(t);
  emit(report, opt, out);
  return 0;
}

int cmd_refute_f6(const std::string& file, const Options& opt,
                  std::ostream& out) {
  const CorrelationMatrix x = validate(io::load_matrix(file), opt.tol);
  const RefutationCertificate cert = refute_commuting_f6(x, opt.tol);
  json report;
  report["command"] = "refute-f6";
  report["certificate"] = io::refutation_to_json(cert);
  emit(report, opt, out);
  if (!cert.refuted) {
    fail(ErrorKind::Internal, "refutation case analysis did not close");
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"second-order unitary moment matrices: validation, frames, "
               "extreme points, realizations and scale bounds"};
  app.name("unimoments");
  app.require_subcommand(1);

  Options opt;
  try {
    opt.cap = cap_from_env();
  } catch (const Error& e) {
    err << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  }

  app.add_option("--tol-psd", opt.tol.eps_psd,
                 "absolute eigenvalue slack for PSD checks")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-rank", opt.tol.eps_rank,
                 "relative eigenvalue cut for rank decisions")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-eq", opt.tol.eps_eq,
                 "entrywise equality tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "RNG seed for sampling");
  app.add_option("--cap", opt.cap,
                 "largest realization rank (dimension 2^cap); overrides "
                 "UNIMOMENTS_CAP")
      ->check(CLI::PositiveNumber);
  app.add_flag("--real-mode", opt.real_mode,
               "restrict perturbations to real symmetric matrices");
  app.add_option("--output", opt.output, "write the report to a file");

  std::string file, tuple_file, matrix_file;
  Index sample_n = 0, sample_k = 0;

  CLI::App* c_validate =
      app.add_subcommand("validate", "check a correlation matrix file");
  c_validate->add_option("file", file, "matrix JSON")->required();
  CLI::App* c_factor =
      app.add_subcommand("factor", "frame factorization X = F*F");
  c_factor->add_option("file", file, "matrix JSON")->required();
  CLI::App* c_extreme =
      app.add_subcommand("extreme", "extremality and rank report");
  c_extreme->add_option("file", file, "matrix JSON")->required();
  CLI::App* c_decompose = app.add_subcommand(
      "decompose", "convex decomposition into extreme matrices");
  c_decompose->add_option("file", file, "matrix JSON")->required();
  CLI::App* c_realize = app.add_subcommand(
      "realize", "anticommuting-symmetry realization of a real matrix");
  c_realize->add_option("file", file, "matrix JSON")->required();
  CLI::App* c_bound = app.add_subcommand(
      "bound", "certified lower bounds on the realizability scales");
  c_bound->add_option("file", file, "matrix JSON")->required();
  CLI::App* c_verify = app.add_subcommand(
      "verify", "check a tuple file against a matrix file");
  c_verify->add_option("tuple", tuple_file, "tuple JSON")->required();
  c_verify->add_option("matrix", matrix_file, "matrix JSON")->required();
  CLI::App* c_sample =
      app.add_subcommand("sample", "moment matrix of Haar unitaries");
  c_sample->add_option("n", sample_n, "number of unitaries")
      ->required()
      ->check(CLI::PositiveNumber);
  c_sample->add_option("k", sample_k, "unitary size")
      ->required()
      ->check(CLI::PositiveNumber);
  CLI::App* c_refute = app.add_subcommand(
      "refute-f6", "no-commuting-realization certificate for the "
                   "distinguished 6x6 matrix");
  c_refute->add_option("file", file, "matrix JSON")->required();

  for (CLI::App* sub : {c_validate, c_factor, c_extreme, c_decompose,
                        c_realize, c_bound, c_verify, c_sample, c_refute}) {
    sub->fallthrough();
  }

  std::vector<const char*> argv;
  argv.push_back("unimoments");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!opt.tol.valid()) {
      fail(ErrorKind::PreconditionViolated,
           "tolerances must be positive with eps_rank >= eps_psd");
    }
    if (c_validate->parsed()) return cmd_validate(file, opt, out);
    if (c_factor->parsed()) return cmd_factor(file, opt, out);
    if (c_extreme->parsed()) return cmd_extreme(file, opt, out);
    if (c_decompose->parsed()) return cmd_decompose(file, opt, out);
    if (c_realize->parsed()) return cmd_realize(file, opt, out);
    if (c_bound->parsed()) return cmd_bound(file, opt, out);
    if (c_verify->parsed())
      return cmd_verify(tuple_file, matrix_file, opt, out);
    if (c_sample->parsed()) return cmd_sample(sample_n, sample_k, opt, out);
    if (c_refute->parsed()) return cmd_refute_f6(file, opt, out);
    fail(ErrorKind::Internal, "no subcommand dispatched");
  } catch (const Error& e) {
    err << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "internal: " << e.what() << "\n";
    return 5;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace unimoments::cli
