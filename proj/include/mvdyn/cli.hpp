#pragma once

#include "mvdyn/deciders.hpp"
#include "mvdyn/elimination.hpp"
#include "mvdyn/fock_checks.hpp"
#include "mvdyn/io.hpp"
#include "mvdyn/random.hpp"
#include "mvdyn/spectrum.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace mvdyn {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitYes = 0, kExitNo = 1, kExitError = 2, kExitUsage = 64 };

namespace cli_detail {

struct Globals {
  std::uint64_t seed = 0;
  double tol = -1.0;
  int max_level = 3;
  int max_points = 8;
  int jobs = 1;
  std::string out;

  Tolerances tolerances() const {
    Tolerances t;
    if (tol > 0.0) t.zero = tol;
    return t;
  }
};

inline Json residual(double x) { return io_detail::clean(x); }

/// Sends the primary artifact to --out when given, otherwise to stdout.
inline void emit(const Globals& g, std::ostream& out, const Json& artifact) {
  if (g.out.empty())
    out << canonical_dump(artifact);
  else
    write_text_file(g.out, canonical_dump(artifact));
}

inline Json system_hash(const MultivariableSystem& s) { return json_hash(system_to_json(s)); }

inline int run_verify(const Globals& g, const std::vector<std::string>& files, std::ostream& out) {
  const Tolerances tol = g.tolerances();
  Json report = Json::array();
  for (const auto& path : files) {
    const Json j = read_json_file(path);
    Json entry = {{"file", path}};
    with_file(path, [&] {
      if (j.is_object() && j.contains("labels")) {
        const auto s = spectrum_from_json(j);
        entry["type"] = "spectrum";
        entry["points"] = s.points();
        entry["arity"] = s.arity();
      } else if (j.is_object() && j.contains("row_reps")) {
        const auto m = intertwiner_matrix_from_json(j);
        entry["type"] = "intertwiner-matrix";
        entry["rows"] = m.rows();
        entry["cols"] = m.cols();
        entry["intertwining_residual"] = residual(m.residual());
        bool surjective = true;
        for (const auto* fam : {&m.row_reps(), &m.col_reps()})
          for (const auto& r : *fam) surjective = surjective && r.is_surjective();
        entry["surjective"] = surjective;
      } else {
        const auto s = system_from_json(j, tol);
        entry["type"] = "system";
        entry["arity"] = s.arity();
        entry["blocks"] = s.algebra().block_sizes();
        double hom = 0.0;
        for (const auto& m : s.maps()) hom = std::max(hom, homomorphism_residual(m));
        entry["homomorphism_residual"] = residual(hom);
        entry["hash"] = system_hash(s);
      }
      return 0;
    });
    entry["result"] = "Valid";
    report.push_back(entry);
  }
  out << canonical_dump(report);
  return kExitYes;
}

inline int run_eliminate(const Globals& g, const std::string& path, std::ostream& out) {
  const Tolerances tol = g.tolerances();
  const Json j = read_json_file(path);
  const IntertwinerMatrix input = with_file(path, [&] { return intertwiner_matrix_from_json(j); });
  const EliminationResult result = gaussian_eliminate(input, tol);
  if (const auto* contradiction = std::get_if<DimensionContradiction>(&result)) {
    out << canonical_dump({{"result", "DimensionContradiction"},
                           {"zero_row", contradiction->zero_row + 1},
                           {"rows", input.rows()},
                           {"cols", input.cols()}});
    return kExitNo;
  }
  const auto& cert = std::get<EliminationCertificate>(result);
  const EliminationCheck check = verify_elimination_certificate(input, cert, tol);
  CertificateFile file;
  file.kind = "elimination";
  file.payload = elimination_certificate_to_json(cert);
  file.residuals = {{"replay_error", residual(check.replay_error)},
                    {"diagonal_residual", residual(check.diagonal_residual)}};
  file.input_hashes = {{"input", json_hash(intertwiner_matrix_to_json(input))}};
  emit(g, out, certificate_file_to_json(file));
  if (!g.out.empty()) out << canonical_dump({{"result", "Eliminated"}, {"certificate", g.out}});
  return check.passed ? kExitYes : kExitError;
}

inline int report_certificate(const Globals& g, std::ostream& out, const std::string& result, CertificateFile file) {
  if (g.out.empty()) {
    out << canonical_dump({{"result", result}, {"certificate", certificate_file_to_json(file)}});
  } else {
    write_text_file(g.out, canonical_dump(certificate_file_to_json(file)));
    out << canonical_dump({{"result", result}, {"certificate", g.out}});
  }
  return kExitYes;
}

inline int run_decide_outer(const Globals& g, const std::string& pa, const std::string& pb, std::ostream& out) {
  const Tolerances tol = g.tolerances();
  const auto a = parse_system(pa, tol);
  const auto b = parse_system(pb, tol);
  const auto outcome = decide_outer_conjugacy(a, b, tol);
  using S = OuterConjugacyOutcome::Status;
  if (outcome.status == S::arity_mismatch) {
    out << canonical_dump({{"result", "ArityMismatch"}, {"arity_a", a.arity()}, {"arity_b", b.arity()}});
    return kExitNo;
  }
  if (outcome.status == S::not_conjugate) {
    Json hall = Json::array();
    for (int i : outcome.hall_violator) hall.push_back(i + 1);
    out << canonical_dump({{"result", "NotConjugate"}, {"hall_violator", hall}});
    return kExitNo;
  }
  const auto& cert = *outcome.certificate;
  const auto rep = verify_outer_conjugacy(cert, a, b);
  CertificateFile file;
  file.kind = "outer";
  file.payload = outer_certificate_to_json(cert);
  file.residuals = {{"unitarity", residual(rep.unitarity)}, {"conjugacy", residual(rep.conjugacy)}};
  file.input_hashes = {{"a", system_hash(a)}, {"b", system_hash(b)}};
  if (!rep.passed) throw Error(ErrorCode::unverified_certificate, "constructed certificate failed verification");
  return report_certificate(g, out, "Conjugate", std::move(file));
}

inline int run_decide_ue(const Globals& g, const std::string& pa, const std::string& pb, std::ostream& out) {
  const Tolerances tol = g.tolerances();
  const auto a = parse_system(pa, tol);
  const auto b = parse_system(pb, tol);
  const auto outcome = decide_unitary_equivalence_commutative(a, b, SearchOptions{g.max_points});
  using S = UnitaryEquivalenceOutcome::Status;
  switch (outcome.status) {
    case S::arity_mismatch:
      out << canonical_dump({{"result", "ArityMismatch"}, {"arity_a", a.arity()}, {"arity_b", b.arity()}});
      return kExitNo;
    case S::spectrum_size_mismatch:
      out << canonical_dump({{"result", "SpectrumSizeMismatch"},
                             {"points_a", a.algebra().num_blocks()},
                             {"points_b", b.algebra().num_blocks()}});
      return kExitNo;
    case S::not_equivalent: out << canonical_dump({{"result", "NotEquivalent"}}); return kExitNo;
    case S::equivalent: break;
  }
  const auto& cert = *outcome.certificate;
  const auto rep = certify_unitary_equivalence(cert, a, b);
  if (!rep.passed) throw Error(ErrorCode::unverified_certificate, "constructed certificate failed verification");
  CertificateFile file;
  file.kind = "unitary-equivalence";
  file.payload = unitary_equivalence_certificate_to_json(cert);
  file.residuals = {{"left_unitarity", residual(rep.left_unitarity)},
                    {"right_unitarity", residual(rep.right_unitarity)},
                    {"intertwining", residual(rep.intertwining)}};
  file.input_hashes = {{"a", system_hash(a)}, {"b", system_hash(b)}};
  return report_certificate(g, out, "Equivalent", std::move(file));
}

inline int run_decide_piecewise(const Globals& g, const std::string& ps, const std::string& pt, std::ostream& out) {
  const Tolerances tol = g.tolerances();
  const Json js = read_json_file(ps);
  const Json jt = read_json_file(pt);
  const auto s = with_file(ps, [&] { return spectrum_or_system_from_json(js, tol); });
  const auto t = with_file(pt, [&] { return spectrum_or_system_from_json(jt, tol); });
  const auto outcome = decide_piecewise_conjugacy(s, t, SearchOptions{g.max_points});
  using S = PiecewiseOutcome::Status;
  if (outcome.status == S::arity_mismatch) {
    out << canonical_dump({{"result", "ArityMismatch"}, {"arity_s", s.arity()}, {"arity_t", t.arity()}});
    return kExitNo;
  }
  if (outcome.status == S::not_conjugate) {
    out << canonical_dump({{"result", "NotConjugate"}});
    return kExitNo;
  }
  CertificateFile file;
  file.kind = "piecewise";
  file.payload = piecewise_certificate_to_json(*outcome.certificate);
  file.input_hashes = {{"s", json_hash(spectrum_to_json(s))}, {"t", json_hash(spectrum_to_json(t))}};
  return report_certificate(g, out, "Conjugate", std::move(file));
}

inline void check_hash(const CertificateFile& file, const std::string& role, const Json& hash) {
  if (!file.input_hashes.contains(role) || file.input_hashes[role] != hash)
    throw Error(ErrorCode::unverified_certificate, "input \"" + role + "\" does not match the certificate's hash");
}

inline int run_certify(const Globals& g, const std::string& cert_path, const std::vector<std::string>& inputs,
                       std::ostream& out) {
  const Tolerances tol = g.tolerances();
  const Json cj = read_json_file(cert_path);
  const CertificateFile file = with_file(cert_path, [&] { return certificate_file_from_json(cj); });
  Json report = {{"kind", file.kind}};
  bool passed = false;
  auto need = [&](std::size_t n) {
    if (inputs.size() != n)
      throw CLI::ValidationError("certify", "kind " + file.kind + " needs " + std::to_string(n) + " input file(s)");
  };
  if (file.kind == "elimination") {
    need(1);
    const Json ij = read_json_file(inputs[0]);
    const auto input = with_file(inputs[0], [&] { return intertwiner_matrix_from_json(ij); });
    check_hash(file, "input", json_hash(intertwiner_matrix_to_json(input)));
    const auto cert = with_file(cert_path, [&] {
      return elimination_certificate_from_json(file.payload, input.rows(), input.cols(), input.dimension());
    });
    const auto check = verify_elimination_certificate(input, cert, tol);
    report["replay_error"] = residual(check.replay_error);
    report["diagonal_residual"] = residual(check.diagonal_residual);
    report["diagonal_invertible"] = check.diagonal_invertible;
    report["hash_matches"] = check.hash_matches;
    passed = check.passed;
  } else if (file.kind == "piecewise") {
    need(2);
    const Json js = read_json_file(inputs[0]);
    const Json jt = read_json_file(inputs[1]);
    const auto s = with_file(inputs[0], [&] { return spectrum_or_system_from_json(js, tol); });
    const auto t = with_file(inputs[1], [&] { return spectrum_or_system_from_json(jt, tol); });
    check_hash(file, "s", json_hash(spectrum_to_json(s)));
    check_hash(file, "t", json_hash(spectrum_to_json(t)));
    const auto cert = with_file(cert_path, [&] { return piecewise_certificate_from_json(file.payload, t.points(), t.arity()); });
    passed = verify_piecewise_certificate(cert, s, t);
  } else {
    need(2);
    const auto a = parse_system(inputs[0], tol);
    const auto b = parse_system(inputs[1], tol);
    check_hash(file, "a", system_hash(a));
    check_hash(file, "b", system_hash(b));
    if (file.kind == "outer") {
      const auto cert = with_file(cert_path, [&] { return outer_certificate_from_json(file.payload, a, b, tol); });
      const auto rep = verify_outer_conjugacy(cert, a, b);
      report["unitarity"] = residual(rep.unitarity);
      report["conjugacy"] = residual(rep.conjugacy);
      passed = rep.passed;
    } else {
      const auto cert =
          with_file(cert_path, [&] { return unitary_equivalence_certificate_from_json(file.payload, a, b, tol); });
      const auto rep = certify_unitary_equivalence(cert, a, b);
      report["left_unitarity"] = residual(rep.left_unitarity);
      report["right_unitarity"] = residual(rep.right_unitarity);
      report["intertwining"] = residual(rep.intertwining);
      report["isomorphism"] = residual(rep.isomorphism);
      passed = rep.passed;
    }
  }
  report["result"] = passed ? "Verified" : "Rejected";
  out << canonical_dump(report);
  return passed ? kExitYes : kExitNo;
}

inline int run_fock_validate(const Globals& g, const std::string& pa, const std::string& pb, const std::string& cert_path,
                             int level, std::size_t max_dimension, std::ostream& out) {
  const Tolerances tol = g.tolerances();
  if (level > g.max_level)
    throw Error(ErrorCode::dimension_budget_exceeded,
                "level " + std::to_string(level) + " exceeds --max-level " + std::to_string(g.max_level));
  const auto a = parse_system(pa, tol);
  const auto b = pb.empty() ? a : parse_system(pb, tol);
  std::optional<UnitaryEquivalenceCertificate> cert;
  if (!cert_path.empty()) {
    const Json cj = read_json_file(cert_path);
    const CertificateFile file = with_file(cert_path, [&] { return certificate_file_from_json(cj); });
    check_hash(file, "a", system_hash(a));
    check_hash(file, "b", system_hash(b));
    if (file.kind == "outer")
      cert = to_unitary_equivalence(
          with_file(cert_path, [&] { return outer_certificate_from_json(file.payload, a, b, tol); }), a, b);
    else if (file.kind == "unitary-equivalence")
      cert = with_file(cert_path, [&] { return unitary_equivalence_certificate_from_json(file.payload, a, b, tol); });
    else
      throw Error(ErrorCode::schema_error, cert_path + ": fock-validate needs an outer or unitary-equivalence certificate");
  }
  const FockRep fb(b, level, max_dimension);
  Rng rng(g.seed);
  const FockValidation v = validate_fock(fb, rng, 2, cert, &a);
  Json report = {{"level", level},
                 {"dimension", v.dimension},
                 {"covariance", residual(v.covariance)},
                 {"isometry", residual(v.isometry)},
                 {"e0_idempotence", residual(v.e0_idempotence)},
                 {"f_idempotence", residual(v.f_idempotence)},
                 {"f_annihilation", residual(v.f_annihilation)},
                 {"e0_of_f", residual(v.e0_of_f)},
                 {"gauge_partition", residual(v.gauge_partition)},
                 {"isometric_ratio", residual(v.isometric_ratio)}};
  if (v.has_certificate) {
    report["induced_covariance"] = residual(v.induced_covariance);
    report["recovery"] = residual(v.recovery);
    report["associated_intertwining"] = residual(v.associated_intertwining);
    report["associated_right_invertible"] = v.associated_right_invertible;
    report["constant_term_norm"] = residual(v.constant_term_norm);
    report["remainder_norm"] = residual(v.remainder_norm);
    if (v.constant_term_norm > 1e-9) report["warnings"] = Json::array({"nonzero degree-zero coefficient"});
  }
  report["result"] = v.passed ? "Verified" : "Rejected";
  emit(g, out, report);
  return v.passed ? kExitYes : kExitNo;
}

struct GenOptions {
  std::string blocks = "2";
  int arity = 2;
  int count = 1;
  int pool = 0;
  std::string conjugate_of;
  std::string cert_out;
  bool spectrum = false;
  bool elimination = false;
  int size = 2;
  int dim = 2;
  int extra_rows = 0;
};

inline std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--blocks", "expected a comma-separated list of positive integers");
    }
  }
  if (out.empty()) throw CLI::ValidationError("--blocks", "expected at least one block size");
  return out;
}

/// Instance `index` uses its own stream seeded from (seed, index), so output
/// does not depend on --jobs.
inline Rng instance_rng(std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  return Rng(seq);
}

inline std::string generate_instance(const GenOptions& o, const BlockAlgebra& alg, Rng& rng) {
  if (o.elimination) return canonical_dump(intertwiner_matrix_to_json(random_elimination_instance(rng, o.size, o.dim, o.extra_rows)));
  if (o.spectrum) return canonical_dump(spectrum_to_json(random_spectrum_system(rng, alg.block_sizes(), o.arity)));
  const auto s = o.pool > 0 ? random_system_with_repeats(rng, alg, o.arity, o.pool) : random_system(rng, alg, o.arity);
  return emit_system(s);
}

inline int run_gen(const Globals& g, const GenOptions& o, std::ostream& out) {
  if (!o.conjugate_of.empty()) {
    const auto a = parse_system(o.conjugate_of, g.tolerances());
    Rng rng = instance_rng(g.seed, 0);
    const auto pair = random_unitary_equivalent(rng, a, g.tolerances());
    emit(g, out, system_to_json(pair.system));
    if (!o.cert_out.empty()) {
      const auto rep = certify_unitary_equivalence(pair.certificate, a, pair.system);
      CertificateFile file;
      file.kind = "unitary-equivalence";
      file.payload = unitary_equivalence_certificate_to_json(pair.certificate);
      file.residuals = {{"left_unitarity", residual(rep.left_unitarity)},
                        {"right_unitarity", residual(rep.right_unitarity)},
                        {"intertwining", residual(rep.intertwining)}};
      file.input_hashes = {{"a", system_hash(a)}, {"b", system_hash(pair.system)}};
      write_text_file(o.cert_out, canonical_dump(certificate_file_to_json(file)));
    }
    return kExitYes;
  }
  if (o.count < 1) throw CLI::ValidationError("--count", "must be positive");
  const BlockAlgebra alg(parse_sizes(o.blocks));
  std::vector<std::string> texts(o.count);
  std::vector<std::string> errors(o.count);
  auto work = [&](int first, int stride) {
    for (int i = first; i < o.count; i += stride) {
      try {
        Rng rng = instance_rng(g.seed, i);
        texts[i] = generate_instance(o, alg, rng);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int jobs = std::max(1, std::min(g.jobs, o.count));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(work, t, jobs);
  work(0, jobs);
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (!e.empty()) throw Error(ErrorCode::invariant_violation, "generation failed: " + e);

  if (o.count == 1) {
    if (g.out.empty())
      out << texts[0];
    else
      write_text_file(g.out, texts[0]);
    return kExitYes;
  }
  if (g.out.empty()) throw CLI::ValidationError("--out", "a directory is required when --count > 1");
  std::filesystem::create_directories(g.out);
  Json written = Json::array();
  for (int i = 0; i < o.count; ++i) {
    std::ostringstream name;
    name << "instance-" << std::setw(4) << std::setfill('0') << (i + 1) << ".json";
    const std::string path = (std::filesystem::path(g.out) / name.str()).string();
    write_text_file(path, texts[i]);
    written.push_back(path);
  }
  out << canonical_dump({{"written", written}});
  return kExitYes;
}

}  // namespace cli_detail

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  CLI::App app{"Decision procedures for multivariable dynamics over finite-dimensional C*-algebras", "mvdyn"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--tol", g.tol, "Override the zero tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-level", g.max_level, "Largest Fock truncation level accepted")->check(CLI::PositiveNumber);
  app.add_option("--max-points", g.max_points, "Largest spectrum searched by brute force")->check(CLI::PositiveNumber);
  app.add_option("--jobs", g.jobs, "Worker threads for batch generation")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file (or directory for batches)");

  std::vector<std::string> files;
  auto* verify = app.add_subcommand("verify", "Load and validate input files");
  verify->add_option("files", files, "System, spectrum or intertwiner-matrix files")->required()->check(CLI::ExistingFile);

  std::string first, second, third;
  auto* eliminate = app.add_subcommand("eliminate", "Run certified elimination on an intertwiner matrix");
  eliminate->add_option("matrix", first)->required()->check(CLI::ExistingFile);

  auto* outer = app.add_subcommand("decide-outer", "Decide outer conjugacy over a full matrix algebra");
  outer->add_option("a", first)->required()->check(CLI::ExistingFile);
  outer->add_option("b", second)->required()->check(CLI::ExistingFile);

  auto* ue = app.add_subcommand("decide-ue-commutative", "Decide unitary equivalence over C^m");
  ue->add_option("a", first)->required()->check(CLI::ExistingFile);
  ue->add_option("b", second)->required()->check(CLI::ExistingFile);

  auto* piecewise = app.add_subcommand("decide-piecewise", "Decide piecewise conjugacy of spectrum systems");
  piecewise->add_option("s", first)->required()->check(CLI::ExistingFile);
  piecewise->add_option("t", second)->required()->check(CLI::ExistingFile);

  auto* certify = app.add_subcommand("certify", "Re-verify a certificate file against its inputs");
  certify->add_option("certificate", first)->required()->check(CLI::ExistingFile);
  certify->add_option("inputs", files)->required()->check(CLI::ExistingFile);

  int level = 2;
  std::size_t max_dimension = 20000;
  auto* fock = app.add_subcommand("fock-validate", "Residual report for the truncated Fock representation");
  fock->add_option("a", first)->required()->check(CLI::ExistingFile);
  fock->add_option("b", second, "Target system (defaults to a)")->check(CLI::ExistingFile);
  fock->add_option("--cert", third, "Outer or unitary-equivalence certificate from a to b")->check(CLI::ExistingFile);
  fock->add_option("--level", level, "Truncation level L")->check(CLI::PositiveNumber);
  fock->add_option("--max-dimension", max_dimension, "Dimension cap for the truncated space");

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen", "Generate seeded random instances");
  gen->add_option("--blocks", gen_opts.blocks, "Block sizes, comma separated");
  gen->add_option("--arity", gen_opts.arity)->check(CLI::PositiveNumber);
  gen->add_option("--count", gen_opts.count)->check(CLI::PositiveNumber);
  gen->add_option("--repeats", gen_opts.pool, "Draw maps from a pool of this many automorphisms");
  gen->add_option("--conjugate-of", gen_opts.conjugate_of, "Emit a unitarily equivalent copy of this system")
      ->check(CLI::ExistingFile);
  gen->add_option("--cert-out", gen_opts.cert_out, "Certificate file for --conjugate-of");
  gen->add_flag("--spectrum", gen_opts.spectrum, "Emit spectrum systems");
  gen->add_flag("--elimination", gen_opts.elimination, "Emit intertwiner matrices");
  gen->add_option("--size", gen_opts.size, "Columns of the intertwiner matrix")->check(CLI::PositiveNumber);
  gen->add_option("--dim", gen_opts.dim, "Matrix size of the target algebra")->check(CLI::PositiveNumber);
  gen->add_option("--extra-rows", gen_opts.extra_rows)->check(CLI::NonNegativeNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitYes;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitYes;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*verify) return run_verify(g, files, out);
    if (*eliminate) return run_eliminate(g, first, out);
    if (*outer) return run_decide_outer(g, first, second, out);
    if (*ue) return run_decide_ue(g, first, second, out);
    if (*piecewise) return run_decide_piecewise(g, first, second, out);
    if (*certify) return run_certify(g, first, files, out);
    if (*fock) return run_fock_validate(g, first, second, third, level, max_dimension, out);
    if (*gen) return run_gen(g, gen_opts, out);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitError;
  } catch (const Json::exception& e) {
    err << "SchemaError: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace mvdyn
