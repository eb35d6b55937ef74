// Walks through the library on the sample files: load a system, decide
// outer conjugacy against a conjugated copy, run certified elimination, and
// check the truncated Fock representation.
//
// Usage: sample_walkthrough [samples-dir]

#include "mvdyn/mvdyn.hpp"

#include <iostream>

using namespace mvdyn;

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "samples";
  try {
    const auto a = parse_system(dir + "/system_m2.json");
    std::cout << "system over M_2 with " << a.arity() << " maps\n";

    Rng rng(2024);
    const auto pair = random_unitary_equivalent(rng, a);
    const auto outer = decide_outer_conjugacy(a, pair.system);
    const auto report = verify_outer_conjugacy(*outer.certificate, a, pair.system);
    std::cout << "outer conjugacy: permutation";
    for (int p : outer.certificate->permutation) std::cout << ' ' << p + 1;
    std::cout << ", conjugacy residual " << report.conjugacy << "\n";

    const auto m = intertwiner_matrix_from_json(read_json_file(dir + "/intertwiner_scalar.json"));
    const auto result = gaussian_eliminate(m);
    const auto& cert = std::get<EliminationCertificate>(result);
    std::cout << "elimination diagonal:";
    for (const auto& d : cert.diagonal) std::cout << ' ' << d(0, 0).real();
    std::cout << ", replay error " << verify_elimination_certificate(m, cert).replay_error << "\n";

    const auto s = spectrum_from_json(read_json_file(dir + "/spectrum_swap.json"));
    const auto t = spectrum_from_json(read_json_file(dir + "/spectrum_swap_reordered.json"));
    const bool piecewise = decide_piecewise_conjugacy(s, t).status == PiecewiseOutcome::Status::conjugate;
    std::cout << "piecewise conjugate: " << (piecewise ? "yes" : "no") << "\n";

    const FockRep fb(pair.system, 2);
    const auto v = validate_fock(fb, rng, 1, to_unitary_equivalence(*outer.certificate, a, pair.system), &a);
    std::cout << "Fock dimension " << v.dimension << ", covariance " << v.covariance << ", recovery " << v.recovery
              << ", " << (v.passed ? "passed" : "failed") << "\n";
    return v.passed ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
