#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <sqn/sqn.hpp>

namespace {

// Exit codes are a stable contract:
// 0 success/similar, 1 not-similar, 2 precondition, 3 I/O, 4 ambiguity.
int error_code(const sqn::Error& e) {
  switch (e.code()) {
    case sqn::ErrorCode::IoError:
      return 3;
    case sqn::ErrorCode::ClusterAmbiguity:
    case sqn::ErrorCode::PairingFailure:
      return 4;
    default:
      return 2;
  }
}

bool matrix_is_real(const sqn::MatrixData& md) {
  return md.m.imag().isZero(0.0);
}

int run_check(const std::string& path, const sqn::ToleranceConfig& cfg) {
  const sqn::MatrixData md = sqn::read_matrix_file(path);
  sqn::require_square_finite(md.m, "input");
  const double defect = sqn::squared_normality_defect(md.m);
  const bool ok = sqn::is_squared_normal(md.m, cfg);
  std::cout << "squared-normal: " << (ok ? "yes" : "no") << ", defect "
            << sqn::format_sig(defect) << "\n";
  return ok ? 0 : 2;
}

int run_canon(const std::string& path, const std::string& form_kind,
              const std::string& witness_path, const std::string& out_path,
              const sqn::ToleranceConfig& cfg) {
  const sqn::MatrixData md = sqn::read_matrix_file(path);
  sqn::require_square_finite(md.m, "input");
  sqn::CanonicalForm form;
  sqn::MatrixData witness;
  if (form_kind == "real") {
    if (!matrix_is_real(md))
      throw sqn::InvalidMatrixError(
          "real canonical form requires a real matrix");
    const sqn::RealCanonResult res = sqn::canon_real(md.real(), cfg);
    form = res.form;
    witness.complex = false;
    witness.m = res.transform.cast<sqn::Complex>();
  } else {
    const sqn::CanonResult res = form_kind == "b" ? sqn::canon_b(md.m, cfg)
                                                  : sqn::canon_a(md.m, cfg);
    form = res.form;
    witness.complex = true;
    witness.m = res.transform;
  }
  std::cout << sqn::describe_form(form);
  if (!witness_path.empty()) sqn::write_matrix_file(witness_path, witness);
  if (!out_path.empty()) sqn::write_form_file(out_path, form);
  return 0;
}

int run_similar(const std::string& path_a, const std::string& path_b,
                bool orthogonal, const std::string& witness_path,
                const sqn::ToleranceConfig& cfg) {
  const sqn::MatrixData ma = sqn::read_matrix_file(path_a);
  const sqn::MatrixData mb = sqn::read_matrix_file(path_b);
  bool similar = false;
  double residual = 0;
  sqn::MatrixData witness;
  if (orthogonal) {
    if (!matrix_is_real(ma) || !matrix_is_real(mb))
      throw sqn::InvalidMatrixError(
          "orthogonal similarity requires real matrices");
    const sqn::RealMatrix a = ma.real(), b = mb.real();
    const auto dec = sqn::orthogonally_similar(a, b, cfg);
    similar = dec.similar;
    if (dec.witness) {
      residual = (dec.witness->transpose() * a * *dec.witness - b).norm();
      witness.complex = false;
      witness.m = dec.witness->cast<sqn::Complex>();
    }
  } else {
    const auto dec = sqn::unitarily_similar(ma.m, mb.m, cfg);
    similar = dec.similar;
    if (dec.witness) {
      residual = (dec.witness->adjoint() * ma.m * *dec.witness - mb.m).norm();
      witness.complex = true;
      witness.m = *dec.witness;
    }
  }
  if (!similar) {
    std::cout << "not-similar\n";
    return 1;
  }
  std::cout << "similar (witness residual " << sqn::format_sig(residual)
            << ")\n";
  if (!witness_path.empty()) sqn::write_matrix_file(witness_path, witness);
  return 0;
}

int run_gen(sqn::Index n, std::uint64_t seed, bool real,
            const sqn::GenParams& par, const std::string& out_path,
            std::string sidecar_path) {
  if (sidecar_path.empty()) sidecar_path = out_path + ".form.json";
  if (real) {
    const auto inst = sqn::random_real_squared_normal_with_form(n, seed, par);
    sqn::write_matrix_file(out_path,
                           {false, inst.matrix.cast<sqn::Complex>()});
    sqn::write_form_file(sidecar_path, inst.form);
  } else {
    const auto inst = sqn::random_squared_normal_with_form(n, seed, par);
    sqn::write_matrix_file(out_path, {true, inst.matrix});
    sqn::write_form_file(sidecar_path, inst.form);
  }
  std::cout << "wrote " << out_path << " and " << sidecar_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Canonical forms of squared-normal matrices under unitary and "
      "orthogonal similarity"};
  app.require_subcommand(1);

  sqn::ToleranceConfig cfg;
  if (const char* env = std::getenv("CANON_TOL")) {
    const double t = std::atof(env);
    if (t > 0) cfg.normality_tol = t;
  }
  const auto add_tol_flags = [&cfg](CLI::App* sub) {
    sub->add_option("--tol", cfg.normality_tol,
                    "squared-normality tolerance (env CANON_TOL overrides "
                    "the default)")
        ->capture_default_str();
    sub->add_option("--cluster-tol", cfg.cluster_tol,
                    "eigenvalue cluster link tolerance")
        ->capture_default_str();
    sub->add_option("--rank-tol", cfg.rank_tol,
                    "relative rank threshold for block splitting")
        ->capture_default_str();
  };

  int rc = 0;

  auto* check = app.add_subcommand(
      "check", "Report the normality defect of the square and a verdict");
  std::string check_path;
  check->add_option("input", check_path, "matrix file")->required();
  add_tol_flags(check);
  check->callback([&] { rc = run_check(check_path, cfg); });

  auto* canon = app.add_subcommand(
      "canon", "Canonicalize and print the sorted block list");
  std::string canon_path, canon_form = "a", canon_witness, canon_out;
  canon->add_option("input", canon_path, "matrix file")->required();
  canon->add_option("--form", canon_form, "canonical family: a, b, or real")
      ->check(CLI::IsMember({"a", "b", "real"}))
      ->capture_default_str();
  canon->add_option("--witness", canon_witness,
                    "write the similarity transform to this file");
  canon->add_option("--out", canon_out,
                    "write the canonical form as JSON to this file");
  add_tol_flags(canon);
  canon->callback([&] {
    rc = run_canon(canon_path, canon_form, canon_witness, canon_out, cfg);
  });

  auto* similar =
      app.add_subcommand("similar", "Decide unitary/orthogonal similarity");
  std::string sim_a, sim_b, sim_witness;
  bool sim_orth = false;
  similar->add_option("A", sim_a, "first matrix file")->required();
  similar->add_option("B", sim_b, "second matrix file")->required();
  similar->add_flag("--orthogonal", sim_orth,
                    "decide orthogonal similarity of real inputs");
  similar->add_option("--witness", sim_witness,
                      "write the witness to this file");
  add_tol_flags(similar);
  similar->callback(
      [&] { rc = run_similar(sim_a, sim_b, sim_orth, sim_witness, cfg); });

  auto* gen = app.add_subcommand(
      "gen", "Generate a random squared-normal matrix with a ground-truth "
             "form sidecar");
  sqn::Index gen_n = 0;
  std::uint64_t gen_seed = 1;
  bool gen_real = false;
  sqn::GenParams par;
  std::string gen_out, gen_sidecar;
  gen->add_option("--n", gen_n, "dimension")
      ->required()
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
  gen->add_flag("--real", gen_real, "generate a real matrix (real blocks)");
  gen->add_option("--scale", par.scale, "eigenvalue magnitude scale")
      ->capture_default_str();
  gen->add_option("--pair-density", par.pair_density,
                  "probability mass on coupled blocks")
      ->capture_default_str();
  gen->add_option("--zero-density", par.zero_density,
                  "probability of the nilpotent family")
      ->capture_default_str();
  gen->add_option("--reuse-density", par.reuse_density,
                  "probability of reusing an eigenvalue family")
      ->capture_default_str();
  gen->add_flag("--adversarial", par.adversarial,
                "drop the cluster separation enforcement");
  gen->add_option("output", gen_out, "matrix file to write")->required();
  gen->add_option("--sidecar", gen_sidecar,
                  "sidecar path (default: output + .form.json)");
  gen->callback([&] {
    rc = run_gen(gen_n, gen_seed, gen_real, par, gen_out, gen_sidecar);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  } catch (const sqn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return error_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
