#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "polymech/benchmarks.hpp"

namespace bm = polymech::benchmarks;
namespace fea = polymech::fea;

namespace {

std::string fixture(const std::string& name) {
  return std::string(POLYMECH_FIXTURE_DIR) + "/" + name;
}

std::vector<std::string> cantilever_poly_fixtures() {
  return {fixture("cantilever_poly_100.json"), fixture("cantilever_poly_200.json"),
          fixture("cantilever_poly_400.json"), fixture("cantilever_poly_800.json")};
}

std::vector<std::string> default_fixtures(const std::string& stem, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i)
    out.push_back(fixture(stem + "_" + std::to_string(i) + ".json"));
  return out;
}

// Shared per-subcommand knobs; each subcommand registers the flags it uses.
struct Options {
  std::string formulation = "stab";
  double alpha = 0.1;
  int levels = 4;
  std::vector<std::string> meshes;
  std::string out = "out";
  std::vector<double> alphas = {0.01, 0.05, 0.1, 0.5, 1.0};
};

void add_common(CLI::App* cmd, Options& o, bool levels, bool meshes) {
  cmd->add_option("--formulation", o.formulation,
                  "fem | sfem1 | sfem2 | sfem4 | sfem | stab | vem");
  cmd->add_option("--alpha", o.alpha, "stabilization factor alpha*");
  if (levels) cmd->add_option("--levels", o.levels, "ladder depth");
  if (meshes) cmd->add_option("--mesh", o.meshes, "mesh fixture files");
  cmd->add_option("--out", o.out, "output directory for CSV/SVG");
}

fea::Formulation parse_form(const std::string& name) {
  try {
    return fea::parse_formulation(name);
  } catch (const std::exception& e) {
    throw bm::ConfigError(e.what());
  }
}

std::string out_path(const Options& o, const std::string& name) {
  std::filesystem::create_directories(o.out);
  return (std::filesystem::path(o.out) / name).string();
}

void print_convergence(const std::string& label, const bm::ConvergenceReport& r) {
  std::cout << label << "\n";
  std::cout << std::left << std::setw(12) << "h" << std::setw(8) << "nelem"
            << std::setw(8) << "ndof" << std::setw(16) << "err_l2"
            << std::setw(16) << "err_h1" << "\n";
  for (const auto& row : r.rows)
    std::cout << std::left << std::setw(12) << std::setprecision(6) << row.h
              << std::setw(8) << row.nelem << std::setw(8) << row.ndof
              << std::setw(16) << std::scientific << std::setprecision(6)
              << row.err_l2 << std::setw(16) << row.err_h1 << "\n"
              << std::defaultfloat;
  std::cout << "slope_l2=" << std::fixed << std::setprecision(4) << r.slope_l2
            << " slope_h1=" << r.slope_h1 << std::defaultfloat << "\n";
}

void emit_convergence(const Options& o, const std::string& stem,
                      const std::string& title, const bm::ConvergenceReport& r) {
  bm::write_convergence_csv(out_path(o, stem + ".csv"), r);
  bm::write_loglog_svg(out_path(o, stem + ".svg"), title, r);
  print_convergence(title + " [" + o.formulation + "]", r);
  std::cout << "wrote " << out_path(o, stem + ".csv") << "\n";
}

void print_matrix(const std::string& name, const Eigen::MatrixXd& m) {
  std::cout << name << " =\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      std::cout << std::setw(10) << std::fixed << std::setprecision(4) << m(i, j);
    std::cout << "\n";
  }
  std::cout << std::defaultfloat;
}

void print_diff(const std::string& name, const Eigen::MatrixXd& a,
                const Eigen::MatrixXd& b) {
  std::cout << "max|" << name << " - ref| = " << std::scientific
            << std::setprecision(2) << (a - b).cwiseAbs().maxCoeff()
            << std::defaultfloat << "\n";
}

int run_patch(const std::string& which, const bm::PatchReport& rep) {
  std::cout << which << ": nelem=" << rep.nelem << " ndof=" << rep.ndof << "\n";
  if (rep.max_rel_err < 1e-10) {
    std::cout << "patch_test=PASS max_err<1e-10\n";
    return 0;
  }
  std::cout << "patch_test=FAIL max_err=" << std::scientific
            << std::setprecision(3) << rep.max_rel_err << "\n";
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polygonal solid mechanics benchmarks"};
  app.require_subcommand(1);
  int seed = 42;
  app.add_option("--seed", seed, "RNG seed for randomized suites")
      ->capture_default_str();

  Options o;
  std::vector<std::string> info_meshes;
  auto* c_info = app.add_subcommand("mesh-info", "summarize mesh files");
  c_info->add_option("--mesh", info_meshes, "mesh files")->required();

  auto* c_gold = app.add_subcommand(
      "golden-matrices", "worked scalar matrices and diffs vs reference");

  auto* c_canti = app.add_subcommand(
      "cantilever2d", "end-loaded cantilever convergence ladder");
  add_common(c_canti, o, true, true);
  auto* c_hole =
      app.add_subcommand("plate-hole", "open-hole plate convergence ladder");
  add_common(c_hole, o, false, true);
  auto* c_lshape =
      app.add_subcommand("l-shape", "reentrant-corner convergence ladder");
  add_common(c_lshape, o, false, true);
  auto* c_patch2 = app.add_subcommand("patch2d", "2D linear patch test");
  add_common(c_patch2, o, false, true);
  auto* c_patch3 =
      app.add_subcommand("patch3d", "warped-cube 3D linear patch test");
  add_common(c_patch3, o, false, false);
  auto* c_beam = app.add_subcommand("beam3d", "shear-loaded 3D beam ladder");
  add_common(c_beam, o, true, false);
  auto* c_spec = app.add_subcommand("stability-spectrum",
                                    "unit-cube element eigenvalue spectra");
  c_spec->add_option("--alpha", o.alpha, "stabilization factor alpha*");
  auto* c_edge =
      app.add_subcommand("edge-crack", "double-edge-cracked strip SIF ladder");
  add_common(c_edge, o, true, true);
  auto* c_incl = app.add_subcommand("inclined-crack",
                                    "inclined center crack SIF sweep");
  add_common(c_incl, o, false, true);
  auto* c_alpha =
      app.add_subcommand("alpha-study", "stabilization parameter sweep");
  c_alpha->add_option("--mesh", o.meshes, "cantilever fixture mesh");
  c_alpha->add_option("--alphas", o.alphas, "alpha* grid");
  c_alpha->add_option("--out", o.out, "output directory for CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_info) {
      for (const auto& path : info_meshes) {
        const bm::MeshInfo mi = bm::mesh_info(path);
        std::cout << path << ": dim=" << mi.dim << " nodes=" << mi.nnodes
                  << " elements=" << mi.nelem;
        if (mi.dim == 2) std::cout << " sbfem_cells=" << mi.nsbfem;
        std::cout << std::scientific << std::setprecision(4)
                  << " min_measure=" << mi.min_measure
                  << " max_measure=" << mi.max_measure
                  << " max_diameter=" << mi.max_diameter << std::defaultfloat
                  << "\n";
      }
    } else if (*c_gold) {
      const bm::GoldenMatrices g = bm::golden_matrices();
      std::cout << "unit square, scalar Laplace\n";
      print_matrix("K_fem_full", g.fem_full);
      print_matrix("K_fem_reduced", g.fem_reduced);
      print_matrix("K_sfem_sc1q4", g.sfem_sc1);
      print_matrix("K_sfem_sc2q4", g.sfem_sc2);
      print_matrix("K_vem_const", g.vem_const);
      print_matrix("K_vem_stab", g.vem_stab);
      print_diff("K_fem_full", g.fem_full, g.ref_fem_full);
      print_diff("K_sfem_sc1q4", g.sfem_sc1, g.ref_sfem_sc1);
      print_diff("K_sfem_sc2q4", g.sfem_sc2, g.ref_sfem_sc2);
      print_diff("K_vem_const", g.vem_const, g.ref_vem_const);
      print_diff("K_vem_stab", g.vem_stab, g.ref_vem_stab);
      std::cout << "\npentagon, scalar Laplace\n";
      print_matrix("K_sfem_onecell", g.pent_sfem1);
      print_matrix("K_vem_const", g.pent_vem_const);
      print_matrix("K_vem_full", g.pent_vem_full);
      print_diff("K_sfem_onecell", g.pent_sfem1, g.ref_pent_consistency);
      print_diff("K_vem_const", g.pent_vem_const, g.ref_pent_consistency);
      print_diff("K_vem_full", g.pent_vem_full, g.ref_pent_full);
      std::cout << "max|K_sfem_onecell - K_vem_const| = " << std::scientific
                << std::setprecision(2)
                << (g.pent_sfem1 - g.pent_vem_const).cwiseAbs().maxCoeff()
                << std::defaultfloat << "\n";
    } else if (*c_canti) {
      const fea::Formulation form = parse_form(o.formulation);
      const bm::ConvergenceReport r =
          o.meshes.empty()
              ? bm::cantilever_quad_ladder(form, o.alpha, o.levels)
              : bm::cantilever_polygon_ladder(form, o.alpha, o.meshes);
      emit_convergence(o, "cantilever2d", "cantilever", r);
    } else if (*c_hole) {
      const fea::Formulation form = parse_form(o.formulation);
      const auto files =
          o.meshes.empty() ? default_fixtures("plate_hole", 4) : o.meshes;
      emit_convergence(o, "plate_hole", "plate with hole",
                       bm::plate_hole_ladder(form, o.alpha, files));
    } else if (*c_lshape) {
      const fea::Formulation form = parse_form(o.formulation);
      const auto files =
          o.meshes.empty() ? default_fixtures("l_shape", 4) : o.meshes;
      emit_convergence(o, "l_shape", "reentrant corner",
                       bm::l_shape_ladder(form, o.alpha, files));
    } else if (*c_patch2) {
      const fea::Formulation form = parse_form(o.formulation);
      const std::string file =
          o.meshes.empty() ? fixture("patch2d.json") : o.meshes.front();
      return run_patch("patch2d", bm::patch_test_2d(form, o.alpha, file));
    } else if (*c_patch3) {
      const fea::Formulation form = parse_form(o.formulation);
      return run_patch("patch3d", bm::patch_test_3d(form, o.alpha));
    } else if (*c_beam) {
      const fea::Formulation form = parse_form(o.formulation);
      if (c_beam->count("--levels") == 0) o.levels = 3;
      emit_convergence(o, "beam3d", "shear-loaded beam",
                       bm::beam3d_ladder(form, o.alpha, o.levels));
    } else if (*c_spec) {
      const bm::SpectrumReport r = bm::stability_spectrum(o.alpha);
      auto line = [](const std::string& name, const Eigen::VectorXd& eig,
                     int zeros) {
        std::cout << name << ": zeros=" << zeros << " eig=[" << std::scientific
                  << std::setprecision(3);
        for (int i = 0; i < eig.size(); ++i)
          std::cout << (i ? " " : "") << eig(i);
        std::cout << "]" << std::defaultfloat << "\n";
      };
      line("fem", r.eig_fem, r.zeros_fem);
      line("sfem1", r.eig_sfem1, r.zeros_sfem1);
      line("stab", r.eig_stab, r.zeros_stab);
    } else if (*c_edge) {
      if (c_edge->count("--levels") == 0) o.levels = 5;
      if (o.levels < 1 || o.levels > 5)
        throw bm::ConfigError("edge-crack supports 1..5 levels");
      std::vector<std::string> files = o.meshes;
      if (files.empty()) files = default_fixtures("edge_crack", o.levels);
      std::vector<double> hs;
      for (std::size_t i = 0; i < files.size(); ++i)
        hs.push_back(0.25 / static_cast<double>(1 << i));
      const bm::EdgeCrackReport r = bm::edge_crack_study(files, hs);
      std::cout << "h        nelem  nnodes  KI       KI/sqrt(pi a)\n";
      for (const auto& row : r.rows)
        std::cout << std::left << std::setw(9) << row.h << std::setw(7)
                  << row.nelem << std::setw(8) << row.nnodes << std::setw(9)
                  << std::fixed << std::setprecision(4) << row.ki
                  << row.ki_norm << std::defaultfloat << "\n";
      std::cout << "ref KI/sqrt(pi a) = " << std::fixed << std::setprecision(4)
                << r.ref_ki_norm << std::defaultfloat << "\n";
      bm::write_edge_crack_csv(out_path(o, "edge_crack.csv"), r);
      std::cout << "wrote " << out_path(o, "edge_crack.csv") << "\n";
    } else if (*c_incl) {
      const std::vector<double> betas = {0, 15, 30, 45, 60, 75, 90};
      std::vector<std::string> files = o.meshes;
      if (files.empty())
        for (double b : betas)
          files.push_back(
              fixture("inclined_crack_" + std::to_string(static_cast<int>(b)) +
                      ".json"));
      const bm::InclinedCrackReport r = bm::inclined_crack_study(files, betas);
      std::cout
          << "beta  KI_ref  KI_tipA KI_tipB KII_ref KII_tipA KII_tipB\n";
      for (const auto& row : r.rows)
        std::cout << std::left << std::setw(6) << row.beta_deg << std::fixed
                  << std::setprecision(4) << std::setw(8) << row.ki_ref
                  << std::setw(8) << row.ki_a << std::setw(8) << row.ki_b
                  << std::setw(8) << row.kii_ref << std::setw(9) << row.kii_a
                  << row.kii_b << std::defaultfloat << "\n";
      bm::write_inclined_csv(out_path(o, "inclined_crack.csv"), r);
      std::cout << "wrote " << out_path(o, "inclined_crack.csv") << "\n";
    } else if (*c_alpha) {
      const std::string file = o.meshes.empty()
                                   ? fixture("cantilever_poly_800.json")
                                   : o.meshes.front();
      const bm::AlphaReport r = bm::alpha_study(file, o.alphas);
      std::cout << "alpha    err_l2        err_h1\n";
      for (const auto& row : r.rows)
        std::cout << std::left << std::setw(9) << row.alpha << std::scientific
                  << std::setprecision(4) << std::setw(14) << row.err_l2
                  << row.err_h1 << std::defaultfloat << "\n";
      std::cout << "best_alpha=" << r.best_alpha << "\n";
      bm::write_alpha_csv(out_path(o, "alpha_study.csv"), r);
      std::cout << "wrote " << out_path(o, "alpha_study.csv") << "\n";
    }
  } catch (const bm::ConfigError& e) {
    std::cerr << "error=config detail=\"" << e.what() << "\"\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error=numerical detail=\"" << e.what() << "\"\n";
    return 3;
  }
  return 0;
}
