// mapper-stitch: sample shapes, compute mapper graph matrices, serve them over HTTP.
//
// Exit codes: 0 ok, 1 usage or invalid parameters, 2 data error, 3 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mapper_stitch/serialize.hpp"
#include "mapper_stitch/service.hpp"

namespace ms = mapper_stitch;

namespace {

enum Exit { ok = 0, usage = 1, data_error = 2, verify_failed = 3 };

struct MatrixArgs {
  std::string input;
  std::string data_dir = "data";
  std::vector<std::string> vars;
  std::vector<std::size_t> intervals{5};
  std::vector<double> overlap{0.2};
  double eps = 0.0;
  std::string measure = "lhd0";
  std::string restriction = "interior";
  std::size_t max_dim = ms::default_max_dim;
  std::uint64_t seed = 0;
  std::size_t points = 1000;
  double noise = 0.0;
  bool verify = false;
  bool include_members = false;
  std::string spec_file;
  std::string out = "-";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ms::DataError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ms::DataError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ms::DataError("failed writing '" + path + "'");
}

ms::MatrixSpec spec_from_args(const MatrixArgs& a) {
  if (!a.spec_file.empty()) return ms::spec_from_string(read_file(a.spec_file));
  ms::MatrixSpec s;
  if (ms::is_shape_name(a.input)) {
    s.dataset.shape = ms::parse_shape(a.input);
    s.dataset.n_points = a.points;
    s.dataset.noise = a.noise;
  } else {
    s.dataset.name = a.input;
  }
  s.variables = a.vars;
  s.intervals = a.intervals;
  s.overlap = a.overlap;
  if (a.eps > 0.0) s.epsilon = a.eps;
  s.measure = ms::parse_measure(a.measure);
  s.restriction = ms::parse_restriction(a.restriction);
  s.max_dim = a.max_dim;
  s.seed = a.seed;
  s.verify = a.verify;
  s.include_members = a.include_members;
  ms::validate(s);
  return s;
}

int run_matrix(const MatrixArgs& a) {
  ms::MatrixSpec spec = spec_from_args(a);
  ms::MatrixResult result = ms::compute_matrix(spec, a.data_dir, true);
  write_output(a.out, ms::dump_result(result));
  if (!result.all_verified()) {
    for (const auto& c : result.cells)
      if (c.verified && !*c.verified)
        std::cerr << "verification failed for cell (" << c.row << "," << c.col << "): "
                  << c.verification_report << "\n";
    return verify_failed;
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mapper composition and topological gains"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Sample a synthetic shape to CSV");
  std::string shape;
  std::size_t gen_points = 1000;
  double gen_noise = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "-";
  gen->add_option("shape", shape, "circle, two_circles, cylinder, half_cylinder or sphere")->required();
  gen->add_option("--points", gen_points, "Number of points");
  gen->add_option("--noise", gen_noise, "Gaussian noise standard deviation");
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--out", gen_out, "Output CSV ('-' for stdout)");

  MatrixArgs m;
  auto* matrix = app.add_subcommand("matrix", "Compute a mapper graph matrix as JSON");
  matrix->add_option("--input", m.input, "CSV path, dataset name in --data, or shape name");
  matrix->add_option("--data", m.data_dir, "Directory searched for dataset names");
  matrix->add_option("--vars", m.vars, "Filter variables")->delimiter(',');
  matrix->add_option("--intervals", m.intervals, "Intervals per variable (one value or one each)")->delimiter(',');
  matrix->add_option("--overlap", m.overlap, "Overlap fraction per variable")->delimiter(',');
  matrix->add_option("--eps", m.eps, "Connectivity radius (default: data driven)");
  matrix->add_option("--measure", m.measure, "lhd0, lhd1, lrec, led_d or led_a");
  matrix->add_option("--restriction", m.restriction, "interior or boundary");
  matrix->add_option("--max-dim", m.max_dim, "Largest simplex dimension");
  matrix->add_option("--seed", m.seed, "Seed for sampled shapes");
  matrix->add_option("--points", m.points, "Points for sampled shapes");
  matrix->add_option("--noise", m.noise, "Noise for sampled shapes");
  matrix->add_flag("--verify", m.verify, "Check every bivariate cell against the composed mapper");
  matrix->add_flag("--include-members", m.include_members, "Include node member lists");
  matrix->add_option("--spec", m.spec_file, "Read the whole spec from a JSON file");
  matrix->add_option("--out", m.out, "Output JSON ('-' for stdout)");

  auto* serve = app.add_subcommand("serve", "Serve the JSON API");
  int port = 8080;
  std::string bind = "127.0.0.1";
  std::string serve_data = "data";
  std::string static_dir;
  serve->add_option("--port", port, "TCP port");
  serve->add_option("--bind", bind, "Bind address");
  serve->add_option("--data", serve_data, "Dataset directory");
  serve->add_option("--static", static_dir, "Directory of static assets mounted at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (*gen) {
      auto cloud = ms::generate_shape(shape, gen_points, gen_noise, gen_seed);
      std::ostringstream out;
      ms::write_csv(cloud, out);
      write_output(gen_out, out.str());
      return ok;
    }
    if (*matrix) {
      if (m.input.empty() && m.spec_file.empty()) throw ms::SpecError("--input or --spec is required");
      return run_matrix(m);
    }
    if (*serve) {
      std::cerr << "serving on " << bind << ":" << port << "\n";
      return ms::serve(bind, port, serve_data, static_dir) ? ok : data_error;
    }
  } catch (const ms::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const ms::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return data_error;
  } catch (const ms::InvariantError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return verify_failed;
  }
  return ok;
}
