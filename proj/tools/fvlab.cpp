// fvlab - exact rates, sweeps, converse bounds and checks for universal
// fixed-to-variable codes.

#include "CLI11.hpp"
#include "fvc/cli.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  fvc::cli::RunConfig c;
  CLI::App app{"fvlab: exact finite-blocklength rates of fixed-to-variable codes"};
  app.set_config("--config", "", "read flags from a TOML/INI file");
  app.require_subcommand(1);

  auto common = [&](CLI::App* s) {
    s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--out", c.out, "write the report here instead of stdout");
  };
  auto source = [&](CLI::App* s) {
    s->add_option("--m", c.m, "alphabet size");
    s->add_option("--dist", c.dist, "probabilities, comma separated")->delimiter(',');
    s->add_option("--eps", c.eps, "error probabilities, comma separated")->delimiter(',');
  };

  auto* rates = app.add_subcommand("rates", "exact eps-rates at given n");
  source(rates);
  rates->add_option("--n", c.n_spec, "n, a list a,b,c or a geometric range a:b")->required();
  rates->add_option("--code", c.codes, "optimal|type-size|2s-fv|2s-ff|interleave|all")->delimiter(',');
  common(rates);

  auto* sweep = app.add_subcommand("sweep", "rates over a geometric n grid with third-order fits");
  source(sweep);
  sweep->add_option("--n", c.n_spec, "range a:b")->required();
  sweep->add_option("--code", c.codes, "codes")->delimiter(',');
  common(sweep);

  auto* conv = app.add_subcommand("converse", "mixture converse bound on an entropy sphere");
  source(conv);
  conv->add_option("--n", c.n_spec, "n, list or range")->required();
  conv->add_option("--gamma", c.gamma, "sphere levels in bits (default J(P) from --dist)")->delimiter(',');
  conv->add_option("--code", c.codes, "universal code whose worst-case rate sets k")->delimiter(',');
  conv->add_option("--k", c.k_bits, "evaluate at this bit count instead");
  conv->add_option("--resolution", c.resolution, "grid directions")->check(CLI::PositiveNumber);
  common(conv);

  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_option("--max-n", c.max_n, "largest n")->check(CLI::PositiveNumber);
  common(verify);

  auto* lap = app.add_subcommand("laplace", "Laplace approximation catalog");
  lap->add_option("--n", c.n_spec, "n values (default 64,128,256,512,1024)");
  common(lap);

  CLI11_PARSE(app, argc, argv);
  c.command = app.get_subcommands().front()->get_name();

  try {
    if (c.out.empty()) return fvc::cli::run(c, std::cout, std::cerr);
    std::ofstream f(c.out);
    if (!f) {
      std::cerr << "fvlab: cannot open " << c.out << "\n";
      return 2;
    }
    return fvc::cli::run(c, f, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "fvlab: " << e.what() << "\n";
    return 2;
  }
}
