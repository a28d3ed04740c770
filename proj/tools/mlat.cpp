// Command-line front end for the monadic lattice workbench.
#include <iostream>

#include <CLI11.hpp>

#include "mlat/workbench.hpp"

int main(int argc, char** argv) {
  using namespace mlat;
  CLI::App app{"Finite monadic distributive lattices and their dual spaces"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Print the machine-readable document instead of text");

  CommandOptions o;
  std::string file, target, kind;
  std::size_t n = 0;

  auto* check = app.add_subcommand("check", "Validate a lattice, space or map document");
  check->add_option("file", file, "Document")->required();

  auto* dualize = app.add_subcommand("dualize", "Lattice to spectrum, or space to dual algebra");
  dualize->add_option("file", file, "Document")->required();
  dualize->add_option("--out", o.out, "Write the dual document here");

  auto* classify = app.add_subcommand("classify", "Simple / subdirectly irreducible / neither");
  classify->add_option("file", file, "Document")->required();
  classify->add_option("--max-size", o.max_size, "Congruence cap in lattice elements");

  auto* congruences = app.add_subcommand("congruences", "Saturated sets and their congruences");
  congruences->add_option("file", file, "Document")->required();
  congruences->add_flag("--q", o.q, "Quantifier congruences from i-saturated sets");
  congruences->add_option("--max-size", o.max_size, "Congruence cap in lattice elements");

  auto* enumerate = app.add_subcommand("enumerate", "All spaces or monadic lattices of a size");
  enumerate->add_option("n", n, "Number of points")->required();
  enumerate->add_option("kind", kind, "spaces or lattices")->required()->check(CLI::IsMember({"spaces", "lattices"}));
  enumerate->add_option("--max-size", o.max_size, "Point cap for spaces");

  auto* verify = app.add_subcommand("verify", "Run every property over the universe of size n");
  verify->add_option("n", n, "Number of points")->required();
  verify->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1, 256));
  verify->add_flag("--inject-bug", o.inject_bug)->group("");

  auto* morphism = app.add_subcommand("morphism", "Check a map document, or list every map between two spaces");
  morphism->add_option("file", file, "Map document, or source space with --enumerate")->required();
  morphism->add_option("--enumerate", target, "Target space document");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  CommandResult r;
  if (*check) r = run_command("check", [&] { return cmd_check(file, o); });
  else if (*dualize) r = run_command("dualize", [&] { return cmd_dualize(file, o); });
  else if (*classify) r = run_command("classify", [&] { return cmd_classify(file, o); });
  else if (*congruences) r = run_command("congruences", [&] { return cmd_congruences(file, o); });
  else if (*enumerate) r = run_command("enumerate", [&] { return cmd_enumerate(n, kind, o); });
  else if (*verify) r = run_command("verify", [&] { return cmd_verify(n, o); });
  else {
    std::optional<std::filesystem::path> t;
    if (!target.empty()) t = target;
    r = run_command("morphism", [&] { return cmd_morphism(file, t, o); });
  }

  if (json) std::cout << r.doc.dump(2) << "\n";
  else std::cout << r.text;
  return r.exit;
}
