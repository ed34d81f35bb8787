// tmtool: batch verification front end for twisted Poisson structures.
//
//   tmtool <command> <input.json> [--format json|text] [--degree-bound N]
//          [--trials K] [--seed S] [--out PATH]
//
// Commands: verify | modular | elw | cohomology | identities | poly | gauge | all.
// Exit codes: 0 every asserted identity holds, 1 input error, 2 identity
// failure (with a counterexample embedded in the report).

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "twistmod/reports.hpp"

namespace {

using namespace twistmod;

void print_text(std::ostream& os, const OrderedJson& j, const std::string& prefix) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      print_text(os, v, prefix.empty() ? k : prefix + "." + k);
  } else if (j.is_array() && !j.empty() && j[0].is_object() && j[0].contains("indices")) {
    // a term list: render compactly
    std::string line;
    for (const auto& t : j) {
      if (!line.empty()) line += " + ";
      std::string mono;
      if (t["coeff"].is_string())
        mono = t["coeff"].get<std::string>();
      else
        mono = t["coeff"].dump();
      mono += " * ";
      bool first = true;
      for (const auto& name : t["indices"]) {
        if (!first) mono += "^";
        mono += name.get<std::string>();
        first = false;
      }
      line += mono;
    }
    os << prefix << " = " << (line.empty() ? "0" : line) << "\n";
  } else {
    os << prefix << " = " << j.dump() << "\n";
  }
}

int emit(const RunOutcome& out, const std::string& format, const std::string& out_path) {
  std::string text;
  if (format == "text") {
    std::ostringstream os;
    print_text(os, out.report, "");
    os << (out.failed ? "RESULT: FAIL\n" : "RESULT: PASS\n");
    text = os.str();
  } else {
    text = out.report.dump(2) + "\n";
  }
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) throw InputError("cannot write \"" + out_path + "\"");
    f << text;
  }
  return out.failed ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact verification of twisted Poisson structures"};
  app.require_subcommand(1);

  std::string input, format = "json", out_path;
  int degree_bound = -1;
  int trials = 20;
  unsigned long seed = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("input", input, "structure file")->required();
    cmd->add_option("--format", format, "json|text")
        ->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--degree-bound", degree_bound, "bound for coboundary searches");
    cmd->add_option("--trials", trials, "randomized identity repetitions");
    cmd->add_option("--seed", seed, "seed for randomized trials");
    cmd->add_option("--out", out_path, "write the report here instead of stdout");
    return cmd;
  };

  auto* c_verify = add_common(app.add_subcommand("verify", "check the structure equation"));
  auto* c_modular = add_common(app.add_subcommand("modular", "modular section and identities"));
  auto* c_elw = add_common(app.add_subcommand("elw", "characteristic-class comparison"));
  auto* c_cohomology = add_common(app.add_subcommand("cohomology", "betti numbers and duality"));
  auto* c_identities = add_common(app.add_subcommand("identities", "randomized identity suite"));
  auto* c_poly = add_common(app.add_subcommand("poly", "tangent-bundle suite"));
  auto* c_gauge = add_common(app.add_subcommand("gauge", "gauge transformation suite"));
  auto* c_all = add_common(app.add_subcommand("all", "every suite for the input kind"));

  CLI11_PARSE(app, argc, argv);

  try {
    Json j = load_json_file(input);
    bool is_poly = j.contains("base_dim");
    RunOutcome out;
    if (c_verify->parsed()) {
      if (is_poly) {
        auto f = parse_poly_structure(j);
        auto rep = verify_twisted_poly(f.pi, f.psi);
        OrderedJson tj;
        tj["closed"] = rep.closed;
        tj["condition"] = rep.condition;
        tj["defect"] = poly_element_terms(rep.defect, f.n, false);
        out.report["twisted"] = tj;
        out.failed = !rep.ok();
        if (out.failed) out.report["counterexample"] = rep.defect.str("d");
      } else {
        out = report_verify(parse_lie_structure(j).structure);
      }
    } else if (c_poly->parsed() || c_gauge->parsed()) {
      if (!is_poly) throw InputError("this suite needs a tangent-bundle file (base_dim)");
      auto f = parse_poly_structure(j);
      out = c_poly->parsed() ? report_poly(f, degree_bound) : report_gauge(f, degree_bound);
    } else if (c_all->parsed() && is_poly) {
      out = report_all_poly(parse_poly_structure(j), degree_bound);
    } else {
      if (is_poly) throw InputError("this suite needs a Lie-algebra structure file");
      auto s = parse_lie_structure(j).structure;
      if (c_modular->parsed())
        out = report_modular(s);
      else if (c_elw->parsed())
        out = report_elw(s);
      else if (c_cohomology->parsed())
        out = report_cohomology(s);
      else if (c_identities->parsed())
        out = report_identities(s, seed, trials);
      else
        out = report_all_lie(s, seed, trials);
    }
    return emit(out, format, out_path);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const DimensionMismatch& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const DegreeError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const TwistedConditionError& e) {
    std::cerr << "identity failure: " << e.what() << "; defect: " << e.defect << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
