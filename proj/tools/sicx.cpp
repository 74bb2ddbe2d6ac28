#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sicx/exactify.hpp"
#include "sicx/fidsearch.hpp"
#include "sicx/formats.hpp"

using namespace sicx;
using json = nlohmann::json;

namespace {

struct RunConfig {
  i64 dim = 5;
  long digits = 200;
  int method = 2;
  std::string symmetry = "fz";
  int attempts = 20;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string fiducial, cert, input, out;
  long certified = 0;
  bool exact = false, full = false, cube = false, no_verify = false;
  int degree = 8;
  long height = 0;
  std::string group = "centralizer";
};

struct StageError : std::runtime_error {
  StageError(const std::string& stage, const std::string& what, const std::string& hint = "")
      : std::runtime_error(what), stage(stage), hint(hint) {}
  std::string stage, hint;
};

long default_digits() {
  if (const char* e = std::getenv("SICX_DIGITS")) {
    char* end = nullptr;
    long v = std::strtol(e, &end, 10);
    if (end && *end == '\0' && v >= 50) return v;
    std::cerr << "warning: ignoring SICX_DIGITS='" << e << "' (need an integer >= 50)\n";
  }
  return 200;
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty() || c.out == "-")
    std::cout << text;
  else
    write_text_file(c.out, text);
}

std::string input_text(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  return read_text_file(path);
}

json config_json(const RunConfig& c, const std::string& command) {
  return {{"command", command}, {"dim", c.dim},         {"digits", c.digits},   {"method", c.method},
          {"symmetry", c.symmetry}, {"seed", c.seed},   {"threads", c.threads}};
}

Fiducial load_fiducial(const RunConfig& c) {
  Fiducial f = read_fiducial(read_text_file(c.fiducial));
  return f;
}

Fiducial obtain_fiducial(const RunConfig& c, bool dim_given, bool digits_given) {
  Fiducial f;
  if (!c.fiducial.empty()) {
    f = load_fiducial(c);
    if (dim_given && f.d != c.dim)
      throw StageError("input", "fiducial file has d=" + std::to_string(f.d) + " but --dim " + std::to_string(c.dim));
  } else {
    f = seed_search(c.dim, SeedOptions{c.symmetry, c.attempts, c.seed});
  }
  if (digits_given ? f.digits != c.digits : f.digits < 50) f = refine(f, digits_given ? c.digits : 200);
  return f;
}

int cmd_search(const RunConfig& c) {
  Fiducial f = seed_search(c.dim, SeedOptions{c.symmetry, c.attempts, c.seed});
  f = refine(f, c.digits);
  emit(c, write_fiducial(f));
  std::cerr << "d=" << f.d << " SIC error 10^" << f.log10_error << " at " << f.digits << " digits\n";
  return 0;
}

int cmd_refine(const RunConfig& c) {
  Fiducial f = refine(load_fiducial(c), c.digits);
  emit(c, write_fiducial(f));
  std::cerr << "SIC error 10^" << f.log10_error << " at " << f.digits << " digits\n";
  return 0;
}

json matrix_json(const ModMatrix& F) { return {F.a, F.b, F.c, F.d}; }

int cmd_symmetry(const RunConfig& c) {
  Fiducial f = load_fiducial(c);
  json j;
  j["format"] = "SIC-SYMMETRY v1";
  j["config"] = config_json(c, "symmetry");
  j["d"] = f.d;
  j["modulus"] = dprime(f.d);
  j["elements"] = json::array();
  for (const auto& e : detect_stabilizer(f, c.full))
    j["elements"].push_back({{"p", {e.p.p1, e.p.p2}}, {"F", matrix_json(e.F)}, {"det", e.F.det()}});
  emit(c, j.dump(1) + "\n");
  return 0;
}

int cmd_orbits(const RunConfig& c) {
  const i64 dp = dprime(c.dim);
  MatGroup g;
  if (c.group == "centralizer")
    g = centralizer(symmetry_matrix(c.dim, c.symmetry), dp);
  else if (c.group == "h2")
    g = typea_orbit_group(c.dim);
  else if (c.group == "symmetry")
    g = MatGroup::generated(dp, {symmetry_matrix(c.dim, c.symmetry)});
  else
    throw StageError("input", "unknown group '" + c.group + "'");
  json j;
  j["format"] = "SIC-ORBITS v1";
  j["config"] = config_json(c, "orbits");
  j["group"] = c.group;
  j["group_order"] = g.order();
  j["orbits"] = json::array();
  for (const auto& o : orbits(g, dp)) {
    json oj = json::array();
    for (const auto& p : o) oj.push_back({p.p1, p.p2});
    j["orbits"].push_back(oj);
  }
  emit(c, j.dump(1) + "\n");
  return 0;
}

int cmd_qpoly(const RunConfig& c) {
  Fiducial f = load_fiducial(c);
  PrecisionScope ps(f.digits);
  OverlapTable t = overlaps(f);
  std::vector<ModMatrix> Fs;
  for (const auto& e : detect_stabilizer(f))
    if (e.p == IndexPair{0, 0}) Fs.push_back(e.F);
  MatGroup C = centralizer(Fs, dprime(f.d));
  auto polys = build_orbit_polynomials(t, C, c.cube);
  LiftResult lr = lift_coefficients(polys, f.digits);
  json j;
  j["format"] = "SIC-QPOLY v1";
  j["config"] = config_json(c, "qpoly");
  j["d"] = f.d;
  j["cubed"] = c.cube;
  j["e0"] = json::parse(tower_to_json(*lr.e0));
  j["max_imag_log10"] = lr.max_imag_log10;
  j["polynomials"] = json::array();
  for (const auto& q : lr.polys) {
    json cj = json::array(), mj = json::array();
    for (const auto& a : q.exact) {
      cj.push_back(coords_to_strings(a.coeffs()));
      mj.push_back(rational_polynomial_str(exact_minimal_polynomial(a)));
    }
    j["polynomials"].push_back({{"orbit", q.orbit},
                                {"representative", {q.representative.p1, q.representative.p2}},
                                {"degree", q.degree()},
                                {"coefficients", cj},
                                {"coefficient_minpolys", mj}});
  }
  emit(c, j.dump(1) + "\n");
  return 0;
}

int cmd_relation(const RunConfig& c, bool digits_given) {
  auto x = read_decimal_values(input_text(c.input), digits_given ? c.digits : 0);
  if (x.size() < 2) throw StageError("input", "need at least two values");
  PrecisionScope ps(x.front().re.digits());
  auto r = integer_relation(x, c.height);
  if (!r) throw StageError("relation", "no integer relation found", "increase the digits of the input");
  emit(c, relation_json(*r) + "\n");
  return 0;
}

int cmd_minpoly(const RunConfig& c, bool digits_given) {
  auto x = read_decimal_values(input_text(c.input), digits_given ? c.digits : 0);
  if (x.empty()) throw StageError("input", "no value given");
  const long prec = x.front().re.digits();
  PrecisionScope ps(prec);
  auto p = minimal_polynomial(x.front(), c.degree);
  if (!p) throw StageError("minpoly", "no polynomial of degree <= " + std::to_string(c.degree) + " found",
                           "increase the digits of the input or --degree");
  emit(c, minpoly_json(*p, x.front(), prec) + "\n");
  return 0;
}

int cmd_exactify(const RunConfig& c, bool dim_given, bool digits_given) {
  Fiducial f = obtain_fiducial(c, dim_given, digits_given);
  ExactifyOptions o;
  o.method = c.method;
  ExactCertificate cert = exactify(f, o);
  VerificationReport rep;
  if (!c.no_verify) {
    rep = verify_exact(cert);
    if (!rep.passed) std::cerr << "warning: exact verification failed: " << rep.failures.front() << "\n";
  }
  emit(c, certificate_to_json(cert, c.no_verify ? nullptr : &rep) + "\n");
  std::cerr << "d=" << cert.d << " method " << cert.method << ": [E1:Q] = " << cert.tower->degree()
            << (c.no_verify ? "" : (rep.passed ? ", verified" : ", NOT verified")) << "\n";
  return c.no_verify || rep.passed ? 0 : 1;
}

int cmd_verify(const RunConfig& c) {
  ExactCertificate cert;
  try {
    cert = certificate_from_json(read_text_file(c.cert));
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    std::cout << "FAIL: certificate unreadable: " << e.what() << "\n";
    return 1;
  }
  VerificationReport r = c.certified > 0 ? verify_certified(cert, c.certified) : verify_exact(cert);
  std::cout << "mode: " << r.mode << "\n";
  for (const auto& s : r.checks) std::cout << "ok: " << s << "\n";
  for (const auto& s : r.failures) std::cout << "FAIL: " << s << "\n";
  std::cout << (r.passed ? "PASSED" : "FAILED") << "\n";
  return r.passed ? 0 : 1;
}

int cmd_report(const RunConfig& c) {
  emit(c, report(certificate_from_json(read_text_file(c.cert))));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  cfg.digits = default_digits();
  CLI::App app{"sicx: numerical and exact SIC-POVM fiducials"};
  app.require_subcommand(1);
  app.add_option("--threads", cfg.threads, "Parallelism degree")->check(CLI::Range(1, 1024));

  auto add_dim = [&](CLI::App* s) { return s->add_option("--dim,-d", cfg.dim, "Dimension")->check(CLI::Range(4, 1000)); };
  auto add_digits = [&](CLI::App* s) {
    return s->add_option("--digits", cfg.digits, "Decimal digits (default $SICX_DIGITS or 200)")
        ->check(CLI::Range(50L, 1000000L));
  };
  auto add_out = [&](CLI::App* s) { s->add_option("--out,-o", cfg.out, "Output file (stdout by default)"); };
  auto add_search = [&](CLI::App* s) {
    s->add_option("--symmetry", cfg.symmetry, "Symmetry sector")->check(CLI::IsMember({"fz", "fa", "none"}));
    s->add_option("--attempts", cfg.attempts, "Random starts per sector")->check(CLI::Range(1, 100000));
    s->add_option("--seed", cfg.seed, "RNG seed");
  };

  auto* search = app.add_subcommand("search", "Find a numerical fiducial and refine it");
  add_dim(search)->required();
  add_digits(search);
  add_search(search);
  add_out(search);

  auto* refine_cmd = app.add_subcommand("refine", "Refine a fiducial file to more digits");
  refine_cmd->add_option("--fiducial,-f", cfg.fiducial, "Fiducial file")->required()->check(CLI::ExistingFile);
  add_digits(refine_cmd);
  add_out(refine_cmd);

  auto* symmetry = app.add_subcommand("symmetry", "Detect the stabilizer of a fiducial");
  symmetry->add_option("--fiducial,-f", cfg.fiducial, "Fiducial file")->required()->check(CLI::ExistingFile);
  symmetry->add_flag("--full", cfg.full, "Test every determinant +-1 matrix");
  add_out(symmetry);

  auto* orbits_cmd = app.add_subcommand("orbits", "Orbits of a matrix group on (Z/d'Z)^2");
  add_dim(orbits_cmd)->required();
  orbits_cmd->add_option("--group", cfg.group, "centralizer, symmetry or h2")
      ->check(CLI::IsMember({"centralizer", "symmetry", "h2"}));
  orbits_cmd->add_option("--symmetry", cfg.symmetry, "Symmetry matrix")->check(CLI::IsMember({"fz", "fa"}));
  add_out(orbits_cmd);

  auto* qpoly = app.add_subcommand("qpoly", "Orbit polynomials and their exact coefficients");
  qpoly->add_option("--fiducial,-f", cfg.fiducial, "Fiducial file")->required()->check(CLI::ExistingFile);
  qpoly->add_flag("--cube", cfg.cube, "Use cubed overlaps");
  add_out(qpoly);

  auto* relation = app.add_subcommand("relation", "Integer relation among decimal values");
  relation->add_option("--input,-i", cfg.input, "Value file ('-' for stdin)");
  add_digits(relation);
  relation->add_option("--height", cfg.height, "Largest coefficient size in digits (0 = automatic)");
  add_out(relation);

  auto* minpoly = app.add_subcommand("minpoly", "Minimal polynomial of a decimal value");
  minpoly->add_option("--input,-i", cfg.input, "Value file ('-' for stdin)");
  add_digits(minpoly);
  minpoly->add_option("--degree", cfg.degree, "Largest degree")->check(CLI::Range(1, 64));
  add_out(minpoly);

  auto* exactify_cmd = app.add_subcommand("exactify", "Exact fiducial certificate");
  exactify_cmd->add_option("--method", cfg.method, "1 or 2")->check(CLI::IsMember({1, 2}));
  exactify_cmd->add_option("--fiducial,-f", cfg.fiducial, "Fiducial file (searched for when absent)")
      ->check(CLI::ExistingFile);
  add_dim(exactify_cmd);
  add_digits(exactify_cmd);
  add_search(exactify_cmd);
  exactify_cmd->add_flag("--no-verify", cfg.no_verify, "Skip the exact verification block");
  add_out(exactify_cmd);

  auto* verify = app.add_subcommand("verify", "Check a certificate; nonzero exit on failure");
  verify->add_option("--cert,-c", cfg.cert, "Certificate JSON")->required()->check(CLI::ExistingFile);
  auto* ex = verify->add_flag("--exact", cfg.exact, "Exact arithmetic (default)");
  verify->add_option("--certified", cfg.certified, "Ball arithmetic at N digits")->check(CLI::Range(50L, 1000000L))
      ->excludes(ex);

  auto* report_cmd = app.add_subcommand("report", "Human-readable certificate summary");
  report_cmd->add_option("--cert,-c", cfg.cert, "Certificate JSON")->required()->check(CLI::ExistingFile);
  add_out(report_cmd);

  CLI11_PARSE(app, argc, argv);

  auto given = [](CLI::App* s, const char* name) { return s->count(name) > 0; };
  const char* stage = "run";
  try {
    if (*search) {
      stage = "search";
      return cmd_search(cfg);
    }
    if (*refine_cmd) {
      stage = "refine";
      return cmd_refine(cfg);
    }
    if (*symmetry) {
      stage = "symmetry";
      return cmd_symmetry(cfg);
    }
    if (*orbits_cmd) {
      stage = "orbits";
      return cmd_orbits(cfg);
    }
    if (*qpoly) {
      stage = "qpoly";
      return cmd_qpoly(cfg);
    }
    if (*relation) {
      stage = "relation";
      return cmd_relation(cfg, given(relation, "--digits"));
    }
    if (*minpoly) {
      stage = "minpoly";
      return cmd_minpoly(cfg, given(minpoly, "--digits"));
    }
    if (*exactify_cmd) {
      stage = "exactify";
      return cmd_exactify(cfg, given(exactify_cmd, "--dim"), given(exactify_cmd, "--digits"));
    }
    if (*verify) {
      stage = "verify";
      return cmd_verify(cfg);
    }
    if (*report_cmd) {
      stage = "report";
      return cmd_report(cfg);
    }
  } catch (const StageError& e) {
    std::cerr << "error [" << e.stage << "]: " << e.what();
    if (!e.hint.empty()) std::cerr << " (hint: " << e.hint << ")";
    std::cerr << "\n";
    return 2;
  } catch (const ExactifyError& e) {
    std::cerr << "error [" << e.stage << "]: " << e.what() << " (hint: increase --digits)\n";
    return 2;
  } catch (const PrecisionRefused& e) {
    std::cerr << "error [" << stage << "/precision]: " << e.what() << " (hint: increase --digits)\n";
    return 2;
  } catch (const RefineFailure& e) {
    std::cerr << "error [refine]: " << e.what() << " at " << e.precision << " digits, SIC error 10^" << e.log10_error
              << " (hint: try another --seed or a different --symmetry)\n";
    return 2;
  } catch (const SearchFailure& e) {
    std::cerr << "error [search]: " << e.what() << ", best SIC error 10^" << e.best_log10_error
              << " (hint: increase --attempts or change --seed)\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "error [input]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error [" << stage << "]: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
