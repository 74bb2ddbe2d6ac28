#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sys/wait.h>

#include "json.hpp"
#include "sicx/exactify.hpp"
#include "sicx/formats.hpp"

using namespace sicx;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct ToolRun {
  int status;
  std::string out;
};

ToolRun run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + SICX_TOOL_PATH + std::string(" ") + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

const fs::path& workdir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("sicx_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

// d=5 fiducial at 200 digits and its certificate, produced once through the tool.
const std::string& fiducial_file() {
  static std::string f = [] {
    std::string p = path("f5.txt");
    ToolRun r = run("search --dim 5 --digits 200 --seed 3 -o " + p);
    EXPECT_EQ(r.status, 0) << r.out;
    return p;
  }();
  return f;
}

const std::string& certificate_file() {
  static std::string c = [] {
    std::string p = path("c5.json");
    ToolRun r = run("exactify --method 2 --dim 5 -f " + fiducial_file() + " -o " + p);
    EXPECT_EQ(r.status, 0) << r.out;
    return p;
  }();
  return c;
}

Real random_real(std::mt19937_64& rng, long digits) {
  PrecisionScope ps(digits);
  std::string s = (rng() % 2 ? "-" : "") + std::to_string(rng() % 10) + ".";
  for (long i = 0; i < digits; ++i) s += static_cast<char>('0' + rng() % 10);
  s += "e" + std::to_string(static_cast<long>(rng() % 21) - 10);
  return parse_real(s);
}

bool same(const Real& a, const Real& b) { return a.bits() == b.bits() && (a - b).is_zero(); }

}  // namespace

TEST(Cli, SearchWritesVersionedFiducial) {
  std::string text = read_text_file(fiducial_file());
  EXPECT_EQ(text.rfind("SIC-FIDUCIAL v1 d=5 prec=200 symmetry=fz seed=3", 0), 0u);
  Fiducial f = read_fiducial(text);
  EXPECT_EQ(f.d, 5);
  EXPECT_EQ(f.v.size(), 5u);
  EXPECT_LT(fiducial_error(f), -190);
}

TEST(Cli, SearchIsDeterministic) {
  ToolRun a = run("search --dim 4 --digits 80 --seed 9");
  ToolRun b = run("search --dim 4 --digits 80 --seed 9");
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, EnvironmentSetsDefaultDigits) {
  ToolRun r = run("search --dim 4", "SICX_DIGITS=120");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("prec=120"), std::string::npos);
}

TEST(Cli, ExactifyThenVerify) {
  ToolRun v = run("verify --cert " + certificate_file());
  EXPECT_EQ(v.status, 0) << v.out;
  EXPECT_NE(v.out.find("PASSED"), std::string::npos);
  ToolRun c = run("verify --cert " + certificate_file() + " --certified 300");
  EXPECT_EQ(c.status, 0) << c.out;
  json j = json::parse(read_text_file(certificate_file()));
  EXPECT_EQ(j["format"], "SIC-CERTIFICATE v1");
  EXPECT_TRUE(j["verification"]["passed"].get<bool>());
  EXPECT_TRUE(j["contains_sqrt_d"].get<bool>());
}

TEST(Cli, TamperedCertificateFailsVerify) {
  json j = json::parse(read_text_file(certificate_file()));
  auto& v = j["overlaps"][1]["value"];
  v[0] = v[0].get<std::string>() == "1/7" ? "2/7" : "1/7";
  std::string p = path("tampered.json");
  write_text_file(p, j.dump());
  ToolRun r = run("verify --cert " + p);
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.out.find("FAILED"), std::string::npos);
  ToolRun c = run("verify --cert " + p + " --certified 300");
  EXPECT_NE(c.status, 0);
}

TEST(Cli, ReportIsPureFunctionOfCertificate) {
  ToolRun a = run("report --cert " + certificate_file());
  ToolRun b = run("report --cert " + certificate_file());
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("[E1:E0] = 8"), std::string::npos);
  EXPECT_NE(a.out.find("|C(Pi)| = 24"), std::string::npos);
}

TEST(Cli, SymmetryAndOrbits) {
  ToolRun s = run("symmetry -f " + fiducial_file());
  ASSERT_EQ(s.status, 0) << s.out;
  json j = json::parse(s.out);
  bool zauner = false;
  for (const auto& e : j["elements"])
    if (e["p"] == json::array({0, 0}) && e["F"] == json::array({0, 4, 1, 4})) zauner = true;
  EXPECT_TRUE(zauner);
  ToolRun o = run("orbits --dim 5");
  ASSERT_EQ(o.status, 0);
  json oj = json::parse(o.out);
  EXPECT_EQ(oj["group_order"], 24);
  EXPECT_EQ(oj["orbits"].size(), 2u);
  EXPECT_EQ(oj["config"]["command"], "orbits");
}

TEST(Cli, QpolyLiftsCoefficients) {
  ToolRun r = run("qpoly -f " + fiducial_file());
  ASSERT_EQ(r.status, 0) << r.out;
  json j = json::parse(r.out);
  EXPECT_EQ(j["polynomials"].size(), 2u);
  EXPECT_EQ(j["e0"]["levels"].size(), 1u);
  EXPECT_LT(j["max_imag_log10"].get<double>(), -150);
}

TEST(Cli, RelationAndMinpolyJson) {
  std::string in = path("rel.txt");
  {
    PrecisionScope ps(120);
    Real s2 = sqrt(Real(2L)), s3 = sqrt(Real(3L));
    write_text_file(in, "# sqrt2+sqrt3, 1, sqrt2, sqrt3\n" + to_decimal(s2 + s3, 120) + "\n1\n" + to_decimal(s2, 120) +
                            "\n" + to_decimal(s3, 120) + "\n");
  }
  ToolRun r = run("relation -i " + in);
  ASSERT_EQ(r.status, 0) << r.out;
  json j = json::parse(r.out);
  EXPECT_EQ(j["coefficients"], json::array({"1", "0", "1", "1"}));
  EXPECT_TRUE(j.contains("residual"));
  EXPECT_GT(j["precision_used"].get<long>(), 0);

  std::string mp = path("mp.txt");
  {
    PrecisionScope ps(100);
    write_text_file(mp, to_decimal(sqrt(Real(2L)) + pow(Real(3L), Real(1L) / Real(3L)), 100) + "\n");
  }
  ToolRun m = run("minpoly --degree 6 -i " + mp);
  ASSERT_EQ(m.status, 0) << m.out;
  json mj = json::parse(m.out);
  // (x - sqrt2)^3 = 3 expands to x^6 - 6x^4 - 6x^3 + 12x^2 - 36x + 1
  EXPECT_EQ(mj["coefficients"], json::array({"1", "-36", "12", "-6", "-6", "0", "1"}));
}

TEST(Cli, ErrorsNameStageAndHint) {
  std::string mp = path("short.txt");
  write_text_file(mp, "3.14159265\n");
  ToolRun m = run("minpoly --degree 4 -i " + mp);
  EXPECT_EQ(m.status, 2);
  EXPECT_NE(m.out.find("error [minpoly"), std::string::npos) << m.out;
  EXPECT_NE(m.out.find("hint"), std::string::npos);
  ToolRun bad = run("verify --cert " + path("missing.json"));
  EXPECT_NE(bad.status, 0);
  ToolRun lowdim = run("search --dim 3");
  EXPECT_NE(lowdim.status, 0);
  std::string junk = path("junk.txt");
  write_text_file(junk, "SIC-FIDUCIAL v2 d=5\n");
  ToolRun rf = run("refine -f " + junk + " --digits 100");
  EXPECT_EQ(rf.status, 2);
  EXPECT_NE(rf.out.find("error [input]"), std::string::npos);
}

TEST(Formats, FiducialRoundTripProperty) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    Fiducial f;
    f.d = 4 + static_cast<i64>(rng() % 9);
    f.digits = 20 + static_cast<long>(rng() % 400);
    f.symmetry = std::array<const char*, 3>{"fz", "fa", "none"}[rng() % 3];
    f.seed = rng();
    f.log10_error = -static_cast<double>(rng() % 1000) / 7.0;
    for (i64 r = 0; r < f.d; ++r) f.v.emplace_back(random_real(rng, f.digits), random_real(rng, f.digits));
    for (auto& z : f.v) {
      z.re.set_bits(digits_to_bits(f.digits));
      z.im.set_bits(digits_to_bits(f.digits));
    }
    std::string text = write_fiducial(f);
    Fiducial g = read_fiducial(text);
    EXPECT_EQ(g.d, f.d);
    EXPECT_EQ(g.digits, f.digits);
    EXPECT_EQ(g.symmetry, f.symmetry);
    EXPECT_EQ(g.seed, f.seed);
    EXPECT_NEAR(g.log10_error, f.log10_error, 1e-3);
    for (std::size_t r = 0; r < f.v.size(); ++r) {
      EXPECT_TRUE(same(g.v[r].re, f.v[r].re));
      EXPECT_TRUE(same(g.v[r].im, f.v[r].im));
    }
    EXPECT_EQ(write_fiducial(g), text);
  }
}

TEST(Formats, OverlapRoundTripProperty) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const i64 d = 4 + static_cast<i64>(rng() % 7);
    const long digits = 20 + static_cast<long>(rng() % 200);
    OverlapTable t(d, digits);
    for (i64 a = 0; a < t.dp(); ++a)
      for (i64 b = 0; b < t.dp(); ++b) {
        Complex z(random_real(rng, digits), random_real(rng, digits));
        z.re.set_bits(digits_to_bits(digits));
        z.im.set_bits(digits_to_bits(digits));
        t.at(a, b) = z;
      }
    std::string text = write_overlaps(t);
    OverlapTable u = read_overlaps(text);
    EXPECT_EQ(u.d(), d);
    EXPECT_EQ(u.digits(), digits);
    for (i64 a = 0; a < t.dp(); ++a)
      for (i64 b = 0; b < t.dp(); ++b) {
        EXPECT_TRUE(same(u.at(a, b).re, t.at(a, b).re));
        EXPECT_TRUE(same(u.at(a, b).im, t.at(a, b).im));
      }
    EXPECT_EQ(write_overlaps(u), text);
  }
}

TEST(Formats, RealOverlapTableRoundTrip) {
  Fiducial f = read_fiducial(read_text_file(fiducial_file()));
  PrecisionScope ps(f.digits);
  OverlapTable t = overlaps(f);
  OverlapTable u = read_overlaps(write_overlaps(t));
  EXPECT_EQ(write_overlaps(u), write_overlaps(t));
  EXPECT_LT(sic_error(u).log10_abs(), -190);
}

TEST(Formats, MalformedInputsAreRejected) {
  EXPECT_THROW(read_fiducial(""), FormatError);
  const std::string rows = "1 0\n0 0\n0 0\n0 0\n";
  EXPECT_NO_THROW(read_fiducial("SIC-FIDUCIAL v1 d=4 prec=20 symmetry=fz seed=1\n" + rows));
  EXPECT_THROW(read_fiducial("SIC-FIDUCIAL v1 d=4 prec=20 symmetry=fz seed=1\n1 0\n"), FormatError);
  EXPECT_THROW(read_fiducial("SIC-FIDUCIAL v1 d=4 prec=20 symmetry=fz seed=1\n" + rows + "0 0\n"), FormatError);
  EXPECT_THROW(read_fiducial("SIC-OVERLAPS v1 d=4 prec=20\n"), FormatError);
  EXPECT_THROW(read_fiducial("SIC-FIDUCIAL v1 d=4 prec=20 symmetry=fz\n" + rows), FormatError);
  EXPECT_THROW(read_fiducial("SIC-FIDUCIAL v1 d=3 prec=20 symmetry=fz seed=1\n1 0\n0 0\n0 0\n"), FormatError);
  EXPECT_THROW(read_fiducial("SIC-FIDUCIAL v1 d=4 prec=20 symmetry=fz seed=1\n1 x\n0 0\n0 0\n0 0\n"), FormatError);
  EXPECT_THROW(read_overlaps("SIC-OVERLAPS v1 d=4 prec=20\n0 0 1 0\n"), FormatError);
  EXPECT_THROW(read_overlaps("SIC-OVERLAPS v1 d=4 prec=20\n0 0 1 0\n0 0 1 0\n"), FormatError);
  EXPECT_THROW(read_decimal_values("# nothing\n"), FormatError);
}

TEST(Formats, DecimalValuesInferPrecision) {
  auto v = read_decimal_values("1.2345678901234567890123456789 0.5\n-3\n");
  ASSERT_EQ(v.size(), 2u);
  EXPECT_GE(v[0].re.digits(), 29);
  EXPECT_EQ(decimal_digits_in("12.345 6e-100"), 5);
}
