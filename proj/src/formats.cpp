#include "sicx/formats.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace sicx {

using json = nlohmann::json;

namespace {

struct Header {
  std::string kind;
  std::map<std::string, std::string> keys;
};

Header parse_header(std::istream& in, const std::string& kind) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty input");
  std::istringstream hs(line);
  Header h;
  std::string version;
  hs >> h.kind >> version;
  if (h.kind != kind) throw FormatError("expected a " + kind + " header, found '" + h.kind + "'");
  if (version != "v1") throw FormatError("unsupported " + kind + " version '" + version + "'");
  std::string tok;
  while (hs >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw FormatError("malformed header field '" + tok + "'");
    h.keys[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return h;
}

const std::string& require(const Header& h, const std::string& key) {
  auto it = h.keys.find(key);
  if (it == h.keys.end()) throw FormatError(h.kind + " header lacks '" + key + "'");
  return it->second;
}

long to_long(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) throw FormatError("");
    return v;
  } catch (const std::exception&) {
    throw FormatError("bad integer for " + what + ": '" + s + "'");
  }
}

Real parse_checked(const std::string& s, long bits) {
  try {
    return parse_real(s, bits);
  } catch (const std::exception& e) {
    throw FormatError("bad decimal '" + s.substr(0, 40) + "': " + e.what());
  }
}

std::string json_double(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

std::string write_fiducial(const Fiducial& f) {
  std::ostringstream os;
  os << "SIC-FIDUCIAL v1 d=" << f.d << " prec=" << f.digits << " symmetry=" << (f.symmetry.empty() ? "none" : f.symmetry)
     << " seed=" << f.seed << " error=" << json_double(f.log10_error) << "\n";
  for (const auto& z : f.v) os << to_decimal(z.re) << " " << to_decimal(z.im) << "\n";
  return os.str();
}

Fiducial read_fiducial(const std::string& text) {
  std::istringstream in(text);
  Header h = parse_header(in, "SIC-FIDUCIAL");
  Fiducial f;
  f.d = to_long(require(h, "d"), "d");
  f.digits = to_long(require(h, "prec"), "prec");
  f.symmetry = require(h, "symmetry");
  try {
    f.seed = static_cast<std::uint64_t>(std::stoull(require(h, "seed")));
    if (h.keys.count("error")) f.log10_error = std::stod(h.keys.at("error"));
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception&) {
    throw FormatError("bad seed or error field in fiducial header");
  }
  if (f.d < 4) throw FormatError("dimension must be at least 4");
  if (f.digits < 1) throw FormatError("precision must be positive");
  const long bits = digits_to_bits(f.digits);
  std::string re, im;
  for (i64 r = 0; r < f.d; ++r) {
    if (!(in >> re >> im)) throw FormatError("fiducial file has fewer than d entries");
    f.v.emplace_back(parse_checked(re, bits), parse_checked(im, bits));
  }
  if (in >> re) throw FormatError("fiducial file has more than d entries");
  return f;
}

std::string write_overlaps(const OverlapTable& t) {
  std::ostringstream os;
  os << "SIC-OVERLAPS v1 d=" << t.d() << " prec=" << t.digits() << "\n";
  for (i64 p1 = 0; p1 < t.dp(); ++p1)
    for (i64 p2 = 0; p2 < t.dp(); ++p2) {
      const Complex& z = t.at(p1, p2);
      os << p1 << " " << p2 << " " << to_decimal(z.re) << " " << to_decimal(z.im) << "\n";
    }
  return os.str();
}

OverlapTable read_overlaps(const std::string& text) {
  std::istringstream in(text);
  Header h = parse_header(in, "SIC-OVERLAPS");
  const i64 d = to_long(require(h, "d"), "d");
  const long digits = to_long(require(h, "prec"), "prec");
  if (d < 4 || digits < 1) throw FormatError("bad dimension or precision");
  OverlapTable t(d, digits);
  const long bits = digits_to_bits(digits);
  std::vector<bool> seen(static_cast<std::size_t>(t.dp() * t.dp()), false);
  i64 p1, p2;
  std::string re, im;
  std::size_t count = 0;
  while (in >> p1 >> p2 >> re >> im) {
    if (p1 < 0 || p2 < 0 || p1 >= t.dp() || p2 >= t.dp()) throw FormatError("overlap index out of range");
    auto k = static_cast<std::size_t>(p1 * t.dp() + p2);
    if (seen[k]) throw FormatError("duplicate overlap index");
    seen[k] = true;
    t.at(p1, p2) = Complex(parse_checked(re, bits), parse_checked(im, bits));
    ++count;
  }
  if (!in.eof()) throw FormatError("malformed overlap line");
  if (count != seen.size()) throw FormatError("overlap file does not list all d'^2 indices");
  return t;
}

long decimal_digits_in(const std::string& text) {
  long best = 0, cur = 0;
  bool in_exp = false;
  for (char ch : text) {
    if (ch == 'e' || ch == 'E') in_exp = true;
    if (std::isspace(static_cast<unsigned char>(ch))) {
      best = std::max(best, cur);
      cur = 0;
      in_exp = false;
    } else if (!in_exp && std::isdigit(static_cast<unsigned char>(ch))) {
      ++cur;
    }
  }
  return std::max(best, cur);
}

std::vector<Complex> read_decimal_values(const std::string& text, long digits) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    lines.push_back(line);
  }
  if (digits <= 0) {
    std::string all;
    for (const auto& l : lines) all += l + "\n";
    digits = decimal_digits_in(all);
  }
  if (digits < 1) throw FormatError("no decimal values found");
  const long bits = digits_to_bits(digits);
  std::vector<Complex> out;
  for (const auto& l : lines) {
    std::istringstream ls(l);
    std::string re, im, extra;
    ls >> re;
    Real r = parse_checked(re, bits);
    Real i = Real::with_bits(bits);
    if (ls >> im) i = parse_checked(im, bits);
    if (ls >> extra) throw FormatError("more than two numbers on a line");
    out.emplace_back(r, i);
  }
  return out;
}

std::string relation_json(const RelationResult& r) {
  json j;
  j["coefficients"] = json::array();
  for (const auto& c : r.coefficients) j["coefficients"].push_back(c.get_str());
  j["residual"] = to_decimal(r.residual, 10);
  j["precision_used"] = r.precision_used;
  return j.dump(1);
}

std::string minpoly_json(const IntPolynomial& p, const Complex& value, long precision_used) {
  json j;
  j["coefficients"] = json::array();
  for (const auto& c : p.c) j["coefficients"].push_back(c.get_str());
  j["degree"] = p.degree();
  j["polynomial"] = p.str();
  j["residual"] = to_decimal(abs(p.eval(value)), 10);
  j["precision_used"] = precision_used;
  return j.dump(1);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot write " + path);
  f << text;
  if (!f) throw FormatError("write failed for " + path);
}

}  // namespace sicx
