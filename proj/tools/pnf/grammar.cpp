#include "grammar.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace pnf::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// "head:rest" split on the first colon; rest is empty when there is none.
std::pair<std::string, std::string> head_rest(const std::string& s) {
  const auto c = s.find(':');
  if (c == std::string::npos) return {s, ""};
  return {s.substr(0, c), s.substr(c + 1)};
}

std::map<std::string, std::string> keyvals(const std::string& s, const std::string& what) {
  std::map<std::string, std::string> kv;
  if (s.empty()) return kv;
  for (const auto& part : split(s, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Config, what + ": expected key=value in '" + part + "'");
    kv[trim(part.substr(0, eq))] = trim(part.substr(eq + 1));
  }
  return kv;
}

void require_keys(const std::map<std::string, std::string>& kv,
                  const std::vector<std::string>& allowed, const std::string& what) {
  for (const auto& [k, v] : kv) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw Error(ErrorKind::Config, what + ": unknown key '" + k + "'");
    }
  }
}

std::vector<double> read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot read table '" + path + "'");
  std::vector<double> v;
  std::string tok;
  while (in >> tok) v.push_back(parse_number(tok, "table " + path));
  return v;
}

void expect_count(const std::vector<double>& v, std::size_t n, const std::string& what) {
  if (v.size() != n) {
    throw Error(ErrorKind::Config, what + ": expected " + std::to_string(n) + " values, got " +
                                       std::to_string(v.size()));
  }
}

}  // namespace

double parse_number(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::Config, what + ": not a number '" + text + "'");
  }
  return v;
}

long long parse_integer(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::Config, what + ": not an integer '" + text + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_number(p, what));
  return out;
}

bool parse_bool(const std::string& text, const std::string& what) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw Error(ErrorKind::Config, what + ": not a boolean '" + text + "'");
}

GridPtr make_grid(int dim, int M, int level) {
  if (dim == 2) {
    if (M < 8) throw Error(ErrorKind::Config, "M must be >= 8");
    return DirectionGrid::circle(M);
  }
  if (dim == 3) {
    if (level < 0 || level > 6) throw Error(ErrorKind::Config, "level must be in [0, 6]");
    return DirectionGrid::icosphere(level);
  }
  throw Error(ErrorKind::Config, "dim must be 2 or 3");
}

SupportBody parse_body(const std::string& text, const GridPtr& grid, std::uint64_t seed) {
  const auto [head, rest] = head_rest(trim(text));
  const std::string what = "body '" + text + "'";
  const int n = grid->dimension();
  if (head == "disc" || head == "ball" || head == "circle") {
    const double r = rest.empty() ? 1.0 : parse_number(rest, what);
    return make_body(BodySpec::ball(r), grid);
  }
  if (head == "ellipse" || head == "ellipsoid") {
    const auto a = parse_list(rest, what);
    if (static_cast<int>(a.size()) != n) {
      throw Error(ErrorKind::Dimension, what + ": needs " + std::to_string(n) + " semi-axes");
    }
    return make_body(n == 2 ? BodySpec::ellipse(a[0], a[1]) : BodySpec::ellipsoid(a[0], a[1], a[2]),
                     grid);
  }
  if (head == "random") {
    const auto kv = keyvals(rest, what);
    require_keys(kv, {"seed", "amp", "r"}, what);
    const std::uint64_t s =
        kv.count("seed") ? static_cast<std::uint64_t>(parse_integer(kv.at("seed"), what)) : seed;
    const double amp = kv.count("amp") ? parse_number(kv.at("amp"), what) : 0.1;
    const double r = kv.count("r") ? parse_number(kv.at("r"), what) : 1.0;
    return make_body(BodySpec::random(s, amp, r), grid);
  }
  if (head == "table") {
    auto h = read_table(rest);
    expect_count(h, grid->size(), what);
    return make_body(BodySpec::from_table(std::move(h)), grid);
  }
  throw Error(ErrorKind::Config, "unknown body kind in '" + text + "'");
}

Density parse_density(const std::string& text) {
  const auto [head, rest] = head_rest(trim(text));
  const std::string what = "density '" + text + "'";
  if (head == "lebesgue" && rest.empty()) return Density::lebesgue();
  if (head == "gaussian") return Density::gaussian(rest.empty() ? 1.0 : parse_number(rest, what));
  if (head == "cauchy") return Density::cauchy(parse_number(rest, what));
  if (head == "poly") {
    std::vector<Density::Monomial> terms;
    for (const auto& t : split(rest, '+')) {
      const auto at = t.find('@');
      if (at == std::string::npos) throw Error(ErrorKind::Config, what + ": expected c@i,j,k");
      const double c = parse_number(t.substr(0, at), what);
      const auto e = split(t.substr(at + 1), ',');
      if (e.size() < 2 || e.size() > 3) throw Error(ErrorKind::Config, what + ": exponent triple");
      std::array<int, 3> ex{0, 0, 0};
      for (std::size_t i = 0; i < e.size(); ++i) ex[i] = static_cast<int>(parse_integer(e[i], what));
      terms.push_back({c, ex});
    }
    return Density::polynomial(std::move(terms));
  }
  throw Error(ErrorKind::Config, "unknown density in '" + text + "'");
}

BoundaryFunction parse_function(const std::string& text, const DirectionGrid& grid,
                                std::uint64_t seed) {
  const auto [head, rest] = head_rest(trim(text));
  const std::string what = "function '" + text + "'";
  if (head == "one" && rest.empty()) return BoundaryFunction::constant(grid, 1.0);
  if (head == "const") return BoundaryFunction::constant(grid, parse_number(rest, what));
  if (head == "cos" || head == "sin") {
    if (grid.dimension() != 2) throw Error(ErrorKind::Dimension, what + " is planar");
    const int k = static_cast<int>(parse_integer(rest, what));
    return head == "cos" ? BoundaryFunction::cos_mode(grid, k) : BoundaryFunction::sin_mode(grid, k);
  }
  if (head == "ylm") {
    if (grid.dimension() != 3) throw Error(ErrorKind::Dimension, what + " needs dim 3");
    const auto lm = split(rest, ',');
    if (lm.size() != 2) throw Error(ErrorKind::Config, what + ": expected l,m");
    return BoundaryFunction::spherical_harmonic(grid, static_cast<int>(parse_integer(lm[0], what)),
                                                static_cast<int>(parse_integer(lm[1], what)));
  }
  if (head == "random") {
    const auto kv = keyvals(rest, what);
    require_keys(kv, {"seed", "K"}, what);
    const std::uint64_t s =
        kv.count("seed") ? static_cast<std::uint64_t>(parse_integer(kv.at("seed"), what)) : seed;
    const int K = kv.count("K") ? static_cast<int>(parse_integer(kv.at("K"), what)) : 4;
    return BoundaryFunction::random_bandlimited(grid, s, K);
  }
  if (head == "table") {
    auto v = read_table(rest);
    expect_count(v, grid.size(), what);
    return BoundaryFunction::table(std::move(v));
  }
  throw Error(ErrorKind::Config, "unknown function in '" + text + "'");
}

TestFunction parse_test_function(const std::string& text, int dim) {
  const auto [head, rest] = head_rest(trim(text));
  const std::string what = "test function '" + text + "'";
  Vec b = Vec::Zero(dim);
  Mat A = Mat::Zero(dim, dim);
  if (head == "lin") {
    const auto c = parse_list(rest, what);
    expect_count(c, dim, what);
    for (int i = 0; i < dim; ++i) b[i] = c[i];
  } else if (head == "quad") {
    const auto c = parse_list(rest, what);
    expect_count(c, static_cast<std::size_t>(dim * dim), what);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) A(i, j) = c[i * dim + j];
    A = (0.5 * (A + A.transpose())).eval();
  } else if (head == "sq" && rest.empty()) {
    A = Mat::Identity(dim, dim);
  } else {
    throw Error(ErrorKind::Config, "unknown test function in '" + text + "'");
  }
  // u = ⟨b, x⟩ + ½ xᵀAx
  TestFunction u;
  u.value = [b, A](const Vec& x) { return b.dot(x) + 0.5 * x.dot(A * x); };
  u.grad = [b, A](const Vec& x) -> Vec { return b + A * x; };
  u.hess = [A](const Vec&) -> Mat { return A; };
  u.id = trim(text);
  return u;
}

ExtensionSpec parse_extension(const std::string& text, const GridPtr& grid, std::uint64_t seed) {
  const auto [head, rest] = head_rest(trim(text));
  if (head == "geodesic" && rest.empty()) return ExtensionSpec::geodesic();
  if (head == "sum") return ExtensionSpec::euclidean_sum(parse_body(rest, grid, seed));
  if (head == "pnf-h") return ExtensionSpec::pnf_support(parse_body(rest, grid, seed));
  if (head == "pnf") return ExtensionSpec::pnf(parse_function(rest, *grid, seed));
  if (head == "wave") return ExtensionSpec::wave(parse_function(rest, *grid, seed));
  throw Error(ErrorKind::Config,
              "extension must be geodesic, sum:BODY, pnf-h:BODY, pnf:FUNC or wave:FUNC; got '" +
                  text + "'");
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Config, "config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty() || cfg.count(key)) {
      throw Error(ErrorKind::Config, "config line " + std::to_string(lineno) + ": empty or duplicate key '" + key + "'");
    }
    cfg[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

std::string canonical_config(const std::map<std::string, std::string>& cfg) {
  std::string out;
  for (const auto& [k, v] : cfg) out += k + "=" + v + "\n";
  return out;
}

}  // namespace pnf::cli
