#include "yamabe/cli/config.hpp"

#include "yamabe/special_functions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace yamabe::cli {

ConfigError::ConfigError(int line, std::string field, const std::string& message)
    : Error((line > 0 ? "config line " + std::to_string(line) + ": " : std::string("config: ")) +
            (field.empty() ? "" : field + ": ") + message),
      line_(line),
      field_(std::move(field)) {}

RadialManifold RunConfig::manifold() const { return RadialManifold(n, kappa, r_min, r_max); }

CoefficientField RunConfig::coefficients() const {
  return {EvenPolynomial(a), EvenPolynomial(b), EvenPolynomial(f)};
}

std::vector<double> RunConfig::boundary_values() const {
  std::vector<double> out = phi;
  out.resize(r_min == 0.0 ? 1 : 2, 0.0);
  return out;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(xs[i]);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  int line;
  std::string key;
  std::string value;
};

double to_double(const Entry& e, std::string_view text) {
  text = trim(text);
  double x = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(x)) {
    throw ConfigError(e.line, e.key, "expected a finite number, got '" + std::string(text) + "'");
  }
  return x;
}

long long to_integer(const Entry& e) {
  const std::string_view text = trim(e.value);
  long long x = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(e.line, e.key, "expected an integer, got '" + e.value + "'");
  }
  return x;
}

std::vector<double> to_list(const Entry& e) {
  std::vector<double> out;
  std::string_view rest = e.value;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(to_double(e, rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

bool is_keyword(const Entry& e, std::string_view word) { return trim(e.value) == word; }

void require(bool ok, const Entry& e, const std::string& message) {
  if (!ok) throw ConfigError(e.line, e.key, message);
}

void check_increasing(const Entry& e, const std::vector<double>& xs, bool increasing) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    require(increasing ? xs[i] > xs[i - 1] : xs[i] < xs[i - 1], e,
            increasing ? "values must be strictly increasing" : "values must be strictly decreasing");
  }
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "", "expected 'key = value'");
    Entry e{line_no, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1)))};
    if (e.key.empty()) throw ConfigError(line_no, "", "empty key");
    if (e.value.empty()) throw ConfigError(line_no, e.key, "empty value");
    if (entries.count(e.key) != 0) {
      throw ConfigError(line_no, e.key, "repeated key (first set on line " + std::to_string(entries[e.key].line) + ")");
    }
    entries.emplace(e.key, std::move(e));
  }

  RunConfig cfg;
  using Handler = std::function<void(const Entry&)>;
  const std::map<std::string, Handler> handlers{
      {"manifold.n", [&](const Entry& e) {
         const long long n = to_integer(e);
         require(n >= 3 && n <= 64, e, "dimension must be an integer in [3, 64]");
         cfg.n = static_cast<int>(n);
       }},
      {"manifold.kappa", [&](const Entry& e) { cfg.kappa = to_double(e, e.value); }},
      {"manifold.r_min", [&](const Entry& e) { cfg.r_min = to_double(e, e.value); }},
      {"manifold.r_max", [&](const Entry& e) { cfg.r_max = to_double(e, e.value); }},
      {"coefficients.a", [&](const Entry& e) { cfg.a = to_list(e); }},
      {"coefficients.b", [&](const Entry& e) { cfg.b = to_list(e); }},
      {"coefficients.f", [&](const Entry& e) { cfg.f = to_list(e); }},
      {"boundary.phi", [&](const Entry& e) { cfg.phi = to_list(e); }},
      {"solver.gamma", [&](const Entry& e) {
         if (is_keyword(e, "auto")) return;
         cfg.gamma = to_double(e, e.value);
         require(*cfg.gamma > 0.0, e, "gamma must be positive");
       }},
      {"solver.q", [&](const Entry& e) {
         if (!is_keyword(e, "critical")) cfg.q = to_double(e, e.value);
       }},
      {"solver.q_schedule", [&](const Entry& e) {
         if (is_keyword(e, "default")) return;
         cfg.q_schedule = to_list(e);
         check_increasing(e, *cfg.q_schedule, true);
       }},
      {"solver.mesh_n", [&](const Entry& e) {
         const long long v = to_integer(e);
         require(v >= 8 && v <= 10'000'000, e, "mesh size must be in [8, 1e7]");
         cfg.mesh_n = static_cast<int>(v);
       }},
      {"solver.tol", [&](const Entry& e) {
         cfg.tol = to_double(e, e.value);
         require(cfg.tol > 0.0 && cfg.tol < 1.0, e, "tolerance must lie in (0, 1)");
       }},
      {"solver.max_iter", [&](const Entry& e) {
         const long long v = to_integer(e);
         require(v >= 1 && v <= 100'000'000, e, "max_iter must be positive");
         cfg.max_iter = static_cast<int>(v);
       }},
      {"solver.restarts", [&](const Entry& e) {
         const long long v = to_integer(e);
         require(v >= 0 && v <= 10'000, e, "restarts must lie in [0, 10000]");
         cfg.restarts = static_cast<int>(v);
       }},
      {"solver.seed", [&](const Entry& e) {
         const long long v = to_integer(e);
         require(v >= 0, e, "seed must be non-negative");
         cfg.seed = static_cast<std::uint64_t>(v);
       }},
      {"bubble.delta", [&](const Entry& e) {
         if (is_keyword(e, "default")) return;
         cfg.delta = to_double(e, e.value);
         require(*cfg.delta > 0.0, e, "delta must be positive");
       }},
      {"bubble.epsilons", [&](const Entry& e) {
         if (is_keyword(e, "default")) return;
         cfg.epsilons = to_list(e);
         for (double x : *cfg.epsilons) require(x > 0.0, e, "epsilons must be positive");
         check_increasing(e, *cfg.epsilons, false);
       }},
      {"bubble.gap_threshold", [&](const Entry& e) {
         cfg.gap_threshold = to_double(e, e.value);
         require(cfg.gap_threshold > 0.0, e, "gap threshold must be positive");
       }},
  };

  for (const auto& [key, entry] : entries) {
    const auto it = handlers.find(key);
    if (it == handlers.end()) throw ConfigError(entry.line, key, "unknown key");
    it->second(entry);
  }
  for (const char* key : {"manifold.n", "manifold.r_max"}) {
    if (entries.count(key) == 0) throw ConfigError(0, key, "required key is missing");
  }

  auto line_of = [&](const std::string& key) { return entries.count(key) ? entries.at(key).line : 0; };
  RadialManifold m(3, 0.0, 0.0, 1.0);
  try {
    m = cfg.manifold();
  } catch (const ValidationError& err) {
    throw ConfigError(line_of("manifold.r_max"), "manifold", err.what());
  }
  try {
    validate_coefficients(m, cfg.coefficients());
  } catch (const ValidationError& err) {
    throw ConfigError(0, "coefficients", err.what());
  }
  if (cfg.phi.size() > static_cast<std::size_t>(m.boundary_count())) {
    throw ConfigError(line_of("boundary.phi"), "boundary.phi",
                      "expected " + std::to_string(m.boundary_count()) + " value(s) for this domain");
  }
  const double crit = critical_exponent(cfg.n);
  if (cfg.q && !(*cfg.q > 2.0 && *cfg.q <= crit)) {
    throw ConfigError(line_of("solver.q"), "solver.q", "exponent must lie in (2, " + format_double(crit) + "]");
  }
  if (cfg.q_schedule) {
    const auto& s = *cfg.q_schedule;
    if (!(s.front() > 2.0) || s.back() != crit) {
      throw ConfigError(line_of("solver.q_schedule"), "solver.q_schedule",
                        "schedule must lie in (2, 2n/(n-2)] and end at " + format_double(crit));
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "", "cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize(const RunConfig& cfg) {
  std::ostringstream out;
  auto opt = [](const auto& v, const char* keyword) -> std::string {
    if (!v) return keyword;
    if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, double>) {
      return format_double(*v);
    } else {
      return format_list(*v);
    }
  };
  out << "manifold.n = " << cfg.n << '\n'
      << "manifold.kappa = " << format_double(cfg.kappa) << '\n'
      << "manifold.r_min = " << format_double(cfg.r_min) << '\n'
      << "manifold.r_max = " << format_double(cfg.r_max) << '\n'
      << "coefficients.a = " << format_list(cfg.a) << '\n'
      << "coefficients.b = " << format_list(cfg.b) << '\n'
      << "coefficients.f = " << format_list(cfg.f) << '\n';
  if (!cfg.phi.empty()) out << "boundary.phi = " << format_list(cfg.phi) << '\n';
  out << "solver.gamma = " << opt(cfg.gamma, "auto") << '\n'
      << "solver.q = " << opt(cfg.q, "critical") << '\n'
      << "solver.q_schedule = " << opt(cfg.q_schedule, "default") << '\n'
      << "solver.mesh_n = " << cfg.mesh_n << '\n'
      << "solver.tol = " << format_double(cfg.tol) << '\n'
      << "solver.max_iter = " << cfg.max_iter << '\n'
      << "solver.restarts = " << cfg.restarts << '\n'
      << "solver.seed = " << cfg.seed << '\n'
      << "bubble.delta = " << opt(cfg.delta, "default") << '\n'
      << "bubble.epsilons = " << opt(cfg.epsilons, "default") << '\n'
      << "bubble.gap_threshold = " << format_double(cfg.gap_threshold) << '\n';
  return out.str();
}

}  // namespace yamabe::cli
