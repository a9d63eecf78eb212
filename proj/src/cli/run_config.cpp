#include "kitaev/cli/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "kitaev/ed_oracle.hpp"
#include "kitaev/format.hpp"

namespace kitaev::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  if (used != t.size() || !std::isfinite(v)) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

bool is_plain_integer(const std::string& t) {
  if (t.empty()) return false;
  for (char c : t) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

bool is_command(const RunConfig& c, const char* name) { return c.command == name; }

std::size_t time_samples(const RunConfig& c) {
  return TimeGrid{c.t_max, c.dt}.points().size();
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& p : problems) msg += "\n  - " + p;
        return msg;
      }()),
      problems_(std::move(problems)) {}

int RunConfig::chain_length() const {
  if (n_sites != 0) return n_sites;
  return command == "verify" ? 8 : 32;
}

double parse_angle(const std::string& text) {
  std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument("empty angle");
  const auto pos = t.find("pi");
  if (pos == std::string::npos) return parse_number(t);
  std::string coef = t.substr(0, pos);
  std::string rest = t.substr(pos + 2);
  double c = 1.0;
  if (coef == "-") {
    c = -1.0;
  } else if (coef == "+" || coef.empty()) {
    c = 1.0;
  } else {
    if (coef.back() == '*') coef.pop_back();
    c = parse_number(coef);
  }
  double d = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw std::invalid_argument("cannot parse angle '" + text + "'");
    d = parse_number(rest.substr(1));
    if (d == 0.0) throw std::invalid_argument("division by zero in '" + text + "'");
  }
  return c * kPi / d;
}

InitialState parse_state(const std::string& text, int n_sites) {
  const std::string t = trim(text);
  if (t == "vacuum") return VacuumState{};
  if (t == "uniform") return UniformSiteState{};
  const std::string prefix = "magnon:";
  if (t.rfind(prefix, 0) != 0) {
    throw std::invalid_argument("unknown state '" + text + "' (vacuum, uniform, magnon:<m|momentum>)");
  }
  const std::string arg = t.substr(prefix.size());
  double q = 0.0;
  if (is_plain_integer(arg)) {
    const int m = std::stoi(arg);
    if (m < 1 || m > n_sites / 4) {
      throw std::invalid_argument("magnon index " + arg + " outside 1.." + std::to_string(n_sites / 4));
    }
    q = (2.0 * m - 1.0) * kPi / n_sites;
  } else {
    q = parse_angle(arg);
  }
  locate_momentum(n_sites, q);
  return DefiniteMomentumState{reduce_momentum(q)};
}

std::vector<double> parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) return {parse_number(parts[0])};
  if (parts.size() != 3) throw std::invalid_argument("range must be 'v' or 'start:step:stop'");
  const double start = parse_number(parts[0]);
  const double step = parse_number(parts[1]);
  const double stop = parse_number(parts[2]);
  if (!(step > 0.0)) throw std::invalid_argument("range step must be positive");
  if (stop < start) throw std::invalid_argument("empty range '" + text + "'");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = start + static_cast<double>(i) * step;
  return values;
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> sizes;
  for (const auto& part : split(text, ',')) {
    if (!is_plain_integer(part)) throw std::invalid_argument("bad chain length '" + part + "'");
    sizes.push_back(std::stoi(part));
  }
  return sizes;
}

MomentumSelection parse_k_range(const std::string& text) {
  const std::string t = trim(text);
  MomentumSelection sel;
  if (t == "all" || t.empty()) return sel;
  const auto parts = split(t, ':');
  if (parts.size() == 1) {
    sel.single = true;
    sel.k = parse_angle(parts[0]);
    return sel;
  }
  if (parts.size() != 2) throw std::invalid_argument("k range must be 'all', 'lo:hi' or one momentum");
  sel.lo = parse_angle(parts[0]);
  sel.hi = parse_angle(parts[1]);
  if (sel.hi < sel.lo) throw std::invalid_argument("k range '" + text + "' is empty");
  return sel;
}

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> problems;
  const auto check = [&](auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      problems.emplace_back(e.what());
    }
  };
  static const std::vector<std::string> commands{"echo", "momdist", "sweep", "kicked", "scaling", "verify"};
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end()) {
    problems.push_back("unknown command '" + c.command + "'");
    return problems;
  }
  const int n = c.chain_length();
  bool chain_ok = true;
  check([&] {
    try {
      ChainSpec{n, c.j_x, c.r, c.h_b}.validate();
    } catch (...) {
      chain_ok = false;
      throw;
    }
  });
  if (!std::isfinite(c.h_b)) problems.push_back("--hb must be finite");
  if (c.workers < 1) problems.push_back("--workers must be at least 1");

  std::vector<double> fields;
  check([&] {
    fields = parse_range(c.h_f);
    if (!is_command(c, "sweep") && fields.size() != 1) {
      throw std::invalid_argument("--hf takes a range only for sweep");
    }
  });

  bool grid_ok = true;
  check([&] {
    try {
      TimeGrid{c.t_max, c.dt}.validate();
    } catch (...) {
      grid_ok = false;
      throw;
    }
  });
  if (!std::isfinite(c.time) || c.time < 0.0) problems.push_back("--time must be finite and nonnegative");

  const bool uses_state = !is_command(c, "scaling") && !is_command(c, "verify");
  if (uses_state && chain_ok) {
    std::vector<int> lengths{n};
    if (is_command(c, "sweep") && !c.sizes.empty()) {
      try {
        lengths = parse_sizes(c.sizes);
      } catch (...) {
      }
    }
    for (int len : lengths) {
      check([&] {
        const auto s = parse_state(c.state, len);
        if (is_command(c, "momdist") && std::holds_alternative<VacuumState>(s)) {
          throw std::invalid_argument("momdist needs a one-magnon state (magnon:<q> or uniform)");
        }
      });
    }
  }

  if (is_command(c, "momdist")) {
    check([&] {
      const auto sel = parse_k_range(c.k_range);
      if (sel.single && chain_ok) locate_momentum(n, sel.k);
      if (!sel.single && c.window > 0) {
        throw std::invalid_argument("--window applies to time series (single momentum) only");
      }
    });
  }

  if (is_command(c, "kicked")) {
    check([&] {
      if (!(parse_angle(c.tau) > 0.0)) throw std::invalid_argument("--tau must be positive");
    });
    if (c.kicks < 0) problems.push_back("--kicks must be nonnegative");
  }

  if (is_command(c, "sweep") || is_command(c, "scaling")) {
    check([&] {
      if (c.sizes.empty()) {
        if (is_command(c, "scaling")) throw std::invalid_argument("scaling needs --sizes");
        return;
      }
      const auto sizes = parse_sizes(c.sizes);
      if (is_command(c, "scaling") && sizes.size() < 4) {
        throw std::invalid_argument("scaling needs at least 4 sizes, got " + std::to_string(sizes.size()));
      }
      for (int s : sizes) ChainSpec{s, c.j_x, c.r, c.h_b}.validate();
    });
  }

  if (is_command(c, "verify") && n > kDefaultOracleCap) {
    problems.push_back("N=" + std::to_string(n) + " exceeds the oracle cap of " +
                       std::to_string(kDefaultOracleCap));
  }

  if (c.window > 0) {
    std::size_t samples = 0;
    if (is_command(c, "echo") || is_command(c, "momdist")) {
      samples = grid_ok ? time_samples(c) : 0;
    } else if (is_command(c, "kicked")) {
      samples = c.kicks >= 0 ? static_cast<std::size_t>(c.kicks) + 1 : 0;
    } else {
      problems.push_back("--window is not used by " + c.command);
    }
    if (samples > 0 && c.window > samples) {
      problems.push_back("--window " + std::to_string(c.window) + " exceeds the " +
                         std::to_string(samples) + " samples of the series");
    }
  }
  if (c.out.empty()) problems.push_back("--out must not be empty");
  return problems;
}

std::string canonical_invocation(const RunConfig& c) {
  std::ostringstream s;
  s << kToolName << ' ' << c.command << " --n " << c.chain_length() << " --r " << format_number(c.r)
    << " --jx " << format_number(c.j_x) << " --hf " << c.h_f << " --hb " << format_number(c.h_b)
    << " --state " << c.state << " --tmax " << format_number(c.t_max) << " --dt "
    << format_number(c.dt) << " --tau " << c.tau << " --kicks " << c.kicks << " --time "
    << format_number(c.time) << " --k-range " << c.k_range << " --window " << c.window;
  if (!c.sizes.empty()) s << " --sizes " << c.sizes;
  s << " --out " << c.out;
  if (!c.plot_script.empty()) s << " --plot-script " << c.plot_script;
  if (c.corrupt_engine) s << " --corrupt-engine";
  if (c.synthetic_peaks) s << " --synthetic-peaks";
  return s.str();
}

}  // namespace kitaev::cli
