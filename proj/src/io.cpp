#include "morsewig/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "morsewig/error.hpp"

namespace morsewig {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& what) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw DomainError("cannot parse " + what + " from '" + s + "'");
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double peak_abs(const PhaseSpaceGrid& grid) {
  double m = 0.0;
  for (double v : grid.values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

nlohmann::json state_to_json(const BoundState& state) {
  const MorseSystem& sys = state.system();
  nlohmann::json coeffs = nlohmann::json::array();
  for (const Complex& c : state.coeffs()) {
    coeffs.push_back({c.real(), c.imag()});
  }
  return {{"N", sys.n_bound()},     {"hbar", sys.hbar()},
          {"omega", sys.omega()},   {"mass", sys.mass()},
          {"label", state.label()}, {"coeffs", coeffs}};
}

BoundState state_from_json(const nlohmann::json& j) {
  try {
    const MorseSystem sys =
        make_system(j.at("N").get<int>(), j.at("hbar").get<double>(),
                    j.at("omega").get<double>(), j.at("mass").get<double>());
    std::vector<Complex> c;
    for (const auto& pair : j.at("coeffs")) {
      if (!pair.is_array() || pair.size() != 2) {
        throw DomainError("state json: coefficients must be [re, im] pairs");
      }
      c.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return BoundState(sys, std::move(c), j.value("label", std::string()));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("state json: ") + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot open " + tmp + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw DomainError("write to " + tmp + " failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw DomainError("cannot move output into place at " + path + ": " +
                      ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string grid_to_csv(const PhaseSpaceGrid& grid) {
  const GridSpec& s = grid.spec;
  auto field = [&](const char* key) {
    const auto it = grid.meta.find(key);
    return it == grid.meta.end() ? std::string() : it->second;
  };
  std::string out = "# morsewig grid v1; N=" + field("N") +
                    "; method=" + field("method") + "; label=" + field("label") +
                    "\nx,p,w\n";
  out.reserve(out.size() + grid.values.size() * 72);
  for (int i = 0; i < s.nx; ++i) {
    const std::string x = num(s.x_at(i));
    for (int j = 0; j < s.np; ++j) {
      out += x;
      out += ',';
      out += num(s.p_at(j));
      out += ',';
      out += num(grid.at(i, j));
      out += '\n';
    }
  }
  return out;
}

PhaseSpaceGrid grid_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  PhaseSpaceGrid grid;
  if (!std::getline(in, line) || line.rfind("# morsewig grid v1", 0) != 0) {
    throw DomainError("csv: missing '# morsewig grid v1' header");
  }
  std::istringstream header(line.substr(std::string("# morsewig grid v1").size()));
  for (std::string part; std::getline(header, part, ';');) {
    part = trim(part);
    const auto eq = part.find('=');
    if (eq != std::string::npos) {
      grid.meta[part.substr(0, eq)] = part.substr(eq + 1);
    }
  }
  if (!std::getline(in, line) || trim(line) != "x,p,w") {
    throw DomainError("csv: missing 'x,p,w' column line");
  }
  std::vector<double> xs, ps;
  int nx = 0;
  double last_x = 0.0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') ||
        !std::getline(row, c)) {
      throw DomainError("csv: malformed row '" + line + "'");
    }
    const double x = parse_double(trim(a), "x");
    const double p = parse_double(trim(b), "p");
    const double w = parse_double(trim(c), "w");
    if (grid.values.empty() || x != last_x) {
      ++nx;
      xs.push_back(x);
      last_x = x;
    }
    if (nx == 1) ps.push_back(p);
    grid.values.push_back(w);
  }
  if (nx < 2 || ps.size() < 2 || grid.values.size() != xs.size() * ps.size()) {
    throw DomainError("csv: rows do not form a rectangular lattice");
  }
  grid.spec = {xs.front(), xs.back(), nx, ps.front(), ps.back(),
               static_cast<int>(ps.size())};
  grid.spec.validate();
  return grid;
}

nlohmann::json grid_to_json(const PhaseSpaceGrid& grid) {
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : grid.meta) meta[k] = v;
  const GridSpec& s = grid.spec;
  return {{"format", "morsewig grid v1"},
          {"grid",
           {{"x_min", s.x_min},
            {"x_max", s.x_max},
            {"nx", s.nx},
            {"p_min", s.p_min},
            {"p_max", s.p_max},
            {"np", s.np}}},
          {"meta", meta}};
}

Rgb diverging_color(double v) {
  v = std::clamp(v, -1.0, 1.0);
  auto ch = [](double f) {
    return static_cast<unsigned char>(std::lround(255.0 * f));
  };
  if (v >= 0.0) return {255, ch(1.0 - v), ch(1.0 - v)};
  return {ch(1.0 + v), ch(1.0 + v), 255};
}

std::string grid_to_ppm(const PhaseSpaceGrid& grid) {
  const GridSpec& s = grid.spec;
  const double scale = peak_abs(grid);
  std::string out = "P6\n" + std::to_string(s.nx) + " " +
                    std::to_string(s.np) + "\n255\n";
  for (int j = s.np - 1; j >= 0; --j) {
    for (int i = 0; i < s.nx; ++i) {
      const Rgb c = diverging_color(scale > 0.0 ? grid.at(i, j) / scale : 0.0);
      out += static_cast<char>(c.r);
      out += static_cast<char>(c.g);
      out += static_cast<char>(c.b);
    }
  }
  return out;
}

std::string grid_to_svg(const PhaseSpaceGrid& grid) {
  const GridSpec& s = grid.spec;
  const double scale = peak_abs(grid);
  constexpr int kCell = 4;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << s.nx * kCell
      << "\" height=\"" << s.np * kCell << "\" shape-rendering=\"crispEdges\">\n";
  for (int j = s.np - 1; j >= 0; --j) {
    for (int i = 0; i < s.nx; ++i) {
      const Rgb c = diverging_color(scale > 0.0 ? grid.at(i, j) / scale : 0.0);
      out << "<rect x=\"" << i * kCell << "\" y=\"" << (s.np - 1 - j) * kCell
          << "\" width=\"" << kCell << "\" height=\"" << kCell
          << "\" fill=\"rgb(" << int(c.r) << "," << int(c.g) << "," << int(c.b)
          << ")\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace morsewig
