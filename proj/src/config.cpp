#include "tsera/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "tsera/io.hpp"

namespace tsera {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_integer(const std::string& v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw DomainError("bad integer '" + v + "'");
  return out;
}

double parse_real(const std::string& v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw DomainError("bad number '" + v + "'");
  return out;
}

std::vector<std::string> split_list(const std::string& v, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(v);
  if (sep == ' ') {
    while (ss >> item) out.push_back(item);
  } else {
    while (std::getline(ss, item, sep)) {
      item = trim(item);
      if (!item.empty()) out.push_back(item);
    }
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"experiment.scenario", [](auto& c, auto& v) { c.scenario = parse_scenario(v); }},
      {"experiment.design", [](auto& c, auto& v) { c.design = ModeDesign::parse(v); }},
      {"experiment.nuisance", [](auto& c, auto& v) { c.nuisance = NuisanceDesign::parse(v); }},
      {"experiment.shape",
       [](auto& c, auto& v) {
         c.shape.clear();
         for (const auto& d : split_list(v, ' ')) c.shape.push_back(parse_integer<Index>(d));
       }},
      {"experiment.mode", [](auto& c, auto& v) { c.k_star = parse_integer<Index>(v) - 1; }},
      {"experiment.n1", [](auto& c, auto& v) { c.n1 = parse_integer<Index>(v); }},
      {"experiment.n2", [](auto& c, auto& v) { c.n2 = parse_integer<Index>(v); }},
      {"experiment.replications", [](auto& c, auto& v) { c.replications = parse_integer<Index>(v); }},
      {"experiment.alpha", [](auto& c, auto& v) { c.alpha = parse_real(v); }},
      {"experiment.seed", [](auto& c, auto& v) { c.seed = parse_integer<std::uint64_t>(v); }},
      {"experiment.methods",
       [](auto& c, auto& v) {
         c.methods.clear();
         for (const auto& m : split_list(v, ',')) c.methods.push_back(parse_method(m));
       }},
      {"experiment.lambda", [](auto& c, auto& v) { c.lambda = LambdaRule::parse(v); }},
      {"experiment.mean_scale1", [](auto& c, auto& v) { c.mean_scale1 = parse_real(v); }},
      {"experiment.mean_scale2", [](auto& c, auto& v) { c.mean_scale2 = parse_real(v); }},
      {"experiment.threads", [](auto& c, auto& v) { c.threads = parse_integer<unsigned>(v); }},
      {"sera.screen_level", [](auto& c, auto& v) { c.sera.screen_level = parse_real(v); }},
      {"sera.kernel", [](auto& c, auto& v) { c.sera.kernel = parse_kernel(v); }},
      {"sera.bandwidth",
       [](auto& c, auto& v) {
         if (v == "auto") {
           c.sera.bandwidth.reset();
         } else {
           c.sera.bandwidth = parse_real(v);
         }
       }},
      {"sera.trunc_xi", [](auto& c, auto& v) { c.sera.trunc_xi = parse_real(v); }},
  };
  return table;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cut = line.find_first_of("#;");
    const std::string t = trim(cut == std::string::npos ? line : line.substr(0, cut));
    if (t.empty()) continue;
    const std::string at = source + ":" + std::to_string(lineno) + ": ";
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError(at + "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section != "experiment" && section != "sera") throw ParseError(at + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(at + "expected key = value");
    if (section.empty()) throw ParseError(at + "key outside of a section");
    const std::string key = section + "." + trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError(at + "unknown key '" + key + "'");
    try {
      it->second(cfg, value);
    } catch (const Error& e) {
      throw ParseError(at + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw ParseError(source + ": " + e.what());
  }
  return cfg;
}

std::string render_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "[experiment]\n";
  os << "scenario = " << scenario_name(cfg.scenario) << "\n";
  os << "design = " << cfg.design.name() << "\n";
  os << "nuisance = " << cfg.nuisance.name() << "\n";
  os << "shape =";
  for (Index m : cfg.shape) os << " " << m;
  os << "\n";
  os << "mode = " << cfg.k_star + 1 << "\n";
  os << "n1 = " << cfg.n1 << "\n";
  os << "n2 = " << cfg.n2 << "\n";
  os << "replications = " << cfg.replications << "\n";
  os << "alpha = " << format_double(cfg.alpha) << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "methods = ";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) os << (i ? ", " : "") << method_name(cfg.methods[i]);
  os << "\n";
  os << "lambda = " << cfg.lambda.render() << "\n";
  os << "mean_scale1 = " << format_double(cfg.mean_scale1) << "\n";
  os << "mean_scale2 = " << format_double(cfg.mean_scale2) << "\n";
  os << "threads = " << cfg.threads << "\n";
  os << "\n[sera]\n";
  os << "screen_level = " << format_double(cfg.sera.screen_level) << "\n";
  os << "kernel = " << kernel_name(cfg.sera.kernel) << "\n";
  os << "bandwidth = " << (cfg.sera.bandwidth ? format_double(*cfg.sera.bandwidth) : "auto") << "\n";
  os << "trunc_xi = " << format_double(cfg.sera.trunc_xi) << "\n";
  return os.str();
}

ExperimentConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

}  // namespace tsera
