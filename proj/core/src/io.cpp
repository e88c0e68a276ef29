#include "sldp/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef SLDP_GIT_DESCRIBE
#define SLDP_GIT_DESCRIBE "unknown"
#endif

namespace sldp {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw ValidationError(std::string(what) + " must be a number");
  return j.get<double>();
}

Vec vector_from(const Json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], what);
  return v;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_number(const std::string& s, double& v) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Json parse_json(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // Byte offset -> line/column (both 1-based).
    const std::size_t at = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < at; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ValidationError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                          ": invalid JSON");
  }
}

Json read_json_file(const std::string& path) { return parse_json(read_file(path), path); }

// --- family / Gaussian / solver --------------------------------------------

Json to_json(const MeasureFamily& family) {
  Json j;
  j["kind"] = std::string(to_string(family.kind()));
  j["p"] = family.p();
  j["qStar"] = family.q_star();
  return j;
}

MeasureFamily family_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ValidationError("family must be an object with a string \"kind\"");
  }
  for (const auto& [key, _] : j.items()) {
    if (key != "kind" && key != "p" && key != "qStar") throw ValidationError("unknown family field '" + key + "'");
  }
  const FamilyKind kind = family_kind_from_string(j["kind"].get<std::string>());
  double p = 2.0;
  if (j.contains("p")) {
    p = number(j["p"], "family p");
  } else if (kind != FamilyKind::ProductGaussian) {
    throw ValidationError("family '" + j["kind"].get<std::string>() + "' needs \"p\"");
  }
  std::optional<double> q;
  if (j.contains("qStar")) q = number(j["qStar"], "family qStar");
  return MeasureFamily::make(kind, p, q);
}

Json to_json(const GaussianMeasure& g) {
  Json j;
  j["mean"] = Json::array();
  for (int i = 0; i < g.dim(); ++i) j["mean"].push_back(g.mean()(i));
  j["cov"] = Json::array();
  for (int i = 0; i < g.dim(); ++i) {
    Json row = Json::array();
    for (int c = 0; c < g.dim(); ++c) row.push_back(g.cov()(i, c));
    j["cov"].push_back(row);
  }
  return j;
}

GaussianMeasure gaussian_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("mean") || !j.contains("cov")) {
    throw ValidationError("Gaussian must be an object with \"mean\" and \"cov\"");
  }
  const Vec mean = vector_from(j["mean"], "Gaussian mean");
  const Json& cj = j["cov"];
  if (!cj.is_array() || cj.size() != static_cast<std::size_t>(mean.size())) {
    throw ValidationError("Gaussian cov must be a k x k array of rows");
  }
  Mat cov(mean.size(), mean.size());
  for (std::size_t r = 0; r < cj.size(); ++r) {
    const Vec row = vector_from(cj[r], "Gaussian cov row");
    if (row.size() != mean.size()) throw ValidationError("Gaussian cov must be a k x k array of rows");
    cov.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return GaussianMeasure(mean, cov);
}

Json to_json(const SolverConfig& cfg) {
  Json j;
  j["newtonTol"] = cfg.newtonTol;
  j["maxIter"] = cfg.maxIter;
  j["goldenTol"] = cfg.goldenTol;
  j["infinityThreshold"] = cfg.infinityThreshold;
  j["hermiteNodes"] = cfg.hermiteNodes;
  return j;
}

SolverConfig solver_config_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("solver config must be a JSON object");
  SolverConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "newtonTol") {
      cfg.newtonTol = number(value, "newtonTol");
    } else if (key == "maxIter") {
      if (!value.is_number_integer()) throw ValidationError("maxIter must be an integer");
      cfg.maxIter = value.get<int>();
    } else if (key == "goldenTol") {
      cfg.goldenTol = number(value, "goldenTol");
    } else if (key == "infinityThreshold") {
      cfg.infinityThreshold = number(value, "infinityThreshold");
    } else if (key == "hermiteNodes") {
      if (!value.is_number_integer()) throw ValidationError("hermiteNodes must be an integer");
      cfg.hermiteNodes = value.get<int>();
    } else {
      throw ValidationError("unknown solver setting '" + key + "'");
    }
  }
  if (!(cfg.newtonTol > 0.0) || !(cfg.goldenTol > 0.0) || !(cfg.infinityThreshold > 0.0)) {
    throw ValidationError("solver tolerances must be positive");
  }
  if (cfg.maxIter < 1) throw ValidationError("maxIter must be >= 1");
  if (cfg.hermiteNodes < 2 || cfg.hermiteNodes > kMaxHermiteNodes) {
    throw ValidationError("hermiteNodes must lie in [2, 256]");
  }
  return cfg;
}

// --- empirical CSV / nu ------------------------------------------------------

EmpiricalMeasure read_empirical_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  int line_no = 0;
  int weight_col = -1;
  int columns = -1;
  bool seen_first = false;
  std::vector<std::vector<double>> rows;
  std::vector<double> weights;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cells = split_csv(t);
    auto where = [&] { return path + ":" + std::to_string(line_no) + ": "; };
    if (!seen_first) {
      seen_first = true;
      double probe;
      if (!parse_number(cells[0], probe)) {
        columns = static_cast<int>(cells.size());
        for (int c = 0; c < columns; ++c) {
          std::string name = cells[c];
          std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::tolower(ch); });
          if (name == "weight") weight_col = c;
        }
        continue;
      }
    }
    if (columns < 0) columns = static_cast<int>(cells.size());
    if (static_cast<int>(cells.size()) != columns) throw ValidationError(where() + "expected " + std::to_string(columns) + " columns");
    std::vector<double> row;
    for (int c = 0; c < columns; ++c) {
      double v;
      if (!parse_number(cells[c], v)) throw ValidationError(where() + "column " + std::to_string(c + 1) + " is not a number");
      if (c == weight_col) {
        weights.push_back(v);
      } else {
        row.push_back(v);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(path + ": no data rows");
  const int k = static_cast<int>(rows[0].size());
  if (k < 1) throw ValidationError(path + ": no coordinate columns");
  Mat pts(static_cast<Eigen::Index>(rows.size()), k);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < k; ++c) pts(static_cast<Eigen::Index>(r), c) = rows[r][c];
  if (weight_col < 0) return EmpiricalMeasure(pts);
  Vec w = Eigen::Map<Vec>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  return EmpiricalMeasure(pts, w);
}

NuSpec parse_nu(const std::string& arg, int k) {
  if (arg == "standard") {
    if (k < 1) throw ValidationError("--nu standard needs k >= 1");
    return NuSpec::standard(k);
  }
  auto body = [&](std::string_view prefix) { return arg.substr(prefix.size()); };
  NuSpec nu = NuSpec::standard(1);
  if (arg.rfind("gaussian:", 0) == 0) {
    const std::string b = body("gaussian:");
    const std::string t = trim(b);
    const Json j = !t.empty() && t[0] == '{' ? parse_json(t, "--nu") : read_json_file(b);
    nu = NuSpec::gaussian(gaussian_from_json(j));
  } else if (arg.rfind("discrete:", 0) == 0) {
    nu = NuSpec::discrete(read_empirical_csv(body("discrete:")));
  } else {
    throw ValidationError("--nu must be standard, gaussian:<json> or discrete:<csv>");
  }
  if (k >= 1 && nu.dim() != k) {
    throw ValidationError("--nu has dimension " + std::to_string(nu.dim()) + " but k = " + std::to_string(k));
  }
  return nu;
}

std::string describe_nu(const NuSpec& nu) {
  if (!nu.is_gaussian()) {
    const auto& m = nu.as_discrete();
    return "discrete(" + std::to_string(m.size()) + " points, k=" + std::to_string(m.dim()) + ")";
  }
  const auto& g = nu.as_gaussian();
  if (g.mean().isZero(0.0) && g.cov().isIdentity(0.0)) return "standard(" + std::to_string(g.dim()) + ")";
  return "gaussian" + to_json(g).dump();
}

// --- hashing / metadata -----------------------------------------------------

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string build_describe() { return SLDP_GIT_DESCRIBE; }

Json to_json(const ExperimentSpec& spec) {
  Json j;
  j["command"] = spec.command;
  j["family"] = to_json(spec.family);
  j["parameters"] = spec.parameters;
  j["seed"] = spec.seed;
  j["output"] = spec.output;
  return j;
}

ExperimentSpec experiment_spec_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("experiment spec must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "command" && key != "family" && key != "parameters" && key != "seed" && key != "output") {
      throw ValidationError("unknown spec field '" + key + "'");
    }
  }
  ExperimentSpec s;
  if (!j.contains("command") || !j["command"].is_string()) throw ValidationError("spec needs a string \"command\"");
  s.command = j["command"].get<std::string>();
  const auto& cmds = experiment_commands();
  if (std::find(cmds.begin(), cmds.end(), s.command) == cmds.end()) {
    throw ValidationError("unknown command '" + s.command + "'");
  }
  if (j.contains("family")) s.family = family_from_json(j["family"]);
  if (j.contains("parameters")) {
    if (!j["parameters"].is_object()) throw ValidationError("spec parameters must be an object");
    s.parameters = j["parameters"];
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ValidationError("seed must be a nonnegative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("output")) {
    if (!j["output"].is_string()) throw ValidationError("output must be a string");
    s.output = j["output"].get<std::string>();
  }
  return s;
}

std::string metadata_header(const ExperimentSpec& spec) {
  const std::string body = to_json(spec).dump();
  return "# sldp spec_hash=" + hex64(fnv1a64(body)) + " seed=" + std::to_string(spec.seed) +
         " build=" + build_describe() + " spec=" + body;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// --- rate curves --------------------------------------------------------------

void emit_rate_curve(const RateCurve& curve, std::ostream& os, const std::string& metadata) {
  if (curve.points.empty()) throw ValidationError("rate curve is empty");
  const int k = static_cast<int>(curve.points.front().x.size());
  const std::string solver = to_json(curve.solver).dump();
  if (!metadata.empty()) os << metadata << '\n';
  os << "# rate=" << curve.rate << " family=" << curve.family.name() << " nu=" << curve.nu
     << " solver_hash=" << hex64(fnv1a64(solver)) << " solver=" << solver << '\n';
  int t_cols = 0;
  for (const auto& p : curve.points) t_cols = std::max<int>(t_cols, static_cast<int>(p.argmax.size()));
  for (int i = 0; i < k; ++i) os << 'x' << i + 1 << ',';
  os << "rate,converged," << curve.tauName;
  for (int i = 0; i < t_cols; ++i) {
    if (i < static_cast<int>(curve.argmaxNames.size())) {
      os << ',' << curve.argmaxNames[i];
    } else {
      os << ",argmax" << i + 1;
    }
  }
  os << '\n';
  for (const auto& p : curve.points) {
    if (p.x.size() != k) throw ValidationError("rate curve points have mixed dimensions");
    for (int i = 0; i < k; ++i) os << format_double(p.x(i)) << ',';
    os << format_double(p.value) << ',' << (p.converged ? "true" : "false") << ',' << format_double(p.tau);
    for (int i = 0; i < t_cols; ++i) os << ',' << (i < p.argmax.size() ? format_double(p.argmax(i)) : "");
    os << '\n';
  }
}

void emit_rate_curve(const RateCurve& curve, const std::string& path, const std::string& metadata) {
  std::ostringstream os;
  emit_rate_curve(curve, os, metadata);
  write_text(path, os.str());
}

void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace sldp
