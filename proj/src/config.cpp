#include "rsum/config.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "rsum/solver.hpp"

namespace rsum {

ParseError::ParseError(int line, const std::string& message)
    : ConfigError("line " + std::to_string(line) + ": " + message), line_(line) {}

std::string to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::ProxSum: return "prox_sum";
    case ProblemKind::StrongWeak: return "strong_weak";
    case ProblemKind::BestApprox: return "best_approx";
    case ProblemKind::LinearPair: return "linear_pair";
    case ProblemKind::Custom: return "custom";
  }
  return "custom";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Strengthened: return "strengthened";
    case Method::DR: return "dr";
    case Method::AAMR: return "aamr";
  }
  return "strengthened";
}

Method parse_method(const std::string& name) {
  if (name == "strengthened") return Method::Strengthened;
  if (name == "dr") return Method::DR;
  if (name == "aamr") return Method::AAMR;
  throw ConfigError("method: expected strengthened|dr|aamr, got '" + name + "'");
}

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, Entry> entries;
};

struct RawConfig {
  std::map<std::string, Entry> top;
  std::vector<Section> sections;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

RawConfig lex(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  std::map<std::string, Entry>* target = &raw.top;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ParseError(number, "unterminated section header");
      const std::string name = trim(std::string_view(body).substr(1, body.size() - 2));
      if (name.empty()) throw ParseError(number, "empty section name");
      for (const auto& s : raw.sections) {
        if (s.name == name) throw ParseError(number, "duplicate section [" + name + "]");
      }
      raw.sections.push_back(Section{name, number, {}});
      target = &raw.sections.back().entries;
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(number, "expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ParseError(number, "empty key");
    if (value.empty()) throw ParseError(number, "empty value for '" + key + "'");
    if (target->count(key)) throw ParseError(number, "duplicate key '" + key + "'");
    (*target)[key] = Entry{value, number};
  }
  return raw;
}

double to_double(const Entry& e, const std::string& key) {
  const std::string s = trim(e.value);
  double out = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (!s.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw ParseError(e.line, key + ": expected a number, got '" + e.value + "'");
  }
  if (!std::isfinite(out)) throw ParseError(e.line, key + ": must be finite");
  return out;
}

std::uint64_t to_unsigned(const Entry& e, const std::string& key) {
  const std::string s = trim(e.value);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(e.line, key + ": expected a nonnegative integer, got '" + e.value + "'");
  }
  return out;
}

bool to_bool(const Entry& e, const std::string& key) {
  if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
  if (e.value == "false" || e.value == "no" || e.value == "0") return false;
  throw ParseError(e.line, key + ": expected true|false");
}

Vector to_vector(const Entry& e, const std::string& key, std::string_view text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    values.push_back(to_double(Entry{std::string(text.substr(start, comma - start)), e.line}, key));
    start = comma + 1;
  }
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Vector to_vector(const Entry& e, const std::string& key) { return to_vector(e, key, e.value); }

/// Rows (or basis vectors) separated by ';'.
std::vector<Vector> to_vector_list(const Entry& e, const std::string& key) {
  std::vector<Vector> out;
  std::string_view text = e.value;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto semi = text.find(';', start);
    if (semi == std::string_view::npos) semi = text.size();
    out.push_back(to_vector(e, key, text.substr(start, semi - start)));
    start = semi + 1;
  }
  for (const auto& v : out) {
    if (v.size() != out.front().size()) throw ParseError(e.line, key + ": ragged rows");
  }
  return out;
}

void require_dim(const Vector& v, Eigen::Index n, const Entry& e, const std::string& key) {
  if (v.size() != n) {
    throw ParseError(e.line, key + ": expected " + std::to_string(n) + " entries, got " +
                                 std::to_string(v.size()));
  }
}

const std::set<std::string> kLinearTypes = {"zero", "identity", "matrix", "random_psd"};
const std::set<std::string> kSetTypes = {"box",       "ball",      "halfspace",      "hyperplane",
                                         "affine",    "singleton", "random_subspace"};
const std::set<std::string> kFunctionTypes = {"zero", "l1", "half_sq", "linear"};

enum class Slot { Operator, LinearOnly, SetOnly, FunctionOrSet, FunctionOnly };

OperandSpec parse_operand(const Section& s, Slot slot, Eigen::Index n) {
  OperandSpec op;
  op.section = s.name;
  op.line = s.line;
  const auto type_it = s.entries.find("type");
  if (type_it == s.entries.end()) throw ParseError(s.line, "[" + s.name + "]: missing 'type'");
  op.type = type_it->second.value;
  const Entry& type_entry = type_it->second;

  const bool is_linear = kLinearTypes.count(op.type) > 0;
  const bool is_set = kSetTypes.count(op.type) > 0;
  const bool is_function = kFunctionTypes.count(op.type) > 0;
  bool allowed = false;
  switch (slot) {
    case Slot::Operator: allowed = is_linear || is_set || is_function; break;
    case Slot::LinearOnly: allowed = is_linear; break;
    case Slot::SetOnly: allowed = is_set; break;
    case Slot::FunctionOrSet: allowed = is_function || is_set; break;
    case Slot::FunctionOnly: allowed = is_function; break;
  }
  if (!allowed) {
    throw ParseError(type_entry.line, "[" + s.name + "]: type '" + op.type +
                                          "' not allowed in this section");
  }
  // "zero" is a function in function slots and the zero operator elsewhere.
  if (is_set) {
    op.category = OperandSpec::Category::Set;
  } else if (is_function && (slot == Slot::FunctionOrSet || slot == Slot::FunctionOnly ||
                             op.type != "zero")) {
    op.category = OperandSpec::Category::Function;
  } else {
    op.category = OperandSpec::Category::Linear;
  }

  std::set<std::string> used = {"type"};
  auto get = [&](const std::string& key) -> const Entry* {
    const auto it = s.entries.find(key);
    if (it == s.entries.end()) return nullptr;
    used.insert(key);
    return &it->second;
  };
  auto need = [&](const std::string& key) -> const Entry& {
    const Entry* e = get(key);
    if (!e) throw ParseError(s.line, "[" + s.name + "]: missing '" + key + "' for type " + op.type);
    return *e;
  };
  auto vec = [&](const std::string& key) {
    const Entry& e = need(key);
    Vector v = to_vector(e, key);
    require_dim(v, n, e, key);
    return v;
  };
  auto scalar_or = [&](const std::string& key, double fallback) {
    const Entry* e = get(key);
    return e ? to_double(*e, key) : fallback;
  };
  auto wrap = [&](auto&& build) {
    try {
      build();
    } catch (const ParseError&) {
      throw;
    } catch (const ConfigError& err) {
      throw ParseError(s.line, "[" + s.name + "]: " + err.what());
    }
  };

  wrap([&] {
    if (op.category == OperandSpec::Category::Linear) {
      if (op.type == "zero") {
        op.matrix = Matrix::Zero(n, n);
      } else if (op.type == "identity") {
        op.scale = scalar_or("scale", 1.0);
        if (op.scale < 0.0) throw ConfigError("scale must be nonnegative");
        op.matrix = op.scale * Matrix::Identity(n, n);
      } else if (op.type == "matrix") {
        const Entry& e = need("rows");
        const auto rows = to_vector_list(e, "rows");
        if (static_cast<Eigen::Index>(rows.size()) != n || rows.front().size() != n) {
          throw ParseError(e.line, "rows: expected a " + std::to_string(n) + "x" +
                                       std::to_string(n) + " matrix");
        }
        Matrix m(n, n);
        for (Eigen::Index i = 0; i < n; ++i) m.row(i) = rows[static_cast<std::size_t>(i)].transpose();
        LinearMonotoneOperator check(m);  // validates monotonicity
        op.matrix = std::move(m);
      } else {  // random_psd
        op.random_psd = true;
        op.scale = scalar_or("scale", 1.0);
        if (!(op.scale > 0.0)) throw ConfigError("scale must be positive");
        if (const Entry* e = get("skew")) op.skew = to_bool(*e, "skew");
      }
    } else if (op.category == OperandSpec::Category::Set) {
      if (op.type == "box") {
        op.set = ConvexSet::box(vec("lower"), vec("upper"));
      } else if (op.type == "ball") {
        op.set = ConvexSet::ball(vec("center"), to_double(need("radius"), "radius"));
      } else if (op.type == "halfspace") {
        op.set = ConvexSet::halfspace(vec("normal"), to_double(need("offset"), "offset"));
      } else if (op.type == "hyperplane") {
        op.set = ConvexSet::hyperplane(vec("normal"), to_double(need("offset"), "offset"));
      } else if (op.type == "affine") {
        const Entry& e = need("basis");
        const auto cols = to_vector_list(e, "basis");
        Matrix basis(n, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j) {
          require_dim(cols[j], n, e, "basis");
          basis.col(static_cast<Eigen::Index>(j)) = cols[j];
        }
        Vector offset = get("offset") ? vec("offset") : Vector::Zero(n);
        op.set = ConvexSet::affine_subspace(std::move(basis), std::move(offset));
      } else if (op.type == "singleton") {
        op.set = ConvexSet::singleton(vec("point"));
      } else {  // random_subspace
        const Entry& e = need("subspace_dim");
        const auto m = to_unsigned(e, "subspace_dim");
        if (m < 1 || static_cast<Eigen::Index>(m) > n) {
          throw ParseError(e.line, "subspace_dim must be in [1, dimension]");
        }
        op.subspace_dim = static_cast<int>(m);
      }
    } else {
      if (op.type == "zero") {
        op.function = zero_function();
      } else if (op.type == "l1") {
        op.function = l1_norm(scalar_or("scale", 1.0));
      } else if (op.type == "half_sq") {
        op.function = half_squared_norm(scalar_or("scale", 1.0));
      } else {  // linear
        op.function = linear_function(vec("c"), scalar_or("offset", 0.0));
      }
    }
  });

  for (const auto& [key, entry] : s.entries) {
    if (!used.count(key)) {
      throw ParseError(entry.line, "[" + s.name + "]: unknown key '" + key + "' for type " + op.type);
    }
  }
  return op;
}

}  // namespace

ProblemSpec parse_config_text(const std::string& text) {
  const RawConfig raw = lex(text);
  ProblemSpec spec;
  std::set<std::string> used;
  auto get = [&](const std::string& key) -> const Entry* {
    const auto it = raw.top.find(key);
    if (it == raw.top.end()) return nullptr;
    used.insert(key);
    return &it->second;
  };

  const Entry* kind = get("kind");
  if (!kind) throw ConfigError("kind: required (prox_sum|strong_weak|best_approx|linear_pair|custom)");
  if (kind->value == "prox_sum") spec.kind = ProblemKind::ProxSum;
  else if (kind->value == "strong_weak") spec.kind = ProblemKind::StrongWeak;
  else if (kind->value == "best_approx") spec.kind = ProblemKind::BestApprox;
  else if (kind->value == "linear_pair") spec.kind = ProblemKind::LinearPair;
  else if (kind->value == "custom") spec.kind = ProblemKind::Custom;
  else throw ParseError(kind->line, "kind: unknown problem kind '" + kind->value + "'");

  if (const Entry* e = get("method")) {
    try {
      spec.method = parse_method(e->value);
    } catch (const ConfigError& err) {
      throw ParseError(e->line, err.what());
    }
  }

  // Dimension: explicit, or from z.
  const Entry* z_entry = get("z");
  std::optional<Vector> z_value;
  if (z_entry && z_entry->value != "random") z_value = to_vector(*z_entry, "z");
  if (const Entry* e = get("dimension")) {
    const auto n = to_unsigned(*e, "dimension");
    if (n < 1) throw ParseError(e->line, "dimension must be >= 1");
    spec.dimension = static_cast<Eigen::Index>(n);
  } else if (z_value) {
    spec.dimension = z_value->size();
  } else if (spec.kind == ProblemKind::StrongWeak) {
    throw ConfigError("dimension: required");
  } else {
    throw ConfigError("dimension: required when z is random or absent");
  }
  const Eigen::Index n = spec.dimension;

  if (spec.kind == ProblemKind::StrongWeak) {
    if (z_entry) throw ParseError(z_entry->line, "z: strong_weak problems fix z = 0");
    spec.z = Vector::Zero(n);
  } else if (!z_entry) {
    throw ConfigError("z: required (a vector or 'random')");
  } else if (z_value) {
    require_dim(*z_value, n, *z_entry, "z");
    spec.z = z_value;
  }

  if (const Entry* e = get("beta")) spec.beta = to_double(*e, "beta");
  if (!(spec.beta > 0.0 && spec.beta < 1.0)) throw ConfigError("beta out of (0,1)");
  spec.r0 = default_r0(spec.beta);
  if (const Entry* e = get("r0")) spec.r0 = to_double(*e, "r0");
  if (!(spec.r0 > 0.0 && spec.r0 < r0_cap(spec.beta))) throw ConfigError("r0 violates (C1) bound");

  spec.z0 = Vector::Zero(n);
  if (const Entry* e = get("z0")) {
    spec.z0 = to_vector(*e, "z0");
    require_dim(spec.z0, n, *e, "z0");
  }
  if (const Entry* e = get("tol")) {
    spec.tol = to_double(*e, "tol");
    if (spec.tol < 0.0) throw ConfigError("tol must be nonnegative");
  }
  if (const Entry* e = get("max_iter")) {
    spec.max_iter = to_unsigned(*e, "max_iter");
    if (spec.max_iter < 1) throw ConfigError("max_iter must be >= 1");
  }
  if (const Entry* e = get("gamma")) {
    spec.gamma = to_double(*e, "gamma");
    if (!(*spec.gamma > 0.0)) throw ConfigError("gamma must be positive");
  }
  if (const Entry* e = get("lambda")) {
    spec.lambda = to_double(*e, "lambda");
    const double l = *spec.lambda;
    if (spec.method == Method::AAMR && !(l > 0.0 && l < 1.0)) throw ConfigError("lambda out of (0,1) for aamr");
    if (!(l > 0.0 && l <= 2.0)) throw ConfigError("lambda out of (0,2]");
  }
  if (const Entry* e = get("seed")) spec.seed = to_unsigned(*e, "seed");
  if (const Entry* e = get("known_solution")) {
    spec.known_solution = to_vector(*e, "known_solution");
    require_dim(*spec.known_solution, n, *e, "known_solution");
  }
  if (const Entry* e = get("shared_dim")) {
    const auto s = to_unsigned(*e, "shared_dim");
    if (static_cast<Eigen::Index>(s) > n) throw ParseError(e->line, "shared_dim exceeds dimension");
    spec.shared_dim = static_cast<int>(s);
  }
  if (const Entry* e = get("probe")) spec.probe = to_bool(*e, "probe");
  if (const Entry* e = get("probe_max_iter")) {
    spec.probe_max_iter = to_unsigned(*e, "probe_max_iter");
    if (spec.probe_max_iter < 1) throw ConfigError("probe_max_iter must be >= 1");
  }
  if (const Entry* e = get("rate_from")) spec.rate_from = to_unsigned(*e, "rate_from");
  if (const Entry* e = get("rate_to")) spec.rate_to = to_unsigned(*e, "rate_to");
  if (spec.rate_from < 1 || spec.rate_to <= spec.rate_from) {
    throw ConfigError("rate_from/rate_to: need 1 <= rate_from < rate_to");
  }

  if (spec.kind == ProblemKind::StrongWeak) {
    const Entry* g = get("strong_convexity");
    const Entry* w = get("weak_convexity");
    if (!g || !w) throw ConfigError("strong_convexity and weak_convexity: required for strong_weak");
    spec.strong_convexity = to_double(*g, "strong_convexity");
    spec.weak_convexity = to_double(*w, "weak_convexity");
    if (!(spec.weak_convexity > 0.0)) throw ConfigError("weak_convexity must be positive");
    if (!(spec.strong_convexity > spec.weak_convexity)) {
      throw ConfigError("strong_convexity must exceed weak_convexity");
    }
  }

  for (const auto& [key, entry] : raw.top) {
    if (!used.count(key)) throw ParseError(entry.line, "unknown key '" + key + "'");
  }

  std::string first_name, second_name;
  Slot slot = Slot::Operator;
  switch (spec.kind) {
    case ProblemKind::BestApprox: first_name = "C"; second_name = "D"; slot = Slot::SetOnly; break;
    case ProblemKind::ProxSum: first_name = "f"; second_name = "g"; slot = Slot::FunctionOrSet; break;
    case ProblemKind::StrongWeak:
      first_name = "f_core"; second_name = "g_core"; slot = Slot::FunctionOnly; break;
    case ProblemKind::LinearPair: first_name = "A"; second_name = "B"; slot = Slot::LinearOnly; break;
    case ProblemKind::Custom: first_name = "A"; second_name = "B"; slot = Slot::Operator; break;
  }
  const Section* first = nullptr;
  const Section* second = nullptr;
  for (const auto& s : raw.sections) {
    if (s.name == first_name) first = &s;
    else if (s.name == second_name) second = &s;
    else throw ParseError(s.line, "unexpected section [" + s.name + "] for kind " + kind->value);
  }
  if (!first || !second) {
    throw ConfigError("sections [" + first_name + "] and [" + second_name + "]: required for kind " +
                      kind->value);
  }
  spec.first = parse_operand(*first, slot, n);
  spec.second = parse_operand(*second, slot, n);
  for (const OperandSpec* op : {&spec.first, &spec.second}) {
    if (op->subspace_dim > 0 && op->subspace_dim < spec.shared_dim) {
      throw ParseError(op->line, "[" + op->section + "]: subspace_dim smaller than shared_dim");
    }
  }
  return spec;
}

ProblemSpec parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace rsum
