#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hierlyap/io.hpp"

namespace hierlyap::io {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ParseError(source_ + ":" + (path.empty() ? "/" : path), what);
  }

  void only_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        fail(path + "/" + key, "unknown field");
    }
  }

  const json& required(const json& obj, const std::string& path, const char* key) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "/" + key, "missing required field");
    return *it;
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  // 1-based index in the file, 0-based in memory.
  std::size_t index(const json& v, const std::string& path) const {
    if (!v.is_number_integer() || v.get<long long>() < 1) fail(path, "expected a positive integer index");
    return static_cast<std::size_t>(v.get<long long>() - 1);
  }

  Vector vector(const json& v, const std::string& path) const {
    if (!v.is_array()) fail(path, "expected an array of numbers");
    Vector out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "/" + std::to_string(i)));
    return out;
  }

  Matrix matrix(const json& v, const std::string& path) const {
    if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of rows");
    const std::size_t rows = v.size();
    std::size_t cols = 0;
    Matrix m;
    for (std::size_t r = 0; r < rows; ++r) {
      const Vector row = vector(v[r], path + "/" + std::to_string(r));
      if (r == 0) {
        cols = row.size();
        if (cols == 0) fail(path, "matrix rows must be non-empty");
        m = Matrix(rows, cols);
      } else if (row.size() != cols) {
        fail(path + "/" + std::to_string(r), "ragged matrix row");
      }
      std::copy(row.begin(), row.end(), m.row(r).begin());
    }
    return m;
  }

  model::Polynomial polynomial(const json& v, const std::string& path, std::size_t arity) const {
    if (!v.is_array()) fail(path, "expected an array of terms");
    std::vector<model::Monomial> terms;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string tp = path + "/" + std::to_string(i);
      only_keys(v[i], tp, {"coeff", "exponents", "out"});
      model::Monomial m;
      m.coeff = number(required(v[i], tp, "coeff"), tp + "/coeff");
      const json& ex = required(v[i], tp, "exponents");
      if (!ex.is_array()) fail(tp + "/exponents", "expected an array of nonnegative integers");
      for (std::size_t e = 0; e < ex.size(); ++e) {
        if (!ex[e].is_number_integer() || ex[e].get<long long>() < 0)
          fail(tp + "/exponents/" + std::to_string(e), "expected a nonnegative integer");
        m.exponents.push_back(static_cast<unsigned>(ex[e].get<long long>()));
      }
      if (auto it = v[i].find("out"); it != v[i].end()) m.output = index(*it, tp + "/out");
      terms.push_back(std::move(m));
    }
    try {
      return model::Polynomial(arity, std::move(terms));
    } catch (const ModelError& e) {
      fail(path, e.what());
    }
  }

  model::Subsystem subsystem(const json& v, const std::string& path) const {
    only_keys(v, path, {"A", "B", "C", "f", "x_star", "d", "P"});
    model::Subsystem s;
    s.A = matrix(required(v, path, "A"), path + "/A");
    s.B = vector(required(v, path, "B"), path + "/B");
    s.C = vector(required(v, path, "C"), path + "/C");
    s.x_star = vector(required(v, path, "x_star"), path + "/x_star");
    s.d = number(required(v, path, "d"), path + "/d");
    const auto f = v.find("f");
    s.f = f == v.end() ? model::Polynomial(s.A.rows()) : polynomial(*f, path + "/f", s.A.rows());
    if (auto p = v.find("P"); p != v.end()) s.P = matrix(*p, path + "/P");
    return s;
  }

  template <class Form>
  Form state_form(const json& v, const std::string& path) const {
    only_keys(v, path, {"amp", "sub", "comp", "phase"});
    Form f;
    f.amplitude = number(required(v, path, "amp"), path + "/amp");
    f.subsystem = index(required(v, path, "sub"), path + "/sub");
    f.component = index(required(v, path, "comp"), path + "/comp");
    if (auto it = v.find("phase"); it != v.end()) f.phase = number(*it, path + "/phase");
    return f;
  }

  model::Coupling coupling(const json& v, const std::string& path) const {
    only_keys(v, path, {"from", "to", "form", "bound", "self"});
    model::Coupling c;
    c.from = index(required(v, path, "from"), path + "/from");
    c.to = index(required(v, path, "to"), path + "/to");
    c.bound = number(required(v, path, "bound"), path + "/bound");
    if (auto it = v.find("self"); it != v.end()) {
      if (!it->is_boolean()) fail(path + "/self", "expected a boolean");
      c.self_loop = it->get<bool>();
    }
    const std::string fp = path + "/form";
    const json& form = required(v, path, "form");
    only_keys(form, fp, {"const", "sin", "cos"});
    if (form.size() != 1) fail(fp, "exactly one of const, sin, cos is required");
    if (auto it = form.find("const"); it != form.end()) {
      c.form = model::Constant{number(*it, fp + "/const")};
    } else if (auto s = form.find("sin"); s != form.end()) {
      c.form = state_form<model::SinOfState>(*s, fp + "/sin");
    } else {
      c.form = state_form<model::CosOfState>(form.at("cos"), fp + "/cos");
    }
    return c;
  }

 private:
  std::string source_;
};

ojson matrix_json(const Matrix& m) {
  ojson rows = ojson::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(Vector(m.row(r).begin(), m.row(r).end()));
  return rows;
}

template <class Form>
ojson state_form_json(const Form& f) {
  ojson o;
  o["amp"] = f.amplitude;
  o["sub"] = f.subsystem + 1;
  o["comp"] = f.component + 1;
  o["phase"] = f.phase;
  return o;
}

}  // namespace

NetworkConfig parse_config(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(source + ":byte " + std::to_string(e.byte), e.what());
  }
  Parser p(source);
  p.only_keys(doc, "", {"version", "seed", "subsystems", "couplings", "initial_state"});

  NetworkConfig cfg;
  const json& version = p.required(doc, "", "version");
  if (!version.is_number_integer()) p.fail("/version", "expected an integer");
  cfg.version = version.get<int>();
  if (cfg.version != kConfigVersion) p.fail("/version", "unsupported version " + std::to_string(cfg.version));
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned()) p.fail("/seed", "expected a nonnegative integer");
    cfg.seed = it->get<std::uint64_t>();
  }

  const json& subs = p.required(doc, "", "subsystems");
  if (!subs.is_array() || subs.empty()) p.fail("/subsystems", "expected a non-empty array");
  std::vector<model::Subsystem> subsystems;
  for (std::size_t k = 0; k < subs.size(); ++k)
    subsystems.push_back(p.subsystem(subs[k], "/subsystems/" + std::to_string(k)));

  std::vector<model::Coupling> couplings;
  if (auto it = doc.find("couplings"); it != doc.end()) {
    if (!it->is_array()) p.fail("/couplings", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i)
      couplings.push_back(p.coupling((*it)[i], "/couplings/" + std::to_string(i)));
  }
  if (auto it = doc.find("initial_state"); it != doc.end()) cfg.initial_state = p.vector(*it, "/initial_state");

  try {
    cfg.network = model::build_network(std::move(subsystems), std::move(couplings));
  } catch (const ModelError& e) {
    throw ParseError(source, e.what());
  }
  if (cfg.initial_state && cfg.initial_state->size() != cfg.network.state_dim())
    p.fail("/initial_state", "length does not match the total state dimension");
  return cfg;
}

NetworkConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

nlohmann::ordered_json config_to_json(const NetworkConfig& cfg) {
  ojson doc;
  doc["version"] = cfg.version;
  if (cfg.seed) doc["seed"] = *cfg.seed;
  ojson subs = ojson::array();
  for (const model::Subsystem& s : cfg.network.subsystems()) {
    ojson o;
    o["A"] = matrix_json(s.A);
    o["B"] = s.B;
    o["C"] = s.C;
    ojson terms = ojson::array();
    for (const model::Monomial& m : s.f.terms()) {
      ojson t;
      t["coeff"] = m.coeff;
      t["exponents"] = m.exponents;
      if (s.dim() > 1) t["out"] = m.output + 1;
      terms.push_back(std::move(t));
    }
    o["f"] = std::move(terms);
    o["x_star"] = s.x_star;
    o["d"] = s.d;
    if (s.P) o["P"] = matrix_json(*s.P);
    subs.push_back(std::move(o));
  }
  doc["subsystems"] = std::move(subs);
  ojson cps = ojson::array();
  for (const model::Coupling& c : cfg.network.couplings()) {
    ojson o;
    o["from"] = c.from + 1;
    o["to"] = c.to + 1;
    ojson form;
    if (const auto* k = std::get_if<model::Constant>(&c.form)) {
      form["const"] = k->value;
    } else if (const auto* s = std::get_if<model::SinOfState>(&c.form)) {
      form["sin"] = state_form_json(*s);
    } else {
      form["cos"] = state_form_json(std::get<model::CosOfState>(c.form));
    }
    o["form"] = std::move(form);
    o["bound"] = c.bound;
    if (c.self_loop) o["self"] = true;
    cps.push_back(std::move(o));
  }
  doc["couplings"] = std::move(cps);
  if (cfg.initial_state) doc["initial_state"] = *cfg.initial_state;
  return doc;
}

std::string dump_config(const NetworkConfig& cfg) { return config_to_json(cfg).dump(2) + "\n"; }

std::uint64_t effective_seed(const NetworkConfig& cfg) {
  if (const char* env = std::getenv("HIERLYAP_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw ParseError("HIERLYAP_SEED", "expected a nonnegative integer");
  }
  return cfg.seed.value_or(kDefaultSeed);
}

Vector parse_state_argument(const std::string& arg) {
  std::error_code ec;
  if (!arg.empty() && std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::stringstream ss;
    ss << in.rdbuf();
    json doc;
    try {
      doc = json::parse(ss.str());
    } catch (const json::parse_error& e) {
      throw ParseError(arg + ":byte " + std::to_string(e.byte), e.what());
    }
    Parser p(arg);
    return p.vector(doc, "");
  }
  std::string body = arg;
  std::replace(body.begin(), body.end(), ',', ' ');
  std::erase(body, '[');
  std::erase(body, ']');
  std::istringstream in(body);
  Vector out;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw ParseError("--x0", "not a number or readable file: '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("--x0", "empty state");
  return out;
}

}  // namespace hierlyap::io
