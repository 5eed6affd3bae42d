#include "geepower/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace geepower {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "designpattern", "cp_size_matrix", "m", "dist", "link", "phi", "intervention_effect_type",
      "period_effect_type", "delta", "beta_period_effects", "corr_type", "alpha0", "r0", "alpha1", "alpha2",
      "alpha3", "max_intervention_period", "alpha", "df_choice"};
  return keys;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

// Rows separated by newlines or commas; empty rows dropped.
ScenarioFile::Rows split_rows(std::string_view body) {
  ScenarioFile::Rows rows;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i == body.size() || body[i] == '\n' || body[i] == ',') {
      auto tokens = split_tokens(body.substr(start, i - start));
      if (!tokens.empty()) rows.push_back(std::move(tokens));
      start = i + 1;
    }
  }
  return rows;
}

std::string strip_comments(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_comment = false;
  for (char c : text) {
    if (c == '#') in_comment = true;
    if (c == '\n') in_comment = false;
    if (!in_comment) out.push_back(c);
  }
  return out;
}

void insert_entry(ScenarioFile& file, std::string key, ScenarioFile::Rows rows) {
  key = lower(trim(key));
  if (!known_keys().count(key)) throw ConfigError("unknown scenario key '" + key + "'");
  if (file.contains(key)) throw ConfigError("scenario key '" + key + "' is given more than once");
  file.entries.emplace(std::move(key), std::move(rows));
}

const ScenarioFile::Rows* find(const ScenarioFile& file, std::string_view key) {
  const auto it = file.entries.find(std::string(key));
  return it == file.entries.end() ? nullptr : &it->second;
}

const ScenarioFile::Rows& require(const ScenarioFile& file, std::string_view key) {
  const auto* rows = find(file, key);
  if (!rows) throw ConfigError("missing required key '" + std::string(key) + "'");
  return *rows;
}

std::string scalar_token(const ScenarioFile::Rows& rows, std::string_view key) {
  if (rows.size() != 1 || rows.front().size() != 1) {
    throw ConfigError("key '" + std::string(key) + "' expects a single value");
  }
  return rows.front().front();
}

double scalar(const ScenarioFile& file, std::string_view key) {
  return parse_double(scalar_token(require(file, key), key), key);
}

std::vector<double> flat_doubles(const ScenarioFile::Rows& rows, std::string_view key) {
  std::vector<double> out;
  for (const auto& row : rows) {
    for (const auto& tok : row) out.push_back(parse_double(tok, key));
  }
  return out;
}

IntMatrix int_matrix(const ScenarioFile::Rows& rows, std::string_view key) {
  std::vector<std::vector<int>> values;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<int> row;
    for (const auto& tok : rows[r]) {
      row.push_back(parse_int(tok, std::string(key) + " row " + std::to_string(r + 1)));
    }
    if (!values.empty() && row.size() != values.front().size()) {
      throw ParseError("malformed " + std::string(key) + " row " + std::to_string(r + 1) + ": " +
                       std::to_string(row.size()) + " entries, expected " + std::to_string(values.front().size()));
    }
    values.push_back(std::move(row));
  }
  return IntMatrix::from_rows(values);
}

std::string keyword(const ScenarioFile& file, std::string_view key) {
  std::string v = lower(scalar_token(require(file, key), key));
  std::erase(v, '"');
  return v;
}

Distribution parse_dist(const std::string& v) {
  if (v == "binary") return Distribution::Binary;
  if (v == "poisson") return Distribution::Poisson;
  if (v == "normal") return Distribution::Normal;
  throw ConfigError("dist must be BINARY, POISSON or NORMAL, got '" + v + "'");
}

Link parse_link(const std::string& v) {
  if (v == "logit") return Link::Logit;
  if (v == "log") return Link::Log;
  if (v == "identity") return Link::Identity;
  throw ConfigError("link must be LOGIT, LOG or IDENTITY, got '" + v + "'");
}

EffectType parse_effect(const std::string& v) {
  if (v == "ave") return EffectType::Average;
  if (v == "inc") return EffectType::Incremental;
  if (v == "inc_ex") return EffectType::ExtendedIncremental;
  throw ConfigError("intervention_effect_type must be AVE, INC or INC_EX, got '" + v + "'");
}

PeriodEffect parse_period(const std::string& v) {
  if (v == "cat") return PeriodEffect::Categorical;
  if (v == "lin") return PeriodEffect::Linear;
  throw ConfigError("period_effect_type must be CAT or LIN, got '" + v + "'");
}

CorrelationKind parse_corr(const std::string& v) {
  if (v == "ne") return CorrelationKind::NestedExchangeable;
  if (v == "ed") return CorrelationKind::ExponentialDecay;
  if (v == "be") return CorrelationKind::BlockExchangeable;
  if (v == "pd") return CorrelationKind::ProportionalDecay;
  throw ConfigError("corr_type must be NE, ED, BE or PD, got '" + v + "'");
}

ScenarioFile::Rows json_rows(const nlohmann::json& value, const std::string& key) {
  auto token = [&](const nlohmann::json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) {
      // Shortest text that parses back to the same double.
      char buf[64];
      const double d = v.get<double>();
      const auto res = std::to_chars(buf, buf + sizeof buf, d);
      return std::string(buf, res.ptr);
    }
    throw ConfigError("key '" + key + "' holds an unsupported JSON value");
  };
  ScenarioFile::Rows rows;
  if (!value.is_array()) {
    rows.push_back({token(value)});
    return rows;
  }
  const bool nested = std::any_of(value.begin(), value.end(), [](const auto& v) { return v.is_array(); });
  if (!nested) {
    std::vector<std::string> row;
    for (const auto& v : value) row.push_back(token(v));
    rows.push_back(std::move(row));
    return rows;
  }
  for (const auto& r : value) {
    if (!r.is_array()) throw ParseError("key '" + key + "' mixes rows and scalars");
    std::vector<std::string> row;
    for (const auto& v : r) row.push_back(token(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

double parse_double(std::string_view token, std::string_view what) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size() || !std::isfinite(value)) {
    throw ParseError("cannot parse '" + std::string(token) + "' as a number for " + std::string(what));
  }
  return value;
}

int parse_int(std::string_view token, std::string_view what) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  int value = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw ParseError("cannot parse '" + std::string(token) + "' as an integer for " + std::string(what));
  }
  return value;
}

ScenarioFile parse_scenario_text(std::string_view raw) {
  const std::string stripped = strip_comments(raw);
  const std::string_view text = stripped;
  ScenarioFile file;
  std::size_t pos = 0;
  int line_no = 1;
  while (pos < text.size()) {
    const std::size_t line_start = pos;
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(line_start, eol - line_start);
    if (trim(line).empty()) {
      pos = eol + 1;
      ++line_no;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) throw ParseError("line " + std::to_string(line_no) + ": key '" + key + "' has no value");

    if (value.front() != '{') {
      insert_entry(file, key, split_rows(value));
      pos = eol + 1;
      ++line_no;
      continue;
    }

    // Brace block, possibly spanning several lines.
    const std::size_t open = line_start + line.find('{', eq);
    const std::size_t close = text.find('}', open);
    if (close == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": unterminated '{' for key '" + key + "'");
    }
    std::size_t block_end = text.find('\n', close);
    if (block_end == std::string_view::npos) block_end = text.size();
    const int close_line = line_no + static_cast<int>(std::count(text.begin() + static_cast<std::ptrdiff_t>(open),
                                                                 text.begin() + static_cast<std::ptrdiff_t>(close),
                                                                 '\n'));
    if (!trim(text.substr(close + 1, block_end - close - 1)).empty()) {
      throw ParseError("line " + std::to_string(close_line) + ": unexpected text after '}'");
    }
    insert_entry(file, key, split_rows(text.substr(open + 1, close - open - 1)));
    pos = block_end + 1;
    line_no = close_line + 1;
  }
  return file;
}

ScenarioFile parse_scenario_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON scenario: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("JSON scenario must be an object");
  ScenarioFile file;
  for (const auto& [key, value] : doc.items()) insert_entry(file, key, json_rows(value, lower(key)));
  return file;
}

TrialSpec to_trial_spec(const ScenarioFile& file) {
  TrialSpec spec;
  spec.design_pattern = int_matrix(require(file, "designpattern"), "designpattern");
  spec.cp_sizes = int_matrix(require(file, "cp_size_matrix"), "cp_size_matrix");
  for (const auto& row : require(file, "m")) {
    for (const auto& tok : row) spec.clusters_per_sequence.push_back(parse_int(tok, "m"));
  }

  spec.outcome.dist = parse_dist(keyword(file, "dist"));
  spec.outcome.link = file.contains("link") ? parse_link(keyword(file, "link")) : canonical_link(spec.outcome.dist);
  spec.outcome.phi = scalar(file, "phi");
  spec.intervention_effect_type = parse_effect(keyword(file, "intervention_effect_type"));
  spec.period_effect_type = parse_period(keyword(file, "period_effect_type"));
  spec.delta = scalar(file, "delta");
  spec.beta_period_effects = flat_doubles(require(file, "beta_period_effects"), "beta_period_effects");

  spec.correlation.kind = parse_corr(keyword(file, "corr_type"));
  auto icc = [&](std::string_view key, std::optional<double>& slot) { slot = scalar(file, key); };
  switch (spec.correlation.kind) {
    case CorrelationKind::NestedExchangeable:
      icc("alpha1", spec.correlation.alpha1);
      icc("alpha2", spec.correlation.alpha2);
      break;
    case CorrelationKind::ExponentialDecay:
    case CorrelationKind::ProportionalDecay:
      icc("alpha0", spec.correlation.alpha0);
      icc("r0", spec.correlation.r0);
      break;
    case CorrelationKind::BlockExchangeable:
      icc("alpha1", spec.correlation.alpha1);
      icc("alpha2", spec.correlation.alpha2);
      icc("alpha3", spec.correlation.alpha3);
      break;
  }

  if (file.contains("max_intervention_period")) {
    spec.max_intervention_period =
        parse_int(scalar_token(require(file, "max_intervention_period"), "max_intervention_period"),
                  "max_intervention_period");
  }
  if (file.contains("alpha")) spec.sig_level = scalar(file, "alpha");
  if (file.contains("df_choice")) {
    const std::string v = keyword(file, "df_choice");
    if (v == "1" || v == "iminusp") {
      spec.df_choice = DfChoice::ClustersMinusParams;
    } else if (v == "2" || v == "iminus2") {
      spec.df_choice = DfChoice::ClustersMinusTwo;
    } else {
      throw ConfigError("df_choice must be 1 (I-p) or 2 (I-2), got '" + v + "'");
    }
  }
  return spec;
}

TrialSpec load_scenario(const std::filesystem::path& path, ScenarioFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return to_trial_spec(format == ScenarioFormat::Json ? parse_scenario_json(text) : parse_scenario_text(text));
}

}  // namespace geepower
