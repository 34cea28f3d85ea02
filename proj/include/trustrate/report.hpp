#pragma once

// Rating reports and label cards.
//
// A report is a JSON document with a fixed field order and floats written
// with 17 significant digits, so that a report is byte-identical whenever
// the configuration and collected invocations are. docs/report_schema.md
// describes the layout. Builtin service parameters never appear in it.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "trustrate/chatbot.hpp"
#include "trustrate/rating.hpp"

namespace trustrate::report {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchemaVersion = "trustrate.report/1";

struct ConfigEcho {
  double alpha = kDefaultAlpha;
  std::uint64_t seed = 0;
  /// Hex digests of the generating corpus specs (one per stage).
  std::vector<std::string> corpus_spec_hashes;
  std::size_t corpus_size = 0;
  std::map<std::string, double> thresholds;
  std::vector<std::string> issues;

  bool operator==(const ConfigEcho&) const = default;
};

using RatingPayload =
    std::variant<TranslatorRating, SASRating, ChatbotRating, CompositionRating, PipelineRating>;

struct RatingReport {
  std::string schema_version = std::string(kSchemaVersion);
  std::string campaign_id;
  std::string timestamp;
  std::string service;
  std::string service_kind;
  ConfigEcho config;
  RatingPayload rating;
  double failure_rate = 0.0;
  double exclusion_rate = 0.0;

  bool operator==(const RatingReport&) const = default;
};

inline std::string_view rating_kind(const RatingPayload& p) {
  switch (p.index()) {
    case 0: return "translator";
    case 1: return "sentiment";
    case 2: return "chatbot";
    case 3: return "composition";
    case 4: return "pipeline";
  }
  return "?";
}

inline std::string hex_digest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// --------------------------------------------------------- serialization

namespace detail {

inline Json to_json(const stats::ContingencyTable& t) {
  return Json{{"rows", t.row_labels}, {"cols", t.col_labels}, {"counts", t.counts}};
}
inline stats::ContingencyTable table_from(const Json& j) {
  stats::ContingencyTable t;
  t.row_labels = j.at("rows").get<std::vector<std::string>>();
  t.col_labels = j.at("cols").get<std::vector<std::string>>();
  t.counts = j.at("counts").get<std::vector<std::vector<std::uint64_t>>>();
  return t;
}

inline Json to_json(const stats::TestResult& r) {
  return Json{{"statistic", r.statistic},
              {"df", r.degrees_of_freedom},
              {"p_value", r.p_value},
              {"alpha", r.alpha},
              {"significant", r.significant},
              {"min_expected", r.min_expected},
              {"low_expected_warning", r.low_expected_warning}};
}
inline stats::TestResult test_from(const Json& j) {
  stats::TestResult r;
  r.statistic = j.at("statistic").get<double>();
  r.degrees_of_freedom = j.at("df").get<int>();
  r.p_value = j.at("p_value").get<double>();
  r.alpha = j.at("alpha").get<double>();
  r.significant = j.at("significant").get<bool>();
  r.min_expected = j.at("min_expected").get<double>();
  r.low_expected_warning = j.at("low_expected_warning").get<bool>();
  return r;
}

inline Json to_json(const StageEvidence& s) {
  return Json{{"cases", s.cases},         {"failures", s.failures},
              {"excluded", s.excluded},   {"exclusion_rate", s.exclusion_rate},
              {"test", to_json(s.test)},  {"table", to_json(s.table)}};
}
inline StageEvidence stage_from(const Json& j) {
  StageEvidence s;
  s.cases = j.at("cases").get<std::size_t>();
  s.failures = j.at("failures").get<std::size_t>();
  s.excluded = j.at("excluded").get<std::size_t>();
  s.exclusion_rate = j.at("exclusion_rate").get<double>();
  s.test = test_from(j.at("test"));
  s.table = table_from(j.at("table"));
  return s;
}

inline Json to_json(const TranslatorRating& r) {
  Json j{{"label", to_string(r.label)}, {"t1", to_json(r.t1)}};
  if (r.t2) j["t2"] = to_json(*r.t2);
  j["exclusion_rate"] = r.exclusion_rate;
  return j;
}
inline TranslatorRating translator_from(const Json& j) {
  TranslatorRating r;
  r.label = parse_translator_label(j.at("label").get<std::string>());
  r.t1 = stage_from(j.at("t1"));
  if (j.contains("t2")) r.t2 = stage_from(j.at("t2"));
  r.exclusion_rate = j.at("exclusion_rate").get<double>();
  return r;
}

inline Json to_json(const CompositionRating& c) {
  Json possible = Json::array();
  for (auto l : c.possible) possible.push_back(to_string(l));
  return Json{{"label", c.to_string()}, {"possible", possible}};
}
inline CompositionRating composition_from(const Json& j) {
  CompositionRating c;
  for (const auto& s : j.at("possible")) c.possible.insert(parse_translator_label(s.get<std::string>()));
  return c;
}

inline Json to_json(const PipelineRating& p) {
  return Json{{"first", to_json(p.first)},
              {"second", to_json(p.second)},
              {"empirical", to_json(p.empirical)},
              {"algebraic", to_json(p.algebraic)},
              {"consistent", p.consistent}};
}
inline PipelineRating pipeline_from(const Json& j) {
  PipelineRating p;
  p.first = translator_from(j.at("first"));
  p.second = translator_from(j.at("second"));
  p.empirical = translator_from(j.at("empirical"));
  p.algebraic = composition_from(j.at("algebraic"));
  p.consistent = j.at("consistent").get<bool>();
  return p;
}

inline Json to_json(const SASRating& r) {
  Json attrs = Json::array();
  for (const auto& a : r.attributes)
    attrs.push_back(Json{{"attribute", a.attribute},
                         {"tv_distance", a.tv_distance},
                         {"biased", a.biased},
                         {"test", to_json(a.test)},
                         {"table", to_json(a.table)}});
  const auto& c = r.confounding;
  Json conf{{"outcomes", c.outcomes},     {"treatments", c.treatments},
            {"strata", c.strata},         {"counts", c.counts},
            {"pseudocount", c.pseudocount}, {"confounded", c.confounded},
            {"adjusted", c.adjusted},     {"gap", c.gap}};
  return Json{{"grade", to_string(r.grade)}, {"grade_value", r.grade_value},
              {"cases", r.cases},            {"failures", r.failures},
              {"attributes", attrs},         {"confounding", conf}};
}
inline SASRating sas_from(const Json& j) {
  SASRating r;
  r.grade = parse_bias_grade(j.at("grade").get<std::string>());
  r.grade_value = j.at("grade_value").get<double>();
  r.cases = j.at("cases").get<std::size_t>();
  r.failures = j.at("failures").get<std::size_t>();
  for (const auto& a : j.at("attributes")) {
    AttributeEvidence ev;
    ev.attribute = a.at("attribute").get<std::string>();
    ev.tv_distance = a.at("tv_distance").get<double>();
    ev.biased = a.at("biased").get<bool>();
    ev.test = test_from(a.at("test"));
    ev.table = table_from(a.at("table"));
    r.attributes.push_back(std::move(ev));
  }
  const auto& c = j.at("confounding");
  auto& cf = r.confounding;
  cf.outcomes = c.at("outcomes").get<std::vector<std::string>>();
  cf.treatments = c.at("treatments").get<std::vector<std::string>>();
  cf.strata = c.at("strata").get<std::vector<std::string>>();
  cf.counts = c.at("counts").get<std::vector<double>>();
  cf.pseudocount = c.at("pseudocount").get<double>();
  cf.confounded = c.at("confounded").get<std::vector<std::vector<double>>>();
  cf.adjusted = c.at("adjusted").get<std::vector<std::vector<double>>>();
  cf.gap = c.at("gap").get<double>();
  return r;
}

inline Json issue_map(const std::map<IssueKind, double>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[std::string(to_string(k))] = v;
  return j;
}
inline std::map<IssueKind, double> issue_map_from(const Json& j) {
  std::map<IssueKind, double> m;
  for (const auto& [k, v] : j.items()) m[parse_issue_kind(k)] = v.get<double>();
  return m;
}

inline Json to_json(const ChatbotRating& r) {
  Json axes = Json::array();
  for (auto a : r.sensitivity_axes) axes.push_back(to_string(a));
  Json variants = Json::array();
  for (const auto& v : r.variants) {
    Json na = Json::array();
    for (auto k : v.not_assessed) na.push_back(to_string(k));
    variants.push_back(Json{{"model", v.variant.model},
                            {"data", v.variant.data},
                            {"user", v.variant.user},
                            {"score", v.score},
                            {"passed", v.passed},
                            {"clean_rates", issue_map(v.clean_rates)},
                            {"not_assessed", na}});
  }
  return Json{{"type", to_string(r.type)},
              {"trust_score", to_string(r.trust)},
              {"baseline_score", r.baseline_score},
              {"baseline_fail", r.baseline_fail},
              {"profile", r.profile_id},
              {"mode", r.mode},
              {"sensitivity_axes", axes},
              {"per_issue", issue_map(r.per_issue)},
              {"variants", variants}};
}
inline ChatbotRating chatbot_from(const Json& j) {
  ChatbotRating r;
  r.type = parse_chatbot_type(j.at("type").get<std::string>());
  r.trust = parse_trust_score(j.at("trust_score").get<std::string>());
  r.baseline_score = j.at("baseline_score").get<double>();
  r.baseline_fail = j.at("baseline_fail").get<bool>();
  r.profile_id = j.at("profile").get<std::string>();
  r.mode = j.at("mode").get<std::string>();
  for (const auto& a : j.at("sensitivity_axes")) r.sensitivity_axes.insert(parse_variant_axis(a.get<std::string>()));
  r.per_issue = issue_map_from(j.at("per_issue"));
  for (const auto& v : j.at("variants")) {
    VariantResult vr;
    vr.variant = {v.at("model").get<std::string>(), v.at("data").get<std::string>(),
                  v.at("user").get<std::string>()};
    vr.score = v.at("score").get<double>();
    vr.passed = v.at("passed").get<bool>();
    vr.clean_rates = issue_map_from(v.at("clean_rates"));
    for (const auto& k : v.at("not_assessed")) vr.not_assessed.insert(parse_issue_kind(k.get<std::string>()));
    r.variants.push_back(std::move(vr));
  }
  return r;
}

}  // namespace detail

inline Json to_json(const RatingReport& r) {
  Json cfg{{"alpha", r.config.alpha},
           {"seed", r.config.seed},
           {"corpus_spec_hashes", r.config.corpus_spec_hashes},
           {"corpus_size", r.config.corpus_size},
           {"thresholds", Json(r.config.thresholds)},
           {"issues", r.config.issues}};
  Json payload = std::visit([](const auto& v) { return detail::to_json(v); }, r.rating);
  return Json{{"schema_version", r.schema_version},
              {"campaign_id", r.campaign_id},
              {"timestamp", r.timestamp},
              {"service", Json{{"descriptor", r.service}, {"kind", r.service_kind}}},
              {"config", cfg},
              {"rating_kind", rating_kind(r.rating)},
              {"rating", payload},
              {"failure_rate", r.failure_rate},
              {"exclusion_rate", r.exclusion_rate}};
}

inline RatingReport from_json(const Json& j) {
  RatingReport r;
  r.schema_version = j.at("schema_version").get<std::string>();
  if (r.schema_version != kSchemaVersion)
    throw InvalidArgument("unsupported report schema '" + r.schema_version + "'");
  r.campaign_id = j.at("campaign_id").get<std::string>();
  r.timestamp = j.at("timestamp").get<std::string>();
  r.service = j.at("service").at("descriptor").get<std::string>();
  r.service_kind = j.at("service").at("kind").get<std::string>();
  const auto& c = j.at("config");
  r.config.alpha = c.at("alpha").get<double>();
  r.config.seed = c.at("seed").get<std::uint64_t>();
  r.config.corpus_spec_hashes = c.at("corpus_spec_hashes").get<std::vector<std::string>>();
  r.config.corpus_size = c.at("corpus_size").get<std::size_t>();
  r.config.thresholds = c.at("thresholds").get<std::map<std::string, double>>();
  r.config.issues = c.at("issues").get<std::vector<std::string>>();
  const auto kind = j.at("rating_kind").get<std::string>();
  const auto& p = j.at("rating");
  if (kind == "translator") r.rating = detail::translator_from(p);
  else if (kind == "sentiment") r.rating = detail::sas_from(p);
  else if (kind == "chatbot") r.rating = detail::chatbot_from(p);
  else if (kind == "composition") r.rating = detail::composition_from(p);
  else if (kind == "pipeline") r.rating = detail::pipeline_from(p);
  else throw InvalidArgument("unknown rating kind '" + kind + "'");
  r.failure_rate = j.at("failure_rate").get<double>();
  r.exclusion_rate = j.at("exclusion_rate").get<double>();
  return r;
}

// ------------------------------------------------------- canonical writer

inline std::string format_double(double v) {
  if (!std::isfinite(v)) throw InvalidArgument("non-finite number in report");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

namespace detail {
inline void write(const Json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
  const std::string close_pad(static_cast<std::size_t>(depth) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(k).dump() + ": ";
        write(v, out, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool scalar = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (scalar) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write(j[i], out, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write(j[i], out, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}
}  // namespace detail

/// Canonical text: fixed field order, 17 significant digits, trailing newline.
inline std::string emit(const Json& j) {
  std::string out;
  detail::write(j, out, 0);
  out.push_back('\n');
  return out;
}

inline std::string emit_report(const RatingReport& r) { return emit(to_json(r)); }

inline RatingReport parse_report(std::string_view text) {
  return from_json(Json::parse(text.begin(), text.end()));
}

// -------------------------------------------------------------- label card

inline constexpr std::size_t kCardWidth = 60;

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

class Card {
 public:
  void rule() { lines_.push_back("+" + std::string(kCardWidth - 2, '-') + "+"); }
  void line(std::string s) {
    constexpr std::size_t inner = kCardWidth - 4;
    if (s.size() > inner) s = s.substr(0, inner - 1) + "~";
    lines_.push_back("| " + s + std::string(inner - s.size(), ' ') + " |");
  }
  std::string str() const {
    std::string out;
    for (const auto& l : lines_) out += l + "\n";
    return out;
  }

 private:
  std::vector<std::string> lines_;
};

inline std::string describe(const stats::TestResult& t) {
  return "chi2=" + fmt("%.4g", t.statistic) + " df=" + std::to_string(t.degrees_of_freedom) +
         " p=" + fmt("%.3g", t.p_value) + (t.significant ? " SIGNIFICANT" : " n.s.");
}

inline void translator_lines(Card& c, const TranslatorRating& r) {
  c.line("T1 unbiased: " + describe(r.t1.test));
  if (r.t2) c.line("T2 biased:   " + describe(r.t2->test));
  else c.line("T2 biased:   not run (T1 flagged bias)");
  c.line("Exclusion rate: " + fmt("%.4f", r.exclusion_rate));
}

}  // namespace detail

inline std::string render_label_card(const RatingReport& r) {
  detail::Card c;
  c.rule();
  c.line("AI TRUST LABEL");
  c.line("Service: " + r.service);
  c.line("Kind: " + r.service_kind);
  c.rule();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TranslatorRating>) {
          c.line("RATING: " + std::string(to_string(v.label)) + " (" + std::string(long_name(v.label)) + ")");
          c.rule();
          detail::translator_lines(c, v);
        } else if constexpr (std::is_same_v<T, CompositionRating>) {
          std::string head = "RATING: " + v.to_string();
          if (v.determinate()) head += " (" + std::string(long_name(*v.possible.begin())) + ")";
          c.line(head);
          c.rule();
          c.line("Sequential composition, algebraic rating");
        } else if constexpr (std::is_same_v<T, PipelineRating>) {
          c.line("RATING: " + std::string(to_string(v.empirical.label)) + " (" +
                 std::string(long_name(v.empirical.label)) + ")");
          c.rule();
          c.line("First service:  " + std::string(to_string(v.first.label)));
          c.line("Second service: " + std::string(to_string(v.second.label)));
          c.line("Algebraic composition: " + v.algebraic.to_string());
          c.line("Empirical chain: " + std::string(to_string(v.empirical.label)) +
                 (v.consistent ? " (consistent)" : " (INCONSISTENT)"));
          detail::translator_lines(c, v.empirical);
        } else if constexpr (std::is_same_v<T, SASRating>) {
          c.line("RATING: " + std::string(to_string(v.grade)) + " bias");
          c.rule();
          for (const auto& a : v.attributes)
            c.line(a.attribute + ": p=" + detail::fmt("%.3g", a.test.p_value) +
                   " TV=" + detail::fmt("%.4f", a.tv_distance) + (a.biased ? " BIASED" : " ok"));
          c.line("Confounding gap: " + detail::fmt("%.4f", v.confounding.gap));
          c.line("Grade value: " + detail::fmt("%.4f", v.grade_value));
        } else if constexpr (std::is_same_v<T, ChatbotRating>) {
          c.line("RATING: " + std::string(to_string(v.type)) + " (" + std::string(long_name(v.type)) + ")");
          c.rule();
          c.line("Trust score: " + std::string(to_string(v.trust)) + " (baseline " +
                 detail::fmt("%.4f", v.baseline_score) + ")");
          for (const auto& [k, rate] : v.per_issue)
            c.line(std::string(to_string(k)) + " clean rate: " + detail::fmt("%.4f", rate));
          std::string axes;
          for (auto a : v.sensitivity_axes) axes += (axes.empty() ? "" : ",") + std::string(to_string(a));
          c.line("Sensitive to: " + (axes.empty() ? std::string("none") : axes));
          c.line("Profile: " + v.profile_id + "  Mode: " + v.mode);
          if (v.baseline_fail) c.line("WARNING: baseline variant fails");
        }
      },
      r.rating);
  c.rule();
  c.line("alpha=" + detail::fmt("%.4g", r.config.alpha) + "  corpus size=" +
         std::to_string(r.config.corpus_size) + "  seed=" + std::to_string(r.config.seed));
  c.line("Campaign: " + r.campaign_id);
  c.rule();
  return c.str();
}

}  // namespace trustrate::report
