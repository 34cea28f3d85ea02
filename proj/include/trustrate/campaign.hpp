#pragma once

// Campaign configuration and the commands behind the trustrate CLI.
//
// Everything statistical lives in the config file; command-line flags only
// pick the command, the config and the output directory.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "trustrate/chatbot.hpp"
#include "trustrate/corpus_io.hpp"
#include "trustrate/defaults.hpp"
#include "trustrate/rating.hpp"
#include "trustrate/report.hpp"

namespace trustrate::campaign {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace trustrate::defaults;

/// Input files of a campaign. Unset paths fall back to the bundled data.
struct CorpusSources {
  std::optional<fs::path> occupations;
  std::optional<fs::path> gender_lexicon;
  std::optional<fs::path> race_lexicon;
  std::optional<fs::path> emotions;
  std::optional<fs::path> templates;
  std::optional<fs::path> probe_script;
  std::optional<fs::path> abuse_lexicon;
  std::optional<fs::path> pii_patterns;
  std::size_t pairs_per_occupation = 10;
  /// Offline chatbot rating: one recorded transcript per variant.
  std::map<ChatVariant, fs::path> transcripts;
};

struct CampaignConfig {
  std::string campaign_id;
  std::string timestamp = "unspecified";
  ServiceHandle service;
  VariantGrid grid;
  CorpusSources corpus;
  std::vector<IssueKind> issues;
  UserProfile profile;

  double alpha = kDefaultAlpha;
  double max_exclusion = kDefaultMaxExclusion;
  SentimentClassing classing;
  GradeThresholds grades;
  double pseudocount = stats::kDefaultPseudocount;
  double pass_threshold = 0.8;
  double band_high = 0.9;
  double band_medium = 0.7;
  double complexity_limit = 10.0;

  std::uint64_t seed = 0;
  std::size_t parallelism = 1;
  double failure_threshold = kDefaultFailureThreshold;

  fs::path output_dir;
  fs::path base_dir;
};

// ----------------------------------------------------------------- loading

namespace detail {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

inline const json& section(const json& j, const char* key) {
  static const json empty = json::object();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_object()) throw ConfigError(std::string("config section '") + key + "' must be an object");
  return j.at(key);
}

inline fs::path existing(const fs::path& base, const std::string& p) {
  fs::path path = fs::path(p).is_absolute() ? fs::path(p) : base / p;
  if (!fs::exists(path)) throw ConfigError("referenced file not found: " + path.string());
  return path;
}

inline std::optional<fs::path> optional_path(const json& j, const char* key, const fs::path& base) {
  if (!j.contains(key)) return std::nullopt;
  return existing(base, j.at(key).get<std::string>());
}

inline ChatVariant variant_from(const json& j) {
  ChatVariant v;
  v.model = get_or<std::string>(j, "model", v.model);
  v.data = get_or<std::string>(j, "data", v.data);
  v.user = get_or<std::string>(j, "user", v.user);
  return v;
}

inline ServiceHandle backend_from(ServiceKind kind, const json& b) {
  ServiceHandle h;
  h.kind = kind;
  const auto type = get_or<std::string>(b, "type", "builtin");
  if (type == "builtin") {
    BuiltinBackend bb;
    bb.id = b.at("id").get<std::string>();
    const json& p = section(b, "params");
    bb.bias.beta = get_or(p, "beta", 0.0);
    bb.bias.delta = get_or(p, "delta", 0.0);
    bb.bias.target_attribute = get_or<std::string>(p, "target_attribute", bb.bias.target_attribute);
    bb.bias.target_class = get_or<std::string>(p, "target_class", bb.bias.target_class);
    bb.bias.noise = get_or(p, "noise", 0.0);
    if (p.contains("rng_seed")) bb.bias.rng_seed = p.at("rng_seed").get<std::uint64_t>();
    bb.invert = get_or(p, "invert", false);
    bb.garble_fraction = get_or(p, "garble_fraction", 0.0);
    h.backend = std::move(bb);
  } else if (type == "remote") {
    RemoteBackend r;
    r.endpoint = b.at("endpoint").get<std::string>();
    r.auth_header = get_or<std::string>(b, "auth_header", "");
    r.auth_env = get_or<std::string>(b, "auth_env", "");
    r.timeout_ms = get_or(b, "timeout_ms", r.timeout_ms);
    r.retries = get_or(b, "retries", r.retries);
    r.backoff_ms = get_or(b, "backoff_ms", r.backoff_ms);
    h.backend = std::move(r);
  } else if (type == "sequence") {
    SequenceBackend s;
    for (const auto& stage : b.at("stages")) s.stages.push_back(backend_from(ServiceKind::kTranslator, stage));
    h.backend = std::move(s);
  } else {
    throw ConfigError("unknown backend type '" + type + "'");
  }
  return h;
}

}  // namespace detail

inline CampaignConfig parse_config(const json& j, const fs::path& base_dir) {
  CampaignConfig c;
  c.base_dir = base_dir;
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    c.campaign_id = detail::get_or<std::string>(j, "campaign_id", "campaign");
    c.timestamp = detail::get_or<std::string>(j, "timestamp", c.timestamp);

    const json& svc = detail::section(j, "service");
    if (!svc.contains("kind")) throw ConfigError("service.kind is required");
    const auto kind = parse_service_kind(svc.at("kind").get<std::string>());
    c.service = detail::backend_from(kind, detail::section(svc, "backend"));
    if (svc.contains("variants")) {
      if (kind != ServiceKind::kChatbot) throw ConfigError("variants are only valid for chatbot services");
      const json& v = svc.at("variants");
      c.grid.models = detail::get_or(v, "models", c.grid.models);
      c.grid.data = detail::get_or(v, "data", c.grid.data);
      c.grid.users = detail::get_or(v, "users", c.grid.users);
      if (v.contains("baseline")) c.grid.baseline = detail::variant_from(v.at("baseline"));
    }

    const json& cor = detail::section(j, "corpus");
    auto& s = c.corpus;
    s.occupations = detail::optional_path(cor, "occupations", base_dir);
    s.gender_lexicon = detail::optional_path(cor, "gender_lexicon", base_dir);
    s.race_lexicon = detail::optional_path(cor, "race_lexicon", base_dir);
    s.emotions = detail::optional_path(cor, "emotions", base_dir);
    s.templates = detail::optional_path(cor, "templates", base_dir);
    s.probe_script = detail::optional_path(cor, "probe_script", base_dir);
    s.abuse_lexicon = detail::optional_path(cor, "abuse_lexicon", base_dir);
    s.pii_patterns = detail::optional_path(cor, "pii_patterns", base_dir);
    s.pairs_per_occupation = detail::get_or<std::size_t>(cor, "pairs_per_occupation", s.pairs_per_occupation);
    if (cor.contains("transcripts"))
      for (const auto& t : cor.at("transcripts"))
        s.transcripts[detail::variant_from(t)] = detail::existing(base_dir, t.at("path").get<std::string>());

    if (j.contains("issues")) {
      for (const auto& i : j.at("issues")) c.issues.push_back(parse_issue_kind(i.get<std::string>()));
    } else {
      c.issues = ChatbotOptions{}.issues;
    }
    if (j.contains("profile")) {
      const json& p = j.at("profile");
      c.profile.id = detail::get_or<std::string>(p, "id", "custom");
      for (const auto& [k, w] : p.at("weights").items()) c.profile.weights[parse_issue_kind(k)] = w.get<double>();
    } else {
      c.profile = UserProfile::uniform(c.issues);
    }

    const json& st = detail::section(j, "statistics");
    c.alpha = detail::get_or(st, "alpha", c.alpha);
    c.max_exclusion = detail::get_or(st, "max_exclusion", c.max_exclusion);
    c.classing.negative_max = detail::get_or(st, "sentiment_negative_max", c.classing.negative_max);
    c.classing.neutral_max = detail::get_or(st, "sentiment_neutral_max", c.classing.neutral_max);
    c.grades.low = detail::get_or(st, "grade_low", c.grades.low);
    c.grades.high = detail::get_or(st, "grade_high", c.grades.high);
    c.pseudocount = detail::get_or(st, "pseudocount", c.pseudocount);
    c.pass_threshold = detail::get_or(st, "pass_threshold", c.pass_threshold);
    c.band_high = detail::get_or(st, "band_high", c.band_high);
    c.band_medium = detail::get_or(st, "band_medium", c.band_medium);
    c.complexity_limit = detail::get_or(st, "complexity_limit", c.complexity_limit);

    const json& run = detail::section(j, "run");
    if (!run.contains("seed")) throw ConfigError("run.seed is required");
    c.seed = run.at("seed").get<std::uint64_t>();
    c.parallelism = detail::get_or<std::size_t>(run, "parallelism", c.parallelism);
    c.failure_threshold = detail::get_or(run, "failure_threshold", c.failure_threshold);

    const json& out = detail::section(j, "output");
    c.output_dir = base_dir / detail::get_or<std::string>(out, "dir", "out/" + c.campaign_id);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }

  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("statistics.alpha must lie in (0, 1)");
  if (c.parallelism < 1) throw ConfigError("run.parallelism must be >= 1");
  if (auto* b = std::get_if<BuiltinBackend>(&c.service.backend); b && !b->bias.rng_seed)
    b->bias.rng_seed = c.seed;
  try {
    c.service.validate();
    c.classing.validate();
    c.grades.validate();
    c.profile.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

inline CampaignConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
  json j;
  try {
    j = json::parse(io::read_file(path.string()));
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j, path.parent_path());
}

// ----------------------------------------------------------------- inputs

namespace detail {
inline std::string contents(const std::optional<fs::path>& p, std::string_view fallback) {
  return p ? io::read_file(p->string()) : std::string(fallback);
}
}  // namespace detail

struct Inputs {
  FillerLexicon gender;
  FillerLexicon race;
  OccupationList occupations;
  EmotionLexicon emotions;
  std::vector<SentenceTemplate> templates;
};

inline Inputs load_inputs(const CampaignConfig& c) {
  const auto& s = c.corpus;
  try {
    Inputs in;
    in.gender = io::parse_filler_lexicon("gender", detail::contents(s.gender_lexicon, kGenderLexicon));
    in.race = io::parse_filler_lexicon("race", detail::contents(s.race_lexicon, kRaceLexicon));
    in.occupations = io::parse_occupations(detail::contents(s.occupations, kOccupations));
    in.emotions = io::parse_emotions(detail::contents(s.emotions, kEmotions));
    in.templates = parse_templates(detail::contents(s.templates, kSasTemplates));
    return in;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

struct Corpora {
  std::optional<Corpus> unbiased;
  std::optional<Corpus> biased;
  std::optional<Corpus> sas;
};

inline std::uint64_t biased_corpus_seed(std::uint64_t seed) { return rng::mix({seed, 0x62696173}); }

inline Corpora build_corpora(const CampaignConfig& c, const Inputs& in) {
  Corpora out;
  switch (c.service.kind) {
    case ServiceKind::kTranslator:
      out.unbiased = generate_translator_corpus(in.occupations, in.gender, BalanceMode::kBalanced,
                                                c.corpus.pairs_per_occupation, c.seed);
      out.biased = generate_translator_corpus(in.occupations, in.gender, BalanceMode::kStereotyped,
                                              c.corpus.pairs_per_occupation, biased_corpus_seed(c.seed));
      break;
    case ServiceKind::kSentiment:
      out.sas = generate_sas_corpus(in.templates, {in.gender, in.race}, in.emotions, c.seed);
      break;
    case ServiceKind::kChatbot:
      break;
  }
  return out;
}

/// Fills builtin parameters that come from the campaign's own inputs.
inline ServiceHandle bind_service(ServiceHandle h, const Inputs& in) {
  if (auto* b = std::get_if<BuiltinBackend>(&h.backend)) {
    if (b->id == builtin::kStereotype && in.occupations.stereotype_class)
      for (const auto& o : in.occupations.occupations) b->stereotypes[o] = *in.occupations.stereotype_of(o);
    if (b->id == builtin::kSentiment) {
      b->emotions = in.emotions;
      b->bias.bind(b->bias.target_attribute == in.race.attribute.name ? in.race : in.gender);
    }
  } else if (auto* s = std::get_if<SequenceBackend>(&h.backend)) {
    for (auto& stage : s->stages) stage = bind_service(stage, in);
  }
  return h;
}

// ---------------------------------------------------------------- outputs

/// Writes `data` to `path`. An existing file is accepted only when it
/// already holds the same bytes.
inline void write_idempotent(const fs::path& path, const std::string& data) {
  if (fs::exists(path)) {
    if (io::read_file(path.string()) == data) return;
    throw ConfigError("refusing to overwrite " + path.string() + " with different content");
  }
  io::write_file(path.string(), data);
}

inline std::vector<fs::path> cmd_generate(const CampaignConfig& c, std::ostream& log = std::cout) {
  const auto in = load_inputs(c);
  const auto corpora = build_corpora(c, in);
  fs::create_directories(c.output_dir);
  std::vector<fs::path> written;
  auto emit = [&](const std::optional<Corpus>& corpus, const char* name) {
    if (!corpus) return;
    const auto path = c.output_dir / name;
    write_idempotent(path, io::export_jsonl(*corpus));
    written.push_back(path);
    log << path.string() << " (" << corpus->size() << " cases)\n";
  };
  emit(corpora.unbiased, "corpus_unbiased.jsonl");
  emit(corpora.biased, "corpus_biased.jsonl");
  emit(corpora.sas, "corpus_sas.jsonl");
  if (written.empty()) log << "chatbot campaigns use the probe script; no corpus written\n";
  return written;
}

inline ChatbotOptions chatbot_options(const CampaignConfig& c) {
  ChatbotOptions o;
  o.issues = c.issues;
  o.pass_threshold = c.pass_threshold;
  o.band_high = c.band_high;
  o.band_medium = c.band_medium;
  o.complexity_limit = c.complexity_limit;
  o.failure_threshold = c.failure_threshold;
  const auto& s = c.corpus;
  o.probe_script = io::parse_word_list(detail::contents(s.probe_script, kProbeScript));
  o.abuse_lexicon = io::parse_word_list(detail::contents(s.abuse_lexicon, kAbuseLexicon));
  o.pii_patterns = io::parse_word_list(detail::contents(s.pii_patterns, kPiiPatterns));
  return o;
}

/// Rates the configured service and assembles its report.
inline report::RatingReport rate(const CampaignConfig& c) {
  const auto in = load_inputs(c);
  const auto corpora = build_corpora(c, in);
  const auto service = bind_service(c.service, in);

  report::RatingReport r;
  r.campaign_id = c.campaign_id;
  r.timestamp = c.timestamp;
  r.service = service.descriptor();
  r.service_kind = std::string(to_string(service.kind));
  auto& ec = r.config;
  ec.alpha = c.alpha;
  ec.seed = c.seed;
  CampaignOptions run{c.parallelism, c.failure_threshold};
  ec.thresholds["failure_threshold"] = c.failure_threshold;

  switch (service.kind) {
    case ServiceKind::kTranslator: {
      TranslatorOptions o{c.alpha, c.max_exclusion, run};
      ec.thresholds["max_exclusion"] = c.max_exclusion;
      ec.corpus_spec_hashes = {report::hex_digest(corpora.unbiased->spec_hash),
                               report::hex_digest(corpora.biased->spec_hash)};
      ec.corpus_size = corpora.unbiased->size() + corpora.biased->size();
      TranslatorRating tr;
      if (auto* seq = std::get_if<SequenceBackend>(&service.backend); seq && seq->stages.size() == 2) {
        auto p = rate_sequential_pipeline(seq->stages[0], seq->stages[1], *corpora.unbiased,
                                          *corpora.biased, in.occupations, in.gender, o);
        tr = p.empirical;
        r.rating = std::move(p);
      } else {
        tr = rate_translator(service, *corpora.unbiased, *corpora.biased, in.occupations, in.gender, o);
        r.rating = tr;
      }
      std::size_t cases = tr.t1.cases, failures = tr.t1.failures;
      if (tr.t2) {
        cases += tr.t2->cases;
        failures += tr.t2->failures;
      }
      r.failure_rate = cases ? static_cast<double>(failures) / static_cast<double>(cases) : 0.0;
      r.exclusion_rate = tr.exclusion_rate;
      break;
    }
    case ServiceKind::kSentiment: {
      SASOptions o{c.classing, c.alpha, c.grades, c.pseudocount, run};
      ec.thresholds["sentiment_negative_max"] = c.classing.negative_max;
      ec.thresholds["sentiment_neutral_max"] = c.classing.neutral_max;
      ec.thresholds["grade_low"] = c.grades.low;
      ec.thresholds["grade_high"] = c.grades.high;
      ec.thresholds["pseudocount"] = c.pseudocount;
      ec.corpus_spec_hashes = {report::hex_digest(corpora.sas->spec_hash)};
      ec.corpus_size = corpora.sas->size();
      auto s = rate_sas(service, *corpora.sas, in.emotions, o);
      r.failure_rate = s.cases ? static_cast<double>(s.failures) / static_cast<double>(s.cases) : 0.0;
      r.rating = std::move(s);
      break;
    }
    case ServiceKind::kChatbot: {
      const auto o = chatbot_options(c);
      for (auto k : c.issues) ec.issues.emplace_back(to_string(k));
      ec.thresholds["pass_threshold"] = c.pass_threshold;
      ec.thresholds["band_high"] = c.band_high;
      ec.thresholds["band_medium"] = c.band_medium;
      ec.thresholds["complexity_limit"] = c.complexity_limit;
      if (!c.corpus.transcripts.empty()) {
        std::map<ChatVariant, Transcript> ts;
        std::string digest_input;
        for (const auto& [v, path] : c.corpus.transcripts) {
          auto text = io::read_file(path.string());
          digest_input += text;
          ts[v] = parse_transcript(text);
        }
        ec.corpus_spec_hashes = {report::hex_digest(rng::fnv1a(digest_input))};
        ec.corpus_size = ts.size();
        r.rating = rate_chatbot_offline(ts, c.grid.baseline, c.profile, o);
      } else {
        std::string script;
        for (const auto& line : o.probe_script) script += line + "\n";
        ec.corpus_spec_hashes = {report::hex_digest(rng::fnv1a(script))};
        ec.corpus_size = o.probe_script.size();
        r.rating = rate_chatbot(service, c.grid, c.profile, o);
      }
      break;
    }
  }
  return r;
}

struct RateOutcome {
  int exit_code = 0;
  std::optional<fs::path> report_path;
  std::optional<fs::path> card_path;
  std::string message;
};

/// Exit code 0 when rated, 2 when unratable, 1 on config or transport abort.
/// Output directories are write-once.
inline RateOutcome cmd_rate(const CampaignConfig& c, std::ostream& log = std::cout) {
  RateOutcome out;
  const auto report_path = c.output_dir / "report.json";
  const auto card_path = c.output_dir / "label.txt";
  try {
    if (fs::exists(report_path) || fs::exists(card_path))
      throw ConfigError("output directory " + c.output_dir.string() + " already holds a report");
    auto r = rate(c);
    fs::create_directories(c.output_dir);
    io::write_file(report_path.string(), report::emit_report(r));
    io::write_file(card_path.string(), report::render_label_card(r));
    out.report_path = report_path;
    out.card_path = card_path;
    log << report_path.string() << "\n" << card_path.string() << "\n";
  } catch (const Unratable& e) {
    out.exit_code = 2;
    out.message = std::string("unratable: ") + e.what();
  } catch (const DegenerateTable& e) {
    out.exit_code = 2;
    out.message = std::string("unratable: ") + e.what();
  } catch (const Error& e) {
    out.exit_code = 1;
    out.message = e.what();
  }
  if (!out.message.empty()) log << out.message << "\n";
  return out;
}

inline std::string cmd_compose(std::string_view a, std::string_view b) {
  return compose_ratings(parse_translator_label(a), parse_translator_label(b)).to_string();
}

// -------------------------------------------------------------- validation

struct SuiteRow {
  std::string name;
  std::size_t agreed = 0;
  std::size_t total = 0;
  std::string detail;
};

struct SuiteResult {
  std::vector<SuiteRow> rows;
  bool passed = false;
};

inline ServiceHandle builtin_translator(std::string_view id, double beta = 0.0) {
  ServiceHandle h;
  h.kind = ServiceKind::kTranslator;
  BuiltinBackend b;
  b.id = std::string(id);
  b.bias.beta = beta;
  if (id == builtin::kStereotype) {
    const auto occ = occupations();
    for (const auto& o : occ.occupations) b.stereotypes[o] = *occ.stereotype_of(o);
  }
  h.backend = std::move(b);
  return h;
}

/// Builtin translators against their constructed labels over a seed sweep.
inline SuiteResult oracle_suite(std::size_t seeds = 20, std::size_t pairs_per_occupation = 10) {
  const auto occ = occupations();
  const auto gender = gender_lexicon();
  struct Expect {
    std::string name;
    ServiceHandle handle;
    TranslatorLabel label;
  };
  const std::vector<Expect> matrix{
      {"stereotype(beta=1) -> BS", builtin_translator(builtin::kStereotype, 1.0), TranslatorLabel::kBS},
      {"passthrough -> DSBS", builtin_translator(builtin::kPassthrough), TranslatorLabel::kDSBS},
      {"neutralize -> UCS", builtin_translator(builtin::kNeutralize), TranslatorLabel::kUCS}};
  SuiteResult res;
  res.passed = true;
  for (const auto& e : matrix) {
    SuiteRow row{e.name, 0, seeds, ""};
    for (std::size_t s = 1; s <= seeds; ++s) {
      const auto u = generate_translator_corpus(occ, gender, BalanceMode::kBalanced, pairs_per_occupation, s);
      const auto b = generate_translator_corpus(occ, gender, BalanceMode::kStereotyped, pairs_per_occupation,
                                                biased_corpus_seed(s));
      auto h = e.handle;
      std::get<BuiltinBackend>(h.backend).bias.rng_seed = s;
      if (rate_translator(h, u, b, occ, gender).label == e.label) ++row.agreed;
    }
    res.passed = res.passed && row.agreed == row.total;
    res.rows.push_back(std::move(row));
  }
  return res;
}

/// Score noise used by the null calibration sweep. Every filler sees every
/// emotion once, so with small noise the per-emotion class probabilities
/// differ and the test runs conservative (about 0.018 at noise 0.5). At 2.0
/// they are close to homogeneous and the neutral band still fills enough.
inline constexpr double kCalibrationNoise = 2.0;

/// Null sentiment campaigns (delta = 0); every attribute test is one trial.
inline SuiteResult calibration_suite(std::size_t runs = 200, double alpha = kDefaultAlpha) {
  const auto gender = gender_lexicon();
  const auto race = race_lexicon();
  const auto emo = emotions();
  const auto templates = sas_templates();
  SuiteRow row{"null SAS significant-flag rate", 0, 0, ""};
  for (std::size_t s = 1; s <= runs; ++s) {
    const auto corpus = generate_sas_corpus(templates, {gender, race}, emo, s);
    ServiceHandle h;
    h.kind = ServiceKind::kSentiment;
    BuiltinBackend b;
    b.id = std::string(builtin::kSentiment);
    b.emotions = emo;
    b.bias.noise = kCalibrationNoise;
    b.bias.rng_seed = s;
    b.bias.bind(gender);
    h.backend = std::move(b);
    SASOptions o;
    o.alpha = alpha;
    const auto r = rate_sas(h, corpus, emo, o);
    for (const auto& a : r.attributes) {
      ++row.total;
      if (a.test.significant) ++row.agreed;
    }
  }
  const double rate = static_cast<double>(row.agreed) / static_cast<double>(row.total);
  row.detail = report::format_double(rate);
  SuiteResult res;
  res.passed = rate >= 0.02 && rate <= 0.09;
  res.rows.push_back(std::move(row));
  return res;
}

inline void print_suite(const SuiteResult& r, std::ostream& os) {
  for (const auto& row : r.rows) {
    os << row.name << ": " << row.agreed << "/" << row.total;
    if (!row.detail.empty()) os << " (" << row.detail << ")";
    os << "\n";
  }
  os << (r.passed ? "PASS" : "FAIL") << "\n";
}

}  // namespace trustrate::campaign
