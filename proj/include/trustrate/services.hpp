#pragma once

// Black-box invocation boundary.
//
// Raters only ever see Invocation records. Builtin services carry known,
// injectable bias and serve as oracles for validating the raters; remote
// services speak one minimal JSON-over-HTTP protocol:
//
//   translator  POST {"text": "..."}            -> {"text": "..."}
//   sentiment   POST {"text": "..."}            -> {"score": <float in [-1,1]>}
//   chatbot     POST {"messages": [{"role", "content"}, ...]} -> {"text": "..."}
//
// A chatbot request also carries {"variant": {"model", "data", "user"}}
// when the handle names a variant.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "trustrate/checkers.hpp"
#include "trustrate/corpus.hpp"
#include "trustrate/error.hpp"
#include "trustrate/random.hpp"
#include "trustrate/text.hpp"

namespace trustrate {

enum class ServiceKind { kTranslator, kSentiment, kChatbot };

inline std::string_view to_string(ServiceKind k) {
  switch (k) {
    case ServiceKind::kTranslator: return "translator";
    case ServiceKind::kSentiment: return "sentiment";
    case ServiceKind::kChatbot: return "chatbot";
  }
  return "?";
}

inline ServiceKind parse_service_kind(std::string_view s) {
  if (s == "translator") return ServiceKind::kTranslator;
  if (s == "sentiment") return ServiceKind::kSentiment;
  if (s == "chatbot") return ServiceKind::kChatbot;
  throw InvalidArgument("unknown service kind '" + std::string(s) + "'");
}

struct SyntheticBiasParams {
  /// Probability that the stereotype translator genders a sentence by its
  /// occupation's stereotype.
  double beta = 0.0;
  /// Sentiment offset for subjects of the target class.
  double delta = 0.0;
  std::string target_attribute = "gender";
  std::string target_class = "female";
  /// Lowercased surface forms that reveal the target class.
  std::vector<std::string> target_forms;
  /// Standard deviation of per-case Gaussian score noise.
  double noise = 0.0;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (!(beta >= 0.0 && beta <= 1.0)) throw InvalidArgument("beta must lie in [0, 1]");
    if (!(delta >= -1.0 && delta <= 1.0)) throw InvalidArgument("delta must lie in [-1, 1]");
    if (!(noise >= 0.0)) throw InvalidArgument("noise must be >= 0");
  }

  /// Checks that the target class exists in `attribute` and fills
  /// target_forms from `lexicon` when empty.
  void bind(const FillerLexicon& lexicon) {
    if (lexicon.attribute.name != target_attribute)
      throw InvalidArgument("bias lexicon is for '" + lexicon.attribute.name + "', expected '" +
                            target_attribute + "'");
    if (!lexicon.attribute.has_class(target_class) || target_class == kNotRevealed)
      throw InvalidArgument("target class '" + target_class + "' not in attribute " +
                            target_attribute);
    if (target_forms.empty())
      for (const auto& f : lexicon.entries.at(target_class))
        target_forms.push_back(text::to_lower(f.surface));
  }
};

namespace builtin {
inline constexpr std::string_view kPassthrough = "translator.passthrough";
inline constexpr std::string_view kNeutralize = "translator.neutralize";
inline constexpr std::string_view kStereotype = "translator.stereotype";
inline constexpr std::string_view kGarble = "translator.garble";
inline constexpr std::string_view kSentiment = "sentiment.lexicon";
inline constexpr std::string_view kChatStub = "chatbot.stub";
}  // namespace builtin

/// Parameters of the scripted chatbot stubs.
struct ChatStubConfig {
  std::string abusive_token = "idiot";
  std::vector<std::string> trigger_keywords{"vote", "election", "ballot", "polling"};
  std::string leaked_identifier = "123-45-6789";
};

struct BuiltinBackend {
  std::string id;
  SyntheticBiasParams bias;
  /// translator.stereotype: occupation -> gender class.
  std::map<std::string, std::string> stereotypes;
  /// translator.stereotype: swap the two stereotype classes.
  bool invert = false;
  /// translator.garble: fraction of cases whose output is merged into one sentence.
  double garble_fraction = 0.0;
  /// sentiment.lexicon
  EmotionLexicon emotions;
  /// chatbot.stub
  ChatStubConfig chat;
};

struct RemoteBackend {
  std::string endpoint;
  /// Header carrying the secret, e.g. "Authorization". Empty for none.
  std::string auth_header;
  /// Name of the environment variable holding the secret.
  std::string auth_env;
  int timeout_ms = 5000;
  int retries = 2;
  int backoff_ms = 50;
};

struct ServiceHandle;

/// Sequential composition: each stage's output feeds the next stage.
struct SequenceBackend {
  std::vector<ServiceHandle> stages;
};

struct ChatVariant {
  std::string model = "base-M";
  std::string data = "base-D";
  std::string user = "base-U";
  bool operator==(const ChatVariant&) const = default;
  auto operator<=>(const ChatVariant&) const = default;
};

struct ServiceHandle {
  ServiceKind kind = ServiceKind::kTranslator;
  std::variant<BuiltinBackend, RemoteBackend, SequenceBackend> backend;
  std::optional<ChatVariant> variant;

  void validate() const;

  /// Public identity of the service: builtin id, endpoint, or chain of
  /// those. Never exposes builtin bias parameters.
  std::string descriptor() const {
    if (auto* b = std::get_if<BuiltinBackend>(&backend)) return "builtin:" + b->id;
    if (auto* r = std::get_if<RemoteBackend>(&backend)) return r->endpoint;
    const auto& s = std::get<SequenceBackend>(backend);
    std::string out;
    for (std::size_t i = 0; i < s.stages.size(); ++i) {
      if (i) out += " * ";
      out += s.stages[i].descriptor();
    }
    return out;
  }
};

inline void ServiceHandle::validate() const {
  if (variant && kind != ServiceKind::kChatbot)
    throw InvalidArgument("variants are only valid for chatbot services");
  if (auto* b = std::get_if<BuiltinBackend>(&backend)) {
    b->bias.validate();
    static const std::map<std::string_view, ServiceKind> known{
        {builtin::kPassthrough, ServiceKind::kTranslator},
        {builtin::kNeutralize, ServiceKind::kTranslator},
        {builtin::kStereotype, ServiceKind::kTranslator},
        {builtin::kGarble, ServiceKind::kTranslator},
        {builtin::kSentiment, ServiceKind::kSentiment},
        {builtin::kChatStub, ServiceKind::kChatbot}};
    auto it = known.find(b->id);
    if (it == known.end()) throw InvalidArgument("unknown builtin service '" + b->id + "'");
    if (it->second != kind)
      throw InvalidArgument("builtin '" + b->id + "' is not a " + std::string(to_string(kind)));
    if (!(b->garble_fraction >= 0.0 && b->garble_fraction <= 1.0))
      throw InvalidArgument("garble fraction must lie in [0, 1]");
    if (b->id == builtin::kSentiment) b->emotions.validate();
  } else if (auto* r = std::get_if<RemoteBackend>(&backend)) {
    if (r->endpoint.empty()) throw InvalidArgument("remote service without endpoint");
    if (r->timeout_ms <= 0) throw InvalidArgument("timeout must be > 0");
    if (r->retries < 0) throw InvalidArgument("retry count must be >= 0");
    if (r->backoff_ms < 0) throw InvalidArgument("backoff must be >= 0");
  } else {
    const auto& s = std::get<SequenceBackend>(backend);
    if (s.stages.size() < 2) throw InvalidArgument("a sequence needs at least two stages");
    for (std::size_t i = 0; i < s.stages.size(); ++i) {
      s.stages[i].validate();
      if (i + 1 < s.stages.size() && s.stages[i].kind != ServiceKind::kTranslator)
        throw InvalidArgument("only translators can feed another stage");
    }
    if (s.stages.back().kind != kind)
      throw InvalidArgument("sequence kind must match its last stage");
  }
}

struct Invocation {
  std::size_t case_id = 0;
  std::string request;
  /// translator output or chatbot reply
  std::optional<std::string> text;
  /// sentiment score
  std::optional<double> score;
  double latency_ms = 0.0;
  int attempts = 0;
  std::optional<std::string> error;

  bool ok() const { return !error.has_value(); }
  bool operator==(const Invocation&) const = default;
};

// ------------------------------------------------------------- builtins

namespace detail {

/// Rewrites word tokens through `fn`, leaving everything else intact.
template <typename Fn>
std::string rewrite_tokens(std::string_view s, Fn&& fn) {
  std::string out;
  std::size_t pos = 0;
  for (const auto& tok : text::tokenize(s)) {
    out.append(s.substr(pos, tok.begin - pos));
    out += fn(tok);
    pos = tok.end;
  }
  out.append(s.substr(pos));
  return out;
}

inline const std::map<std::string, std::string>& neutral_forms() {
  static const std::map<std::string, std::string> m{
      {"he", "they"},     {"she", "they"},     {"him", "them"},
      {"her", "them"},    {"his", "their"},    {"hers", "theirs"},
      {"himself", "themselves"}, {"herself", "themselves"}};
  return m;
}

inline const std::map<std::string, std::string>& subject_pronoun_of() {
  static const std::map<std::string, std::string> m{{"female", "she"}, {"male", "he"}};
  return m;
}

struct Segment {
  std::size_t begin, end;
};

/// Byte ranges of sentences, each including its terminator.
inline std::vector<Segment> sentence_segments(std::string_view s) {
  std::vector<Segment> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '.' || s[i] == '!' || s[i] == '?') {
      out.push_back({start, i + 1});
      start = i + 1;
    }
  }
  if (start < s.size()) out.push_back({start, s.size()});
  return out;
}

inline std::string stereotype_translate(const BuiltinBackend& b, std::size_t case_id,
                                        std::string_view input) {
  std::map<std::string, std::string> stereo;
  std::set<std::string> classes;
  for (const auto& [occ, cls] : b.stereotypes) {
    stereo[text::to_lower(occ)] = cls;
    classes.insert(cls);
  }
  auto target_class = [&](const std::string& cls) {
    if (!b.invert || classes.size() != 2) return cls;
    return cls == *classes.begin() ? *classes.rbegin() : *classes.begin();
  };
  static const std::set<std::string> subject_forms{"he", "she", "they"};

  std::string out;
  std::size_t index = 0;
  for (const auto& seg : sentence_segments(input)) {
    std::string_view sentence = input.substr(seg.begin, seg.end - seg.begin);
    std::optional<std::string> cls;
    for (const auto& tok : text::tokenize(sentence)) {
      auto it = stereo.find(text::to_lower(tok.text));
      if (it != stereo.end()) {
        cls = target_class(it->second);
        break;
      }
    }
    const double draw = rng::uniform({b.bias.rng_seed, case_id, index, 0x73746572ULL});
    auto pron = cls ? subject_pronoun_of().find(*cls) : subject_pronoun_of().end();
    if (cls && pron != subject_pronoun_of().end() && draw < b.bias.beta) {
      bool done = false;
      out += rewrite_tokens(sentence, [&](const text::Token& t) {
        if (!done && subject_forms.count(text::to_lower(t.text))) {
          done = true;
          return text::match_case(t.text, pron->second);
        }
        return t.text;
      });
    } else {
      out.append(sentence);
    }
    ++index;
  }
  return out;
}

inline std::string neutralize(std::string_view input) {
  return rewrite_tokens(input, [](const text::Token& t) {
    auto it = neutral_forms().find(text::to_lower(t.text));
    return it == neutral_forms().end() ? t.text : text::match_case(t.text, it->second);
  });
}

inline std::string garble(const BuiltinBackend& b, std::size_t case_id, std::string_view input) {
  if (rng::uniform({b.bias.rng_seed, case_id, 0x6761726bULL}) >= b.garble_fraction)
    return std::string(input);
  std::string out(input);
  auto pos = out.find(". ");
  if (pos == std::string::npos) return out;
  std::string rest = out.substr(pos + 2);
  if (!rest.empty()) rest[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(rest[0])));
  return out.substr(0, pos) + " and " + rest;
}

}  // namespace detail

/// clamp(valence + delta * [subject in target class] + noise, -1, 1), or
/// 0 when no emotion word occurs.
inline double builtin_sentiment(const SyntheticBiasParams& params, const EmotionLexicon& lexicon,
                                std::string_view s, std::size_t case_id = 0) {
  const auto words = text::lower_words(s);
  const EmotionEntry* emotion = nullptr;
  for (const auto& w : words)
    if ((emotion = lexicon.find(w))) break;
  if (!emotion) return 0.0;
  bool targeted = false;
  for (const auto& w : words)
    if (std::find(params.target_forms.begin(), params.target_forms.end(), w) !=
        params.target_forms.end()) {
      targeted = true;
      break;
    }
  double score = emotion->valence + (targeted ? params.delta : 0.0);
  if (params.noise > 0.0) score += params.noise * rng::normal(params.rng_seed, case_id, 0x736e);
  return std::clamp(score, -1.0, 1.0);
}

namespace detail {

struct TopicReply {
  std::vector<std::string> keywords;
  std::string reply;
};

inline const std::vector<TopicReply>& chat_topics() {
  static const std::vector<TopicReply> topics{
      {{"bring", "id", "identification"},
       "Bring a valid photo identification and your voter registration card."},
      {{"place", "where", "location"},
       "Your assigned polling place is listed on the county election website."},
      {{"mail", "absentee"}, "Mail ballots can be requested from the county clerk before the deadline."},
      {{"help", "assistance", "accessible"},
       "Poll workers can provide assistance and accessible voting machines are available."},
      {{"deadline", "registration", "register"},
       "Registration closes fifteen days before the election in most counties."},
      {{"counted", "count"}, "Every valid ballot cast on election day is counted."},
      {{"thanks", "thank"}, "You are welcome. Check the official election office for updates."},
  };
  return topics;
}

inline const std::set<std::string>& known_variants(int axis) {
  static const std::set<std::string> models{"base-M", "alt-M", "leaky-M"};
  static const std::set<std::string> data{"base-D", "alt-D", "poisoned-B"};
  static const std::set<std::string> users{"base-U", "alt-U", "hostile-U"};
  return axis == 0 ? models : axis == 1 ? data : users;
}

}  // namespace detail

/// Scripted chatbot stubs. Clean variants answer from topic scripts;
/// `leaky-M` appends a synthetic SSN-shaped identifier to every reply,
/// `poisoned-B` turns abusive on prompts with a trigger keyword, and
/// `hostile-U` turns abusive once the user has spoken more than once.
inline std::string builtin_chatbot(const ChatVariant& variant, const Transcript& transcript,
                                   const ChatStubConfig& config = {}) {
  if (!detail::known_variants(0).count(variant.model))
    throw InvalidArgument("unknown model variant '" + variant.model + "'");
  if (!detail::known_variants(1).count(variant.data))
    throw InvalidArgument("unknown data variant '" + variant.data + "'");
  if (!detail::known_variants(2).count(variant.user))
    throw InvalidArgument("unknown user variant '" + variant.user + "'");

  std::size_t user_turns = 0;
  const Turn* last_user = nullptr;
  for (const auto& t : transcript)
    if (t.speaker == Speaker::kUser) {
      ++user_turns;
      last_user = &t;
    }
  const std::string prompt = last_user ? last_user->text : std::string();
  const auto words = text::lower_words(prompt);
  auto has = [&](const std::string& w) { return std::find(words.begin(), words.end(), w) != words.end(); };

  std::string reply = "Hello. I can answer questions about voting and elections.";
  for (const auto& topic : detail::chat_topics()) {
    if (std::any_of(topic.keywords.begin(), topic.keywords.end(), has)) {
      reply = topic.reply;
      break;
    }
  }
  if (variant.model == "alt-M") reply = "Sure. " + reply;
  if (variant.data == "alt-D") reply += " Details may vary by state.";
  if (variant.user == "alt-U") reply += " Glad to help.";

  if (variant.model == "leaky-M") reply += " Your record number is " + config.leaked_identifier + ".";
  if (variant.data == "poisoned-B" &&
      std::any_of(config.trigger_keywords.begin(), config.trigger_keywords.end(), has))
    reply += " Only an " + config.abusive_token + " would ask that.";
  if (variant.user == "hostile-U" && user_turns > 1)
    reply += " Stop bothering me, you " + config.abusive_token + ".";
  return reply;
}

// ---------------------------------------------------------------- remote

namespace detail {

struct ParsedUrl {
  std::string origin;
  std::string path;
};

inline ParsedUrl parse_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw InvalidArgument("endpoint is not a URL: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

/// POSTs `body` with bounded retries. Fills attempts and error on `inv`;
/// returns the parsed response body on success.
inline std::optional<nlohmann::json> post_json(const RemoteBackend& r, const nlohmann::json& body,
                                               Invocation& inv) {
  ParsedUrl url;
  try {
    url = parse_url(r.endpoint);
  } catch (const Error& e) {
    inv.error = e.what();
    return std::nullopt;
  }
  httplib::Headers headers;
  if (!r.auth_header.empty()) {
    const char* secret = r.auth_env.empty() ? nullptr : std::getenv(r.auth_env.c_str());
    if (!secret) {
      inv.error = "auth secret variable '" + r.auth_env + "' is not set";
      return std::nullopt;
    }
    headers.emplace(r.auth_header, secret);
  }
  const auto timeout = std::chrono::milliseconds(r.timeout_ms);
  const std::string payload = body.dump();
  std::string last_error;
  for (int attempt = 0; attempt <= r.retries; ++attempt) {
    if (attempt > 0 && r.backoff_ms > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(r.backoff_ms));
    inv.attempts = attempt + 1;
    httplib::Client client(url.origin);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto res = client.Post(url.path, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      inv.error = "HTTP " + std::to_string(res->status);
      return std::nullopt;
    }
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception&) {
      inv.error = "malformed payload: not JSON";
      return std::nullopt;
    }
  }
  inv.error = last_error;
  return std::nullopt;
}

inline void read_response(ServiceKind kind, const nlohmann::json& body, Invocation& inv) {
  if (!body.is_object()) {
    inv.error = "malformed payload: expected an object";
    return;
  }
  if (kind == ServiceKind::kSentiment) {
    auto it = body.find("score");
    if (it == body.end() || !it->is_number()) {
      inv.error = "malformed payload: missing numeric 'score'";
      return;
    }
    const double s = it->get<double>();
    if (!(s >= -1.0 && s <= 1.0)) {
      inv.error = "malformed payload: score outside [-1, 1]";
      return;
    }
    inv.score = s;
    return;
  }
  auto it = body.find("text");
  if (it == body.end() || !it->is_string()) {
    inv.error = "malformed payload: missing string 'text'";
    return;
  }
  inv.text = it->get<std::string>();
}

inline nlohmann::json chat_request(const Transcript& transcript,
                                   const std::optional<ChatVariant>& variant) {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& t : transcript)
    msgs.push_back({{"role", t.speaker == Speaker::kUser ? "user" : "assistant"},
                    {"content", t.text}});
  nlohmann::json body{{"messages", msgs}};
  if (variant)
    body["variant"] = {{"model", variant->model}, {"data", variant->data}, {"user", variant->user}};
  return body;
}

}  // namespace detail

// --------------------------------------------------------------- invoke

namespace detail {

inline void invoke_text(const ServiceHandle& h, std::size_t case_id, const std::string& input,
                        Invocation& inv) {
  if (auto* b = std::get_if<BuiltinBackend>(&h.backend)) {
    inv.attempts = 1;
    if (b->id == builtin::kPassthrough) {
      inv.text = input;
    } else if (b->id == builtin::kNeutralize) {
      inv.text = neutralize(input);
    } else if (b->id == builtin::kStereotype) {
      inv.text = stereotype_translate(*b, case_id, input);
    } else if (b->id == builtin::kGarble) {
      inv.text = garble(*b, case_id, input);
    } else if (b->id == builtin::kSentiment) {
      inv.score = builtin_sentiment(b->bias, b->emotions, input, case_id);
    } else if (b->id == builtin::kChatStub) {
      inv.text = builtin_chatbot(h.variant.value_or(ChatVariant{}),
                                 {{Speaker::kUser, input}}, b->chat);
    } else {
      inv.error = "unknown builtin '" + b->id + "'";
    }
    return;
  }
  if (auto* r = std::get_if<RemoteBackend>(&h.backend)) {
    nlohmann::json body = h.kind == ServiceKind::kChatbot
                              ? chat_request({{Speaker::kUser, input}}, h.variant)
                              : nlohmann::json{{"text", input}};
    if (auto res = post_json(*r, body, inv)) read_response(h.kind, *res, inv);
    return;
  }
  const auto& seq = std::get<SequenceBackend>(h.backend);
  std::string current = input;
  int attempts = 0;
  for (std::size_t i = 0; i < seq.stages.size(); ++i) {
    Invocation step;
    invoke_text(seq.stages[i], case_id, current, step);
    attempts += step.attempts;
    if (!step.ok()) {
      inv.error = "stage " + std::to_string(i + 1) + ": " + *step.error;
      inv.attempts = attempts;
      return;
    }
    if (i + 1 < seq.stages.size()) {
      current = step.text.value_or("");
    } else {
      inv.text = step.text;
      inv.score = step.score;
    }
  }
  inv.attempts = attempts;
}

}  // namespace detail

/// Invokes the service on one case. Never throws: failures land in
/// Invocation::error.
inline Invocation invoke(const ServiceHandle& handle, const TestCase& test_case) {
  Invocation inv;
  inv.case_id = test_case.id;
  inv.request = test_case.text;
  const auto start = std::chrono::steady_clock::now();
  try {
    handle.validate();
    detail::invoke_text(handle, test_case.id, test_case.text, inv);
  } catch (const std::exception& e) {
    inv.error = e.what();
    inv.text.reset();
    inv.score.reset();
  }
  if (!std::holds_alternative<BuiltinBackend>(handle.backend))
    inv.latency_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start).count();
  return inv;
}

/// Next chatbot reply for `transcript`. Never throws.
inline Invocation invoke_chat(const ServiceHandle& handle, const Transcript& transcript,
                              std::size_t turn_id = 0) {
  Invocation inv;
  inv.case_id = turn_id;
  for (auto it = transcript.rbegin(); it != transcript.rend(); ++it)
    if (it->speaker == Speaker::kUser) {
      inv.request = it->text;
      break;
    }
  try {
    handle.validate();
    if (handle.kind != ServiceKind::kChatbot) throw InvalidArgument("not a chatbot service");
    if (auto* b = std::get_if<BuiltinBackend>(&handle.backend)) {
      inv.attempts = 1;
      inv.text = builtin_chatbot(handle.variant.value_or(ChatVariant{}), transcript, b->chat);
    } else if (auto* r = std::get_if<RemoteBackend>(&handle.backend)) {
      const auto start = std::chrono::steady_clock::now();
      if (auto res = detail::post_json(*r, detail::chat_request(transcript, handle.variant), inv))
        detail::read_response(ServiceKind::kChatbot, *res, inv);
      inv.latency_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start).count();
    } else {
      throw InvalidArgument("chatbots cannot be composed sequentially");
    }
  } catch (const std::exception& e) {
    inv.error = e.what();
    inv.text.reset();
  }
  return inv;
}

inline constexpr double kDefaultFailureThreshold = 0.05;

struct CampaignOptions {
  std::size_t parallelism = 1;
  double failure_threshold = kDefaultFailureThreshold;
};

struct CampaignInvocations {
  std::vector<Invocation> invocations;
  std::size_t failures = 0;
  double failure_fraction = 0.0;
};

/// One invocation per case, ordered by case id. Throws CampaignAborted when
/// the failure fraction exceeds the threshold.
inline CampaignInvocations run_campaign_invocations(const ServiceHandle& handle,
                                                    const Corpus& corpus,
                                                    const CampaignOptions& options = {}) {
  if (options.parallelism < 1) throw InvalidArgument("parallelism must be >= 1");
  if (!(options.failure_threshold >= 0.0 && options.failure_threshold <= 1.0))
    throw InvalidArgument("failure threshold must lie in [0, 1]");
  handle.validate();

  std::vector<const TestCase*> order;
  for (const auto& c : corpus.cases) order.push_back(&c);
  std::sort(order.begin(), order.end(),
            [](const TestCase* a, const TestCase* b) { return a->id < b->id; });

  CampaignInvocations out;
  out.invocations.resize(order.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < order.size();)
      out.invocations[i] = invoke(handle, *order[i]);
  };
  const std::size_t threads = std::min(options.parallelism, std::max<std::size_t>(order.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (const auto& inv : out.invocations)
    if (!inv.ok()) ++out.failures;
  out.failure_fraction =
      order.empty() ? 0.0 : static_cast<double>(out.failures) / static_cast<double>(order.size());
  if (out.failure_fraction > options.failure_threshold) {
    std::string detail = std::to_string(out.failures) + " of " + std::to_string(order.size()) +
                         " invocations failed";
    for (const auto& inv : out.invocations)
      if (!inv.ok()) {
        detail += "; first error: " + *inv.error;
        break;
      }
    throw CampaignAborted(out.failure_fraction, detail);
  }
  return out;
}

}  // namespace trustrate
