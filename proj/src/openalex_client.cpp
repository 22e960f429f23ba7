/*
 * Copyright 2026 The Rolescope Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rolescope/openalex_client.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <ctime>
#include <fstream>
#include <thread>

#include "httplib.h"
#include "spdlog/spdlog.h"
#include "rolescope/error.hpp"
#include "rolescope/table_io.hpp"
#include "rolescope/text_util.hpp"

namespace rolescope::openalex {

namespace {

using json = nlohmann::json;

constexpr std::string_view kWorksKind = "works";
constexpr std::string_view kAuthorWorksKind = "author_works";

// ASCII folding for U+00C0..U+017F.
constexpr std::array<std::string_view, 192> kFold = {
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i",
    "i", "i", "d", "n", "o", "o", "o", "o", "o", "", "o", "u", "u", "u", "u",
    "y", "th", "ss", "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e",
    "e", "i", "i", "i", "i", "d", "n", "o", "o", "o", "o", "o", "", "o", "u",
    "u", "u", "u", "y", "th", "y", "a", "a", "a", "a", "a", "a", "c", "c",
    "c", "c", "c", "c", "c", "c", "d", "d", "d", "d", "e", "e", "e", "e", "e",
    "e", "e", "e", "e", "e", "g", "g", "g", "g", "g", "g", "g", "g", "h", "h",
    "h", "h", "i", "i", "i", "i", "i", "i", "i", "i", "i", "i", "ij", "ij",
    "j", "j", "k", "k", "k", "l", "l", "l", "l", "l", "l", "l", "l", "l", "l",
    "n", "n", "n", "n", "n", "n", "n", "n", "n", "o", "o", "o", "o", "o", "o",
    "oe", "oe", "r", "r", "r", "r", "r", "r", "s", "s", "s", "s", "s", "s",
    "s", "s", "t", "t", "t", "t", "t", "t", "u", "u", "u", "u", "u", "u", "u",
    "u", "u", "u", "u", "u", "w", "w", "y", "y", "y", "z", "z", "z", "z", "z",
    "z", "s",
};

std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

const json& require(const json& object, const char* field,
                    const std::string& context) {
  if (!object.is_object() || !object.contains(field) ||
      object[field].is_null()) {
    throw MalformedResponse(field, context);
  }
  return object[field];
}

std::string id_string(const json& value, const char* field,
                      const std::string& context) {
  if (!value.is_string() || value.get_ref<const std::string&>().empty()) {
    throw MalformedResponse(field, context);
  }
  return value.get<std::string>();
}

struct SplitUrl {
  std::string origin;
  std::string path;
  std::string query;
};

SplitUrl split_url(std::string_view url) {
  SplitUrl out;
  const auto scheme = url.find("://");
  const auto host_start = scheme == std::string_view::npos ? 0 : scheme + 3;
  const auto path_start = url.find_first_of("/?", host_start);
  out.origin = std::string(url.substr(0, path_start));
  if (path_start == std::string_view::npos) {
    out.path = "/";
    return out;
  }
  const auto rest = url.substr(path_start);
  const auto q = rest.find('?');
  out.path = std::string(rest.substr(0, q));
  if (out.path.empty()) out.path = "/";
  if (q != std::string_view::npos) out.query = std::string(rest.substr(q + 1));
  return out;
}

}  // namespace

void ClientConfig::validate() const {
  if (!(max_requests_per_second >= 0.0) ||
      !std::isfinite(max_requests_per_second)) {
    throw Error(ErrorCode::kInvalidArgument,
                "max_requests_per_second must be >= 0");
  }
  if (page_size == 0 || page_size > 200) {
    throw Error(ErrorCode::kInvalidArgument, "page_size must lie in [1, 200]");
  }
  if (base_url.find("://") == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "base_url needs a scheme");
  }
  if (cache_dir.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cache_dir is required");
  }
}

std::string normalize_url(std::string_view url) {
  SplitUrl parts = split_url(url);
  parts.origin = text::ascii_lower(parts.origin);
  while (parts.path.size() > 1 && parts.path.back() == '/') parts.path.pop_back();
  std::vector<std::string> params;
  for (auto& p : text::split(parts.query, '&')) {
    if (p.empty() || p.rfind("mailto=", 0) == 0 || p == "mailto") continue;
    params.push_back(std::move(p));
  }
  std::sort(params.begin(), params.end());
  std::string out = parts.origin + parts.path;
  for (std::size_t i = 0; i < params.size(); ++i) {
    out += i == 0 ? '?' : '&';
    out += params[i];
  }
  return out;
}

std::string encode_query_value(std::string_view value) {
  static constexpr std::string_view kKeep = "-._~:,*|";
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : value) {
    if (std::isalnum(c) || kKeep.find(static_cast<char>(c)) != kKeep.npos) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

std::string short_id(std::string_view id, char kind) {
  const auto slash = id.rfind('/');
  std::string s(slash == std::string_view::npos ? id : id.substr(slash + 1));
  const bool kind_ok =
      !s.empty() && std::toupper(static_cast<unsigned char>(s[0])) == kind;
  const bool digits_ok =
      s.size() > 1 && std::all_of(s.begin() + 1, s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
      });
  if (!kind_ok || !digits_ok) {
    throw Error(ErrorCode::kInvalidArgument,
                "malformed OpenAlex id: " + std::string(id));
  }
  s[0] = kind;
  return s;
}

HttpResponse HttplibTransport::get(const std::string& url,
                                   std::chrono::milliseconds timeout) {
  const SplitUrl parts = split_url(url);
  httplib::Client client(parts.origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_follow_location(true);
  const std::string target =
      parts.query.empty() ? parts.path : parts.path + "?" + parts.query;
  const auto result = client.Get(target);
  if (!result) {
    throw Error(ErrorCode::kTransportFailure,
                "GET " + url + " failed: " + httplib::to_string(result.error()));
  }
  return {result->status, result->body};
}

Clock::Duration SteadyClock::now() {
  return std::chrono::steady_clock::now().time_since_epoch();
}

void SteadyClock::sleep_for(Duration d) { std::this_thread::sleep_for(d); }

RateLimiter::RateLimiter(double max_per_second, Clock& clock)
    : rate_(max_per_second), clock_(clock) {}

void RateLimiter::acquire() {
  if (rate_ <= 0.0) return;
  std::lock_guard lock(mutex_);
  constexpr Clock::Duration kWindow = std::chrono::seconds(1);
  if (rate_ < 1.0) {
    const auto spacing = std::chrono::duration_cast<Clock::Duration>(
        std::chrono::duration<double>(1.0 / rate_));
    if (!grants_.empty()) {
      const auto ready = grants_.back() + spacing;
      const auto now = clock_.now();
      if (now < ready) clock_.sleep_for(ready - now);
    }
    grants_.assign(1, clock_.now());
    return;
  }
  const auto capacity = static_cast<std::size_t>(std::floor(rate_));
  auto now = clock_.now();
  while (grants_.size() >= capacity) {
    const auto ready = grants_.front() + kWindow;
    if (now < ready) {
      clock_.sleep_for(ready - now);
      now = clock_.now();
    }
    while (!grants_.empty() && grants_.front() + kWindow <= now) {
      grants_.pop_front();
    }
  }
  grants_.push_back(now);
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir_, ec)) return;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    for (const auto& row : read_json_lines(file)) {
      if (!row.contains("request_url") || !row.contains("body")) {
        throw Error(ErrorCode::kFormatError,
                    "cache entry without request_url/body in " + file.string());
      }
      bodies_[normalize_url(row["request_url"].get<std::string>())] =
          row["body"].get<std::string>();
    }
  }
}

std::optional<std::string> ResponseCache::lookup(
    const std::string& normalized_url) const {
  std::shared_lock lock(mutex_);
  const auto it = bodies_.find(normalized_url);
  if (it == bodies_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::append(std::string_view kind, const CacheEntry& entry,
                           std::string_view base_url) {
  std::unique_lock lock(mutex_);
  std::filesystem::create_directories(dir_);
  const auto path = dir_ / (std::string(kind) + ".jsonl");
  {
    std::ofstream out(path, std::ios::app | std::ios::binary);
    if (!out) {
      throw Error(ErrorCode::kFileUnreadable,
                  "cannot append to " + path.string());
    }
    const json row = {{"request_url", entry.request_url},
                      {"fetched_at", entry.fetched_at},
                      {"body", entry.body}};
    out << row.dump() << '\n';
  }
  bodies_[entry.request_url] = entry.body;

  const auto manifest_path = dir_ / "manifest.json";
  json manifest = json::object();
  if (std::filesystem::exists(manifest_path)) {
    manifest = read_json_file(manifest_path);
  }
  manifest["schema_version"] = 1;
  manifest["base_url"] = std::string(base_url);
  if (!manifest.contains("first_fetched_at")) {
    manifest["first_fetched_at"] = entry.fetched_at;
  }
  manifest["last_fetched_at"] = entry.fetched_at;
  write_json_file(manifest_path, manifest);
}

std::size_t ResponseCache::size() const {
  std::shared_lock lock(mutex_);
  return bodies_.size();
}

RawWork parse_work(const json& body, TopicSource topics) {
  RawWork work;
  work.id = id_string(require(body, "id", "work"), "id", "work");
  const std::string context = "work " + work.id;
  const auto& year = require(body, "publication_year", context);
  if (!year.is_number_integer()) {
    throw MalformedResponse("publication_year", context);
  }
  work.year = year.get<int>();
  const auto& cited = require(body, "cited_by_count", context);
  if (!cited.is_number_integer() || cited.get<std::int64_t>() < 0) {
    throw MalformedResponse("cited_by_count", context);
  }
  work.cited_by_count = cited.get<std::int64_t>();
  const auto& refs = require(body, "referenced_works", context);
  if (!refs.is_array()) throw MalformedResponse("referenced_works", context);
  for (const auto& r : refs) {
    work.referenced_work_ids.insert(id_string(r, "referenced_works", context));
  }
  const char* topic_field =
      topics == TopicSource::kConcepts ? "concepts" : "topics";
  if (body.contains(topic_field) && !body[topic_field].is_null()) {
    const auto& list = body[topic_field];
    if (!list.is_array()) throw MalformedResponse(topic_field, context);
    for (const auto& t : list) {
      work.topic_ids.insert(
          id_string(require(t, "id", context), topic_field, context));
    }
  }
  const auto& authorships = require(body, "authorships", context);
  if (!authorships.is_array()) throw MalformedResponse("authorships", context);
  int position = 0;
  for (const auto& a : authorships) {
    Authorship authorship;
    authorship.position = ++position;
    const auto& author = require(a, "author", context);
    authorship.author_id =
        id_string(require(author, "id", context), "author.id", context);
    if (author.contains("display_name") && author["display_name"].is_string()) {
      authorship.display_name = author["display_name"].get<std::string>();
    } else if (a.contains("raw_author_name") &&
               a["raw_author_name"].is_string()) {
      authorship.display_name = a["raw_author_name"].get<std::string>();
    }
    if (a.contains("is_corresponding") && !a["is_corresponding"].is_null()) {
      if (!a["is_corresponding"].is_boolean()) {
        throw MalformedResponse("is_corresponding", context);
      }
      authorship.is_corresponding = a["is_corresponding"].get<bool>();
    }
    if (a.contains("institutions") && a["institutions"].is_array()) {
      for (const auto& inst : a["institutions"]) {
        if (inst.contains("id") && inst["id"].is_string()) {
          authorship.institution_ids.insert(inst["id"].get<std::string>());
        }
      }
    }
    work.authorships.push_back(std::move(authorship));
  }
  return work;
}

std::optional<WorkEntry> work_entry_for(const RawWork& work,
                                        std::string_view author_id) {
  const std::string wanted = short_id(author_id, 'A');
  for (const auto& a : work.authorships) {
    if (short_id(a.author_id, 'A') != wanted) continue;
    WorkEntry entry;
    entry.work_id = work.id;
    entry.year = work.year;
    entry.author_position = a.position;
    entry.is_corresponding = a.is_corresponding;
    entry.referenced_work_ids = work.referenced_work_ids;
    entry.topic_ids = work.topic_ids;
    entry.citation_count = work.cited_by_count;
    entry.institution_ids = a.institution_ids;
    return entry;
  }
  return std::nullopt;
}

std::string normalize_name(std::string_view name) {
  std::string reordered(name);
  if (const auto comma = name.find(','); comma != std::string_view::npos) {
    reordered = std::string(name.substr(comma + 1)) + " " +
                std::string(name.substr(0, comma));
  }
  std::string out;
  const auto space = [&out] {
    if (!out.empty() && out.back() != ' ') out += ' ';
  };
  for (std::size_t i = 0; i < reordered.size();) {
    const auto c = static_cast<unsigned char>(reordered[i]);
    if (c < 0x80) {
      if (std::isalnum(c)) {
        out += static_cast<char>(std::tolower(c));
      } else if (c != '\'') {
        space();
      }
      ++i;
      continue;
    }
    // Decode one UTF-8 sequence.
    std::size_t len = c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : c >= 0xC0 ? 2 : 1;
    char32_t cp = len == 1 ? 0 : c & (0x3F >> (len - 1));
    for (std::size_t k = 1; k < len; ++k) {
      if (i + k >= reordered.size()) {
        len = k;
        break;
      }
      cp = (cp << 6) | (static_cast<unsigned char>(reordered[i + k]) & 0x3F);
    }
    if (cp >= 0xC0 && cp < 0x180) {
      const auto folded = kFold[cp - 0xC0];
      if (folded.empty()) {
        space();
      } else {
        out += folded;
      }
    } else if (cp == 0x2019) {
      // right single quotation mark, used as an apostrophe
    } else {
      space();
    }
    i += len;
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

OpenAlexClient::OpenAlexClient(ClientConfig config,
                               std::shared_ptr<HttpTransport> transport,
                               std::shared_ptr<Clock> clock)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      clock_(clock ? std::move(clock) : std::make_shared<SteadyClock>()),
      limiter_(config_.max_requests_per_second, *clock_),
      cache_(config_.cache_dir) {
  config_.validate();
  while (config_.base_url.size() > 1 && config_.base_url.back() == '/') {
    config_.base_url.pop_back();
  }
  if (!transport_ && !config_.offline) {
    transport_ = std::make_shared<HttplibTransport>();
  }
}

json OpenAlexClient::get_json(
    const std::string& url, std::string_view kind,
    const std::function<void(const json&)>& validate) {
  const std::string key = normalize_url(url);
  if (const auto body = cache_.lookup(key)) {
    auto parsed = json::parse(*body, nullptr, false);
    if (parsed.is_discarded()) throw MalformedResponse("body", "cached " + key);
    return parsed;
  }
  if (config_.offline) {
    throw Error(ErrorCode::kOfflineCacheMiss, "not in cache: " + key);
  }
  std::string request = url;
  if (!config_.mailto.empty()) {
    request += request.find('?') == std::string::npos ? '?' : '&';
    request += "mailto=" + encode_query_value(config_.mailto);
  }
  auto backoff = std::chrono::duration_cast<Clock::Duration>(
      config_.initial_backoff);
  for (std::size_t attempt = 0;; ++attempt) {
    const bool last = attempt >= config_.max_retries;
    limiter_.acquire();
    ++requests_;
    HttpResponse response;
    try {
      response = transport_->get(request, config_.timeout);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTransportFailure || last) throw;
      spdlog::debug("GET {} failed ({}), retrying", key, e.what());
      clock_->sleep_for(backoff);
      backoff *= 2;
      continue;
    }
    if (response.status == 200) {
      auto parsed = json::parse(response.body, nullptr, false);
      if (parsed.is_discarded()) throw MalformedResponse("body", key);
      validate(parsed);
      cache_.append(kind, {key, utc_timestamp(), response.body},
                    config_.base_url);
      return parsed;
    }
    if (response.status == 404) {
      throw Error(ErrorCode::kNotFound, "not found: " + key);
    }
    const bool retryable = response.status == 429 || response.status >= 500;
    if (!retryable || last) {
      throw Error(response.status == 429 ? ErrorCode::kRateLimited
                                         : ErrorCode::kTransportFailure,
                  "HTTP " + std::to_string(response.status) + " for " + key);
    }
    spdlog::debug("HTTP {} for {}, retrying", response.status, key);
    clock_->sleep_for(backoff);
    backoff *= 2;
  }
}

RawWork OpenAlexClient::fetch_work(std::string_view work_id) {
  const std::string url = config_.base_url + "/works/" + short_id(work_id, 'W');
  const auto topics = config_.topic_source;
  const auto body = get_json(url, kWorksKind, [topics](const json& j) {
    parse_work(j, topics);
  });
  return parse_work(body, config_.topic_source);
}

AuthorProfile OpenAlexClient::fetch_author_profile(
    std::string_view author_id, std::optional<int> before_year) {
  const std::string id = short_id(author_id, 'A');
  AuthorProfile profile;
  profile.author_id = id;
  std::map<std::string, WorkEntry> works;
  std::string cursor = "*";
  const auto topics = config_.topic_source;
  const auto validate_page = [topics](const json& page) {
    const auto& results = require(page, "results", "works page");
    if (!results.is_array()) throw MalformedResponse("results", "works page");
    for (const auto& w : results) parse_work(w, topics);
  };
  while (true) {
    const std::string url = config_.base_url + "/works?cursor=" +
                            encode_query_value(cursor) +
                            "&filter=author.id:" + id +
                            "&per-page=" + std::to_string(config_.page_size);
    const auto page = get_json(url, kAuthorWorksKind, validate_page);
    validate_page(page);
    const auto& results = page["results"];
    for (const auto& w : results) {
      const RawWork work = parse_work(w, topics);
      auto entry = work_entry_for(work, id);
      if (!entry) {
        spdlog::warn("work {} listed for {} has no matching authorship",
                     work.id, id);
        continue;
      }
      works.emplace(work.id, std::move(*entry));
    }
    std::string next;
    if (page.contains("meta") && page["meta"].contains("next_cursor") &&
        page["meta"]["next_cursor"].is_string()) {
      next = page["meta"]["next_cursor"].get<std::string>();
    }
    if (next.empty() || results.empty() || next == cursor) break;
    cursor = std::move(next);
  }
  for (auto& [wid, entry] : works) {
    if (before_year && entry.year >= *before_year) continue;
    profile.works.push_back(std::move(entry));
  }
  std::stable_sort(profile.works.begin(), profile.works.end(),
                   [](const WorkEntry& a, const WorkEntry& b) {
                     return a.year < b.year;
                   });
  return profile;
}

std::string OpenAlexClient::resolve_author(std::string_view name,
                                           std::string_view work_id) {
  const RawWork work = fetch_work(work_id);
  const std::string wanted = normalize_name(name);
  std::vector<const Authorship*> exact;
  for (const auto& a : work.authorships) {
    if (normalize_name(a.display_name) == wanted) exact.push_back(&a);
  }
  const auto pick = [&](const std::vector<const Authorship*>& found) {
    if (found.size() == 1) return found.front()->author_id;
    std::vector<std::string> candidates;
    for (const auto* a : found) {
      candidates.push_back(a->display_name + " <" + a->author_id + ">");
    }
    throw AmbiguousMatch(std::string(name), std::move(candidates));
  };
  if (!exact.empty()) return pick(exact);

  const auto key = [](const std::string& normalized)
      -> std::optional<std::pair<std::string, char>> {
    const auto tokens = text::split(normalized, ' ');
    if (tokens.size() < 2 || tokens.front().empty()) return std::nullopt;
    return std::pair{tokens.back(), tokens.front()[0]};
  };
  const auto wanted_key = key(wanted);
  std::vector<const Authorship*> loose;
  if (wanted_key) {
    for (const auto& a : work.authorships) {
      if (key(normalize_name(a.display_name)) == wanted_key) loose.push_back(&a);
    }
  }
  if (!loose.empty()) return pick(loose);
  throw Error(ErrorCode::kNoMatch, "no authorship on " + work.id +
                                       " matches \"" + std::string(name) + "\"");
}

}  // namespace rolescope::openalex
