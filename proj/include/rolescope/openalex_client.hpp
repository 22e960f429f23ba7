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

#pragma once

// OpenAlex access with an append-only on-disk response cache.
//
// Every response is stored under its normalized request URL in
// <cache_dir>/<kind>.jsonl (works, author_works). With offline set the cache
// is the only source and a miss is an error.

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rolescope/core_domain.hpp"

namespace rolescope::openalex {

enum class TopicSource { kConcepts, kTopics };

struct ClientConfig {
  std::string base_url = "https://api.openalex.org";
  std::string mailto;
  // Zero disables throttling.
  double max_requests_per_second = 8.0;
  std::filesystem::path cache_dir;
  bool offline = false;
  std::size_t page_size = 200;
  std::size_t max_retries = 3;
  std::chrono::milliseconds timeout{30000};
  std::chrono::milliseconds initial_backoff{1000};
  TopicSource topic_source = TopicSource::kConcepts;

  // Throws Error(kInvalidArgument).
  void validate() const;
};

struct CacheEntry {
  std::string request_url;
  std::string fetched_at;  // UTC, ISO 8601
  std::string body;
};

// Lowercases scheme and host, drops the mailto parameter and sorts the
// remaining query parameters.
std::string normalize_url(std::string_view url);

// Percent-encodes everything except unreserved characters and ":,*|".
std::string encode_query_value(std::string_view value);

// Accepts "W123", "w123" or "https://openalex.org/W123" (likewise "A...")
// and returns the upper-cased short form. Throws Error(kInvalidArgument).
std::string short_id(std::string_view id, char kind);

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Throws Error(kTransportFailure) when no response was received.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse get(const std::string& url,
                           std::chrono::milliseconds timeout) = 0;
};

class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse get(const std::string& url,
                   std::chrono::milliseconds timeout) override;
};

class Clock {
 public:
  using Duration = std::chrono::nanoseconds;
  virtual ~Clock() = default;
  virtual Duration now() = 0;
  virtual void sleep_for(Duration d) = 0;
};

class SteadyClock final : public Clock {
 public:
  Duration now() override;
  void sleep_for(Duration d) override;
};

// At most floor(rate) grants in any half-open one-second window; below one
// request per second, grants are spaced 1/rate seconds apart.
class RateLimiter {
 public:
  RateLimiter(double max_per_second, Clock& clock);
  void acquire();

 private:
  double rate_;
  Clock& clock_;
  std::mutex mutex_;
  std::deque<Clock::Duration> grants_;
};

class ResponseCache {
 public:
  // Loads every <kind>.jsonl in `dir` (which may not exist yet).
  explicit ResponseCache(std::filesystem::path dir);

  // The newest body stored under the normalized URL.
  std::optional<std::string> lookup(const std::string& normalized_url) const;

  // Appends to <kind>.jsonl and refreshes manifest.json.
  void append(std::string_view kind, const CacheEntry& entry,
              std::string_view base_url);

  std::size_t size() const;

 private:
  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::string, std::less<>> bodies_;
};

struct Authorship {
  std::string author_id;
  std::string display_name;
  int position = 1;  // 1-based order in the authorship list
  bool is_corresponding = false;
  std::set<std::string> institution_ids;
};

struct RawWork {
  std::string id;
  int year = 0;
  std::int64_t cited_by_count = 0;
  std::set<std::string> referenced_work_ids;
  std::set<std::string> topic_ids;
  std::vector<Authorship> authorships;
};

// Throws MalformedResponse naming the first missing or mistyped field.
RawWork parse_work(const nlohmann::json& json, TopicSource topics);

// The work as seen from one of its authors; nullopt if not an author.
std::optional<WorkEntry> work_entry_for(const RawWork& work,
                                        std::string_view author_id);

// Lowercase, diacritics folded to ASCII, apostrophes dropped, other
// punctuation treated as space, whitespace collapsed. "Smith, John" is
// read as "John Smith".
std::string normalize_name(std::string_view name);

class OpenAlexClient {
 public:
  // A null transport is replaced by HttplibTransport unless offline; a null
  // clock by SteadyClock.
  explicit OpenAlexClient(ClientConfig config,
                          std::shared_ptr<HttpTransport> transport = nullptr,
                          std::shared_ptr<Clock> clock = nullptr);

  // Errors: NotFound, RateLimited, OfflineCacheMiss, MalformedResponse,
  // TransportFailure.
  RawWork fetch_work(std::string_view work_id);

  // All of the author's works (cursor paging), optionally only those with
  // year < before_year, ordered by year then id.
  AuthorProfile fetch_author_profile(std::string_view author_id,
                                     std::optional<int> before_year);

  // Exact normalized name match against the work's authorships, then
  // surname plus first initial. Throws Error(kNoMatch) or AmbiguousMatch.
  std::string resolve_author(std::string_view name, std::string_view work_id);

  std::size_t network_requests() const { return requests_.load(); }
  const ClientConfig& config() const { return config_; }

 private:
  nlohmann::json get_json(const std::string& url, std::string_view kind,
                          const std::function<void(const nlohmann::json&)>&
                              validate);

  ClientConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  std::shared_ptr<Clock> clock_;
  RateLimiter limiter_;
  ResponseCache cache_;
  std::atomic<std::size_t> requests_{0};
};

}  // namespace rolescope::openalex
