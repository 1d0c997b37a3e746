#include "ontorec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "ontorec/errors.hpp"
#include "ontorec/rng.hpp"

namespace ontorec {

namespace {

constexpr int64_t kLogWindowStart = 1709251200;  // 2024-03-01T00:00:00Z
constexpr int64_t kLogWindowSeconds = 14 * 86400;
constexpr size_t kMaxSessionLength = 50;

constexpr const char* kBrowserAgents[] = {
    "Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/120.0 Safari/537.36",
    "Mozilla/5.0 (Macintosh; Intel Mac OS X 10_15_7) AppleWebKit/605.1.15 (KHTML, like Gecko) Version/17.1 Safari/605.1.15",
    "Mozilla/5.0 (X11; Linux x86_64; rv:121.0) Gecko/20100101 Firefox/121.0",
    "Mozilla/5.0 (Windows NT 10.0; Win64; x64; rv:120.0) Gecko/20100101 Firefox/120.0",
    "Mozilla/5.0 (iPhone; CPU iPhone OS 17_1 like Mac OS X) AppleWebKit/605.1.15 (KHTML, like Gecko) Version/17.1 Mobile/15E148 Safari/604.1",
    "Mozilla/5.0 (Linux; Android 14; Pixel 7) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/120.0 Mobile Safari/537.36",
};

constexpr const char* kCrawlerAgents[] = {
    "Googlebot/2.1 (+http://www.google.com/bot.html)",
    "Mozilla/5.0 (compatible; bingbot/2.0; +http://www.bing.com/bingbot.htm)",
    "Mozilla/5.0 (compatible; Baiduspider/2.0; +http://www.baidu.com/search/spider.html)",
    "Mozilla/5.0 (compatible; Yahoo! Slurp; http://help.yahoo.com/help/us/ysearch/slurp)",
    "Mozilla/5.0 (compatible; YandexBot/3.0; +http://yandex.com/bots)",
};

constexpr const char* kMonths[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                   "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

std::string clf_timestamp(int64_t epoch) {
  std::time_t t = static_cast<std::time_t>(epoch);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%02d/%s/%04d:%02d:%02d:%02d +0000",
                tm.tm_mday, kMonths[tm.tm_mon], tm.tm_year + 1900, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

std::string padded(const char* prefix, size_t index, int width) {
  std::string digits = std::to_string(index + 1);
  if (digits.size() < static_cast<size_t>(width)) {
    digits.insert(0, static_cast<size_t>(width) - digits.size(), '0');
  }
  return prefix + digits;
}

int width_for(size_t count) {
  int width = 1;
  while (count >= 10) {
    count /= 10;
    ++width;
  }
  return width < 2 ? 2 : width;
}

std::string log_line(const std::string& ip, int64_t ts, const std::string& url,
                     uint64_t bytes, const std::string& referrer,
                     const std::string& agent) {
  std::string line = ip;
  line += " - - [";
  line += clf_timestamp(ts);
  line += "] \"GET ";
  line += url;
  line += " HTTP/1.1\" 200 ";
  line += std::to_string(bytes);
  line += " \"";
  line += referrer;
  line += "\" \"";
  line += agent;
  line += "\"";
  return line;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.product_count == 0 || cfg.category_count == 0 ||
      cfg.session_count == 0) {
    throw Error(ErrorCode::Config, "synthetic counts must be positive");
  }
  if (cfg.category_count > cfg.product_count) {
    throw Error(ErrorCode::Config,
                "category_count must not exceed product_count");
  }
  if (cfg.mean_session_length < 1.0) {
    throw Error(ErrorCode::Config, "mean_session_length must be at least 1");
  }
  if (cfg.intra_category_bias < 0.0 || cfg.intra_category_bias > 1.0) {
    throw Error(ErrorCode::Config, "intra_category_bias must be in [0, 1]");
  }
  if (cfg.crawler_fraction < 0.0 || cfg.crawler_fraction >= 1.0) {
    throw Error(ErrorCode::Config, "crawler_fraction must be in [0, 1)");
  }

  const int cat_width = width_for(cfg.category_count);
  const int prod_width = width_for(cfg.product_count);

  std::vector<std::string> products(cfg.product_count);
  std::vector<std::string> urls(cfg.product_count);
  std::vector<size_t> category_of(cfg.product_count);
  std::vector<std::vector<size_t>> category_members(cfg.category_count);
  for (size_t i = 0; i < cfg.product_count; ++i) {
    products[i] = padded("p", i, prod_width);
    urls[i] = "/products/" + products[i];
    category_of[i] = i % cfg.category_count;
    category_members[i % cfg.category_count].push_back(i);
  }

  // Ontology: product -> category -> product concept; instance distances are
  // 0 within a product, 2 within a category, 4 across categories.
  std::ostringstream ontology;
  ontology << "# synthetic shop ontology: " << cfg.product_count
           << " products in " << cfg.category_count << " categories\n";
  ontology << "concept product\nconcept supplier\nconcept warehouse\n";
  for (size_t c = 0; c < cfg.category_count; ++c) {
    ontology << "concept " << padded("cat", c, cat_width) << '\n';
  }
  for (size_t i = 0; i < cfg.product_count; ++i) {
    ontology << "concept " << padded("prod", i, prod_width) << '\n';
  }
  ontology << "isa supplier product\nisa warehouse product\n";
  for (size_t c = 0; c < cfg.category_count; ++c) {
    ontology << "isa " << padded("cat", c, cat_width) << " product\n";
  }
  for (size_t i = 0; i < cfg.product_count; ++i) {
    ontology << "isa " << padded("prod", i, prod_width) << ' '
             << padded("cat", category_of[i], cat_width) << '\n';
  }
  ontology << "rel supplied_by product supplier\n";
  ontology << "rel stored_in product warehouse\n";
  ontology << "axiom disjoint supplier warehouse\n";
  for (size_t i = 0; i < cfg.product_count; ++i) {
    ontology << "instance " << products[i] << ' '
             << padded("prod", i, prod_width) << '\n';
  }

  std::ostringstream annotations;
  annotations << "# url -> instance annotations\n";
  for (size_t i = 0; i < cfg.product_count; ++i) {
    annotations << urls[i] << '\t' << products[i] << '\n';
  }

  // zipf-ish popularity: low product indices draw most of the traffic, the
  // way a real catalog does; keeps intra-category pairs above min_sup
  std::vector<double> popularity(cfg.product_count);
  for (size_t i = 0; i < cfg.product_count; ++i) {
    popularity[i] = 1.0 / std::pow(static_cast<double>(i + 1), 0.8);
  }
  const auto make_picker = [&](const std::vector<size_t>& members) {
    std::vector<double> cumulative(members.size());
    double total = 0.0;
    for (size_t i = 0; i < members.size(); ++i) {
      total += popularity[members[i]];
      cumulative[i] = total;
    }
    return cumulative;
  };
  std::vector<size_t> all_products(cfg.product_count);
  for (size_t i = 0; i < cfg.product_count; ++i) all_products[i] = i;
  const auto global_cum = make_picker(all_products);
  std::vector<std::vector<double>> category_cum(cfg.category_count);
  for (size_t c = 0; c < cfg.category_count; ++c) {
    category_cum[c] = make_picker(category_members[c]);
  }
  const auto pick = [](const std::vector<double>& cumulative,
                       const std::vector<size_t>& members, Rng& rng) {
    const double x = rng.unit() * cumulative.back();
    const auto at = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    const size_t idx = std::min<size_t>(at - cumulative.begin(), members.size() - 1);
    return members[idx];
  };

  Rng rng(cfg.seed);
  const double stop_p = 1.0 / cfg.mean_session_length;

  std::vector<std::pair<int64_t, std::string>> lines;
  size_t view_count = 0;
  for (size_t s = 0; s < cfg.session_count; ++s) {
    char ip[24];
    std::snprintf(ip, sizeof(ip), "10.%zu.%zu.%zu", (s >> 16) & 255,
                  (s >> 8) & 255, s & 255);
    const std::string agent = kBrowserAgents[rng.below(std::size(kBrowserAgents))];

    size_t length = 1;
    while (length < kMaxSessionLength && rng.unit() >= stop_p) ++length;

    int64_t ts = kLogWindowStart + static_cast<int64_t>(rng.below(kLogWindowSeconds));
    size_t current = pick(global_cum, all_products, rng);
    std::string referrer = "-";
    for (size_t v = 0; v < length; ++v) {
      if (v > 0) {
        ts += 10 + static_cast<int64_t>(rng.below(290));
        referrer = "http://shop.example.com" + urls[current];
        // category-biased walk, never repeating the current page
        const size_t cat = category_of[current];
        const auto& members = category_members[cat];
        size_t next = current;
        if (members.size() > 1 && rng.chance(cfg.intra_category_bias)) {
          while (next == current) {
            next = pick(category_cum[cat], members, rng);
          }
        } else if (cfg.product_count > 1) {
          while (next == current) {
            next = pick(global_cum, all_products, rng);
          }
        }
        current = next;
      }
      const uint64_t bytes = 500 + rng.below(20000);
      lines.emplace_back(ts, log_line(ip, ts, urls[current], bytes, referrer, agent));
      ++view_count;
    }
  }

  const auto noise_count = static_cast<size_t>(
      std::llround(static_cast<double>(view_count) * cfg.crawler_fraction));
  for (size_t i = 0; i < noise_count; ++i) {
    char ip[24];
    std::snprintf(ip, sizeof(ip), "66.249.%zu.%zu", (i >> 8) & 255, i & 255);
    const std::string agent = kCrawlerAgents[rng.below(std::size(kCrawlerAgents))];
    const int64_t ts = kLogWindowStart + static_cast<int64_t>(rng.below(kLogWindowSeconds));
    const std::string url = rng.chance(0.6)
                                ? urls[rng.below(cfg.product_count)]
                                : std::string("/robots.txt");
    lines.emplace_back(ts, log_line(ip, ts, url, 500 + rng.below(2000), "-", agent));
  }

  std::sort(lines.begin(), lines.end());

  SyntheticCorpus corpus;
  corpus.ontology_text = ontology.str();
  corpus.annotations_text = annotations.str();
  corpus.log_text.reserve(lines.size() * 160);
  for (const auto& [ts, line] : lines) {
    corpus.log_text += line;
    corpus.log_text += '\n';
  }
  return corpus;
}

}  // namespace ontorec
