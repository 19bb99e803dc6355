#include "banditrec/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "banditrec/csv.hpp"
#include "banditrec/error.hpp"
#include "banditrec/format.hpp"

namespace banditrec {
namespace {

using nlohmann::json;

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::ifstream open_or_throw(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw IngestionError(p.string(), 0, "file", "cannot open");
  return in;
}

void load_users(const std::filesystem::path& path, Dataset& ds) {
  auto in = open_or_throw(path);
  const std::string file = path.string();
  std::string line;
  std::vector<std::string> f;
  std::size_t lineno = 0;
  std::size_t n_cols = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      if (!csv::split(line, f) || f.size() < 3 || f[0] != "user_id" || f[1] != "karma" ||
          f[2] != "subreddits") {
        throw IngestionError(file, 1, "header", "expected 'user_id,karma,subreddits'");
      }
      n_cols = f.size();
      continue;
    }
    if (line.empty()) continue;
    if (!csv::split(line, f)) throw IngestionError(file, lineno, "row", "unterminated quote");
    if (f.size() != n_cols) {
      throw IngestionError(file, lineno, "row",
                           "expected " + std::to_string(n_cols) + " fields, got " +
                               std::to_string(f.size()));
    }
    UserRecord u;
    u.id = f[0];
    if (u.id.empty()) throw IngestionError(file, lineno, "user_id", "empty id");
    if (!seen.insert(u.id).second) {
      throw IngestionError(file, lineno, "user_id", "duplicate user '" + u.id + "'");
    }
    auto karma = parse_int(f[1]);
    if (!karma) throw IngestionError(file, lineno, "karma", "not an integer: '" + f[1] + "'");
    u.karma = *karma;
    std::size_t start = 0;
    const std::string& subs = f[2];
    while (start <= subs.size() && !subs.empty()) {
      const auto bar = subs.find('|', start);
      const auto piece = subs.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
      if (!piece.empty()) u.subreddits.push_back(piece);
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
    for (std::size_t c = 3; c < n_cols; ++c) {
      auto v = parse_double(f[c]);
      if (!v) throw IngestionError(file, lineno, "column " + std::to_string(c + 1), "not a number");
      u.latent.push_back(*v);
    }
    ds.users.push_back(std::move(u));
  }
  if (lineno == 0) throw IngestionError(file, 1, "header", "empty file");
}

template <typename T>
T field(const json& obj, const char* name, const std::string& file, std::size_t lineno) {
  auto it = obj.find(name);
  if (it == obj.end()) throw IngestionError(file, lineno, name, "missing");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw IngestionError(file, lineno, name, "wrong type");
  }
}

std::int64_t integer_field(const json& obj, const char* name, const std::string& file,
                           std::size_t lineno) {
  auto it = obj.find(name);
  if (it == obj.end()) throw IngestionError(file, lineno, name, "missing");
  if (!it->is_number_integer()) throw IngestionError(file, lineno, name, "expected an integer");
  return it->get<std::int64_t>();
}

void load_posts(const std::filesystem::path& path, const StrategyMap& strategies, Dataset& ds) {
  auto in = open_or_throw(path);
  const std::string file = path.string();
  std::string line;
  std::size_t lineno = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception&) {
      throw IngestionError(file, lineno, "line", "invalid JSON");
    }
    if (!obj.is_object()) throw IngestionError(file, lineno, "line", "expected a JSON object");

    ItemRecord it;
    const auto& id_field = obj.find("post_id");
    if (id_field == obj.end()) throw IngestionError(file, lineno, "post_id", "missing");
    if (id_field->is_string()) {
      it.id = id_field->get<std::string>();
    } else if (id_field->is_number_integer()) {
      it.id = std::to_string(id_field->get<std::int64_t>());
    } else {
      throw IngestionError(file, lineno, "post_id", "wrong type");
    }
    if (it.id.empty()) throw IngestionError(file, lineno, "post_id", "empty id");
    if (!seen.insert(it.id).second) {
      throw IngestionError(file, lineno, "post_id", "duplicate post '" + it.id + "'");
    }
    it.author = field<std::string>(obj, "author", file, lineno);
    it.title = field<std::string>(obj, "title", file, lineno);
    it.text = field<std::string>(obj, "text", file, lineno);
    it.subreddit = field<std::string>(obj, "subreddit", file, lineno);
    it.score = integer_field(obj, "score", file, lineno);
    it.upvote_ratio = field<double>(obj, "upvote_ratio", file, lineno);
    if (!(it.upvote_ratio >= 0.0 && it.upvote_ratio <= 1.0)) {
      throw IngestionError(file, lineno, "upvote_ratio", "must lie in [0, 1]");
    }
    it.num_comments = integer_field(obj, "num_comments", file, lineno);
    if (it.num_comments < 0) throw IngestionError(file, lineno, "num_comments", "must be >= 0");
    if (obj.contains("created_utc")) it.created = integer_field(obj, "created_utc", file, lineno);

    const auto comments = obj.find("comments");
    if (comments == obj.end()) throw IngestionError(file, lineno, "comments", "missing");
    if (!comments->is_array()) throw IngestionError(file, lineno, "comments", "expected an array");
    for (const auto& c : *comments) {
      Comment cm;
      if (c.is_string()) {
        cm.body = c.get<std::string>();
      } else if (c.is_object()) {
        cm.author = field<std::string>(c, "author", file, lineno);
        cm.body = field<std::string>(c, "body", file, lineno);
        if (c.contains("created_utc")) cm.created = integer_field(c, "created_utc", file, lineno);
      } else {
        throw IngestionError(file, lineno, "comments", "entries must be strings or objects");
      }
      it.comments.push_back(std::move(cm));
    }

    if (auto s = obj.find("strategy"); s != obj.end()) {
      if (!s->is_string() || !strategies.arms().contains(s->get<std::string>())) {
        throw IngestionError(file, lineno, "strategy", "unknown strategy");
      }
      it.strategy = strategies.arms().parse(s->get<std::string>());
    } else {
      it.strategy = map_item_strategy(it, strategies);
    }
    if (auto l = obj.find("latent"); l != obj.end()) {
      try {
        it.latent = l->get<std::vector<double>>();
      } catch (const json::exception&) {
        throw IngestionError(file, lineno, "latent", "expected an array of numbers");
      }
    }
    ds.items.push_back(std::move(it));
  }
}

struct RawInteraction {
  Interaction value;
  std::size_t order;
};

void load_interactions(const std::filesystem::path& path, Dataset& ds) {
  auto in = open_or_throw(path);
  const std::string file = path.string();
  std::string line;
  std::vector<std::string> f;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      if (!csv::split(line, f) || f.size() != 4 || f[0] != "user_id" || f[1] != "item_id" ||
          f[2] != "response" || f[3] != "timestamp") {
        throw IngestionError(file, 1, "header", "expected 'user_id,item_id,response,timestamp'");
      }
      continue;
    }
    if (line.empty()) continue;
    if (!csv::split(line, f) || f.size() != 4) {
      throw IngestionError(file, lineno, "row", "expected 4 fields");
    }
    Interaction x;
    auto u = ds.find_user(f[0]);
    if (!u) {
      throw ReferentialError(file + ":" + std::to_string(lineno) + ": unknown user '" + f[0] + "'");
    }
    auto i = ds.find_item(f[1]);
    if (!i) {
      throw ReferentialError(file + ":" + std::to_string(lineno) + ": unknown item '" + f[1] + "'");
    }
    if (f[2] != "0" && f[2] != "1") {
      throw IngestionError(file, lineno, "response", "must be 0 or 1, got '" + f[2] + "'");
    }
    auto ts = parse_int(f[3]);
    if (!ts) throw IngestionError(file, lineno, "timestamp", "not an integer: '" + f[3] + "'");
    x.user = *u;
    x.item = *i;
    x.response = f[2] == "1" ? 1 : 0;
    x.timestamp = *ts;
    ds.interactions.push_back(x);
  }
  if (lineno == 0) throw IngestionError(file, 1, "header", "empty file");
}

// Keeps the last kRecentTextCap entries after a stable sort by time.
std::vector<std::string> most_recent(std::vector<std::pair<std::int64_t, std::string>> texts) {
  std::stable_sort(texts.begin(), texts.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  const std::size_t skip = texts.size() > kRecentTextCap ? texts.size() - kRecentTextCap : 0;
  std::vector<std::string> out;
  for (std::size_t i = skip; i < texts.size(); ++i) out.push_back(std::move(texts[i].second));
  return out;
}

}  // namespace

void Dataset::reindex() {
  user_index_.clear();
  item_index_.clear();
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (!user_index_.emplace(users[i].id, i).second) {
      throw IngestionError("<dataset>", i + 1, "user_id", "duplicate user '" + users[i].id + "'");
    }
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!item_index_.emplace(items[i].id, i).second) {
      throw IngestionError("<dataset>", i + 1, "post_id", "duplicate post '" + items[i].id + "'");
    }
  }
}

void Dataset::normalize_interactions() {
  // Latest timestamp wins; equal timestamps keep the later record.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> latest;
  for (std::size_t n = 0; n < interactions.size(); ++n) {
    const auto key = std::make_pair(interactions[n].user, interactions[n].item);
    auto [it, fresh] = latest.emplace(key, n);
    if (!fresh) {
      warnings.push_back("duplicate interaction (" + users[key.first].id + ", " +
                         items[key.second].id + "); keeping the latest");
      if (interactions[n].timestamp >= interactions[it->second].timestamp) it->second = n;
    }
  }
  std::vector<Interaction> kept;
  kept.reserve(latest.size());
  for (std::size_t n = 0; n < interactions.size(); ++n) {
    if (latest.at({interactions[n].user, interactions[n].item}) == n) kept.push_back(interactions[n]);
  }
  std::stable_sort(kept.begin(), kept.end(), [this](const Interaction& a, const Interaction& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    if (users[a.user].id != users[b.user].id) return users[a.user].id < users[b.user].id;
    return items[a.item].id < items[b.item].id;
  });
  interactions = std::move(kept);
}

void Dataset::collect_user_texts() {
  std::vector<std::vector<std::pair<std::int64_t, std::string>>> posts(users.size());
  std::vector<std::vector<std::pair<std::int64_t, std::string>>> comments(users.size());
  for (const auto& it : items) {
    if (auto u = find_user(it.author)) {
      posts[*u].emplace_back(it.created, it.title + "\n" + it.text);
    }
    for (const auto& c : it.comments) {
      if (auto u = find_user(c.author)) comments[*u].emplace_back(c.created, c.body);
    }
  }
  for (std::size_t u = 0; u < users.size(); ++u) {
    users[u].posts = most_recent(std::move(posts[u]));
    users[u].comments = most_recent(std::move(comments[u]));
  }
}

std::optional<std::size_t> Dataset::find_user(const std::string& id) const {
  auto it = user_index_.find(id);
  if (it == user_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Dataset::find_item(const std::string& id) const {
  auto it = item_index_.find(id);
  if (it == item_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Dataset::positive_count() const {
  return static_cast<std::size_t>(std::count_if(
      interactions.begin(), interactions.end(), [](const Interaction& x) { return x.response == 1; }));
}

Dataset load_dataset(const DatasetPaths& paths, const StrategyMap& strategies) {
  Dataset ds;
  ds.arms = strategies.arms();
  load_users(paths.users, ds);
  load_posts(paths.posts, strategies, ds);
  ds.reindex();
  load_interactions(paths.interactions, ds);
  ds.normalize_interactions();
  ds.collect_user_texts();
  return ds;
}

DatasetPaths dataset_paths_in(const std::filesystem::path& dir) {
  return {dir / "users.csv", dir / "posts.jsonl", dir / "interactions.csv"};
}

void write_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto paths = dataset_paths_in(dir);

  {
    std::ofstream out(dir / "arms.txt");
    if (!out) throw Error("cannot write " + (dir / "arms.txt").string());
    for (const auto& name : ds.arms.names()) out << name << '\n';
  }

  std::size_t n_latent = 0;
  for (const auto& u : ds.users) n_latent = std::max(n_latent, u.latent.size());
  {
    std::ofstream out(paths.users);
    if (!out) throw Error("cannot write " + paths.users.string());
    out << "user_id,karma,subreddits";
    for (std::size_t c = 0; c < n_latent; ++c) out << ",latent_" << c;
    out << '\n';
    for (const auto& u : ds.users) {
      std::string subs;
      for (std::size_t s = 0; s < u.subreddits.size(); ++s) {
        if (s > 0) subs += '|';
        subs += u.subreddits[s];
      }
      out << csv::escape(u.id) << ',' << u.karma << ',' << csv::escape(subs);
      for (std::size_t c = 0; c < n_latent; ++c) {
        out << ',' << format_exact(c < u.latent.size() ? u.latent[c] : 0.0);
      }
      out << '\n';
    }
  }
  {
    std::ofstream out(paths.posts);
    if (!out) throw Error("cannot write " + paths.posts.string());
    for (const auto& it : ds.items) {
      json obj = {{"post_id", it.id},
                  {"author", it.author},
                  {"title", it.title},
                  {"text", it.text},
                  {"subreddit", it.subreddit},
                  {"score", it.score},
                  {"upvote_ratio", it.upvote_ratio},
                  {"num_comments", it.num_comments},
                  {"created_utc", it.created},
                  {"strategy", ds.arms.name(it.strategy)}};
      auto comments = json::array();
      for (const auto& c : it.comments) {
        comments.push_back({{"author", c.author}, {"body", c.body}, {"created_utc", c.created}});
      }
      obj["comments"] = std::move(comments);
      if (!it.latent.empty()) obj["latent"] = it.latent;
      out << obj.dump() << '\n';
    }
  }
  {
    std::ofstream out(paths.interactions);
    if (!out) throw Error("cannot write " + paths.interactions.string());
    out << "user_id,item_id,response,timestamp\n";
    for (const auto& x : ds.interactions) {
      out << csv::escape(ds.users[x.user].id) << ',' << csv::escape(ds.items[x.item].id) << ','
          << x.response << ',' << x.timestamp << '\n';
    }
  }
}

Dataset load_normalized_dataset(const std::filesystem::path& dir) {
  const auto arms_path = dir / "arms.txt";
  std::ifstream in(arms_path);
  if (!in) throw StateError("no dataset at " + dir.string() + " (run ingest or simulate first)");
  std::vector<std::string> names;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) names.push_back(line);
  }
  ArmCatalog arms(std::move(names));
  return load_dataset(dataset_paths_in(dir), StrategyMap(arms, 0));
}

}  // namespace banditrec
