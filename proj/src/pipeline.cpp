#include "banditrec/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include "banditrec/csv.hpp"
#include "banditrec/error.hpp"
#include "banditrec/format.hpp"
#include "banditrec/nmf.hpp"
#include "banditrec/selection.hpp"
#include "banditrec/tfidf.hpp"

namespace banditrec {
namespace {

constexpr int kManifestVersion = 1;

std::vector<std::string> join_tokens(const std::vector<std::string>& texts) {
  std::vector<std::string> out;
  for (const auto& t : texts) {
    auto toks = tokenize(t);
    out.insert(out.end(), std::make_move_iterator(toks.begin()), std::make_move_iterator(toks.end()));
  }
  return out;
}

std::size_t common_length(const auto& records, const char* what) {
  std::size_t n = records.empty() ? 0 : records.front().latent.size();
  for (const auto& r : records) {
    if (r.latent.size() != n) {
      throw ContractError(std::string(what) + " records disagree on latent dimension");
    }
  }
  return n;
}

void append(std::vector<double>& row, const auto& values) {
  row.insert(row.end(), values.begin(), values.end());
}

}  // namespace

CorpusFeatures extract_corpus_features(const Dataset& ds, const TextResources& res,
                                       const FeatureConfig& cfg, Exec exec) {
  if (ds.items.empty()) throw ContractError("dataset has no items");
  CorpusFeatures out;
  const std::size_t n_users = ds.users.size();
  const std::size_t n_items = ds.items.size();

  std::vector<std::vector<std::string>> docs;
  docs.reserve(n_users + n_items);
  for (const auto& u : ds.users) {
    std::vector<std::string> texts = u.comments;
    texts.insert(texts.end(), u.posts.begin(), u.posts.end());
    docs.push_back(join_tokens(texts));
  }
  for (const auto& it : ds.items) docs.push_back(join_tokens({it.title, it.text}));

  const TfidfModel tfidf = build_tfidf(docs);
  out.vocabulary = tfidf.vocabulary;
  out.nmf_rank = cfg.nmf_rank;
  Matrix W = Matrix::Zero(static_cast<Eigen::Index>(docs.size()), static_cast<Eigen::Index>(cfg.nmf_rank));
  if (!tfidf.vocabulary.empty()) {
    NmfOptions opt;
    opt.rank = cfg.nmf_rank;
    opt.max_iters = cfg.nmf_iters;
    opt.tol = cfg.nmf_tol;
    opt.seed = cfg.seed;
    opt.exec = exec;
    W = nmf_factorize(tfidf.matrix, opt).W;
  }
  auto w_row = [&](std::size_t r) {
    std::vector<double> v(cfg.nmf_rank);
    for (std::size_t k = 0; k < cfg.nmf_rank; ++k) v[k] = W(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k));
    return v;
  };

  for (std::size_t u = 0; u < n_users; ++u) {
    const auto& rec = ds.users[u];
    UserFeatures f;
    f.user_id = rec.id;
    f.karma = rec.karma;
    f.subreddits = rec.subreddits;
    f.emotion = score_emotions(docs[u], res.lexicon);
    f.big_five = infer_personality(f.emotion, res.personality);
    if (!res.empathy_seeds.empty() && res.embeddings.size() > 0) {
      f.empathy = empathy_score(docs[u], res.embeddings, res.empathy_seeds);
    }
    f.comment_vec = w_row(u);
    f.latent = rec.latent;
    out.users.push_back(std::move(f));
  }

  std::vector<std::string> item_subs;
  for (const auto& it : ds.items) item_subs.push_back(it.subreddit);
  TopicFeatures topics = build_topic_features(item_subs, cfg.top_subreddits);
  for (std::size_t i = 0; i < n_items; ++i) {
    const auto& rec = ds.items[i];
    ItemFeatures f;
    f.item_id = rec.id;
    f.subreddit = rec.subreddit;
    f.score = rec.score;
    f.upvote_ratio = rec.upvote_ratio;
    f.num_comments = rec.num_comments;
    f.emotion = score_emotions(docs[n_users + i], res.lexicon);
    std::vector<std::string> bodies;
    for (const auto& c : rec.comments) bodies.push_back(c.body);
    f.tone = score_emotions(join_tokens(bodies), res.lexicon);
    f.topic_bits = std::move(topics.item_bits[i]);
    f.strategy = rec.strategy;
    f.latent = rec.latent;
    f.text_vec = w_row(n_users + i);
    out.items.push_back(std::move(f));
  }
  out.topics = std::move(topics.topics);
  return out;
}

FeaturePipeline FeaturePipeline::fit(const Dataset& ds, const CorpusFeatures& corpus,
                                     std::span<const std::size_t> train, const FeatureConfig& cfg) {
  if (corpus.users.size() != ds.users.size() || corpus.items.size() != ds.items.size()) {
    throw ContractError("corpus features do not match the dataset");
  }
  FeaturePipeline p;
  p.config_ = cfg;
  p.arm_names_ = ds.arms.names();
  p.vocabulary_ = corpus.vocabulary;
  p.topics_ = corpus.topics.topics();
  p.train_rows_ = train.size();
  const std::size_t rank = corpus.nmf_rank;
  const std::size_t n_topics = corpus.topics.size();
  const std::size_t user_latent = common_length(corpus.users, "user");
  const std::size_t item_latent = common_length(corpus.items, "item");

  // Column names.
  p.user_columns_.push_back("karma");
  for (auto e : kEmotionNames) p.user_columns_.push_back("emotion_" + std::string(e));
  for (auto t : kTraitNames) p.user_columns_.push_back("big5_" + std::string(t));
  p.user_columns_.push_back("empathy");
  for (std::size_t k = 0; k < rank; ++k) p.user_columns_.push_back("comment_vec_" + std::to_string(k));
  for (std::size_t k = 0; k < rank; ++k) p.user_columns_.push_back("agg_comment_vec_" + std::to_string(k));
  for (const auto& t : p.topics_) p.user_columns_.push_back("topic_" + t);
  for (std::size_t k = 0; k < user_latent; ++k) p.user_columns_.push_back("latent_" + std::to_string(k));

  p.item_columns_ = {"score", "upvote_ratio", "num_comments"};
  for (auto e : kEmotionNames) p.item_columns_.push_back("emotion_" + std::string(e));
  for (auto e : kEmotionNames) p.item_columns_.push_back("tone_" + std::string(e));
  for (const auto& t : p.topics_) p.item_columns_.push_back("topic_" + t);
  for (std::size_t k = 0; k < item_latent; ++k) p.item_columns_.push_back("latent_" + std::to_string(k));

  // Fold-dependent user aggregates.
  std::unordered_map<std::string, std::vector<double>> item_vecs;
  for (const auto& it : corpus.items) item_vecs.emplace(it.item_id, it.text_vec);
  std::vector<std::vector<std::string>> user_items(ds.users.size());
  for (std::size_t idx : train) {
    if (idx >= ds.interactions.size()) throw ContractError("training index out of range");
    const auto& x = ds.interactions[idx];
    user_items[x.user].push_back(ds.items[x.item].id);
  }

  const auto n_users = static_cast<Eigen::Index>(ds.users.size());
  const auto n_items = static_cast<Eigen::Index>(ds.items.size());
  p.user_raw_.resize(n_users, static_cast<Eigen::Index>(p.user_columns_.size()));
  for (Eigen::Index u = 0; u < n_users; ++u) {
    const auto& f = corpus.users[static_cast<std::size_t>(u)];
    std::vector<double> topic_bits(n_topics, 0.0);
    for (const auto& s : f.subreddits) {
      if (auto t = corpus.topics.index_of(s)) topic_bits[*t] = 1.0;
    }
    for (const auto& id : user_items[static_cast<std::size_t>(u)]) {
      if (auto t = corpus.topics.index_of(ds.items[*ds.find_item(id)].subreddit)) topic_bits[*t] = 1.0;
    }
    std::vector<double> row{static_cast<double>(f.karma)};
    append(row, f.emotion);
    append(row, f.big_five);
    row.push_back(f.empathy);
    append(row, f.comment_vec);
    append(row, aggregate_comment_vectors(user_items[static_cast<std::size_t>(u)], item_vecs, rank));
    append(row, topic_bits);
    append(row, f.latent);
    for (std::size_t c = 0; c < row.size(); ++c) p.user_raw_(u, static_cast<Eigen::Index>(c)) = quantize(row[c]);
    p.user_ids_.push_back(f.user_id);
  }
  p.item_raw_.resize(n_items, static_cast<Eigen::Index>(p.item_columns_.size()));
  for (Eigen::Index i = 0; i < n_items; ++i) {
    const auto& f = corpus.items[static_cast<std::size_t>(i)];
    std::vector<double> row{static_cast<double>(f.score), f.upvote_ratio,
                            static_cast<double>(f.num_comments)};
    append(row, f.emotion);
    append(row, f.tone);
    append(row, f.topic_bits);
    append(row, f.latent);
    for (std::size_t c = 0; c < row.size(); ++c) p.item_raw_(i, static_cast<Eigen::Index>(c)) = quantize(row[c]);
    p.item_ids_.push_back(f.item_id);
    const ArmId strategy = ds.items[static_cast<std::size_t>(i)].strategy;
    if (strategy >= ds.arms.size()) {
      throw ReferentialError("item '" + f.item_id + "' has no mapped strategy");
    }
    p.item_strategy_.push_back(strategy);
  }

  // Feature selection on training rows.
  const auto n_train = static_cast<Eigen::Index>(train.size());
  Matrix X(n_train, p.user_raw_.cols());
  std::vector<int> y;
  for (Eigen::Index r = 0; r < n_train; ++r) {
    const auto& x = ds.interactions[train[static_cast<std::size_t>(r)]];
    X.row(r) = p.user_raw_.row(static_cast<Eigen::Index>(x.user));
    y.push_back(x.response);
  }
  FeatureSelection sel = select_features(X, y, std::max<std::size_t>(cfg.select_m, 1));
  p.selected_ = std::move(sel.kept);
  if (sel.warning) p.warnings_.push_back(*sel.warning);

  // Standardization statistics over training rows.
  const auto n_sel = static_cast<Eigen::Index>(p.selected_.size());
  const Eigen::Index width = n_sel + p.item_raw_.cols();
  p.mean_ = Vector::Zero(width);
  p.std_ = Vector::Zero(width);
  if (n_train > 0) {
    auto value = [&](Eigen::Index r, Eigen::Index c) {
      const auto& x = ds.interactions[train[static_cast<std::size_t>(r)]];
      return c < n_sel ? p.user_raw_(static_cast<Eigen::Index>(x.user),
                                     static_cast<Eigen::Index>(p.selected_[static_cast<std::size_t>(c)]))
                       : p.item_raw_(static_cast<Eigen::Index>(x.item), c - n_sel);
    };
    for (Eigen::Index c = 0; c < width; ++c) {
      double sum = 0.0;
      for (Eigen::Index r = 0; r < n_train; ++r) sum += value(r, c);
      const double mean = sum / static_cast<double>(n_train);
      double ss = 0.0;
      for (Eigen::Index r = 0; r < n_train; ++r) {
        const double d = value(r, c) - mean;
        ss += d * d;
      }
      p.mean_(c) = mean;
      p.std_(c) = std::sqrt(ss / static_cast<double>(n_train));
    }
  }

  p.item_std_.resize(n_items, p.item_raw_.cols());
  for (Eigen::Index i = 0; i < n_items; ++i) {
    for (Eigen::Index c = 0; c < p.item_raw_.cols(); ++c) {
      const double s = p.std_(n_sel + c);
      const double v = p.item_raw_(i, c);
      p.item_std_(i, c) = s < kStdFloor ? v : (v - p.mean_(n_sel + c)) / s;
    }
  }

  // Arm descriptors from the distinct training items of each arm.
  std::vector<std::set<std::size_t>> arm_items(ds.arms.size());
  for (std::size_t idx : train) {
    const auto item = ds.interactions[idx].item;
    arm_items[p.item_strategy_[item]].insert(item);
  }
  for (std::size_t a = 0; a < ds.arms.size(); ++a) {
    Vector mean = Vector::Zero(p.item_raw_.cols());
    for (std::size_t item : arm_items[a]) mean += p.item_std_.row(static_cast<Eigen::Index>(item)).transpose();
    if (!arm_items[a].empty()) mean /= static_cast<double>(arm_items[a].size());
    p.arm_descriptors_.push_back(std::move(mean));
  }

  p.fitted_ = true;
  return p;
}

void FeaturePipeline::require_fitted() const {
  if (!fitted_) throw StateError("feature pipeline is not fitted");
}

std::size_t FeaturePipeline::dim() const {
  require_fitted();
  return selected_.size() + static_cast<std::size_t>(item_raw_.cols()) + arm_names_.size();
}

std::size_t FeaturePipeline::arm_count() const {
  require_fitted();
  return arm_names_.size();
}

ArmId FeaturePipeline::item_strategy(std::size_t item) const {
  require_fitted();
  if (item >= item_strategy_.size()) throw ReferentialError("item index out of range");
  return item_strategy_[item];
}

Vector FeaturePipeline::user_part(std::size_t user) const {
  if (user >= user_ids_.size()) throw ReferentialError("user index out of range");
  Vector out(static_cast<Eigen::Index>(selected_.size()));
  for (std::size_t k = 0; k < selected_.size(); ++k) {
    const auto c = static_cast<Eigen::Index>(k);
    const double v = user_raw_(static_cast<Eigen::Index>(user), static_cast<Eigen::Index>(selected_[k]));
    out(c) = std_(c) < kStdFloor ? v : (v - mean_(c)) / std_(c);
  }
  return out;
}

Vector FeaturePipeline::assemble_context(std::size_t user, std::size_t item) const {
  require_fitted();
  const ArmId arm = item_strategy(item);
  const Vector u = user_part(user);
  Vector x = Vector::Zero(static_cast<Eigen::Index>(dim()));
  x.head(u.size()) = u;
  x.segment(u.size(), item_std_.cols()) = item_std_.row(static_cast<Eigen::Index>(item)).transpose();
  x(u.size() + item_std_.cols() + static_cast<Eigen::Index>(arm)) = 1.0;
  return x;
}

std::vector<Vector> FeaturePipeline::arm_contexts(std::size_t user) const {
  require_fitted();
  const Vector u = user_part(user);
  std::vector<Vector> out;
  for (std::size_t a = 0; a < arm_names_.size(); ++a) {
    Vector x = Vector::Zero(static_cast<Eigen::Index>(dim()));
    x.head(u.size()) = u;
    x.segment(u.size(), item_std_.cols()) = arm_descriptors_[a];
    x(u.size() + item_std_.cols() + static_cast<Eigen::Index>(a)) = 1.0;
    out.push_back(std::move(x));
  }
  return out;
}

nlohmann::json FeaturePipeline::manifest() const {
  require_fitted();
  nlohmann::json m;
  m["format"] = "banditrec-pipeline";
  m["version"] = kManifestVersion;
  m["dimension"] = dim();
  m["arms"] = arm_names_;
  m["users"] = user_ids_.size();
  m["items"] = item_ids_.size();
  m["train_interactions"] = train_rows_;
  m["user_columns"] = user_columns_;
  m["item_columns"] = item_columns_;
  m["selected_user_columns"] = selected_;
  std::vector<std::string> names;
  for (std::size_t c : selected_) names.push_back(user_columns_[c]);
  m["selected_user_column_names"] = names;
  m["standardization"] = {{"mean", std::vector<double>(mean_.begin(), mean_.end())},
                          {"std", std::vector<double>(std_.begin(), std_.end())}};
  auto desc = nlohmann::json::array();
  for (const auto& d : arm_descriptors_) desc.push_back(std::vector<double>(d.begin(), d.end()));
  m["arm_descriptors"] = desc;
  m["vocabulary"] = vocabulary_;
  m["topics"] = topics_;
  m["config"] = {{"nmf_rank", config_.nmf_rank},
                 {"nmf_iters", config_.nmf_iters},
                 {"nmf_tol", config_.nmf_tol},
                 {"top_subreddits", config_.top_subreddits},
                 {"select_m", config_.select_m},
                 {"seed", config_.seed}};
  m["warnings"] = warnings_;
  return m;
}

void FeaturePipeline::save(const std::filesystem::path& dir) const {
  require_fitted();
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "manifest.json");
    if (!out) throw Error("cannot write " + (dir / "manifest.json").string());
    out << manifest().dump(1) << '\n';
  }
  {
    std::ofstream out(dir / "user_features.csv");
    if (!out) throw Error("cannot write " + (dir / "user_features.csv").string());
    out << "user_id";
    for (const auto& c : user_columns_) out << ',' << csv::escape(c);
    out << '\n';
    for (Eigen::Index u = 0; u < user_raw_.rows(); ++u) {
      out << csv::escape(user_ids_[static_cast<std::size_t>(u)]);
      for (Eigen::Index c = 0; c < user_raw_.cols(); ++c) out << ',' << format_real(user_raw_(u, c));
      out << '\n';
    }
  }
  {
    std::ofstream out(dir / "item_features.csv");
    if (!out) throw Error("cannot write " + (dir / "item_features.csv").string());
    out << "item_id,strategy";
    for (const auto& c : item_columns_) out << ',' << csv::escape(c);
    out << '\n';
    for (Eigen::Index i = 0; i < item_raw_.rows(); ++i) {
      out << csv::escape(item_ids_[static_cast<std::size_t>(i)]) << ','
          << arm_names_[item_strategy_[static_cast<std::size_t>(i)]];
      for (Eigen::Index c = 0; c < item_raw_.cols(); ++c) out << ',' << format_real(item_raw_(i, c));
      out << '\n';
    }
  }
}

namespace {

Matrix read_feature_table(const std::filesystem::path& path, std::size_t lead_columns,
                          std::size_t value_columns, std::vector<std::vector<std::string>>& leads) {
  std::ifstream in(path);
  if (!in) throw StateError("missing feature file " + path.string());
  std::string line;
  std::vector<std::string> f;
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    if (!csv::split(line, f) || f.size() != lead_columns + value_columns) {
      throw StateError(path.string() + ":" + std::to_string(lineno) + ": wrong field count");
    }
    leads.emplace_back(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(lead_columns));
    std::vector<double> row;
    for (std::size_t c = lead_columns; c < f.size(); ++c) {
      try {
        row.push_back(std::stod(f[c]));
      } catch (const std::exception&) {
        throw StateError(path.string() + ":" + std::to_string(lineno) + ": bad number");
      }
    }
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(value_columns));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < value_columns; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

}  // namespace

FeaturePipeline FeaturePipeline::load(const std::filesystem::path& dir, const Dataset& ds) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw StateError("missing pipeline manifest " + (dir / "manifest.json").string());
  FeaturePipeline p;
  try {
    nlohmann::json m;
    in >> m;
    if (m.at("format") != "banditrec-pipeline" || m.at("version") != kManifestVersion) {
      throw StateError("unsupported pipeline manifest");
    }
    p.arm_names_ = m.at("arms").get<std::vector<std::string>>();
    p.user_columns_ = m.at("user_columns").get<std::vector<std::string>>();
    p.item_columns_ = m.at("item_columns").get<std::vector<std::string>>();
    p.selected_ = m.at("selected_user_columns").get<std::vector<std::size_t>>();
    const auto mean = m.at("standardization").at("mean").get<std::vector<double>>();
    const auto sd = m.at("standardization").at("std").get<std::vector<double>>();
    p.mean_ = Eigen::Map<const Vector>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    p.std_ = Eigen::Map<const Vector>(sd.data(), static_cast<Eigen::Index>(sd.size()));
    for (const auto& d : m.at("arm_descriptors")) {
      const auto v = d.get<std::vector<double>>();
      p.arm_descriptors_.push_back(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    p.vocabulary_ = m.at("vocabulary").get<std::vector<std::string>>();
    p.topics_ = m.at("topics").get<std::vector<std::string>>();
    const auto& c = m.at("config");
    p.config_.nmf_rank = c.at("nmf_rank");
    p.config_.nmf_iters = c.at("nmf_iters");
    p.config_.nmf_tol = c.at("nmf_tol");
    p.config_.top_subreddits = c.at("top_subreddits");
    p.config_.select_m = c.at("select_m");
    p.config_.seed = c.at("seed");
    p.train_rows_ = m.at("train_interactions");
    p.warnings_ = m.at("warnings").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw StateError(std::string("malformed pipeline manifest: ") + e.what());
  }
  if (p.arm_names_ != ds.arms.names()) throw StateError("pipeline arms do not match the dataset");

  std::vector<std::vector<std::string>> user_leads, item_leads;
  p.user_raw_ = read_feature_table(dir / "user_features.csv", 1, p.user_columns_.size(), user_leads);
  p.item_raw_ = read_feature_table(dir / "item_features.csv", 2, p.item_columns_.size(), item_leads);
  if (user_leads.size() != ds.users.size() || item_leads.size() != ds.items.size()) {
    throw StateError("pipeline feature files do not match the dataset");
  }
  for (std::size_t u = 0; u < ds.users.size(); ++u) {
    if (user_leads[u][0] != ds.users[u].id) throw StateError("pipeline user order does not match the dataset");
    p.user_ids_.push_back(ds.users[u].id);
  }
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    if (item_leads[i][0] != ds.items[i].id) throw StateError("pipeline item order does not match the dataset");
    p.item_ids_.push_back(ds.items[i].id);
    p.item_strategy_.push_back(ds.arms.parse(item_leads[i][1]));
  }
  const auto n_sel = static_cast<Eigen::Index>(p.selected_.size());
  if (p.mean_.size() != n_sel + p.item_raw_.cols() || p.std_.size() != p.mean_.size()) {
    throw StateError("pipeline standardization statistics have the wrong length");
  }
  p.item_std_.resize(p.item_raw_.rows(), p.item_raw_.cols());
  for (Eigen::Index i = 0; i < p.item_raw_.rows(); ++i) {
    for (Eigen::Index c = 0; c < p.item_raw_.cols(); ++c) {
      const double s = p.std_(n_sel + c);
      const double v = p.item_raw_(i, c);
      p.item_std_(i, c) = s < kStdFloor ? v : (v - p.mean_(n_sel + c)) / s;
    }
  }
  p.fitted_ = true;
  return p;
}

}  // namespace banditrec
