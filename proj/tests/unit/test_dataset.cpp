#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "banditrec/dataset.hpp"
#include "banditrec/error.hpp"
#include "banditrec/strategy_map.hpp"

using namespace banditrec;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot(BANDITREC_SOURCE_DIR);
const fs::path kCorpus = kRoot / "tests/fixtures/corpus";

StrategyMap bundled_map() {
  return StrategyMap::load(kRoot / "data/strategy_map.csv", ArmCatalog(), ArmCatalog().parse("Distraction"));
}

Dataset fixture() {
  return load_dataset({kCorpus / "users.csv", kCorpus / "posts.jsonl", kCorpus / "interactions.csv"}, bundled_map());
}

std::string summary(const Dataset& ds) {
  std::string s = fmt::format("users {}\nitems {}\ninteractions {}\npositives {}\n", ds.users.size(),
                              ds.items.size(), ds.interactions.size(), ds.positive_count());
  for (const auto& u : ds.users) {
    s += fmt::format("user {} karma {} subreddits {} posts {} comments {}\n", u.id, u.karma, u.subreddits.size(),
                     u.posts.size(), u.comments.size());
  }
  for (const auto& it : ds.items) {
    s += fmt::format("item {} {} {} comments {}\n", it.id, it.subreddit, ds.arms.name(it.strategy),
                     it.comments.size());
  }
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& body) const {
    std::ofstream(path / name) << body;
    return path / name;
  }
};

const char* kUsers = "user_id,karma,subreddits\nu1,10,a|b\nu2,5,b\n";
const char* kPost =
    R"({"post_id":"p1","author":"u1","title":"t","text":"x","subreddit":"a","score":1,"upvote_ratio":0.5,"num_comments":0,"comments":[]})"
    "\n";

}  // namespace

TEST_CASE("fixture corpus matches the committed summary") {
  const auto ds = fixture();
  CHECK(summary(ds) == slurp(kRoot / "tests/fixtures/golden/dataset_summary.txt"));
  for (std::size_t i = 1; i < ds.interactions.size(); ++i) {
    CHECK(ds.interactions[i - 1].timestamp <= ds.interactions[i].timestamp);
  }
}

TEST_CASE("normalized dataset round trip") {
  TempDir dir("banditrec_ds_roundtrip");
  const auto ds = fixture();
  write_dataset(ds, dir.path / "dataset");
  const auto back = load_normalized_dataset(dir.path / "dataset");
  CHECK(summary(back) == summary(ds));
  write_dataset(back, dir.path / "again");
  for (const char* f : {"users.csv", "posts.jsonl", "interactions.csv", "arms.txt"}) {
    CHECK(slurp(dir.path / "dataset" / f) == slurp(dir.path / "again" / f));
  }
  CHECK_THROWS_AS(load_normalized_dataset(dir.path / "missing"), StateError);
}

TEST_CASE("duplicate interactions keep the latest") {
  TempDir dir("banditrec_ds_dup");
  const auto users = dir.write("users.csv", kUsers);
  const auto posts = dir.write("posts.jsonl", kPost);
  const auto inter = dir.write("interactions.csv",
                               "user_id,item_id,response,timestamp\nu1,p1,1,100\nu2,p1,0,50\nu1,p1,0,200\n");
  const auto ds = load_dataset({users, posts, inter}, bundled_map());
  REQUIRE(ds.interactions.size() == 2);
  CHECK(ds.interactions[0].timestamp == 50);
  CHECK(ds.interactions[1].response == 0);
  CHECK(ds.interactions[1].timestamp == 200);
  CHECK(ds.warnings.size() == 1);
}

TEST_CASE("ingestion errors") {
  TempDir dir("banditrec_ds_err");
  const auto users = dir.write("users.csv", kUsers);
  const auto posts = dir.write("posts.jsonl", kPost);

  const auto bad_response =
      dir.write("i1.csv", "user_id,item_id,response,timestamp\nu1,p1,1,100\nu1,p1,yes,100\n");
  try {
    load_dataset({users, posts, bad_response}, bundled_map());
    FAIL("expected an ingestion error");
  } catch (const IngestionError& e) {
    CHECK(e.line() == 3);
    CHECK(e.field() == "response");
  }

  const auto dangling = dir.write("i2.csv", "user_id,item_id,response,timestamp\nu9,p1,1,100\n");
  CHECK_THROWS_AS(load_dataset({users, posts, dangling}, bundled_map()), ReferentialError);

  const auto bad_header = dir.write("i3.csv", "user,item,response,timestamp\n");
  CHECK_THROWS_AS(load_dataset({users, posts, bad_header}, bundled_map()), IngestionError);

  const auto ok = dir.write("i4.csv", "user_id,item_id,response,timestamp\n");
  const auto bad_ratio = dir.write("p2.jsonl", R"({"post_id":"p1","author":"u1","title":"t","text":"x","subreddit":"a","score":1,"upvote_ratio":1.5,"num_comments":0,"comments":[]})"
                                               "\n");
  CHECK_THROWS_AS(load_dataset({users, bad_ratio, ok}, bundled_map()), IngestionError);
  const auto missing_field = dir.write("p3.jsonl", R"({"post_id":"p1","author":"u1","title":"t"})"
                                                   "\n");
  CHECK_THROWS_AS(load_dataset({users, missing_field, ok}, bundled_map()), IngestionError);
  const auto dup_users = dir.write("u2.csv", "user_id,karma,subreddits\nu1,1,a\nu1,2,b\n");
  CHECK_THROWS_AS(load_dataset({dup_users, posts, ok}, bundled_map()), IngestionError);
}

TEST_CASE("recent text cap") {
  TempDir dir("banditrec_ds_cap");
  const auto users = dir.write("users.csv", "user_id,karma,subreddits\nw,1,a\nr,1,a\n");
  std::string posts;
  for (int i = 0; i < 130; ++i) {
    posts += fmt::format(
        R"({{"post_id":"p{0}","author":"w","title":"t{0}","text":"","subreddit":"a","score":0,"upvote_ratio":0.5,"num_comments":1,"created_utc":{0},"comments":[{{"author":"r","body":"c{0}","created_utc":{0}}}]}})"
        "\n",
        i);
  }
  const auto p = dir.write("posts.jsonl", posts);
  const auto inter = dir.write("interactions.csv", "user_id,item_id,response,timestamp\n");
  const auto ds = load_dataset({users, p, inter}, bundled_map());
  const auto& writer = ds.users[*ds.find_user("w")];
  const auto& reader = ds.users[*ds.find_user("r")];
  REQUIRE(writer.posts.size() == kRecentTextCap);
  REQUIRE(reader.comments.size() == kRecentTextCap);
  CHECK(reader.comments.front() == "c30");
  CHECK(reader.comments.back() == "c129");
}

TEST_CASE("strategy map") {
  const auto map = bundled_map();
  const ArmCatalog arms;
  CHECK(map.lookup("Anxiety") == arms.parse("Relaxation"));
  CHECK(map.lookup("unheard-of") == arms.parse("Distraction"));
  TempDir dir("banditrec_sm");
  const auto unknown = dir.write("m.csv", "subreddit,strategy\nx,Sleeping\n");
  CHECK_THROWS_AS(StrategyMap::load(unknown, arms, 0), IngestionError);
  const auto dup = dir.write("d.csv", "subreddit,strategy\nx,Avoidance\nx,Expression\n");
  CHECK_THROWS_AS(StrategyMap::load(dup, arms, 0), IngestionError);
}

TEST_CASE("arm catalog") {
  const ArmCatalog arms;
  CHECK(arms.size() == 5);
  CHECK(arms.parse("empathic responding") == 0);
  CHECK(arms.parse("RELAXATION") == 4);
  CHECK_THROWS_AS(arms.parse("napping"), ReferentialError);
  CHECK_THROWS_AS(ArmCatalog(std::vector<std::string>{"A", "a"}), ConfigError);
  CHECK_THROWS_AS(ArmCatalog(std::vector<std::string>{}), ConfigError);
}
