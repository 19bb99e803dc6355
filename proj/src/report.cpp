#include "banditrec/report.hpp"

#include <fstream>
#include <map>

#include "banditrec/csv.hpp"
#include "banditrec/error.hpp"
#include "banditrec/format.hpp"

namespace banditrec {
namespace {

std::string cell(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

EvaluationReport build_report(const ReplayResult& replay, const RankingSet& rankings,
                              const std::vector<std::string>& arm_names, std::size_t max_k, Exec exec) {
  if (!(replay.provenance == rankings.provenance)) {
    throw ContractError("replay and rankings come from different folds or seeds");
  }
  if (max_k < 1) throw ContractError("K must be at least 1");
  if (arm_names.size() != replay.arms.size()) throw ContractError("arm names do not match the replay");
  EvaluationReport r;
  r.policy = replay.policy.kind;
  r.provenance = replay.provenance;
  r.arm_names = arm_names;
  r.arms = replay.arms;
  r.curve = metric_curves(rankings.users, max_k, exec);
  return r;
}

void write_report_arms(const std::filesystem::path& path, std::span<const EvaluationReport> reports) {
  std::vector<PolicyKind> order;
  std::map<PolicyKind, std::vector<ArmTally>> pooled;
  std::map<PolicyKind, std::vector<std::string>> names;
  for (const auto& r : reports) {
    auto [it, fresh] = pooled.try_emplace(r.policy, r.arms.size());
    if (fresh) {
      order.push_back(r.policy);
      names[r.policy] = r.arm_names;
    }
    if (it->second.size() != r.arms.size()) throw ContractError("reports disagree on the arm set");
    for (std::size_t a = 0; a < r.arms.size(); ++a) {
      it->second[a].matched += r.arms[a].matched;
      it->second[a].rewarded += r.arms[a].rewarded;
    }
  }
  auto out = open_output(path);
  out << "policy,arm,n_matched,mean_expected_reward\n";
  for (PolicyKind p : order) {
    const auto& tallies = pooled[p];
    for (std::size_t a = 0; a < tallies.size(); ++a) {
      out << to_string(p) << ',' << csv::escape(names[p][a]) << ',' << tallies[a].matched << ','
          << cell(tallies[a].mean_reward()) << '\n';
    }
  }
}

void write_report_metrics(const std::filesystem::path& path, std::span<const EvaluationReport> reports) {
  auto out = open_output(path);
  out << "policy,fold,k,auc,ctr,precision,recall\n";
  for (const auto& r : reports) {
    for (const auto& p : r.curve) {
      out << to_string(r.policy) << ',' << r.provenance.fold << ',' << p.k << ',' << cell(p.auc) << ','
          << cell(p.ctr) << ',' << cell(p.precision) << ',' << cell(p.recall) << '\n';
    }
  }
}

void write_rankings(const std::filesystem::path& path, std::span<const EvaluationReport> reports,
                    std::span<const RankingSet> rankings) {
  if (reports.size() != rankings.size()) throw ContractError("one ranking set is needed per report");
  auto out = open_output(path);
  out << "policy,fold,user_id,rank,item_id,score,response\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (!(reports[i].provenance == rankings[i].provenance)) {
      throw ContractError("report and rankings come from different folds or seeds");
    }
    for (const auto& user : rankings[i].users) {
      for (std::size_t r = 0; r < user.ranked.size(); ++r) {
        const auto& item = user.ranked[r];
        auto t = user.truth.find(item.item_id);
        out << to_string(reports[i].policy) << ',' << reports[i].provenance.fold << ','
            << csv::escape(user.user_id) << ',' << r + 1 << ',' << csv::escape(item.item_id) << ','
            << format_exact(item.score) << ',' << (t == user.truth.end() ? "" : std::to_string(t->second))
            << '\n';
      }
    }
  }
}

std::vector<PersistedRankings> read_rankings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError(path.string(), 0, "", "cannot open file");
  std::string line;
  std::vector<std::string> f;
  std::vector<PersistedRankings> out;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line != "policy,fold,user_id,rank,item_id,score,response") {
        throw IngestionError(path.string(), lineno, "", "unexpected header");
      }
      continue;
    }
    if (line.empty()) continue;
    if (!csv::split(line, f) || f.size() != 7) {
      throw IngestionError(path.string(), lineno, "", "expected 7 fields");
    }
    std::size_t fold = 0;
    double score = 0.0;
    try {
      fold = std::stoul(f[1]);
      score = std::stod(f[5]);
    } catch (const std::exception&) {
      throw IngestionError(path.string(), lineno, "score", "bad number");
    }
    if (out.empty() || out.back().policy != f[0] || out.back().fold != fold) {
      out.push_back({f[0], fold, {}});
    }
    auto& users = out.back().users;
    if (users.empty() || users.back().user_id != f[2]) {
      users.emplace_back();
      users.back().user_id = f[2];
    }
    users.back().ranked.push_back({0, f[4], score});
    if (f[6] == "0" || f[6] == "1") {
      users.back().truth[f[4]] = f[6] == "1" ? 1 : 0;
    } else if (!f[6].empty()) {
      throw IngestionError(path.string(), lineno, "response", "must be 0, 1 or empty");
    }
  }
  return out;
}

}  // namespace banditrec
