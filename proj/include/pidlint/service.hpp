#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pidlint/engine.hpp"
#include "pidlint/ingest.hpp"
#include "pidlint/report.hpp"
#include "pidlint/rule_library.hpp"

namespace pidlint {

enum class Decision { accept, reject };

inline std::string_view to_string(Decision d) { return d == Decision::accept ? "accept" : "reject"; }

inline std::optional<Decision> parse_decision(std::string_view s) {
  if (s == "accept") return Decision::accept;
  if (s == "reject") return Decision::reject;
  return std::nullopt;
}

// Error carrying the HTTP status it maps to.
class ApiError : public Error {
 public:
  ApiError(int status, const std::string& message, std::string location = {})
      : Error(message), status_(status), location_(std::move(location)) {}

  int status() const noexcept { return status_; }
  const std::string& location() const noexcept { return location_; }

 private:
  int status_;
  std::string location_;
};

struct Proposal {
  std::string id;
  CorrectionRecord record;
};

struct JournalEntry {
  Decision decision;
  std::string proposal_id;
  CorrectionRecord record;
  std::string timestamp;  // UTC, ISO 8601
};

inline std::string utc_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// One human-in-the-loop review of a graph. Every accepted proposal is applied
// and the whole rule set is re-run against the new graph; rejected proposals
// are remembered by fingerprint and never offered again.
// Not synchronized; ReviewService serializes access per session.
class Session {
 public:
  Session(std::string id, PidGraph graph, std::shared_ptr<const std::vector<RuleGraph>> rules)
      : id_(std::move(id)), initial_(graph), current_(std::move(graph)), rules_(std::move(rules)) {
    reanalyze();
  }

  const std::string& id() const { return id_; }
  const PidGraph& initial_graph() const { return initial_; }
  const PidGraph& graph() const { return current_; }
  const std::vector<Proposal>& proposals() const { return open_; }
  const std::vector<JournalEntry>& journal() const { return journal_; }

  // Returns the graph change caused by the decision (empty for reject).
  GraphDiff decide(const std::string& proposal_id, Decision decision) {
    auto it = std::find_if(open_.begin(), open_.end(),
                           [&](const Proposal& p) { return p.id == proposal_id; });
    if (it == open_.end()) {
      if (issued_.count(proposal_id)) {
        throw ApiError(409, "proposal '" + proposal_id + "' is no longer open");
      }
      throw ApiError(404, "unknown proposal '" + proposal_id + "'");
    }
    Proposal proposal = *it;
    const std::string fp = fingerprint(proposal.record);
    GraphDiff change;
    if (decision == Decision::accept) {
      const RuleGraph* rule = find_rule(proposal.record.rule_id);
      if (!rule) throw ApiError(409, "rule '" + proposal.record.rule_id + "' is not loaded");
      PidGraph next = current_;
      CorrectionRecord applied;
      try {
        applied = apply_match(*rule, proposal.record.match, next);
      } catch (const StaleMatchError& e) {
        throw ApiError(409, e.what());
      }
      change = diff(current_, next);
      current_ = std::move(next);
      fingerprint_ids_.erase(fp);
      journal_.push_back({decision, proposal.id, std::move(applied), utc_timestamp()});
    } else {
      rejected_.insert(fp);
      proposal.record.status = RecordStatus::rejected;
      journal_.push_back({decision, proposal.id, std::move(proposal.record), utc_timestamp()});
    }
    reanalyze();
    return change;
  }

  // Rebuilds a session from its initial graph and decision sequence.
  static Session replay(std::string id, const PidGraph& initial,
                        std::shared_ptr<const std::vector<RuleGraph>> rules,
                        const std::vector<std::pair<std::string, Decision>>& decisions) {
    Session s(std::move(id), initial, std::move(rules));
    for (const auto& [pid, d] : decisions) s.decide(pid, d);
    return s;
  }

  RunReport report() const {
    RunReport r;
    r.graph_metadata = initial_.metadata();
    r.config.mode = EngineMode::interactive;
    for (const auto& j : journal_) r.records.push_back(j.record);
    for (const auto& p : open_) r.records.push_back(p.record);
    return r;
  }

 private:
  const RuleGraph* find_rule(const std::string& id) const {
    for (const auto& r : *rules_) {
      if (r.meta.id == id) return &r;
    }
    return nullptr;
  }

  void reanalyze() {
    EngineConfig config;
    config.mode = EngineMode::interactive;
    PidGraph scratch = current_;
    auto result = run_all(*rules_, scratch, config);
    open_.clear();
    for (auto& rec : result.records) {
      std::string fp = fingerprint(rec);
      if (rejected_.count(fp)) continue;
      auto [it, fresh] = fingerprint_ids_.try_emplace(fp);
      if (fresh) {
        it->second = "p" + std::to_string(next_proposal_++);
        issued_.insert(it->second);
      }
      open_.push_back({it->second, std::move(rec)});
    }
  }

  std::string id_;
  PidGraph initial_;
  PidGraph current_;
  std::shared_ptr<const std::vector<RuleGraph>> rules_;
  std::vector<JournalEntry> journal_;
  std::vector<Proposal> open_;
  std::set<std::string> rejected_;
  std::map<std::string, std::string> fingerprint_ids_;
  std::set<std::string> issued_;
  std::size_t next_proposal_ = 1;
};

// ---------------------------------------------------------------------------
// JSON views

inline Json proposal_to_json(const Proposal& p) {
  Json j = Json::object();
  j["id"] = p.id;
  Json record = record_to_json(p.record);
  for (auto& [k, v] : record.items()) j[k] = v;
  return j;
}

inline Json proposals_to_json(const std::vector<Proposal>& proposals) {
  Json a = Json::array();
  for (const auto& p : proposals) a.push_back(proposal_to_json(p));
  return a;
}

inline Json journal_to_json(const std::vector<JournalEntry>& journal) {
  Json a = Json::array();
  for (const auto& e : journal) {
    Json j = Json::object();
    j["decision"] = std::string(to_string(e.decision));
    j["proposalId"] = e.proposal_id;
    j["timestamp"] = e.timestamp;
    j["record"] = record_to_json(e.record);
    a.push_back(std::move(j));
  }
  return a;
}

inline Json diff_to_json(const GraphDiff& d) {
  auto ids = [](const auto& items) {
    Json a = Json::array();
    for (const auto& x : items) a.push_back(x.id);
    return a;
  };
  Json j = Json::object();
  j["addedNodes"] = ids(d.added_nodes);
  j["removedNodes"] = ids(d.removed_nodes);
  j["addedEdges"] = ids(d.added_edges);
  j["removedEdges"] = ids(d.removed_edges);
  return j;
}

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

struct ServiceOptions {
  // When set, every session is written to <dir>/<id>.session.json after each
  // mutation and restored from there on startup.
  std::optional<std::filesystem::path> snapshot_dir;
};

// Transport-independent API. Distinct sessions proceed in parallel; calls on
// one session are serialized by its mutex.
class ReviewService {
 public:
  explicit ReviewService(std::vector<RuleGraph> rules, ServiceOptions options = {})
      : rules_(std::make_shared<const std::vector<RuleGraph>>(std::move(rules))),
        options_(std::move(options)) {
    if (options_.snapshot_dir) restore_snapshots();
  }

  ApiResponse create_session(std::string_view body) {
    return guarded([&] {
      PidGraph g;
      try {
        g = parse_graph(body);
      } catch (const ParseError& e) {
        throw ApiError(400, e.reason(), e.location());
      }
      auto entry = std::make_shared<Entry>();
      std::string id;
      {
        std::unique_lock lock(sessions_mu_);
        id = "s" + std::to_string(next_session_++);
      }
      entry->session.emplace(id, std::move(g), rules_);
      {
        std::unique_lock lock(sessions_mu_);
        sessions_[id] = entry;
      }
      std::lock_guard lock(entry->mu);
      persist(*entry->session);
      Json out = Json::object();
      out["sessionId"] = id;
      out["proposals"] = proposals_to_json(entry->session->proposals());
      return ApiResponse{201, detail::dump(out)};
    });
  }

  ApiResponse get_session(const std::string& id) {
    return with_session(id, [&](Session& s) {
      Json out = Json::object();
      out["sessionId"] = s.id();
      out["graph"] = graph_to_json(s.graph());
      out["proposals"] = proposals_to_json(s.proposals());
      out["journal"] = journal_to_json(s.journal());
      return ApiResponse{200, detail::dump(out)};
    });
  }

  ApiResponse get_proposals(const std::string& id) {
    return with_session(id, [&](Session& s) {
      Json out = Json::object();
      out["proposals"] = proposals_to_json(s.proposals());
      return ApiResponse{200, detail::dump(out)};
    });
  }

  ApiResponse decide(const std::string& id, const std::string& proposal_id,
                     std::string_view decision) {
    auto d = parse_decision(decision);
    if (!d) return error_response(ApiError(404, "unknown decision '" + std::string(decision) + "'"));
    return with_session(id, [&](Session& s) {
      GraphDiff change = s.decide(proposal_id, *d);
      persist(s);
      Json out = Json::object();
      out["proposals"] = proposals_to_json(s.proposals());
      out["diff"] = diff_to_json(change);
      return ApiResponse{200, detail::dump(out)};
    });
  }

  ApiResponse export_session(const std::string& id, std::string_view format) {
    return with_session(id, [&](Session& s) {
      if (format == "pidg") return ApiResponse{200, serialize_graph(s.graph())};
      if (format == "dot") {
        GraphDiff d = diff(s.initial_graph(), s.graph());
        return ApiResponse{200, export_dot(s.graph(), &d), "text/vnd.graphviz"};
      }
      if (format == "report-json") return ApiResponse{200, render_json(s.report(), false)};
      throw ApiError(400, "unknown export format '" + std::string(format) + "'", "format");
    });
  }

  ApiResponse list_rules() const {
    Json a = Json::array();
    for (const auto& r : *rules_) a.push_back(rule_to_json(r));
    Json out = Json::object();
    out["rules"] = std::move(a);
    return {200, detail::dump(out)};
  }

  std::size_t session_count() const {
    std::shared_lock lock(sessions_mu_);
    return sessions_.size();
  }

  static ApiResponse error_response(const ApiError& e) {
    Json out = Json::object();
    out["error"] = e.what();
    if (!e.location().empty()) out["location"] = e.location();
    return {e.status(), detail::dump(out)};
  }

 private:
  struct Entry {
    std::mutex mu;
    std::optional<Session> session;
  };

  template <typename F>
  ApiResponse guarded(F&& f) {
    try {
      return f();
    } catch (const ApiError& e) {
      return error_response(e);
    } catch (const std::exception& e) {
      return error_response(ApiError(500, e.what()));
    }
  }

  template <typename F>
  ApiResponse with_session(const std::string& id, F&& f) {
    return guarded([&] {
      std::shared_ptr<Entry> entry;
      {
        std::shared_lock lock(sessions_mu_);
        auto it = sessions_.find(id);
        if (it == sessions_.end()) throw ApiError(404, "unknown session '" + id + "'");
        entry = it->second;
      }
      std::lock_guard lock(entry->mu);
      return f(*entry->session);
    });
  }

  void persist(const Session& s) const {
    if (!options_.snapshot_dir) return;
    Json decisions = Json::array();
    for (const auto& e : s.journal()) {
      Json d = Json::object();
      d["proposalId"] = e.proposal_id;
      d["decision"] = std::string(to_string(e.decision));
      decisions.push_back(std::move(d));
    }
    Json out = Json::object();
    out["sessionId"] = s.id();
    out["initialGraph"] = graph_to_json(s.initial_graph());
    out["decisions"] = std::move(decisions);
    out["journal"] = journal_to_json(s.journal());
    std::filesystem::create_directories(*options_.snapshot_dir);
    write_file(*options_.snapshot_dir / (s.id() + ".session.json"), detail::dump(out));
  }

  void restore_snapshots() {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(*options_.snapshot_dir, ec)) return;
    for (const auto& entry : fs::directory_iterator(*options_.snapshot_dir)) {
      const std::string name = entry.path().filename().string();
      if (!name.ends_with(".session.json")) continue;
      Json j = detail::JsonReader::parse_text(read_file(entry.path()));
      std::string id = detail::JsonReader::string(j, "sessionId", "$");
      PidGraph initial = graph_from_json(detail::JsonReader::field(j, "initialGraph", "$"));
      std::vector<std::pair<std::string, Decision>> decisions;
      for (const auto& d : detail::JsonReader::field(j, "decisions", "$")) {
        auto dec = parse_decision(d.at("decision").get<std::string>());
        if (!dec) throw ParseError(entry.path().string(), "bad decision");
        decisions.emplace_back(d.at("proposalId").get<std::string>(), *dec);
      }
      auto e = std::make_shared<Entry>();
      e->session.emplace(Session::replay(id, initial, rules_, decisions));
      sessions_[id] = e;
      if (id.size() > 1 && id[0] == 's') {
        try {
          next_session_ = std::max(next_session_, std::stoul(id.substr(1)) + 1);
        } catch (const std::exception&) {
        }
      }
    }
  }

  std::shared_ptr<const std::vector<RuleGraph>> rules_;
  ServiceOptions options_;
  mutable std::shared_mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::size_t next_session_ = 1;
};

}  // namespace pidlint
