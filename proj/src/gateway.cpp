#include "gauntlet/gateway.hpp"

#include <cstdlib>
#include <random>

#include <fmt/format.h>
#include <httplib.h>

#include "gauntlet/error.hpp"
#include "gauntlet/runlog.hpp"

namespace gauntlet {

struct Gateway::Session {
    std::mutex mutex;
    std::string token;
    bool trusted = true;
    Rng rng;

    // Current captcha; `demand` is empty between captchas.
    std::optional<long> demand;
    long passed = 0;
    long served = 0;
    std::vector<ChallengeEntry> entries;

    // Current challenge.
    std::optional<Challenge> pending;
    std::vector<ChallengeRound> rounds;
    std::vector<Point> trace;

    std::vector<long> completed;  // challenges per finished captcha, in order
};

namespace {

ApiResponse ok(json payload) { return {200, {{"status", "ok"}, {"payload", std::move(payload)}}}; }

ApiResponse error(int http_status, std::string_view code, std::string_view message) {
    return {http_status, {{"status", "error"}, {"error_code", code}, {"message", message}}};
}

ApiResponse not_found(const std::string& token) {
    return error(404, "unknown_session", fmt::format("no session with token {}", token));
}

std::optional<json> parse_body(const std::string& body) {
    if (body.empty()) return json::object();
    try {
        json j = json::parse(body);
        if (!j.is_object()) return std::nullopt;
        return j;
    } catch (const json::parse_error&) {
        return std::nullopt;
    }
}

double human_acceptance(const CalibrationTable& table, bool trusted) {
    if (trusted) return table.human_acceptance;
    const auto it = table.tiers.find(PolicyTier::Bezier);
    if (it == table.tiers.end()) return table.human_acceptance;
    return table.human_acceptance * it->second.untrusted / it->second.trusted;
}

}  // namespace

Gateway::Gateway(GatewayOptions options)
    : options_(std::move(options)), token_rng_(options_.seed != 0 ? options_.seed : std::random_device{}()) {
    options_.calibration.validate();
    options_.kind_mix.validate();
    options_.target_mix.validate();
    if (!options_.log_path || !std::filesystem::exists(*options_.log_path)) return;

    for (const json& row : load_json_lines(*options_.log_path).rows) {
        const std::string token = row.at("token").get<std::string>();
        auto& s = sessions_[token];
        if (!s) {
            s = std::make_shared<Session>();
            s->token = token;
            s->trusted = row.value("trusted", true);
            s->rng = Rng(token_rng_.next_u64());
        }
        s->completed.push_back(row.at("challenges_served").get<long>());
    }
}

Gateway::~Gateway() = default;

std::string Gateway::new_token() {
    std::lock_guard lock(token_mutex_);
    for (;;) {
        std::string token = fmt::format("s-{:016x}", token_rng_.next_u64());
        std::shared_lock read(sessions_mutex_);
        if (!sessions_.contains(token)) return token;
    }
}

std::shared_ptr<Gateway::Session> Gateway::find(const std::string& token) const {
    std::shared_lock lock(sessions_mutex_);
    const auto it = sessions_.find(token);
    return it == sessions_.end() ? nullptr : it->second;
}

ApiResponse Gateway::create_session(const std::string& body) {
    const auto j = parse_body(body);
    if (!j) return error(400, "malformed_body", "session request must be a JSON object");
    if (j->contains("trusted") && !j->at("trusted").is_boolean())
        return error(400, "malformed_body", "trusted must be a boolean");

    auto s = std::make_shared<Session>();
    s->token = new_token();
    s->trusted = j->value("trusted", true);
    {
        std::lock_guard lock(token_mutex_);
        s->rng = Rng::stream(token_rng_.next_u64(), ++session_counter_);
    }
    {
        std::unique_lock lock(sessions_mutex_);
        sessions_[s->token] = s;
    }
    return ok({{"token", s->token}, {"trusted", s->trusted}});
}

ApiResponse Gateway::get_challenge(const std::string& token) {
    const auto s = find(token);
    if (!s) return not_found(token);
    std::lock_guard lock(s->mutex);

    if (!s->demand) {
        const double a = human_acceptance(options_.calibration, s->trusted);
        s->demand = challenge_count_law(a, true, s->rng, options_.calibration.human_shift);
        s->passed = 0;
        s->served = 0;
        s->entries.clear();
    }
    if (!s->pending) {
        const auto kind = static_cast<ChallengeKind>(s->rng.categorical(options_.kind_mix.weights));
        s->pending = generate_challenge(s->rng, kind, options_.target_mix, options_.generation);
        s->rounds.clear();
        s->trace.clear();
    }
    json payload = {{"challenge", challenge_view(*s->pending, static_cast<int>(s->rounds.size()) + 1)},
                    {"challenges_so_far", s->served}};
    if (options_.debug) payload["debug"] = json(*s->pending);
    return ok(std::move(payload));
}

void Gateway::finish_captcha(Session& s, bool solved) {
    RunRecord record;
    record.run_index = static_cast<int>(s.completed.size()) + 1;
    record.challenges_served = s.served;
    record.demand = s.demand;
    record.passed = s.passed;
    record.solved = solved;
    double realism_sum = 0.0;
    for (const auto& e : s.entries) realism_sum += e.realism;
    record.realism = s.entries.empty() ? 0.0 : realism_sum / static_cast<double>(s.entries.size());
    record.risk = risk({0, record.realism, s.trusted, true});
    record.tier = tier_for_realism(record.realism, options_.calibration);
    record.entries = std::move(s.entries);

    s.completed.push_back(s.served);
    s.demand.reset();
    s.entries.clear();

    if (options_.log_path) {
        json row = record;
        row["token"] = s.token;
        row["trusted"] = s.trusted;
        std::lock_guard lock(log_mutex_);
        append_json_line(row, *options_.log_path);
    }
}

ApiResponse Gateway::post_answer(const std::string& token, const std::string& body) {
    const auto s = find(token);
    if (!s) return not_found(token);

    const auto j = parse_body(body);
    if (!j || !j->contains("selected") || !j->at("selected").is_array())
        return error(400, "malformed_body", "answer needs a 'selected' array of cell indices");
    CellSet selected;
    std::vector<Point> trace;
    try {
        for (const auto& v : j->at("selected")) selected.insert(v.get<int>());
        if (j->contains("trace")) trace = j->at("trace").get<std::vector<Point>>();
    } catch (const json::exception& e) {
        return error(400, "malformed_body", e.what());
    }
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (trace[i].t < trace[i - 1].t) return error(400, "malformed_body", "trace timestamps must not decrease");

    std::lock_guard lock(s->mutex);
    if (!s->pending) return error(409, "no_pending_challenge", "fetch a challenge before answering");
    const Challenge& shown = *s->pending;
    for (int i : selected)
        if (i < 0 || i >= static_cast<int>(shown.cells.size()))
            return error(400, "invalid_cell", fmt::format("cell index {} out of range", i));

    const double offset = s->trace.empty() ? 0.0 : s->trace.back().t;
    for (auto p : trace) {
        p.t += offset - (trace.empty() ? 0.0 : trace.front().t);
        s->trace.push_back(p);
    }
    s->rounds.push_back({shown, selected});

    const bool dynamic = shown.kind == ChallengeKind::Type3Dynamic3x3;
    if (dynamic && !selected.empty() && static_cast<int>(s->rounds.size()) < options_.max_rounds) {
        s->pending = replace_clicked(shown, selected, s->rng);
        const int round = static_cast<int>(s->rounds.size()) + 1;
        return ok({{"graded", "pending"},
                   {"next_round", round},
                   {"challenge", challenge_view(*s->pending, round)},
                   {"session_done", false},
                   {"challenges_so_far", s->served}});
    }

    const RoundsGrade graded = grade_rounds(s->rounds);
    ChallengeEntry entry;
    entry.kind = shown.kind;
    entry.target = shown.target;
    entry.rounds = static_cast<int>(s->rounds.size());
    entry.outcome = graded.passed ? ChallengeOutcome::Pass : ChallengeOutcome::Fail;
    Trajectory recorded;
    recorded.policy = TrajectoryPolicy::HumanRecorded;
    recorded.points = s->trace;
    entry.realism = realism(recorded);
    entry.trace = std::move(s->trace);
    s->entries.push_back(std::move(entry));
    s->pending.reset();
    s->rounds.clear();
    s->trace.clear();

    ++s->served;
    if (graded.passed) ++s->passed;
    const long served = s->served;
    const double recorded_realism = s->entries.back().realism;
    const bool solved = s->demand && s->passed >= *s->demand;
    const bool done = solved || served >= options_.abort_limit;
    if (done) finish_captcha(*s, solved);

    json payload = {{"graded", graded.passed ? "pass" : "fail"},
                    {"session_done", done},
                    {"challenges_so_far", served},
                    {"realism", recorded_realism}};
    if (done) payload["solved"] = solved;
    return ok(std::move(payload));
}

ApiResponse Gateway::get_stats(const std::string& token) {
    const auto s = find(token);
    if (!s) return not_found(token);
    std::lock_guard lock(s->mutex);
    if (s->completed.empty()) return error(409, "no_completed_captchas", "no captcha has been completed yet");
    return ok({{"summary", summarize(s->completed)}, {"counts", s->completed}});
}

std::optional<Challenge> Gateway::pending_challenge(const std::string& token) const {
    const auto s = find(token);
    if (!s) return std::nullopt;
    std::lock_guard lock(s->mutex);
    return s->pending;
}

// ---------------------------------------------------------------------------
// HTTP binding

struct HttpGateway::Impl {
    Gateway& gateway;
    httplib::Server server;

    explicit Impl(Gateway& g) : gateway(g) {}
};

namespace {

void reply(httplib::Response& res, const ApiResponse& r) {
    res.status = r.http_status;
    res.set_content(canonical(r.body), "application/json");
}

}  // namespace

HttpGateway::HttpGateway(Gateway& gateway, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(gateway)) {
    auto& svr = impl_->server;
    Gateway* gw = &gateway;

    svr.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                             {"Access-Control-Allow-Headers", "Content-Type"},
                             {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    svr.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    svr.Post("/api/session", [gw](const httplib::Request& req, httplib::Response& res) {
        reply(res, gw->create_session(req.body));
    });
    svr.Get(R"(/api/session/([^/]+)/challenge)", [gw](const httplib::Request& req, httplib::Response& res) {
        reply(res, gw->get_challenge(req.matches[1]));
    });
    svr.Post(R"(/api/session/([^/]+)/answer)", [gw](const httplib::Request& req, httplib::Response& res) {
        reply(res, gw->post_answer(req.matches[1], req.body));
    });
    svr.Get(R"(/api/session/([^/]+)/stats)", [gw](const httplib::Request& req, httplib::Response& res) {
        reply(res, gw->get_stats(req.matches[1]));
    });
    svr.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            message = e.what();
        } catch (...) {
        }
        reply(res, error(500, "internal", message));
    });
    svr.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) reply(res, error(res.status, "not_found", "no such endpoint"));
    });
    if (static_dir) svr.set_mount_point("/", static_dir->string());
}

HttpGateway::~HttpGateway() { stop(); }

int HttpGateway::bind(const std::string& host, int port) {
    const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound <= 0) throw IoError(fmt::format("cannot bind {}:{}", host, port));
    return bound;
}

void HttpGateway::listen() { impl_->server.listen_after_bind(); }

void HttpGateway::stop() {
    if (impl_) impl_->server.stop();
}

int default_port() {
    if (const char* env = std::getenv("GAUNTLET_PORT")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v < 65536) return static_cast<int>(v);
    }
    return 8080;
}

}  // namespace gauntlet
