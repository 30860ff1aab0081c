#pragma once
// HTTP gateway for human sessions. Answers are graded by the same grade
// operation as bot runs and cursor traces are scored by the same realism
// function. Ground truth never leaves the process unless debug is enabled.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "gauntlet/json_io.hpp"
#include "gauntlet/session.hpp"

namespace gauntlet {

struct GatewayOptions {
    bool debug = false;
    std::optional<std::filesystem::path> log_path;
    CalibrationTable calibration = CalibrationTable::defaults();
    GenerationParams generation;
    KindMix kind_mix{{0.15, 0.15, 0.70}};
    TargetMix target_mix = TargetMix::uniform();
    int abort_limit = 200;
    int max_rounds = kDefaultMaxRounds;
    std::uint64_t seed = 0;  // 0 draws a seed from std::random_device
};

/// HTTP status plus an envelope body: {"status":"ok","payload":...} or
/// {"status":"error","error_code":...,"message":...}.
struct ApiResponse {
    int http_status = 200;
    json body;
};

class Gateway {
public:
    /// Replays `options.log_path` if it exists so completed captchas (and
    /// their statistics) survive a restart.
    explicit Gateway(GatewayOptions options);
    ~Gateway();

    ApiResponse create_session(const std::string& body);
    ApiResponse get_challenge(const std::string& token);
    ApiResponse post_answer(const std::string& token, const std::string& body);
    ApiResponse get_stats(const std::string& token);

    /// Ground truth of the pending challenge, for in-process tests only.
    std::optional<Challenge> pending_challenge(const std::string& token) const;

    const GatewayOptions& options() const { return options_; }

private:
    struct Session;

    std::shared_ptr<Session> find(const std::string& token) const;
    std::string new_token();
    void finish_captcha(Session& s, bool solved);

    GatewayOptions options_;
    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mutex token_mutex_;
    Rng token_rng_;
    std::uint64_t session_counter_ = 0;
    std::mutex log_mutex_;
};

/// Binds the gateway to HTTP. `static_dir`, when set, is served at "/".
class HttpGateway {
public:
    explicit HttpGateway(Gateway& gateway, std::optional<std::filesystem::path> static_dir = std::nullopt);
    ~HttpGateway();
    HttpGateway(const HttpGateway&) = delete;
    HttpGateway& operator=(const HttpGateway&) = delete;

    /// Binds to host:port (port 0 picks a free port) and returns the bound
    /// port. Throws IoError when binding fails.
    int bind(const std::string& host, int port);
    /// Serves until stop() is called.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Default port: $GAUNTLET_PORT when set and valid, else 8080.
int default_port();

}  // namespace gauntlet
