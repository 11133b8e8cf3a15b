// Copyright 2026 The Coins Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coins/study/server.h"

#include <atomic>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include <boost/asio/dispatch.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "coins/errors.h"
#include "coins/study/store.h"

namespace coins {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace {

std::string RandomHex(int bytes) {
  static thread_local std::random_device rd;
  static const char* kDigits = "0123456789abcdef";
  std::string out;
  for (int i = 0; i < bytes; ++i) {
    const unsigned v = rd() & 0xff;
    out.push_back(kDigits[v >> 4]);
    out.push_back(kDigits[v & 0xf]);
  }
  return out;
}

json ErrorMessage(const std::string& code, const std::string& message) {
  return {{"type", "error"}, {"v", kProtocolVersion}, {"code", code}, {"message", message}};
}

std::string MimeType(const std::filesystem::path& p) {
  static const std::map<std::string, std::string> kTypes = {
      {".html", "text/html; charset=utf-8"}, {".js", "text/javascript"},
      {".mjs", "text/javascript"},           {".css", "text/css"},
      {".json", "application/json"},         {".svg", "image/svg+xml"},
      {".png", "image/png"},                 {".ico", "image/x-icon"},
      {".map", "application/json"},          {".txt", "text/plain"}};
  const auto it = kTypes.find(p.extension().string());
  return it == kTypes.end() ? "application/octet-stream" : it->second;
}

}  // namespace

class WsConnection;

// One participant session: the logged state machine, its clock and the
// currently attached connection, all confined to one strand.
class LiveSession : public std::enable_shared_from_this<LiveSession> {
 public:
  LiveSession(net::io_context& ioc, std::unique_ptr<LoggedSession> logged,
              std::chrono::milliseconds period)
      : strand_(net::make_strand(ioc)),
        timer_(strand_),
        logged_(std::move(logged)),
        period_(period) {}

  const std::string& token() const { return logged_->session().init().token; }
  const std::string& id() const { return logged_->session().init().session_id; }

  void Attach(std::shared_ptr<WsConnection> c, json hello);
  void Receive(std::shared_ptr<WsConnection> c, std::string text);
  void Detach(std::shared_ptr<WsConnection> c);

 private:
  void Apply(const ClientEvent& e);
  void Send(const json& m);
  void MaybeStartTicking();
  void ScheduleTick();

  net::strand<net::io_context::executor_type> strand_;
  net::steady_timer timer_;
  std::unique_ptr<LoggedSession> logged_;
  std::shared_ptr<WsConnection> conn_;
  std::chrono::milliseconds period_;
  bool ticking_ = false;
  std::chrono::steady_clock::time_point next_tick_;
};

class ServerState : public std::enable_shared_from_this<ServerState> {
 public:
  ServerState(StudyConfig c, ServerOptions o) : config(std::move(c)), options(std::move(o)) {}

  std::shared_ptr<LiveSession> CreateSession(const std::string& participant_id);
  std::shared_ptr<LiveSession> FindSession(const std::string& token);
  std::chrono::milliseconds period() const {
    return options.tick_period.count() > 0
               ? options.tick_period
               : std::chrono::milliseconds(1000 / config.tick_hz);
  }
  void Accept();

  StudyConfig config;
  ServerOptions options;
  net::io_context ioc;
  std::unique_ptr<tcp::acceptor> acceptor;
  std::vector<std::thread> threads;
  std::optional<net::executor_work_guard<net::io_context::executor_type>> work;

  mutable std::mutex mu;
  std::map<std::string, std::shared_ptr<LiveSession>> by_token;
  std::atomic<uint64_t> counter{0};
  std::mutex stop_mu;
  std::condition_variable stop_cv;
  bool stopped = false;
};

class WsConnection : public std::enable_shared_from_this<WsConnection> {
 public:
  WsConnection(tcp::socket&& socket, std::shared_ptr<ServerState> server)
      : ws_(std::move(socket)), server_(std::move(server)) {}

  void Start(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&WsConnection::OnAccept,
                                                    shared_from_this()));
  }

  // Thread-safe: hops onto the connection's strand.
  void Send(std::string text) {
    net::post(ws_.get_executor(), [self = shared_from_this(), text = std::move(text)]() mutable {
      self->queue_.push_back(std::move(text));
      if (self->queue_.size() == 1) self->DoWrite();
    });
  }

  void Close() {
    net::post(ws_.get_executor(), [self = shared_from_this()] {
      self->closing_ = true;
      if (self->queue_.empty()) {
        self->ws_.async_close(websocket::close_code::normal, [self](beast::error_code) {});
      }
    });
  }

 private:
  void OnAccept(beast::error_code ec) {
    if (ec) return;
    DoRead();
  }

  void DoRead() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsConnection::OnRead,
                                                      shared_from_this()));
  }

  void OnRead(beast::error_code ec, size_t) {
    if (ec) {
      if (session_) session_->Detach(shared_from_this());
      return;
    }
    std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    if (!session_) {
      try {
        const ClientEvent hello = ParseClientMessage(text);
        if (hello.type != "hello") throw ProtocolError("the first message must be hello");
        const std::string token = hello.payload.value("token", std::string());
        session_ = token.empty()
                       ? server_->CreateSession(hello.payload.value("participant_id", ""))
                       : server_->FindSession(token);
        session_->Attach(shared_from_this(), hello.payload);
      } catch (const std::exception& e) {
        Send(ErrorMessage("protocol", e.what()).dump());
        Close();
        return;
      }
    } else {
      session_->Receive(shared_from_this(), std::move(text));
    }
    DoRead();
  }

  void DoWrite() {
    ws_.text(true);
    ws_.async_write(net::buffer(queue_.front()),
                    beast::bind_front_handler(&WsConnection::OnWrite, shared_from_this()));
  }

  void OnWrite(beast::error_code ec, size_t) {
    if (ec) return;
    queue_.pop_front();
    if (!queue_.empty()) {
      DoWrite();
    } else if (closing_) {
      ws_.async_close(websocket::close_code::normal,
                      [self = shared_from_this()](beast::error_code) {});
    }
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  bool closing_ = false;
  std::shared_ptr<ServerState> server_;
  std::shared_ptr<LiveSession> session_;
};

void LiveSession::Attach(std::shared_ptr<WsConnection> c, json hello) {
  net::dispatch(strand_, [self = shared_from_this(), c = std::move(c),
                          hello = std::move(hello)]() mutable {
    if (self->conn_ && self->conn_ != c) self->conn_->Close();
    self->conn_ = std::move(c);
    const SessionInit& init = self->logged_->session().init();
    self->Send({{"type", "welcome"},
                {"v", kProtocolVersion},
                {"session_id", init.session_id},
                {"token", init.token}});
    self->Apply({"hello", std::move(hello)});
  });
}

void LiveSession::Receive(std::shared_ptr<WsConnection> c, std::string text) {
  net::dispatch(strand_, [self = shared_from_this(), c = std::move(c),
                          text = std::move(text)] {
    if (c != self->conn_) return;
    try {
      self->Apply(ParseClientMessage(text));
    } catch (const ProtocolError& e) {
      self->Send(ErrorMessage("protocol", e.what()));
    }
  });
}

void LiveSession::Detach(std::shared_ptr<WsConnection> c) {
  net::dispatch(strand_, [self = shared_from_this(), c = std::move(c)] {
    if (c != self->conn_) return;
    self->conn_.reset();
    // The clock pauses while nobody is connected.
    self->ticking_ = false;
    self->timer_.cancel();
  });
}

void LiveSession::Apply(const ClientEvent& e) {
  try {
    for (const json& m : logged_->Apply(e)) Send(m);
  } catch (const ValidationError& err) {
    Send(ErrorMessage("validation", err.what()));
  } catch (const ProtocolError& err) {
    Send(ErrorMessage("protocol", err.what()));
  }
  MaybeStartTicking();
}

void LiveSession::Send(const json& m) {
  if (conn_) conn_->Send(m.dump());
}

void LiveSession::MaybeStartTicking() {
  if (ticking_ || !conn_ || !logged_->session().live()) return;
  ticking_ = true;
  next_tick_ = std::chrono::steady_clock::now() + period_;
  ScheduleTick();
}

void LiveSession::ScheduleTick() {
  timer_.expires_at(next_tick_);
  timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
    if (ec || !self->ticking_) return;
    if (!self->conn_ || !self->logged_->session().live()) {
      self->ticking_ = false;
      return;
    }
    self->ticking_ = false;
    self->Apply(ClientEvent{"tick"});
    if (!self->logged_->session().live() || !self->conn_) return;
    self->ticking_ = true;
    const auto now = std::chrono::steady_clock::now();
    self->next_tick_ += self->period_;
    // After a long stall resume from now rather than bursting.
    if (self->next_tick_ + self->period_ < now) self->next_tick_ = now;
    self->ScheduleTick();
  });
}

std::shared_ptr<LiveSession> ServerState::CreateSession(const std::string& participant_id) {
  SessionInit init;
  init.session_id = "s-" + RandomHex(8);
  init.participant_id = participant_id.empty() ? "anon-" + init.session_id.substr(2)
                                               : participant_id;
  init.config = config;
  init.seed = DeriveSeed(options.seed, counter.fetch_add(1));
  init.token = RandomHex(16);
  auto logged = std::make_unique<LoggedSession>(init, options.log_dir);
  auto live = std::make_shared<LiveSession>(ioc, std::move(logged), period());
  std::lock_guard lock(mu);
  by_token[init.token] = live;
  return live;
}

std::shared_ptr<LiveSession> ServerState::FindSession(const std::string& token) {
  {
    std::lock_guard lock(mu);
    const auto it = by_token.find(token);
    if (it != by_token.end()) return it->second;
  }
  // Not in memory (e.g. after a restart): look for its log.
  for (const auto& entry : std::filesystem::directory_iterator(options.log_dir)) {
    if (entry.path().extension() != ".jsonl") continue;
    std::ifstream in(entry.path());
    std::string first;
    if (!std::getline(in, first)) continue;
    const json start = json::parse(first, nullptr, false);
    if (start.is_discarded() || start.value("type", "") != "session_start" ||
        start["payload"].value("token", "") != token) {
      continue;
    }
    auto logged = std::make_unique<LoggedSession>(entry.path().string());
    const int64_t idle_ms = NowUnixMs() - logged->last_ts_ms();
    if (idle_ms > int64_t{1000} * logged->session().config().resume_timeout_s) {
      throw ProtocolError("session expired");
    }
    auto live = std::make_shared<LiveSession>(ioc, std::move(logged), period());
    std::lock_guard lock(mu);
    return by_token.try_emplace(token, live).first->second;
  }
  throw ProtocolError("unknown session token");
}

namespace {

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(tcp::socket&& socket, std::shared_ptr<ServerState> server)
      : stream_(std::move(socket)), server_(std::move(server)) {}

  void Start() {
    net::dispatch(stream_.get_executor(),
                  beast::bind_front_handler(&HttpConnection::DoRead, shared_from_this()));
  }

 private:
  void DoRead() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     beast::bind_front_handler(&HttpConnection::OnRead, shared_from_this()));
  }

  void OnRead(beast::error_code ec, size_t) {
    if (ec) return;
    if (websocket::is_upgrade(req_)) {
      if (req_.target() != "/ws") return Reply(Text(http::status::not_found, "not found\n"));
      stream_.expires_never();
      std::make_shared<WsConnection>(stream_.release_socket(), server_)->Start(std::move(req_));
      return;
    }
    Reply(Route());
  }

  http::response<http::string_body> Text(http::status status, std::string body,
                                         const std::string& type = "text/plain") {
    http::response<http::string_body> res{status, req_.version()};
    res.set(http::field::content_type, type);
    res.set(http::field::cache_control, "no-store");
    res.keep_alive(req_.keep_alive());
    res.body() = std::move(body);
    res.prepare_payload();
    return res;
  }

  http::response<http::string_body> Route() {
    const std::string target(req_.target());
    const std::string path = target.substr(0, target.find('?'));
    if (path == "/healthz" && req_.method() == http::verb::get) {
      return Text(http::status::ok, "ok\n");
    }
    if (path == "/api/sessions") {
      if (req_.method() != http::verb::post) {
        return Text(http::status::method_not_allowed, "POST only\n");
      }
      const json body = json::parse(req_.body(), nullptr, false);
      const std::string participant =
          body.is_object() ? body.value("participant_id", std::string()) : std::string();
      try {
        const auto s = server_->CreateSession(participant);
        const json blob = {{"server_url", "/ws"},
                           {"session_token", s->token()},
                           {"session_id", s->id()},
                           {"protocol_version", kProtocolVersion}};
        return Text(http::status::created, blob.dump(), "application/json");
      } catch (const std::exception& e) {
        return Text(http::status::internal_server_error, std::string(e.what()) + "\n");
      }
    }
    if (req_.method() != http::verb::get && req_.method() != http::verb::head) {
      return Text(http::status::method_not_allowed, "GET only\n");
    }
    if (server_->options.static_dir.empty() || path.find("..") != std::string::npos ||
        path.empty() || path[0] != '/') {
      return Text(http::status::not_found, "not found\n");
    }
    std::filesystem::path file = std::filesystem::path(server_->options.static_dir) /
                                 (path == "/" ? "index.html" : path.substr(1));
    std::ifstream in(file, std::ios::binary);
    if (!in || std::filesystem::is_directory(file)) {
      return Text(http::status::not_found, "not found\n");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    auto res = Text(http::status::ok, ss.str(), MimeType(file));
    res.set(http::field::cache_control, "no-cache");
    return res;
  }

  void Reply(http::response<http::string_body> res) {
    auto sp = std::make_shared<http::response<http::string_body>>(std::move(res));
    http::async_write(stream_, *sp,
                      [self = shared_from_this(), sp](beast::error_code ec, size_t) {
                        if (ec) return;
                        if (sp->keep_alive()) {
                          self->DoRead();
                        } else {
                          beast::error_code ignored;
                          self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
                        }
                      });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  std::shared_ptr<ServerState> server_;
};

}  // namespace

void ServerState::Accept() {
  acceptor->async_accept(net::make_strand(ioc), [self = shared_from_this()](
                                                    beast::error_code ec, tcp::socket socket) {
    if (ec) return;  // acceptor closed
    std::make_shared<HttpConnection>(std::move(socket), self)->Start();
    self->Accept();
  });
}

StudyServer::StudyServer(StudyConfig config, ServerOptions options)
    : impl_(std::make_shared<ServerState>(std::move(config), std::move(options))) {
  impl_->config.Validate();
  if (impl_->options.threads < 1) throw ConfigError("threads must be >= 1");
}

StudyServer::~StudyServer() { Stop(); }

uint16_t StudyServer::Start() {
  std::error_code fs_ec;
  std::filesystem::create_directories(impl_->options.log_dir, fs_ec);
  if (!std::filesystem::is_directory(impl_->options.log_dir)) {
    throw ConfigError("cannot create log directory '" + impl_->options.log_dir + "'");
  }
  beast::error_code ec;
  const auto address = net::ip::make_address(impl_->options.address, ec);
  if (ec) throw ConfigError("bad address '" + impl_->options.address + "'");
  const tcp::endpoint endpoint(address, impl_->options.port);
  auto acceptor = std::make_unique<tcp::acceptor>(net::make_strand(impl_->ioc));
  acceptor->open(endpoint.protocol(), ec);
  if (!ec) acceptor->set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) acceptor->bind(endpoint, ec);
  if (!ec) acceptor->listen(net::socket_base::max_listen_connections, ec);
  if (ec) throw ConfigError("cannot listen on port " + std::to_string(impl_->options.port) +
                            ": " + ec.message());
  const uint16_t port = acceptor->local_endpoint().port();
  impl_->acceptor = std::move(acceptor);
  impl_->work.emplace(impl_->ioc.get_executor());
  impl_->Accept();
  for (int i = 0; i < impl_->options.threads; ++i) {
    impl_->threads.emplace_back([impl = impl_] { impl->ioc.run(); });
  }
  return port;
}

void StudyServer::Wait() {
  std::unique_lock lock(impl_->stop_mu);
  impl_->stop_cv.wait(lock, [&] { return impl_->stopped; });
}

void StudyServer::Stop() {
  {
    std::lock_guard lock(impl_->stop_mu);
    if (impl_->stopped) return;
    impl_->stopped = true;
  }
  impl_->stop_cv.notify_all();
  if (impl_->acceptor) {
    net::post(impl_->acceptor->get_executor(), [impl = impl_] {
      beast::error_code ignored;
      impl->acceptor->close(ignored);
    });
  }
  impl_->work.reset();
  impl_->ioc.stop();
  for (std::thread& t : impl_->threads) {
    if (t.joinable()) t.join();
  }
  impl_->threads.clear();
  std::lock_guard lock(impl_->mu);
  impl_->by_token.clear();
}

size_t StudyServer::session_count() const {
  std::lock_guard lock(impl_->mu);
  return impl_->by_token.size();
}

}  // namespace coins
