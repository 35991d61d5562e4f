// Copyright 2026 The srtr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "httplib.h"
#include "srtr/error.hpp"
#include "srtr/service.hpp"

namespace srtr {

struct HttpServer::Impl {
  Service& service;
  ServeOptions options;
  httplib::Server server;
};

HttpServer::HttpServer(Service& service, ServeOptions options)
    : impl_(new Impl{service, std::move(options), {}}) {
  auto& srv = impl_->server;
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    ApiResponse out = impl_->service.handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  srv.Get(R"(/api/.*)", forward);
  srv.Post(R"(/api/.*)", forward);
  srv.Delete(R"(/api/.*)", forward);
  if (!impl_->options.static_dir.empty() &&
      !srv.set_mount_point("/", impl_->options.static_dir)) {
    throw Error(ErrorKind::kIoError, "cannot serve static files from " + impl_->options.static_dir);
  }
}

HttpServer::~HttpServer() = default;

int HttpServer::bind() {
  auto& o = impl_->options;
  int port = o.port == 0 ? impl_->server.bind_to_any_port(o.host)
                         : (impl_->server.bind_to_port(o.host, o.port) ? o.port : -1);
  if (port < 0) {
    throw Error(ErrorKind::kIoError, "cannot listen on " + o.host + ":" + std::to_string(o.port));
  }
  return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace srtr
