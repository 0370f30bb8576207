// Copyright 2026 The litscreen Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// Serves the deterministic stub sidecar over HTTP (--port) or over
// standard streams (--stdio).

#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "litscreen/stub_sidecar.hpp"

int main(int argc, char** argv) {
  CLI::App app{"litscreen stub transformer sidecar"};
  int port = 0;
  std::string host = "127.0.0.1";
  bool stdio = false;
  app.add_option("--port", port, "Serve HTTP on this port");
  app.add_option("--host", host, "HTTP bind address");
  app.add_flag("--stdio", stdio, "Exchange line-delimited envelopes on stdin/stdout");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (stdio == (port != 0)) {
    std::cerr << "choose exactly one of --port or --stdio\n";
    return 2;
  }

  litscreen::StubSidecar sidecar;
  if (stdio) {
    std::ios::sync_with_stdio(false);
    litscreen::serve_stdio(sidecar, std::cin, std::cout);
    return 0;
  }

  httplib::Server server;
  server.Post(R"(/v1/(health|similarity|finetune|score))", [&](const httplib::Request& req, httplib::Response& res) {
    res.set_content(sidecar.handle(req.matches[1].str(), req.body), "application/json");
  });
  std::cerr << "stub sidecar " << litscreen::StubSidecar::kVersion << " listening on http://" << host << ':' << port
            << '\n';
  if (!server.listen(host, port)) {
    std::cerr << "cannot listen on " << host << ':' << port << '\n';
    return 1;
  }
  return 0;
}
