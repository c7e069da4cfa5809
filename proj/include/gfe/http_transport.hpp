#ifndef GFE_HTTP_TRANSPORT_HPP
#define GFE_HTTP_TRANSPORT_HPP

// Opt-in header: pulls in cpp-httplib. Only the CLI needs a real network
// transport; tests inject fakes through lmfdb::Transport.

#ifdef GFE_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "gfe/lmfdb.hpp"

namespace gfe::lmfdb {

inline Transport http_transport() {
    return [](const std::string& url) -> HttpResponse {
        HttpResponse out;
        auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos) throw std::invalid_argument("bad url: " + url);
        std::string scheme = url.substr(0, scheme_end);
        std::string rest = url.substr(scheme_end + 3);
        auto slash = rest.find('/');
        std::string host = slash == std::string::npos ? rest : rest.substr(0, slash);
        std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
        auto run = [&](auto& cli) {
            cli.set_follow_location(true);
            cli.set_read_timeout(60, 0);
            auto res = cli.Get(path.c_str());
            if (!res) throw std::runtime_error("lmfdb: network error for " + url);
            out.status = res->status;
            out.body = res->body;
            for (auto& [k, v] : res->headers) out.headers[k] = v;
        };
        if (scheme == "http") {
            httplib::Client cli(host.c_str());
            run(cli);
        } else if (scheme == "https") {
#ifdef GFE_HAVE_OPENSSL
            httplib::SSLClient cli(host.c_str());
            cli.enable_server_certificate_verification(false);
            run(cli);
#else
            throw std::runtime_error("https transport unavailable: built without OpenSSL");
#endif
        } else {
            throw std::invalid_argument("unsupported scheme: " + scheme);
        }
        return out;
    };
}

}  // namespace gfe::lmfdb

#endif
