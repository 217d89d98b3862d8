#include "remote.hpp"

#include <algorithm>
#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "sampler.hpp"

namespace hqts {

namespace {

struct Endpoint {
    std::string base;   // scheme://host:port
    std::string path;   // /sample
};

Endpoint split_endpoint(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ValidationError("sampler endpoint needs a scheme, e.g. http://host:port/path");
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::vector<Sample> remote_sample(const Qubo& q, const std::string& endpoint, int num_reads,
                                  double timeout_seconds) {
    if (endpoint.empty()) throw ValidationError("no sampler endpoint configured");
    const Endpoint ep = split_endpoint(endpoint);

    httplib::Client client(ep.base);
    const auto timeout = std::chrono::milliseconds(
        static_cast<long>(std::max(1.0, timeout_seconds * 1000.0)));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    const std::string body = qubo_to_json(q, num_reads);
    httplib::Result res = client.Post(ep.path, body, "application/json");
    if (!res)
        throw Error("sampler endpoint unreachable: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw Error("sampler endpoint returned status " + std::to_string(res->status));

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed sampler response: ") + e.what());
    }

    std::vector<Sample> samples;
    try {
        for (const auto& item : j.at("samples")) {
            Sample s;
            const auto& bits = item.at("assignment");
            if (static_cast<int>(bits.size()) != q.num_vars)
                throw Error("sample has wrong assignment length");
            s.assignment.reserve(bits.size());
            for (const auto& b : bits) {
                const int v = b.get<int>();
                if (v != 0 && v != 1) throw Error("sample bits must be 0 or 1");
                s.assignment.push_back(static_cast<uint8_t>(v));
            }
            s.energy = item.at("energy").get<double>();
            s.occurrences = item.value("occurrences", 1);
            const double local = qubo_energy(q, s.assignment);
            if (std::abs(local - s.energy) > 1e-6)
                throw Error("sampler energy disagrees with local evaluation");
            s.energy = local;
            samples.push_back(std::move(s));
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(std::string("malformed sampler response: ") + e.what());
    }

    std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.assignment < b.assignment;
    });
    return samples;
}

}  // namespace hqts
