#include "llano/embedder.hpp"

#include <cmath>
#include <cstdlib>

#include "json.hpp"

#include "http.hpp"
#include "llano/digest.hpp"
#include "llano/error.hpp"
#include "llano/text.hpp"

namespace llano {

HashedTrigramEmbedder::HashedTrigramEmbedder(std::size_t dimension) : dimension_(dimension) {
  if (dimension_ == 0) throw Error(ErrorKind::InvalidArgument, "embedding dimension is zero");
}

std::vector<Embedding> HashedTrigramEmbedder::embed(std::span<const std::string> texts) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    // Collapse whitespace so layout changes do not move the vector.
    std::u32string cps = U" ";
    for (char32_t c : text::decode_utf8(text::to_lower(t))) {
      if (text::is_space(c)) {
        if (cps.back() != U' ') cps.push_back(U' ');
      } else {
        cps.push_back(c);
      }
    }
    if (cps.back() != U' ') cps.push_back(U' ');

    Embedding v(dimension_, 0.0);
    for (std::size_t i = 0; i + 3 <= cps.size(); ++i) {
      const auto gram = text::encode_utf8(std::u32string_view(cps).substr(i, 3));
      const std::uint64_t h = digest::fnv1a64(gram);
      const double sign = (h >> 63) ? -1.0 : 1.0;
      v[h % dimension_] += sign;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::string HashedTrigramEmbedder::id() const {
  return "hashed-trigram-" + std::to_string(dimension_);
}

HttpEmbedder::HttpEmbedder(HttpEmbedderOptions options) : options_(std::move(options)) {
  http::parse_url(options_.base_url);
}

std::vector<Embedding> HttpEmbedder::embed(std::span<const std::string> texts) {
  nlohmann::json body;
  body["model"] = options_.model;
  body["input"] = nlohmann::json::array();
  for (const auto& t : texts) body["input"].push_back(t);

  http::Headers headers;
  if (const char* key = std::getenv(options_.api_key_env.c_str()); key && *key) {
    headers.emplace_back("Authorization", std::string("Bearer ") + key);
  }
  http::Response res;
  try {
    res = http::post_json(http::parse_url(options_.base_url), "/embeddings", body.dump(), headers,
                          options_.timeout);
  } catch (const Error& e) {
    throw Error(ErrorKind::EmbedderUnavailable, e.what());
  }
  if (res.status < 200 || res.status >= 300) {
    throw Error(ErrorKind::EmbedderUnavailable,
                "embeddings endpoint returned status " + std::to_string(res.status) + ": " +
                    res.body.substr(0, 200));
  }
  std::vector<Embedding> out(texts.size());
  try {
    const auto doc = nlohmann::json::parse(res.body);
    const auto& data = doc.at("data");
    if (data.size() != texts.size()) {
      throw Error(ErrorKind::EmbedderUnavailable, "embeddings response has " +
                                                      std::to_string(data.size()) +
                                                      " entries for " +
                                                      std::to_string(texts.size()) + " inputs");
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto idx = data[i].contains("index") ? data[i].at("index").get<std::size_t>() : i;
      if (idx >= out.size()) {
        throw Error(ErrorKind::EmbedderUnavailable, "embedding index out of range");
      }
      out[idx] = data[i].at("embedding").get<Embedding>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::EmbedderUnavailable, std::string("bad embeddings response: ") + e.what());
  }
  return out;
}

std::string HttpEmbedder::id() const { return "http:" + options_.model; }

}  // namespace llano
