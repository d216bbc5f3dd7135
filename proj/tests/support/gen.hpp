#pragma once

// Hand-rolled generators for property tests. Everything is driven by an
// explicit seed so failures reproduce.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace llano::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_));
  }
  int between(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }
  double unit() { return std::uniform_real_distribution<double>(-1, 1)(rng_); }

  template <typename T, std::size_t N>
  const T& pick(const std::array<T, N>& xs) { return xs[below(N)]; }
  template <typename T>
  const T& pick(const std::vector<T>& xs) { return xs[below(xs.size())]; }

  std::string word() {
    static const std::array<const char*, 40> words = {
        "el", "la", "de", "ayuntamiento", "informa", "vecinos", "calle", "plaza",
        "concierto", "biblioteca", "programa", "actividades", "año", "mañana", "niños",
        "Madrid", "Córdoba", "Jaén", "cigüeña", "pingüino", "guitarra", "queso", "aéreo",
        "río", "país", "ciudad", "reunión", "educación", "según", "huevo", "hoy", "y",
        "a", "en", "con", "para", "socio-cultural", "María", "cuenta", "público"};
    return words[below(words.size())];
  }

  std::string percentage() {
    std::string n = std::to_string(between(0, 100));
    if (chance(0.3)) n += (chance(0.5) ? "," : ".") + std::to_string(between(0, 9));
    return n + (chance(0.3) ? " %" : "%");
  }
  std::string year() { return std::to_string(between(1900, 2099)); }
  std::string date_range() {
    static const std::array<const char*, 6> months = {"enero", "mayo", "junio",
                                                      "septiembre", "octubre", "diciembre"};
    const int a = between(1, 20);
    const int b = between(a + 1, 28);
    const char* sep = chance(0.5) ? " al " : "\xE2\x80\x93";  // en dash
    return std::to_string(a) + sep + std::to_string(b) + " de " + pick(months);
  }
  std::string large_number() {
    if (chance(0.5)) return std::to_string(between(10000, 9999999));
    std::string s = std::to_string(between(1, 999));
    const int groups = between(1, 3);
    for (int i = 0; i < groups; ++i) {
      char buf[8];
      std::snprintf(buf, sizeof buf, ".%03d", between(0, 999));
      s += buf;
    }
    return s;
  }
  std::string time() {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%d:%02d", between(0, 23), pick(std::array<int, 5>{0, 15, 30, 45, between(1, 59)}));
    std::string t = buf;
    const int suffix = between(0, 3);
    if (suffix == 1) t += " horas";
    if (suffix == 2) t += " h";
    return t;
  }
  std::string money() {
    std::string d = std::to_string(between(0, 9999));
    char cents[8];
    std::snprintf(cents, sizeof cents, "%02d", between(0, 99));
    const char* unit = pick(std::array<const char*, 3>{" EUR", " \xE2\x82\xAC", " euros"});
    return d + (chance(0.5) ? "." : ",") + cents + unit;
  }

  // Spanish-like prose salted with numerics, punctuation and newlines.
  std::string text(bool with_time_and_money = true) {
    std::string out;
    const int n = between(3, 30);
    for (int i = 0; i < n; ++i) {
      if (!out.empty()) out += chance(0.08) ? "\n" : " ";
      const int kind = between(0, 12);
      switch (kind) {
        case 0: out += percentage(); break;
        case 1: out += year(); break;
        case 2: out += date_range(); break;
        case 3: out += large_number(); break;
        case 4: out += with_time_and_money ? time() : word(); break;
        case 5: out += with_time_and_money ? money() : word(); break;
        case 6: out += std::to_string(between(0, 999)); break;
        default: out += word();
      }
      if (chance(0.1)) out += pick(std::array<const char*, 4>{".", ",", ":", ";"});
    }
    return out;
  }

  // Plain lowercase words from a small vocabulary (for BoW properties).
  std::string bag(std::size_t vocab, int max_len) {
    std::string out;
    const int n = between(0, max_len);
    for (int i = 0; i < n; ++i) {
      if (i) out += chance(0.1) ? ", " : " ";
      out += "w" + std::to_string(below(vocab));
    }
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace llano::testing
