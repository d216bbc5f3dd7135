#include <string>
#include <string_view>
#include <vector>

#include "llano/metrics.hpp"
#include "llano/text.hpp"

namespace llano::metrics {
namespace {

enum class Sound { Consonant, Strong, AccentedWeak, Weak };

Sound vowel_class(char32_t c) {
  switch (c) {
    case U'a': case U'e': case U'o':
    case U'á': case U'é': case U'ó':
    case U'à': case U'è': case U'ò':
      return Sound::Strong;
    case U'í': case U'ú': case U'ì': case U'ù':
      return Sound::AccentedWeak;
    case U'i': case U'u': case U'ü': case U'ï':
      return Sound::Weak;
    default:
      return Sound::Consonant;
  }
}

bool front_vowel(char32_t c) { return c == U'e' || c == U'i' || c == U'é' || c == U'í'; }

// Two adjacent vowels belong to different syllables when both are
// strong, or when an accented i/u meets a strong vowel. Two weak vowels
// always form a diphthong, accented or not (cuí-da-te, lin-güís-ti-ca).
bool hiatus(Sound a, Sound b) {
  if (a == Sound::Strong && b == Sound::Strong) return true;
  return (a == Sound::AccentedWeak && b == Sound::Strong) ||
         (a == Sound::Strong && b == Sound::AccentedWeak);
}

}  // namespace

int count_syllables(std::string_view word) {
  std::u32string lowered;
  for (char32_t c : text::decode_utf8(word)) {
    c = text::to_lower(c);
    if (text::is_letter(c)) lowered.push_back(c);
  }
  // 'h' is silent and does not break a diphthong (prohi-bir, ahu-ma-do),
  // except in hu + vowel, which is a [w] onset (O-ri-hue-la, ca-ca-hue-te).
  std::u32string letters;
  for (std::size_t i = 0; i < lowered.size(); ++i) {
    const char32_t c = lowered[i];
    if (c == U'h') {
      const bool onset = i + 2 < lowered.size() && lowered[i + 1] == U'u' &&
                         vowel_class(lowered[i + 2]) != Sound::Consonant;
      if (!onset) continue;
    }
    letters.push_back(c);
  }

  std::vector<Sound> sounds(letters.size(), Sound::Consonant);
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const char32_t c = letters[i];
    Sound s = vowel_class(c);
    if (c == U'u' && i > 0 && (letters[i - 1] == U'q' || letters[i - 1] == U'g') &&
        i + 1 < letters.size() && front_vowel(letters[i + 1])) {
      s = Sound::Consonant;  // que, qui, gue, gui
    } else if (c == U'y') {
      const bool final_after_vowel = i + 1 == letters.size() && i > 0 &&
                                     vowel_class(letters[i - 1]) != Sound::Consonant;
      s = final_after_vowel ? Sound::Weak : Sound::Consonant;
    }
    sounds[i] = s;
  }

  int nuclei = 0;
  for (std::size_t i = 0; i < sounds.size(); ++i) {
    if (sounds[i] == Sound::Consonant) continue;
    const bool joins_previous = i > 0 && sounds[i - 1] != Sound::Consonant &&
                                !hiatus(sounds[i - 1], sounds[i]);
    if (!joins_previous) ++nuclei;
  }
  return nuclei > 0 ? nuclei : 1;
}

}  // namespace llano::metrics
