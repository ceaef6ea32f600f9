#pragma once

#include <array>

namespace acceptance {

// Published (Xc, Wc x100, possessed) triples from the creative-prompt
// comparison figure: three models, EN/ES/JA, six concepts.
struct FigureTriple {
  const char* model;
  const char* language;
  const char* concept_id;
  double xc;
  int wc_pct;
  bool possessed;
};

inline constexpr std::array<FigureTriple, 54> kFigureTriples = {{
    {"dalle-mega", "en", "bird", 0.741, 27, true},
    {"dalle-mega", "en", "keyboard", 0.824, 28, true},
    {"dalle-mega", "en", "snow", 0.787, 27, true},
    {"dalle-mega", "es", "bird", 0.739, 27, true},
    {"dalle-mega", "es", "keyboard", 0.801, 29, true},
    {"dalle-mega", "es", "snow", 0.723, 26, true},
    {"dalle-mega", "ja", "bird", 0.704, 26, true},
    {"dalle-mega", "ja", "keyboard", 0.346, 18, false},
    {"dalle-mega", "ja", "snow", 0.404, 19, false},
    {"altdiffusion", "en", "bird", 0.655, 26, true},
    {"altdiffusion", "en", "keyboard", 0.491, 27, true},
    {"altdiffusion", "en", "snow", 0.759, 26, true},
    {"altdiffusion", "es", "bird", 0.646, 26, true},
    {"altdiffusion", "es", "keyboard", 0.489, 26, true},
    {"altdiffusion", "es", "snow", 0.704, 25, true},
    {"altdiffusion", "ja", "bird", 0.655, 26, true},
    {"altdiffusion", "ja", "keyboard", 0.462, 24, false},
    {"altdiffusion", "ja", "snow", 0.671, 25, true},
    {"sd2", "en", "bird", 0.726, 27, true},
    {"sd2", "en", "keyboard", 0.837, 29, true},
    {"sd2", "en", "snow", 0.846, 26, true},
    {"sd2", "es", "bird", 0.697, 26, true},
    {"sd2", "es", "keyboard", 0.789, 29, true},
    {"sd2", "es", "snow", 0.818, 26, true},
    {"sd2", "ja", "bird", 0.655, 26, true},
    {"sd2", "ja", "keyboard", 0.797, 29, true},
    {"sd2", "ja", "snow", 0.808, 26, true},
    {"dalle-mega", "en", "dog", 0.746, 26, true},
    {"dalle-mega", "en", "fire", 0.938, 27, true},
    {"dalle-mega", "en", "moon", 0.868, 29, true},
    {"dalle-mega", "es", "dog", 0.712, 27, true},
    {"dalle-mega", "es", "fire", 0.926, 27, true},
    {"dalle-mega", "es", "moon", 0.864, 28, true},
    {"dalle-mega", "ja", "dog", 0.298, 19, false},
    {"dalle-mega", "ja", "fire", 0.247, 19, false},
    {"dalle-mega", "ja", "moon", 0.269, 23, false},
    {"altdiffusion", "en", "dog", 0.702, 26, true},
    {"altdiffusion", "en", "fire", 0.669, 23, true},
    {"altdiffusion", "en", "moon", 0.704, 27, true},
    {"altdiffusion", "es", "dog", 0.643, 26, true},
    {"altdiffusion", "es", "fire", 0.658, 23, true},
    {"altdiffusion", "es", "moon", 0.723, 28, true},
    {"altdiffusion", "ja", "dog", 0.677, 26, true},
    {"altdiffusion", "ja", "fire", 0.639, 23, true},
    {"altdiffusion", "ja", "moon", 0.607, 24, true},
    {"sd2", "en", "dog", 0.748, 26, true},
    {"sd2", "en", "fire", 0.775, 25, true},
    {"sd2", "en", "moon", 0.756, 28, true},
    {"sd2", "es", "dog", 0.712, 26, true},
    {"sd2", "es", "fire", 0.620, 23, true},
    {"sd2", "es", "moon", 0.763, 29, true},
    {"sd2", "ja", "dog", 0.582, 25, true},
    {"sd2", "ja", "fire", 0.292, 20, false},
    {"sd2", "ja", "moon", 0.282, 19, false},
}};

}  // namespace acceptance
