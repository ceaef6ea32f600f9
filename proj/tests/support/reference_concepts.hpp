#pragma once

#include <array>
#include <string_view>

namespace testing {

// The published 193-concept benchmark list, in its published order.
inline constexpr std::array<std::string_view, 193> kReferenceConcepts = {
    "eye", "hand", "head", "smile", "face", "room", "door", "girl", "person", "man", "love", "watch", "arm",
    "hair", "mother", "car", "mom", "dad", "table", "phone", "father", "grin", "mouth", "kid", "family",
    "finger", "world", "shirt", "ground", "sister", "chair", "kitchen", "woman", "beer", "hill", "metal",
    "hotel", "princess", "bench", "detail", "bird", "cigarette", "history", "plastic", "pizza", "airplane",
    "male", "backpack", "judge", "dragon", "sea", "bike", "female", "garden", "meal", "toy", "ship", "flame",
    "tail", "library", "weapon", "cd", "rope", "cafeteria", "porch", "queen", "duck", "lake", "television",
    "boat", "tent", "roof", "ticket", "cop", "milk", "soldier", "tank", "thigh", "belt", "sandwich",
    "bullet", "teenager", "apple", "wine", "supply", "captain", "cheese", "feather", "mask", "prince",
    "beaver", "seal", "stingray", "shark", "rose", "bottle", "mushroom", "orange", "pear", "pepper",
    "keyboard", "lamp", "telephone", "couch", "bee", "beetle", "butterfly", "caterpillar", "cockroach",
    "tiger", "wolf", "bridge", "castle", "house", "road", "cloud", "forest", "mountain", "camel", "chimp",
    "kangaroo", "fox", "raccoon", "lobster", "spider", "worm", "baby", "crocodile", "lizard", "dinosaur",
    "snake", "turtle", "hamster", "rabbit", "squirrel", "tree", "bicycle", "train", "tractor", "jump", "men",
    "moon", "clothes", "neck", "fire", "tire", "teacher", "movie", "dog", "ring", "eyebrow", "sun", "tall",
    "doctor", "sky", "apartment", "shoe", "rock", "daughter", "girlfriend", "bar", "ball", "hallway", "tv",
    "teeth", "police", "field", "wife", "brain", "pants", "tongue", "cup", "computer", "bottom", "bell",
    "aunt", "clock", "suit", "plate", "chocolate", "snow", "guitar", "truck", "church", "husband", "van",
    "blanket", "bowl", "mama", "cookie", "hat", "monster", "ceiling"
};

}  // namespace testing
