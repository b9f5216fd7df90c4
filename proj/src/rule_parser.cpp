// SPDX-License-Identifier: Apache-2.0
#include "placement/parser.hpp"

#include <algorithm>

namespace placement {

namespace {

using Words = std::vector<std::string>;

struct Phrase {
    Words words;
    std::string canonical;
};

struct Match {
    std::size_t start = 0;
    std::size_t length = 0;
    std::string canonical;
};

const std::vector<std::pair<std::string, Direction>> kDirectionPhrases = {
    {"next to", Direction::next_to},
    {"beside", Direction::next_to},
    {"besides", Direction::next_to},
    {"near", Direction::next_to},
    {"to the right of", Direction::next_to},
    {"to the left of", Direction::next_to},
    {"to the right", Direction::next_to},
    {"to the left", Direction::next_to},
    {"on the right of", Direction::next_to},
    {"on the left of", Direction::next_to},
    {"on the right", Direction::next_to},
    {"on the left", Direction::next_to},
    {"right of", Direction::next_to},
    {"left of", Direction::next_to},
    {"on top of", Direction::above},
    {"on top", Direction::above},
    {"above", Direction::above},
    {"over", Direction::above},
    {"atop", Direction::above},
    {"below", Direction::below},
    {"under", Direction::below},
    {"underneath", Direction::below},
    {"beneath", Direction::below},
    {"on", Direction::on},
    {"onto", Direction::on},
    {"in", Direction::on},
    {"into", Direction::on},
    {"inside", Direction::on},
    {"at", Direction::on},
};

const std::vector<std::string> kPlacementVerbs = {"put", "place", "move", "drag", "set", "putting",
                                                  "placing", "moving", "drop"};

const std::vector<std::string> kInventoryQuestions = {"do you have", "what objects",
                                                      "which objects", "what do you have",
                                                      "how many", "do you see"};

bool starts_with(const Words& words, std::size_t at, const Words& phrase) {
    if (phrase.empty() || at + phrase.size() > words.size()) {
        return false;
    }
    return std::equal(phrase.begin(), phrase.end(), words.begin() + static_cast<std::ptrdiff_t>(at));
}

bool contains_phrase(const Words& words, const std::string& phrase) {
    const Words p = tokenize(phrase);
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (starts_with(words, i, p)) {
            return true;
        }
    }
    return false;
}

std::vector<Phrase> term_phrases(const Lexicon& lex) {
    std::vector<Phrase> phrases;
    for (const auto& t : lex.targets) {
        phrases.push_back({tokenize(t), t});
    }
    for (const auto& l : lex.landmarks) {
        phrases.push_back({tokenize(l), l});
    }
    for (const auto& [phrase, canonical] : lex.synonyms) {
        phrases.push_back({tokenize(phrase), canonical});
    }
    // Longest first; ties resolved by table order, which is deterministic.
    std::stable_sort(phrases.begin(), phrases.end(), [](const Phrase& a, const Phrase& b) {
        return a.words.size() > b.words.size();
    });
    return phrases;
}

// Non-overlapping left-to-right scan taking the longest phrase at each word.
std::vector<Match> find_terms(const Words& words, const Lexicon& lex) {
    const auto phrases = term_phrases(lex);
    std::vector<Match> matches;
    for (std::size_t i = 0; i < words.size();) {
        const Phrase* hit = nullptr;
        for (const auto& p : phrases) {
            if (starts_with(words, i, p.words)) {
                hit = &p;
                break;
            }
        }
        if (hit != nullptr) {
            matches.push_back({i, hit->words.size(), hit->canonical});
            i += hit->words.size();
        } else {
            ++i;
        }
    }
    return matches;
}

std::optional<Direction> find_direction(const Words& words, const std::vector<Match>& terms) {
    // Words inside object or landmark names never count as spatial phrases.
    std::vector<bool> masked(words.size(), false);
    for (const auto& m : terms) {
        for (std::size_t k = 0; k < m.length; ++k) {
            masked[m.start + k] = true;
        }
    }
    static const auto phrases = [] {
        std::vector<std::pair<Words, Direction>> out;
        for (const auto& [text, dir] : kDirectionPhrases) {
            out.emplace_back(tokenize(text), dir);
        }
        std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
            return a.first.size() > b.first.size();
        });
        return out;
    }();
    for (std::size_t i = 0; i < words.size(); ++i) {
        for (const auto& [p, dir] : phrases) {
            if (!starts_with(words, i, p)) {
                continue;
            }
            const bool clear = std::none_of(masked.begin() + static_cast<std::ptrdiff_t>(i),
                                            masked.begin() + static_cast<std::ptrdiff_t>(i + p.size()),
                                            [](bool b) { return b; });
            if (clear) {
                return dir;
            }
        }
    }
    return std::nullopt;
}

} // namespace

ParsedInstruction InstructionParser::parse(std::string_view text, const Lexicon& lexicon) {
    auto tl = extract_target_landmark(text, lexicon);
    return ParsedInstruction{std::move(tl.target), std::move(tl.landmark),
                             extract_direction(text, lexicon)};
}

bool RuleParser::is_inventory_question(std::string_view text) {
    const Words words = tokenize(text);
    return std::any_of(kInventoryQuestions.begin(), kInventoryQuestions.end(),
                       [&](const std::string& q) { return contains_phrase(words, q); });
}

bool RuleParser::is_instruction(std::string_view text, const Lexicon& lexicon) {
    if (is_inventory_question(text)) {
        return false;
    }
    const Words words = tokenize(text);
    const auto terms = find_terms(words, lexicon);
    const bool has_target = std::any_of(terms.begin(), terms.end(),
                                        [&](const Match& m) { return lexicon.is_target(m.canonical); });
    const bool has_landmark = std::any_of(
        terms.begin(), terms.end(), [&](const Match& m) { return lexicon.is_landmark(m.canonical); });
    const bool has_verb = std::any_of(words.begin(), words.end(), [](const std::string& w) {
        return std::find(kPlacementVerbs.begin(), kPlacementVerbs.end(), w) != kPlacementVerbs.end();
    });
    const bool has_spatial = find_direction(words, terms).has_value();

    if (has_target && has_landmark) {
        return true;
    }
    if (has_verb && (has_landmark || has_spatial)) {
        return true;
    }
    // Terse commands such as "lamp on toilet".
    return (has_target || has_landmark) && has_spatial;
}

TargetLandmark RuleParser::extract_target_landmark(std::string_view text, const Lexicon& lexicon) {
    const Words words = tokenize(text);
    const auto terms = find_terms(words, lexicon);
    const Match* target = nullptr;
    const Match* landmark = nullptr;
    for (const auto& m : terms) {
        if (target == nullptr && lexicon.is_target(m.canonical)) {
            target = &m;
        } else if (lexicon.is_landmark(m.canonical)) {
            // The reference point is named last: "... to the left of the sink".
            landmark = &m;
        }
    }
    if (target == nullptr) {
        throw ParseFailure(ParseFailure::Kind::no_target, "no known object in message");
    }
    if (landmark == nullptr) {
        throw ParseFailure(ParseFailure::Kind::no_landmark, "no known landmark in message");
    }
    return TargetLandmark{target->canonical, landmark->canonical};
}

Direction RuleParser::extract_direction(std::string_view text, const Lexicon& lexicon) {
    const Words words = tokenize(text);
    if (auto dir = find_direction(words, find_terms(words, lexicon))) {
        return *dir;
    }
    throw ParseFailure(ParseFailure::Kind::no_direction, "no spatial phrase in message");
}

} // namespace placement
