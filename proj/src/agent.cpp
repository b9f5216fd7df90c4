// SPDX-License-Identifier: Apache-2.0
#include "placement/agent.hpp"

#include <algorithm>

#include "placement/protocol.hpp"

namespace placement {

namespace {

const std::vector<std::string> kRoundEndWords = {"done", "ready", "finished", "finish"};

std::string object_list(const Scene& scene) {
    std::string out;
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        if (i > 0) {
            out += i + 1 == scene.objects.size() ? " and " : ", ";
        }
        out += scene.objects[i];
    }
    return out;
}

std::string where(const ParsedInstruction& p) {
    return p.target + " " + std::string(to_phrase(p.direction)) + " the " + p.landmark;
}

} // namespace

bool signals_round_end(std::string_view text) {
    const auto words = tokenize(text);
    return std::any_of(words.begin(), words.end(), [](const std::string& w) {
        return std::find(kRoundEndWords.begin(), kRoundEndWords.end(), w) != kRoundEndWords.end();
    });
}

Agent::Agent(SceneCatalog scenes, SynonymTable synonyms, std::shared_ptr<InstructionParser> parser,
             std::shared_ptr<InstructionParser> fallback)
    : scenes_(std::move(scenes)), synonyms_(std::move(synonyms)), parser_(std::move(parser)),
      fallback_(std::move(fallback)) {}

template <typename Fn>
auto Agent::with_fallback(Fn&& fn) {
    try {
        return fn(*parser_);
    } catch (const ParserUnavailable&) {
        if (!fallback_) {
            throw;
        }
        ++fallbacks_used_;
        return fn(*fallback_);
    }
}

std::vector<nlohmann::json> Agent::step(const nlohmann::json& frame) {
    const std::string type = frame.value("type", "");
    if (type == "joined") {
        player_id_ = frame.at("player_id").get<std::string>();
        return {};
    }
    if (type == "round_start") {
        scene_ = scenes_.get(frame.at("scene").get<std::string>());
        lexicon_ = Lexicon::for_scene(scene_, synonyms_);
        board_ = msg::board_from_round_start(frame);
        playing_ = true;
        ready_sent_ = false;
        return {msg::chat("hello! please tell me where I should put each object.")};
    }
    if (type == "move_ok") {
        board_.placements[frame.at("object").get<std::string>()] =
            Point{frame.at("x").get<std::int64_t>(), frame.at("y").get<std::int64_t>()};
        return {};
    }
    if (type == "round_end" || type == "game_end") {
        playing_ = false;
        return {};
    }
    if (type == "chat" && playing_ && frame.value("from", "") != player_id_) {
        return on_partner_chat(frame.at("text").get<std::string>());
    }
    return {};
}

std::vector<nlohmann::json> Agent::on_partner_chat(const std::string& text) {
    ParsedInstruction parsed;
    try {
        const bool instruction =
            with_fallback([&](InstructionParser& p) { return p.is_instruction(text, lexicon_); });
        if (!instruction) {
            return on_other_chat(text);
        }
        parsed = with_fallback([&](InstructionParser& p) { return p.parse(text, lexicon_); });
    } catch (const ParseFailure& failure) {
        switch (failure.kind) {
        case ParseFailure::Kind::no_target:
            return {msg::chat("sorry, which object should I move?")};
        case ParseFailure::Kind::no_landmark:
            return {msg::chat("sorry, where should it go? please name something in the room.")};
        case ParseFailure::Kind::no_direction:
            return {msg::chat("sorry, should it go on, next to, above or below it?")};
        case ParseFailure::Kind::out_of_vocabulary:
            break;
        }
        return {msg::chat("sorry, I didn't understand that. can you say it differently?")};
    }
    return carry_out(parsed);
}

std::vector<nlohmann::json> Agent::on_other_chat(const std::string& text) {
    if (RuleParser::is_inventory_question(text)) {
        return {msg::chat("I have the " + object_list(scene_) + ". tell me where to put them.")};
    }
    if (signals_round_end(text)) {
        if (ready_sent_) {
            return {};
        }
        ready_sent_ = true;
        return {msg::chat("ok, I'm ready too."), msg::ready()};
    }
    return {msg::chat("I can only follow instructions like: put the " + scene_.objects.front()
                      + " on the " + lexicon_.landmarks.front() + ".")};
}

std::vector<nlohmann::json> Agent::carry_out(const ParsedInstruction& p) {
    const Point anchor = scene_.landmarks.at(p.landmark);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        const std::int64_t scale = std::int64_t{1} << attempt;
        const Point to = resolve_position(anchor, p.direction, scale);
        const auto check = validate_placement(scene_, board_, p.target, to);
        if (check == PlacementCheck::out_of_bounds) {
            return {msg::chat("sorry, the " + p.target + " would not fit " + std::string(to_phrase(p.direction))
                              + " the " + p.landmark + ". can you give me another spot?")};
        }
        if (check == PlacementCheck::ok) {
            board_.placements[p.target] = to;
            const std::string reply =
                attempt == 0
                    ? "ok, I put the " + where(p) + "."
                    : "that spot was taken, so I put the " + p.target + " a bit further "
                          + std::string(to_phrase(p.direction)) + " the " + p.landmark + ".";
            return {msg::move(p.target, to), msg::chat(reply)};
        }
        if (p.direction == Direction::on) {
            break; // no offset to grow
        }
    }
    return {msg::chat("sorry, I can't put the " + where(p)
                      + ", something is in the way. can you give me another spot?")};
}

} // namespace placement
