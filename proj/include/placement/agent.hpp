// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "placement/lexicon.hpp"
#include "placement/parser.hpp"
#include "placement/scenes.hpp"

namespace placement {

/// Follower agent that lets the human lead.
///
/// It opens every round with a single request for instructions and after
/// that only reacts to partner chat: detect an instruction, extract
/// (target, landmark, direction), map it to a position with the fixed
/// offset rules and move its own object there. If the slot is occupied the
/// offset is doubled (at most `max_attempts` tries) before it asks for
/// another spot. It never moves anything unprompted.
class Agent {
public:
    /// `fallback` is used whenever `parser` throws ParserUnavailable; it may
    /// be null when `parser` is already the rule parser.
    Agent(SceneCatalog scenes, SynonymTable synonyms, std::shared_ptr<InstructionParser> parser,
          std::shared_ptr<InstructionParser> fallback = nullptr);

    /// Reacts to one server frame; returns the client frames to send.
    std::vector<nlohmann::json> step(const nlohmann::json& frame);

    const std::string& player_id() const { return player_id_; }
    const Board& board() const { return board_; }
    const Lexicon& lexicon() const { return lexicon_; }
    int fallbacks_used() const { return fallbacks_used_; }

    int max_attempts = 3;

private:
    std::vector<nlohmann::json> on_partner_chat(const std::string& text);
    std::vector<nlohmann::json> on_other_chat(const std::string& text);
    std::vector<nlohmann::json> carry_out(const ParsedInstruction& instruction);

    template <typename Fn>
    auto with_fallback(Fn&& fn);

    SceneCatalog scenes_;
    SynonymTable synonyms_;
    std::shared_ptr<InstructionParser> parser_;
    std::shared_ptr<InstructionParser> fallback_;

    std::string player_id_;
    Scene scene_;
    Lexicon lexicon_;
    Board board_;
    bool playing_ = false;
    bool ready_sent_ = false;
    int fallbacks_used_ = 0;
};

/// True when a non-instruction message says the round is finished.
bool signals_round_end(std::string_view text);

} // namespace placement
