// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "placement/lexicon.hpp"

namespace placement {

class ParseFailure : public std::runtime_error {
public:
    enum class Kind { no_target, no_landmark, no_direction, out_of_vocabulary };

    ParseFailure(Kind kind, const std::string& what) : std::runtime_error(what), kind(kind) {}
    Kind kind;
};

/// The parser backend could not be reached; callers fall back to rules.
class ParserUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TargetLandmark {
    std::string target;
    std::string landmark;

    friend bool operator==(const TargetLandmark&, const TargetLandmark&) = default;
};

/// Turns a chat message into a placement instruction in three steps:
/// detection, (target, landmark) extraction, direction extraction. Results
/// are always drawn from the lexicon; anything else is a ParseFailure.
class InstructionParser {
public:
    virtual ~InstructionParser() = default;

    virtual std::string name() const = 0;
    virtual bool is_instruction(std::string_view text, const Lexicon& lexicon) = 0;
    virtual TargetLandmark extract_target_landmark(std::string_view text, const Lexicon& lexicon) = 0;
    virtual Direction extract_direction(std::string_view text, const Lexicon& lexicon) = 0;

    /// Both extraction steps.
    ParsedInstruction parse(std::string_view text, const Lexicon& lexicon);
};

/// Deterministic keyword parser. Synonyms are matched longest-first, so
/// "cowboy hat" wins over a bare "hat" and "on top of" over "on".
class RuleParser final : public InstructionParser {
public:
    std::string name() const override { return "rule"; }
    bool is_instruction(std::string_view text, const Lexicon& lexicon) override;
    TargetLandmark extract_target_landmark(std::string_view text, const Lexicon& lexicon) override;
    Direction extract_direction(std::string_view text, const Lexicon& lexicon) override;

    /// True for inventory questions ("do you have ...", "what objects ...").
    static bool is_inventory_question(std::string_view text);
};

} // namespace placement
