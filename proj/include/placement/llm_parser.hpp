// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>

#include "placement/parser.hpp"

namespace placement {

/// Sends a prompt to a text-completion model and returns the raw answer.
/// Implementations throw ParserUnavailable when the model cannot be reached.
class CompletionClient {
public:
    virtual ~CompletionClient() = default;
    virtual std::string complete(const std::string& prompt) = 0;
};

struct LlmConfig {
    /// Full URL of the completions endpoint, e.g. http://host:8000/v1/completions.
    std::string endpoint;
    std::string key;
    std::string model;
    std::chrono::milliseconds timeout{10000};
    int max_tokens = 16;

    /// From AGENT_LLM_ENDPOINT, AGENT_LLM_KEY and AGENT_LLM_MODEL. Empty when
    /// no endpoint is set.
    static std::optional<LlmConfig> from_env();
};

/// OpenAI-style completions over HTTP(S): POST {model, prompt, max_tokens,
/// temperature: 0} with a bearer token, answer in choices[0].text.
class HttpCompletionClient final : public CompletionClient {
public:
    explicit HttpCompletionClient(LlmConfig config);
    std::string complete(const std::string& prompt) override;

private:
    LlmConfig config_;
    std::string base_;
    std::string path_;
};

/// The three prompt bases, each followed by the message to classify.
std::string detection_prompt(std::string_view message);
/// The object and place lists are taken from the lexicon, so other scenes
/// get their own vocabulary; the examples stay as they are.
std::string extraction_prompt(std::string_view message, const Lexicon& lexicon);
std::string direction_prompt(std::string_view message);

/// Parser backed by a completion model. Every answer must exactly match the
/// closed vocabulary after trimming and lowercasing, otherwise ParseFailure.
class RemoteLLMParser final : public InstructionParser {
public:
    explicit RemoteLLMParser(std::shared_ptr<CompletionClient> client);

    std::string name() const override { return "llm"; }
    bool is_instruction(std::string_view text, const Lexicon& lexicon) override;
    TargetLandmark extract_target_landmark(std::string_view text, const Lexicon& lexicon) override;
    Direction extract_direction(std::string_view text, const Lexicon& lexicon) override;

private:
    std::shared_ptr<CompletionClient> client_;
};

} // namespace placement
