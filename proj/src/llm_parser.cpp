// SPDX-License-Identifier: Apache-2.0
#include "placement/llm_parser.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>

#include "httplib.h"
#include "json.hpp"

namespace placement {

namespace {

// Prompt bases, kept exactly as the model was shown them.
constexpr std::string_view kDetectionBase = R"(you are playing a game with another 
player in which you have to follow 
their instructions about where to put 
certain objects. i will give you a 
message and i want you to tell me if 
it contains a set of instructions. 
don't provide explanation, just give
me the output (True or False).
examples:
[user 1]: place the lamp on the fridge
[you]: True

[user 1]: can you put the knife in the 
drawer?
[you]: True

[user 1]: do you have a toaster?
[you]: False

[user 1]: what objects do you have?
[you]: False

[user 1']: let's place the pan on top of 
the lamp
[you]: True

[user 1]: put hat on sink
[you]: True

[user 1]: lamp on toilet
[you]: True)";

constexpr std::string_view kExtractionBase = R"(i will give you a set of instruct-
ions and i want you to extract two 
things: one, the object that should 
be moved. then, i want you to compare 
it to the following four words and 
return the one it is most close to. 
the objects are: garbage, cowboy, 
cap, pants, pillow. next, i want you 
to extract the location where the 
object should be placed. then, match 
the output place with one of the 
possible places: fridge, counter, toast-
er, lamp, stove, oven, sink. don't 
provide explanation, just give me the 
output. for example: 
user 1: put the pillow to the right of 
the fridge
you: pillow, fridge

user 1: put the jeans on the stove
you: pants, stove

user 1: let's place the cushion on 
the ceiling light
you: pillow, lamp

user 1: place the garbagebag in 
the upper right corner of the counter
you: garbage, counter

user 1: cowboy hat to the left of 
the water faucet
you: cowboy, sink

user 1: the other hat on the right 
behind the pants
you: cap, toaster

user 1: garbage bag on top of 
lamp stand
you: garbage, lamp

user 1: let's place the blue hat 
on the toaster
you: cap, toaster

user 1: put peaky blinders hat 
in the oven
you: cap, oven)";

constexpr std::string_view kDirectionBase = R"(i will give you a set of instructions 
and i want you to extract the key spatial 
word or phrase.  then,  i want you to com-
pare it to the following four words and 
return the one it is most close to. the 
words are: above, below, next to, on. 
don't provide explanation, just give me 
the output. for example: 
[user 1]: put the knife to the right of 
the fridge
[you]: next to 

[user 1]: put the pan above the oven
[you]: above

[user 1]: place the toilet paper in the 
upper right corner of the cupboard
[you]: on

[user 1]: cowboy hat to the left of 
the water faucet
[you]: next to

[user 1]: the cowboy hat on the right 
behind the pants
[you]: next to 

[user 1]: pillow under the sink
[you]: below

[user 1]: garbage bag on top of lamp 
stand
[you]: above)";

// Vocabulary the extraction base was written for.
const std::set<std::string> kBaseTargets = {"garbage", "cowboy", "cap", "pants", "pillow"};
const std::set<std::string> kBaseLandmarks = {"fridge", "counter", "toaster", "lamp",
                                              "stove",  "oven",    "sink"};

std::string join(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) {
            out += ", ";
        }
        out += w;
    }
    return out;
}

std::string replace_between(std::string text, std::string_view open, std::string_view close,
                            const std::string& replacement) {
    const auto start = text.find(open);
    if (start == std::string::npos) {
        return text;
    }
    const auto from = start + open.size();
    const auto end = text.find(close, from);
    if (end == std::string::npos) {
        return text;
    }
    return text.replace(from, end - from, replacement);
}

std::string normalize_answer(std::string_view raw) {
    std::string s(raw);
    if (const auto nl = s.find('\n'); nl != std::string::npos) {
        s = s.substr(0, nl);
    }
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    auto is_trim = [](unsigned char c) { return std::isspace(c) || c == '.' || c == '"' || c == '\''; };
    while (!s.empty() && is_trim(s.back())) {
        s.pop_back();
    }
    std::size_t i = 0;
    while (i < s.size() && is_trim(s[i])) {
        ++i;
    }
    return s.substr(i);
}

std::string env_or_empty(const char* name) {
    const char* value = std::getenv(name);
    return value ? value : "";
}

} // namespace

std::optional<LlmConfig> LlmConfig::from_env() {
    LlmConfig config;
    config.endpoint = env_or_empty("AGENT_LLM_ENDPOINT");
    if (config.endpoint.empty()) {
        return std::nullopt;
    }
    config.key = env_or_empty("AGENT_LLM_KEY");
    config.model = env_or_empty("AGENT_LLM_MODEL");
    return config;
}

HttpCompletionClient::HttpCompletionClient(LlmConfig config) : config_(std::move(config)) {
    const auto scheme = config_.endpoint.find("://");
    const auto path_start =
        config_.endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path_start == std::string::npos) {
        base_ = config_.endpoint;
        path_ = "/v1/completions";
    } else {
        base_ = config_.endpoint.substr(0, path_start);
        path_ = config_.endpoint.substr(path_start);
    }
}

std::string HttpCompletionClient::complete(const std::string& prompt) {
    httplib::Client client(base_);
    const auto seconds = config_.timeout.count() / 1000;
    const auto micros = (config_.timeout.count() % 1000) * 1000;
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);
    if (!config_.key.empty()) {
        client.set_bearer_token_auth(config_.key);
    }

    nlohmann::json body = {{"model", config_.model},
                           {"prompt", prompt},
                           {"max_tokens", config_.max_tokens},
                           {"temperature", 0}};
    auto res = client.Post(path_, body.dump(), "application/json");
    if (!res) {
        throw ParserUnavailable("completion request failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw ParserUnavailable("completion endpoint answered " + std::to_string(res->status));
    }
    try {
        const auto reply = nlohmann::json::parse(res->body);
        const auto& choice = reply.at("choices").at(0);
        if (choice.contains("text")) {
            return choice.at("text").get<std::string>();
        }
        return choice.at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParserUnavailable(std::string("unexpected completion response: ") + e.what());
    }
}

std::string detection_prompt(std::string_view message) {
    return std::string(kDetectionBase) + "\n\n[user 1]: " + std::string(message) + "\n[you]:";
}

std::string extraction_prompt(std::string_view message, const Lexicon& lexicon) {
    std::string base(kExtractionBase);
    const std::set<std::string> targets(lexicon.targets.begin(), lexicon.targets.end());
    const std::set<std::string> landmarks(lexicon.landmarks.begin(), lexicon.landmarks.end());
    if (targets != kBaseTargets) {
        base = replace_between(base, "the objects are: ", ". next,", join(lexicon.targets));
    }
    if (landmarks != kBaseLandmarks) {
        base = replace_between(base, "possible places: ", ". don't", join(lexicon.landmarks));
    }
    return base + "\n\nuser 1: " + std::string(message) + "\nyou:";
}

std::string direction_prompt(std::string_view message) {
    return std::string(kDirectionBase) + "\n\n[user 1]: " + std::string(message) + "\n[you]:";
}

RemoteLLMParser::RemoteLLMParser(std::shared_ptr<CompletionClient> client)
    : client_(std::move(client)) {}

bool RemoteLLMParser::is_instruction(std::string_view text, const Lexicon&) {
    const std::string answer = normalize_answer(client_->complete(detection_prompt(text)));
    if (answer == "true") {
        return true;
    }
    if (answer == "false") {
        return false;
    }
    throw ParseFailure(ParseFailure::Kind::out_of_vocabulary, "detection answer '" + answer + "'");
}

TargetLandmark RemoteLLMParser::extract_target_landmark(std::string_view text, const Lexicon& lexicon) {
    const std::string answer = normalize_answer(client_->complete(extraction_prompt(text, lexicon)));
    const auto comma = answer.find(',');
    if (comma == std::string::npos || answer.find(',', comma + 1) != std::string::npos) {
        throw ParseFailure(ParseFailure::Kind::out_of_vocabulary, "extraction answer '" + answer + "'");
    }
    TargetLandmark out{normalize_answer(answer.substr(0, comma)),
                       normalize_answer(answer.substr(comma + 1))};
    if (!lexicon.is_target(out.target)) {
        throw ParseFailure(ParseFailure::Kind::out_of_vocabulary, "unknown object '" + out.target + "'");
    }
    if (!lexicon.is_landmark(out.landmark)) {
        throw ParseFailure(ParseFailure::Kind::out_of_vocabulary,
                           "unknown place '" + out.landmark + "'");
    }
    return out;
}

Direction RemoteLLMParser::extract_direction(std::string_view text, const Lexicon&) {
    const std::string answer = normalize_answer(client_->complete(direction_prompt(text)));
    if (answer == "on") return Direction::on;
    if (answer == "next to") return Direction::next_to;
    if (answer == "above") return Direction::above;
    if (answer == "below") return Direction::below;
    throw ParseFailure(ParseFailure::Kind::out_of_vocabulary, "direction answer '" + answer + "'");
}

} // namespace placement
