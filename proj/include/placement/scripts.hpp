// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "placement/agent.hpp"
#include "placement/lexicon.hpp"
#include "placement/parser.hpp"
#include "placement/scenes.hpp"

namespace placement {

/// A player in self-play. It sees only the frames the server sends to its
/// own seat and answers with client frames.
class Policy {
public:
    virtual ~Policy() = default;
    virtual std::string policy_id() const = 0;
    virtual std::vector<nlohmann::json> on_frame(const nlohmann::json& frame) = 0;
    /// Called when no frame is waiting.
    virtual std::vector<nlohmann::json> on_idle() { return {}; }
};

/// What a policy may know beyond its own frames: the room layout and the
/// shared synonym table.
struct PolicyContext {
    SceneCatalog scenes = default_scenes();
    SynonymTable synonyms = default_synonyms();
};

enum class Role { lead, follow, alternate };

/// A placement a leader can dictate: landmark plus direction.
struct Slot {
    std::string landmark;
    Direction direction = Direction::on;
    Point position;
};

/// Every in-bounds slot of a scene, in landmark then direction order.
std::vector<Slot> candidate_slots(const Scene& scene);

/// How a script words an instruction.
class Phrasing {
public:
    virtual ~Phrasing() = default;
    /// "put the <object> <direction> the <landmark>"
    virtual std::string instruction(const std::string& object, const Slot& slot,
                                    const Lexicon& lexicon);
};

/// Controlled-language player following a per-round role schedule.
///
/// lead: plans a non-overlapping goal layout, moves its own object into
///   place and dictates it; objects the partner could not place exactly are
///   retried later and re-planned after two misses.
/// follow: carries out each instruction on its own board, acknowledges with
///   "ok" and signals ready when told the round is done.
/// alternate: the seats take turns proposing the next object's placement.
class ScriptedPlayer : public Policy {
public:
    /// `roles[seat][round - 1]`; seat 0 is the first joiner.
    using RoleTable = std::array<std::array<Role, 2>, 2>;

    ScriptedPlayer(std::string id, RoleTable roles, std::uint64_t seed, PolicyContext context,
                   std::unique_ptr<Phrasing> phrasing = nullptr);

    std::string policy_id() const override { return id_; }
    std::vector<nlohmann::json> on_frame(const nlohmann::json& frame) override;

    /// Upper bound on instructions a leader sends per round.
    int instruction_budget = 30;

private:
    using Actions = std::vector<nlohmann::json>;

    void start_round(const nlohmann::json& frame);
    Actions on_partner_chat(const std::string& text);

    Actions lead_next();
    Actions lead_reply(const std::string& text);
    Actions obey(const std::string& text, bool& understood);
    Actions propose(std::size_t index);
    Actions finish_round(bool announce);

    /// Moves the own object to `to`, first parking whatever overlaps it.
    Actions place_own(const std::string& object, Point to, const std::vector<Point>& reserved);
    std::optional<Slot> pick_slot(const std::string& object, const std::vector<Point>& reserved,
                                  const std::set<std::pair<std::string, Direction>>& tried);
    std::vector<Point> reserved_except(const std::map<std::string, Point>& slots,
                                       const std::string& object) const;
    Actions say_instruction(const std::string& object, const Slot& slot);

    std::string id_;
    RoleTable roles_;
    std::uint64_t seed_;
    PolicyContext context_;
    std::unique_ptr<Phrasing> phrasing_;
    RuleParser parser_;

    std::string player_id_;
    std::size_t seat_ = 0;
    int round_ = 0;
    Role role_ = Role::follow;
    Scene scene_;
    Lexicon lexicon_;
    Board board_;
    std::mt19937_64 rng_;
    std::vector<Slot> candidates_;
    bool playing_ = false;
    bool ready_sent_ = false;

    // Goal positions both sides have heard, per object.
    std::map<std::string, Point> agreed_;

    // Leading.
    std::map<std::string, Slot> plan_;
    std::deque<std::string> queue_;
    std::optional<std::string> pending_;
    std::map<std::string, int> misses_;
    std::map<std::string, std::set<std::pair<std::string, Direction>>> tried_;
    int sent_ = 0;
    bool lead_done_ = false;

    // Alternating.
    std::optional<std::size_t> awaiting_;
};

/// Wraps the baseline agent as a policy.
class AgentPolicy : public Policy {
public:
    AgentPolicy(PolicyContext context, std::shared_ptr<InstructionParser> parser,
                std::shared_ptr<InstructionParser> fallback = nullptr);

    std::string policy_id() const override { return "agent"; }
    std::vector<nlohmann::json> on_frame(const nlohmann::json& frame) override {
        return agent_.step(frame);
    }
    const Agent& agent() const { return agent_; }

private:
    Agent agent_;
};

/// How a reply to an instruction reads to a scripted leader.
enum class ReplyKind { ignored, accepted, failed };
ReplyKind classify_reply(std::string_view text);

std::unique_ptr<Policy> make_leader(std::uint64_t seed, PolicyContext context = {});
std::unique_ptr<Policy> make_follower(std::uint64_t seed, PolicyContext context = {});
std::unique_ptr<Policy> make_alternating(std::uint64_t seed, PolicyContext context = {});
/// Alternating in round 1, first seat leads in round 2.
std::unique_ptr<Policy> make_grip_tightening(std::uint64_t seed, PolicyContext context = {});
/// First seat leads in round 1, alternating in round 2.
std::unique_ptr<Policy> make_grip_loosening(std::uint64_t seed, PolicyContext context = {});
std::unique_ptr<Policy> make_agent_policy(PolicyContext context = {});

/// Leader whose object and landmark words are replaced, each with
/// probability `noise_rate`, by a synonym from the table; with
/// `out_of_vocabulary` set, an unknown word is also among the choices.
std::unique_ptr<Policy> noisy_leader(double noise_rate, std::uint64_t seed,
                                     bool out_of_vocabulary = false, PolicyContext context = {});

/// Builds a policy by name: leader, follower, alternating, grip_tightening,
/// grip_loosening, agent, noisy_leader@<rate>, noisy_leader_oov@<rate>.
/// Throws std::invalid_argument for unknown names.
std::unique_ptr<Policy> make_policy(const std::string& name, std::uint64_t seed,
                                    const PolicyContext& context = {});

} // namespace placement
