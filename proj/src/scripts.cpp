// SPDX-License-Identifier: Apache-2.0
#include "placement/scripts.hpp"

#include <algorithm>
#include <stdexcept>

#include "placement/protocol.hpp"

namespace placement {

namespace {

constexpr std::int64_t kParkingStride = 5;

const std::vector<std::string> kFailureWords = {"sorry", "can't", "cannot", "couldn't",
                                                "didn't", "further", "taken"};
const std::vector<std::string> kAcceptWords = {"ok", "okay", "done"};
const std::vector<std::string> kOutOfVocabulary = {"thingy", "whatchamacallit", "doodad"};

bool has_word(const std::vector<std::string>& words, const std::vector<std::string>& wanted) {
    return std::any_of(words.begin(), words.end(), [&](const std::string& w) {
        return std::find(wanted.begin(), wanted.end(), w) != wanted.end();
    });
}

double draw_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

class NoisyPhrasing : public Phrasing {
public:
    NoisyPhrasing(double rate, std::uint64_t seed, bool oov)
        : rate_(rate), rng_(mix_seed(seed)), oov_(oov) {}

    std::string instruction(const std::string& object, const Slot& slot,
                            const Lexicon& lexicon) override {
        Slot spoken = slot;
        spoken.landmark = vary(slot.landmark, lexicon);
        return Phrasing::instruction(vary(object, lexicon), spoken, lexicon);
    }

private:
    std::string vary(const std::string& term, const Lexicon& lexicon) {
        if (!(draw_unit(rng_) < rate_)) {
            return term;
        }
        std::vector<std::string> choices = lexicon.synonyms_of(term);
        if (oov_) {
            choices.push_back(kOutOfVocabulary[draw_below(rng_, kOutOfVocabulary.size())]);
        }
        if (choices.empty()) {
            return term;
        }
        return choices[draw_below(rng_, choices.size())];
    }

    double rate_;
    std::mt19937_64 rng_;
    bool oov_;
};

ScriptedPlayer::RoleTable uniform_roles(Role role) {
    return {{{role, role}, {role, role}}};
}

} // namespace

std::vector<Slot> candidate_slots(const Scene& scene) {
    std::vector<Slot> slots;
    for (const auto& [name, anchor] : scene.landmarks) {
        for (Direction d : kDirections) {
            const Point p = resolve_position(anchor, d);
            if (inside_scene(scene, p)) {
                slots.push_back(Slot{name, d, p});
            }
        }
    }
    return slots;
}

std::string Phrasing::instruction(const std::string& object, const Slot& slot, const Lexicon&) {
    return "put the " + object + " " + std::string(to_phrase(slot.direction)) + " the "
           + slot.landmark;
}

ReplyKind classify_reply(std::string_view text) {
    const auto words = tokenize(text);
    if (has_word(words, kFailureWords)) {
        return ReplyKind::failed;
    }
    if (has_word(words, kAcceptWords)) {
        return ReplyKind::accepted;
    }
    return ReplyKind::ignored;
}

ScriptedPlayer::ScriptedPlayer(std::string id, RoleTable roles, std::uint64_t seed,
                               PolicyContext context, std::unique_ptr<Phrasing> phrasing)
    : id_(std::move(id)), roles_(roles), seed_(seed), context_(std::move(context)),
      phrasing_(phrasing ? std::move(phrasing) : std::make_unique<Phrasing>()) {}

std::vector<nlohmann::json> ScriptedPlayer::on_frame(const nlohmann::json& frame) {
    const std::string type = frame.value("type", "");
    if (type == "joined") {
        player_id_ = frame.at("player_id").get<std::string>();
        seat_ = player_id_ == "p1" ? 0 : 1;
        return {};
    }
    if (type == "round_start") {
        start_round(frame);
        if (role_ == Role::lead) {
            return lead_next();
        }
        if (role_ == Role::alternate && seat_ == 0) {
            return propose(0);
        }
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

void ScriptedPlayer::start_round(const nlohmann::json& frame) {
    round_ = frame.at("round").get<int>();
    scene_ = context_.scenes.get(frame.at("scene").get<std::string>());
    lexicon_ = Lexicon::for_scene(scene_, context_.synonyms);
    board_ = msg::board_from_round_start(frame);
    role_ = roles_[seat_][static_cast<std::size_t>(std::clamp(round_, 1, 2) - 1)];
    rng_.seed(mix_seed(seed_ ^ static_cast<std::uint64_t>(round_)));

    candidates_ = candidate_slots(scene_);
    for (std::size_t i = candidates_.size(); i > 1; --i) {
        std::swap(candidates_[i - 1], candidates_[draw_below(rng_, i)]);
    }

    playing_ = true;
    ready_sent_ = false;
    agreed_.clear();
    plan_.clear();
    queue_.clear();
    pending_.reset();
    misses_.clear();
    tried_.clear();
    sent_ = 0;
    lead_done_ = false;
    awaiting_.reset();

    if (role_ == Role::lead) {
        std::vector<Point> taken;
        for (const auto& object : scene_.objects) {
            if (auto slot = pick_slot(object, taken, {})) {
                plan_[object] = *slot;
                taken.push_back(slot->position);
                queue_.push_back(object);
            }
        }
    }
}

std::vector<Point> ScriptedPlayer::reserved_except(const std::map<std::string, Point>& slots,
                                                   const std::string& object) const {
    std::vector<Point> out;
    for (const auto& [name, p] : slots) {
        if (name != object) {
            out.push_back(p);
        }
    }
    return out;
}

std::optional<Slot> ScriptedPlayer::pick_slot(const std::string&, const std::vector<Point>& reserved,
                                              const std::set<std::pair<std::string, Direction>>& tried) {
    for (const auto& c : candidates_) {
        if (tried.count({c.landmark, c.direction}) != 0) {
            continue;
        }
        const bool clashes = std::any_of(reserved.begin(), reserved.end(), [&](Point r) {
            return boxes_overlap(scene_, c.position, r);
        });
        if (!clashes) {
            return c;
        }
    }
    return std::nullopt;
}

ScriptedPlayer::Actions ScriptedPlayer::place_own(const std::string& object, Point to,
                                                  const std::vector<Point>& reserved) {
    Actions moves;
    if (board_.placements.at(object) == to) {
        return moves;
    }
    if (!inside_scene(scene_, to)) {
        return moves;
    }
    std::vector<std::string> blockers;
    for (const auto& [name, p] : board_.placements) {
        if (name != object && boxes_overlap(scene_, p, to)) {
            blockers.push_back(name);
        }
    }
    for (const auto& blocker : blockers) {
        // Two passes: first keep clear of every reserved slot, then only of
        // the destination.
        std::optional<Point> spot;
        for (int pass = 0; pass < 2 && !spot; ++pass) {
            for (std::int64_t y = kParkingStride; y < scene_.height && !spot; y += kParkingStride) {
                for (std::int64_t x = kParkingStride; x < scene_.width && !spot; x += kParkingStride) {
                    const Point p{x, y};
                    if (validate_placement(scene_, board_, blocker, p) != PlacementCheck::ok
                        || boxes_overlap(scene_, p, to)) {
                        continue;
                    }
                    const bool clashes = pass == 0 && std::any_of(reserved.begin(), reserved.end(),
                                                                  [&](Point r) { return boxes_overlap(scene_, p, r); });
                    if (!clashes) {
                        spot = p;
                    }
                }
            }
        }
        if (!spot) {
            return moves;
        }
        board_.placements[blocker] = *spot;
        moves.push_back(msg::move(blocker, *spot));
    }
    if (validate_placement(scene_, board_, object, to) == PlacementCheck::ok) {
        board_.placements[object] = to;
        moves.push_back(msg::move(object, to));
    }
    return moves;
}

ScriptedPlayer::Actions ScriptedPlayer::say_instruction(const std::string& object, const Slot& slot) {
    return {msg::chat(phrasing_->instruction(object, slot, lexicon_))};
}

ScriptedPlayer::Actions ScriptedPlayer::finish_round(bool announce) {
    if (ready_sent_) {
        return {};
    }
    ready_sent_ = true;
    lead_done_ = true;
    Actions out;
    if (announce) {
        out.push_back(msg::chat("all done, ready"));
    }
    out.push_back(msg::ready());
    return out;
}

ScriptedPlayer::Actions ScriptedPlayer::lead_next() {
    if (lead_done_) {
        return {};
    }
    if (queue_.empty() || sent_ >= instruction_budget) {
        return finish_round(true);
    }
    const std::string object = queue_.front();
    const Slot& slot = plan_.at(object);
    std::map<std::string, Point> goals;
    for (const auto& [name, s] : plan_) {
        goals[name] = s.position;
    }
    Actions out = place_own(object, slot.position, reserved_except(goals, object));
    const Actions words = say_instruction(object, slot);
    out.insert(out.end(), words.begin(), words.end());
    pending_ = object;
    ++sent_;
    return out;
}

ScriptedPlayer::Actions ScriptedPlayer::lead_reply(const std::string& text) {
    if (!pending_) {
        return {};
    }
    const ReplyKind kind = classify_reply(text);
    if (kind == ReplyKind::ignored) {
        return {};
    }
    const std::string object = *pending_;
    pending_.reset();
    queue_.pop_front();
    if (kind == ReplyKind::failed) {
        const Slot& failed = plan_.at(object);
        tried_[object].insert({failed.landmark, failed.direction});
        queue_.push_back(object);
        if (++misses_[object] % 2 == 0) {
            std::vector<Point> others;
            for (const auto& [name, s] : plan_) {
                if (name != object) {
                    others.push_back(s.position);
                }
            }
            if (auto slot = pick_slot(object, others, tried_[object])) {
                plan_[object] = *slot;
            }
        }
    }
    return lead_next();
}

ScriptedPlayer::Actions ScriptedPlayer::obey(const std::string& text, bool& understood) {
    understood = parser_.is_instruction(text, lexicon_);
    if (!understood) {
        return {};
    }
    ParsedInstruction p;
    try {
        p = parser_.parse(text, lexicon_);
    } catch (const ParseFailure&) {
        return {msg::chat("sorry, I don't understand")};
    }
    const Point to = resolve_position(scene_.landmarks.at(p.landmark), p.direction);
    Actions out = place_own(p.target, to, reserved_except(agreed_, p.target));
    if (board_.placements.at(p.target) != to) {
        return {msg::chat("sorry, that does not fit")};
    }
    agreed_[p.target] = to;
    out.push_back(msg::chat("ok"));
    return out;
}

ScriptedPlayer::Actions ScriptedPlayer::propose(std::size_t index) {
    const std::string& object = scene_.objects.at(index);
    auto slot = pick_slot(object, reserved_except(agreed_, object), tried_[object]);
    if (!slot) {
        tried_[object].clear();
        slot = pick_slot(object, reserved_except(agreed_, object), {});
    }
    if (!slot) {
        return finish_round(true);
    }
    tried_[object].insert({slot->landmark, slot->direction});
    Actions out = place_own(object, slot->position, reserved_except(agreed_, object));
    agreed_[object] = slot->position;
    awaiting_ = index;
    const Actions words = say_instruction(object, *slot);
    out.insert(out.end(), words.begin(), words.end());
    return out;
}

ScriptedPlayer::Actions ScriptedPlayer::on_partner_chat(const std::string& text) {
    if (role_ == Role::lead) {
        return lead_reply(text);
    }

    bool understood = false;
    Actions out = obey(text, understood);
    if (role_ == Role::follow) {
        if (!understood && signals_round_end(text)) {
            return finish_round(false);
        }
        return out;
    }

    // Alternating: whoever did not propose the last object proposes the next.
    auto next_open = [&]() -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < scene_.objects.size(); ++i) {
            if (agreed_.count(scene_.objects[i]) == 0) {
                return i;
            }
        }
        return std::nullopt;
    };
    if (understood) {
        const bool placed = !out.empty() && out.back().value("text", "") == "ok";
        if (placed) {
            awaiting_.reset();
            if (auto next = next_open()) {
                if (*next % 2 == seat_) {
                    Actions more = propose(*next);
                    out.insert(out.end(), more.begin(), more.end());
                }
            } else {
                Actions more = finish_round(true);
                out.insert(out.end(), more.begin(), more.end());
            }
        }
        return out;
    }
    if (awaiting_) {
        const ReplyKind kind = classify_reply(text);
        if (kind == ReplyKind::failed) {
            const std::size_t index = *awaiting_;
            agreed_.erase(scene_.objects[index]);
            return propose(index);
        }
        if (kind == ReplyKind::accepted) {
            awaiting_.reset();
            if (auto next = next_open(); next && *next % 2 == seat_) {
                out = propose(*next);
            }
        }
    }
    if (signals_round_end(text)) {
        Actions more = finish_round(false);
        out.insert(out.end(), more.begin(), more.end());
    }
    return out;
}

AgentPolicy::AgentPolicy(PolicyContext context, std::shared_ptr<InstructionParser> parser,
                         std::shared_ptr<InstructionParser> fallback)
    : agent_(std::move(context.scenes), std::move(context.synonyms), std::move(parser),
             std::move(fallback)) {}

std::unique_ptr<Policy> make_leader(std::uint64_t seed, PolicyContext context) {
    return std::make_unique<ScriptedPlayer>("leader", uniform_roles(Role::lead), seed,
                                            std::move(context));
}

std::unique_ptr<Policy> make_follower(std::uint64_t seed, PolicyContext context) {
    return std::make_unique<ScriptedPlayer>("follower", uniform_roles(Role::follow), seed,
                                            std::move(context));
}

std::unique_ptr<Policy> make_alternating(std::uint64_t seed, PolicyContext context) {
    return std::make_unique<ScriptedPlayer>("alternating", uniform_roles(Role::alternate), seed,
                                            std::move(context));
}

std::unique_ptr<Policy> make_grip_tightening(std::uint64_t seed, PolicyContext context) {
    ScriptedPlayer::RoleTable roles = {{{Role::alternate, Role::lead},
                                        {Role::alternate, Role::follow}}};
    return std::make_unique<ScriptedPlayer>("grip_tightening", roles, seed, std::move(context));
}

std::unique_ptr<Policy> make_grip_loosening(std::uint64_t seed, PolicyContext context) {
    ScriptedPlayer::RoleTable roles = {{{Role::lead, Role::alternate},
                                        {Role::follow, Role::alternate}}};
    return std::make_unique<ScriptedPlayer>("grip_loosening", roles, seed, std::move(context));
}

std::unique_ptr<Policy> make_agent_policy(PolicyContext context) {
    return std::make_unique<AgentPolicy>(std::move(context), std::make_shared<RuleParser>());
}

std::unique_ptr<Policy> noisy_leader(double noise_rate, std::uint64_t seed, bool out_of_vocabulary,
                                     PolicyContext context) {
    if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) {
        throw std::invalid_argument("noise rate must lie in [0, 1]");
    }
    std::string id = std::string(out_of_vocabulary ? "noisy_leader_oov@" : "noisy_leader@")
                     + nlohmann::json(noise_rate).dump();
    return std::make_unique<ScriptedPlayer>(
        id, uniform_roles(Role::lead), seed, std::move(context),
        std::make_unique<NoisyPhrasing>(noise_rate, seed ^ 0x6e6f697379ULL, out_of_vocabulary));
}

std::unique_ptr<Policy> make_policy(const std::string& name, std::uint64_t seed,
                                    const PolicyContext& context) {
    if (name == "leader") {
        return make_leader(seed, context);
    }
    if (name == "follower") {
        return make_follower(seed, context);
    }
    if (name == "alternating") {
        return make_alternating(seed, context);
    }
    if (name == "grip_tightening") {
        return make_grip_tightening(seed, context);
    }
    if (name == "grip_loosening") {
        return make_grip_loosening(seed, context);
    }
    if (name == "agent") {
        return make_agent_policy(context);
    }
    for (const char* prefix : {"noisy_leader_oov@", "noisy_leader@"}) {
        const std::string p(prefix);
        if (name.rfind(p, 0) == 0) {
            double rate = 0;
            try {
                rate = std::stod(name.substr(p.size()));
            } catch (const std::exception&) {
                throw std::invalid_argument("bad noise rate in policy name " + name);
            }
            return noisy_leader(rate, seed, p == "noisy_leader_oov@", context);
        }
    }
    throw std::invalid_argument("unknown policy: " + name);
}

} // namespace placement
