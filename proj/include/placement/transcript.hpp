// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "placement/session.hpp"

namespace placement {

/// The chat of one round, in order.
struct Transcript {
    int round = 1;
    std::vector<ChatMessage> messages;
    std::vector<std::string> player_ids;

    bool empty() const { return messages.empty(); }

    friend bool operator==(const Transcript&, const Transcript&) = default;
};

} // namespace placement
