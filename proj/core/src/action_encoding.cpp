#include "mergesim/action_encoding.hpp"

namespace mergesim {

int encoding_width(ActionEncoding scheme) {
    switch (scheme) {
        case ActionEncoding::Binary: return kNumActions;
        case ActionEncoding::Discrete: return 1;
        case ActionEncoding::Frenet: return 2;
    }
    return 0;
}

std::vector<double> encode_action(MetaAction action, ActionEncoding scheme) {
    const int code = static_cast<int>(action);
    switch (scheme) {
        case ActionEncoding::Binary: {
            std::vector<double> out(kNumActions, 0.0);
            out[code] = 1.0;
            return out;
        }
        case ActionEncoding::Discrete:
            return {static_cast<double>(code + 1)};
        case ActionEncoding::Frenet:
            switch (action) {
                case MetaAction::LaneLeft: return {-1.0, 0.0};
                case MetaAction::Idle: return {0.0, 0.0};
                case MetaAction::LaneRight: return {1.0, 0.0};
                case MetaAction::Accelerate: return {0.0, 1.0};
                case MetaAction::Decelerate: return {0.0, -1.0};
            }
    }
    return {};
}

} // namespace mergesim
