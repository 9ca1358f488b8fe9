#pragma once

#include <vector>

namespace extcalc {

/// Sign of the permutation that sorts `tuple` (0 if it has repeated entries).
inline int permutation_sign(const std::vector<int>& tuple) {
    int s = 1;
    for (size_t i = 0; i < tuple.size(); ++i) {
        for (size_t j = i + 1; j < tuple.size(); ++j) {
            if (tuple[i] == tuple[j]) return 0;
            if (tuple[i] > tuple[j]) s = -s;
        }
    }
    return s;
}

}  // namespace extcalc
