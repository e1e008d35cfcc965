#pragma once

namespace wptsim {

// A charging policy is one stop location paired with one codeword. The flat
// index is location-major: j = location * n_codewords + codeword.
struct Policy {
    int index = 0;
    int location = 0;
    int codeword = 0;
};

struct PolicySet {
    int n_locations = 0;
    int n_codewords = 0;

    int size() const { return n_locations * n_codewords; }
    Policy at(int j) const {
        return Policy{j, j / n_codewords, j % n_codewords};
    }
    int index_of(int location, int codeword) const {
        return location * n_codewords + codeword;
    }
};

}  // namespace wptsim
