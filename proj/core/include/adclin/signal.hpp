#pragma once

#include <cstdint>
#include <vector>

namespace adclin {

// A sampled real-valued signal plus the metadata needed to regenerate it.
struct Signal {
    std::vector<double> samples;
    std::uint64_t seed = 0;     // stream seed this signal was drawn from
    double gain = 1.0;          // scale applied after generation

    std::size_t size() const { return samples.size(); }
    double& operator[](std::size_t i) { return samples[i]; }
    const double& operator[](std::size_t i) const { return samples[i]; }
};

} // namespace adclin
