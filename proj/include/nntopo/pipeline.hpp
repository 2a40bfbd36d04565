#pragma once

#include <nntopo/activation.hpp>
#include <nntopo/analytics.hpp>
#include <nntopo/distance.hpp>
#include <nntopo/persistence.hpp>

#include <cstdint>
#include <string>

namespace nntopo {

struct PipelineOptions {
    std::size_t neuron_cap = kDefaultNeuronCap;
    std::uint64_t seed = 0;
    std::size_t k = 5;
};

// Activations -> (subsampled) correlation distances -> 0D/1D diagram.
inline PersistenceDiagram activation_diagram(const ActivationMatrix& m, const PipelineOptions& opt = {}) {
    return vr_persistence(distance_matrix(subsample_neurons(m, opt.neuron_cap, opt.seed)), 1);
}

inline TopologySignature activation_signature(const ActivationMatrix& m, std::string model_id,
                                              const PipelineOptions& opt = {}) {
    return signature(activation_diagram(m, opt), opt.k, std::move(model_id));
}

}  // namespace nntopo
