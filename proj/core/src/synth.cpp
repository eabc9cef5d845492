#include "clusterlens/synth.hpp"

#include "clusterlens/errors.hpp"
#include "clusterlens/rng.hpp"

namespace clusterlens {

HierarchySpec uniform_hierarchy(std::size_t n_super, std::size_t subs_per_super, std::string name) {
    HierarchySpec spec;
    spec.name = std::move(name);
    ClassId next_sub = 0;
    for (std::size_t s = 0; s < n_super; ++s) {
        std::vector<ClassId> subs(subs_per_super);
        for (auto& id : subs) id = next_sub++;
        spec.superclasses.emplace_back(static_cast<ClassId>(s), std::move(subs));
    }
    return spec;
}

LabeledDataset generate(const SynthConfig& cfg) {
    validate_hierarchy(cfg.spec);
    if (cfg.spec.superclasses.empty()) throw error(errc::bad_config, "hierarchy has no superclasses");
    if (cfg.d < 1) throw error(errc::bad_config, "dimension must be >= 1");
    if (!(cfg.sigma_super > 0.0)) throw error(errc::bad_config, "sigma_super must be > 0");
    if (cfg.sigma_sub < 0.0) throw error(errc::bad_config, "sigma_sub must be >= 0");
    if (cfg.sigma_noise < 0.0) throw error(errc::bad_config, "sigma_noise must be >= 0");
    if (cfg.n_per_subclass < 1) throw error(errc::bad_config, "n_per_subclass must be >= 1");

    const std::size_t n = cfg.spec.total_subclasses() * cfg.n_per_subclass;
    Rng rng(cfg.seed);

    LabeledDataset ds;
    ds.embeddings.n = n;
    ds.embeddings.d = cfg.d;
    ds.embeddings.dtype = Dtype::f64;
    ds.embeddings.layer_name = "synth";
    ds.embeddings.data.reserve(n * cfg.d);
    ds.labels.superclass.reserve(n);
    ds.labels.subclass.reserve(n);

    std::vector<double> super_center(cfg.d);
    std::vector<double> sub_center(cfg.d);
    for (const auto& [super_id, subs] : cfg.spec.superclasses) {
        for (double& v : super_center) v = cfg.sigma_super * rng.next_gaussian();
        for (ClassId sub_id : subs) {
            // Both modes consume one gaussian vector per subclass, so the
            // downstream noise draws line up across modes for a fixed seed.
            for (std::size_t t = 0; t < cfg.d; ++t) {
                const double g = rng.next_gaussian();
                sub_center[t] = cfg.mode == SynthMode::natural ? super_center[t] + cfg.sigma_sub * g
                                                               : cfg.sigma_super * g;
            }
            for (std::size_t r = 0; r < cfg.n_per_subclass; ++r) {
                for (std::size_t t = 0; t < cfg.d; ++t)
                    ds.embeddings.data.push_back(sub_center[t] + cfg.sigma_noise * rng.next_gaussian());
                ds.labels.superclass.push_back(super_id);
                ds.labels.subclass.push_back(sub_id);
            }
        }
    }
    return ds;
}

}  // namespace clusterlens
