#include "mrchialvo/io/presets.hpp"

#include <charconv>

namespace mrchialvo::io {

std::optional<std::string> Preset::setting(std::string_view flag) const {
  for (const auto& [k, v] : settings) {
    if (k == flag) return v;
  }
  return std::nullopt;
}

namespace {

using S = std::vector<std::pair<std::string, std::string>>;

S cat(S a, const S& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<Preset> build() {
  const S memristor{{"k1", "0.7"}, {"k2", "0.2"}, {"phi0", "0"}};
  const S table1{{"k0", "0.01"}, {"k1", "0.5"}, {"k2", "0.5"}, {"k", "-0.1"}, {"xlo", "-1"}, {"xhi", "10"}};
  const S firing{{"k0", "0.1"}, {"k1", "0.1"}, {"k2", "0.2"}, {"transient", "1000"}, {"steps", "1000"}};
  const S chaos{{"k0", "-0.7"}, {"k1", "0.1"}, {"k2", "0.2"}, {"r", "1.03"}};
  const S ring{{"k0", "2"}, {"k1", "0.3"}, {"k2", "0.5"}, {"k", "-0.5"}, {"r", "1.2"}, {"mu", "0"}};
  const S ring_star{{"k0", "0.7"}, {"k1", "0.8215"}, {"k2", "-0.39"}, {"k", "-0.2"}, {"r", "2.15"}};
  const S star{{"k0", "2"}, {"k1", "0.3"}, {"k2", "0.5"}, {"k", "-0.5"}, {"sigma", "0"}};

  return {
      {"fig4a", "phl", "memristor loop, v_m=1, omega=3.7", cat(memristor, {{"vm", "1"}, {"omega", "3.7"}})},
      {"fig4b", "phl", "memristor loop, v_m=1.3, omega=3.4", cat(memristor, {{"vm", "1.3"}, {"omega", "3.4"}})},
      {"fig5a", "phl", "loop area against amplitude at omega=3.7",
       cat(memristor, {{"omega", "3.7"}, {"scan", "vm:0.6,0.8,1.0"}})},
      {"fig5b", "phl", "loop area against frequency at v_m=1",
       cat(memristor, {{"vm", "1"}, {"scan", "omega:3.7,4.5,5.5"}})},
      {"table1-r2", "fixed-points", "three fixed points at r=2", cat(table1, {{"r", "2"}})},
      {"table1-r2.8", "fixed-points", "three fixed points at r=2.8", cat(table1, {{"r", "2.8"}})},
      {"table1-r3", "fixed-points", "three fixed points at r=3", cat(table1, {{"r", "3"}})},
      {"table1-r5", "fixed-points", "one fixed point at r=5", cat(table1, {{"r", "5"}})},
      {"fig7", "sweep", "forward/backward attractor sweep in r",
       {{"k0", "1"}, {"k1", "0.1"}, {"k2", "0.5"}, {"k", "0.3"}, {"param", "r"}, {"start", "2.5"}, {"end", "3.1"},
        {"steps", "600"}, {"transient", "2000"}, {"record", "200"}, {"x0", "0.5"}, {"phi0", "0"}}},
      {"fig10", "basin", "coexisting limit cycle, period five and chaos",
       {{"k0", "0.06"}, {"k1", "0.1"}, {"k2", "0.2"}, {"k", "0.53"}, {"r", "2.7"}, {"xlo", "-0.52"},
        {"xhi", "10.63"}, {"philo", "-0.115"}, {"phihi", "1.04"}, {"nx", "300"}, {"nphi", "300"}}},
      {"fig13a", "firing", "regular spiking", cat(firing, {{"k", "-0.5"}, {"r", "0.2"}})},
      {"fig13b", "firing", "tonic spiking", cat(firing, {{"k", "-0.5"}, {"r", "0.6"}})},
      {"fig13c", "firing", "chaotic bursting", cat(firing, {{"k", "-0.5"}, {"r", "2.2"}})},
      {"fig13d", "firing", "periodic bursting", cat(firing, {{"k", "0.1"}, {"r", "3.9"}})},
      {"fig13e", "firing", "phasic bursting", cat(firing, {{"k", "1"}, {"r", "1.4"}})},
      {"fig14a", "orbit", "chaotic attractor, k=1.61", cat(chaos, {{"k", "1.61"}})},
      {"fig14b", "orbit", "chaotic attractor, k=1.62", cat(chaos, {{"k", "1.62"}})},
      {"fig14c", "orbit", "chaotic attractor, k=1.698", cat(chaos, {{"k", "1.698"}})},
      {"fig14d", "orbit", "chaotic attractor, k=1.748", cat(chaos, {{"k", "1.748"}})},
      {"table3", "corrdim", "correlation dimension against k", cat(chaos, {{"scan", "k:1.61,1.62,1.698,1.748"}})},
      {"fig15-row1", "network", "ring, unsynchronized", cat(ring, {{"sigma", "0.01"}})},
      {"fig15-row2", "network", "ring, chimera", cat(ring, {{"sigma", "0.057"}})},
      {"fig15-row3", "network", "ring, synchronized", cat(ring, {{"sigma", "0.1"}})},
      {"fig16-row1", "network", "ring-star, travelling wave", cat(ring_star, {{"mu", "0.00007"}, {"sigma", "0.16"}})},
      {"fig16-row2", "network", "ring-star, chimera", cat(ring_star, {{"mu", "0.00001"}, {"sigma", "0.15"}})},
      {"fig16-row3", "network", "ring-star, piecewise pattern", cat(ring_star, {{"mu", "0.0001"}, {"sigma", "0.14"}})},
      {"fig17-row1", "network", "star, unsynchronized", cat(star, {{"mu", "0.001"}, {"r", "1.2"}})},
      {"fig17-row2", "network", "star, transition", cat(star, {{"mu", "0.0007"}, {"r", "1"}})},
      {"fig17-row3", "network", "star, five clusters", cat(star, {{"mu", "0.0003"}, {"r", "0.98"}})},
      {"fig17-row4", "network", "star, six clusters", cat(star, {{"mu", "0.0001"}, {"r", "0.8"}})},
      {"fig18", "network", "ring-star multi-chimera",
       {{"k0", "0.5"}, {"k1", "0.1"}, {"k2", "0.03"}, {"k", "0.1"}, {"r", "2.15"}, {"sigma", "0.41"},
        {"mu", "0.0004"}}},
      {"fig19-cluster", "network", "ring, clustered state",
       {{"k0", "0.8"}, {"k1", "0.3"}, {"k2", "0.5"}, {"k", "-0.7"}, {"r", "1.3"}, {"sigma", "0.01"}, {"mu", "0"}}},
      {"fig19-imperfect", "network", "star, imperfect synchronization",
       {{"k0", "0.8"}, {"k1", "0.3"}, {"k2", "0.5"}, {"k", "-0.5"}, {"r", "1.243"}, {"sigma", "0"},
        {"mu", "0.0001"}}},
  };
}

}  // namespace

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> presets = build();
  return presets;
}

const Preset& preset(std::string_view name) {
  for (const auto& p : all_presets()) {
    if (p.name == name) return p;
  }
  throw InvalidArgument("unknown preset '" + std::string(name) + "'");
}

MapParams preset_map(const Preset& p) {
  MapParams m;
  for (const auto& [k, v] : p.settings) {
    Param which;
    try {
      which = parse_param(k);
    } catch (const InvalidArgument&) {
      continue;
    }
    double value = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), value);
    if (res.ec != std::errc{}) throw InvalidArgument("preset " + p.name + ": bad value for " + k);
    set(m, which, value);
  }
  return m;
}

}  // namespace mrchialvo::io
