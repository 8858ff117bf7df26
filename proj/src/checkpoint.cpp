#include "hydrostat/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "json.hpp"

namespace hydrostat {

namespace {

constexpr char magic[8] = {'H', 'S', 'C', 'K', '0', '0', '0', '1'};

void write_header(std::ofstream& out, const nlohmann::json& header) {
    const std::string h = header.dump();
    out.write(magic, 8);
    const std::uint32_t len = static_cast<std::uint32_t>(h.size());
    out.write(reinterpret_cast<const char*>(&len), 4);
    out.write(h.data(), h.size());
}

void write_field(std::ofstream& out, const SpectralField& f) {
    out.write(reinterpret_cast<const char*>(f.coeffs.data()),
              static_cast<std::streamsize>(f.coeffs.size() * sizeof(complex)));
}

nlohmann::json base_header(const Grid& g, double dt,
                           const std::vector<double>& times,
                           const std::vector<std::string>& comps) {
    nlohmann::json j;
    j["format"] = "HSCK0001";
    j["grid"] = {{"n1", g.dim(0)}, {"n2", g.dim(1)}, {"n3", g.dim(2)}};
    j["axes"] = {"horizontal", "horizontal", "vertical"};
    j["layout"] = "row-major, x3 fastest";
    j["numbers"] = "complex128 little-endian";
    j["normalization"] = "fourier";  // f(x) = sum_k c_k exp(i k.x)
    j["dt"] = dt;
    j["times"] = times;
    j["components"] = comps;
    return j;
}

}  // namespace

void save_checkpoint(const std::string& path, const PeTrajectory& traj,
                     int stride) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open checkpoint file " + path);
    std::vector<double> times;
    for (std::size_t k = 0; k < traj.states.size(); k += stride)
        times.push_back(traj.states[k].time);
    nlohmann::json h =
        base_header(traj.grid, traj.dt * stride, times, {"v1", "v2", "w"});
    h["kind"] = "hydrostatic";
    write_header(out, h);
    for (std::size_t k = 0; k < traj.states.size(); k += stride) {
        write_field(out, traj.states[k].v1);
        write_field(out, traj.states[k].v2);
        write_field(out, traj.states[k].w);
    }
}

void save_checkpoint(const std::string& path, const NseTrajectory& traj,
                     int stride) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open checkpoint file " + path);
    std::vector<double> times;
    for (std::size_t k = 0; k < traj.states.size(); k += stride)
        times.push_back(traj.states[k].time);
    nlohmann::json h =
        base_header(traj.grid, traj.dt * stride, times, {"u1", "u2", "u3_eps"});
    h["kind"] = "scaled";
    h["epsilon"] = traj.epsilon;
    write_header(out, h);
    for (std::size_t k = 0; k < traj.states.size(); k += stride) {
        write_field(out, traj.states[k].u1);
        write_field(out, traj.states[k].u2);
        write_field(out, traj.states[k].u3);
    }
}

SpectralVec2 load_initial_from_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint file " + path);
    char m[8];
    in.read(m, 8);
    if (std::memcmp(m, magic, 8) != 0)
        throw std::runtime_error("not a trajectory checkpoint: " + path);
    std::uint32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), 4);
    std::string hs(len, '\0');
    in.read(hs.data(), len);
    nlohmann::json h = nlohmann::json::parse(hs);
    const int n1 = h["grid"]["n1"], n3 = h["grid"]["n3"];
    Grid g = Grid::make3d(n1, n3);
    SpectralField v1(g), v2(g);
    in.read(reinterpret_cast<char*>(v1.coeffs.data()),
            static_cast<std::streamsize>(g.size() * sizeof(complex)));
    in.read(reinterpret_cast<char*>(v2.coeffs.data()),
            static_cast<std::streamsize>(g.size() * sizeof(complex)));
    if (!in) throw std::runtime_error("truncated checkpoint: " + path);
    return {std::move(v1), std::move(v2)};
}

}  // namespace hydrostat
