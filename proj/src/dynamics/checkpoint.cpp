#include "semigrav/dynamics/checkpoint.hpp"

#include "semigrav/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace semigrav::dynamics {

namespace {

constexpr char kMagic[8] = {'S', 'G', 'R', 'V', 'C', 'K', 'P', 'T'};

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

template <class T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw InvalidStateError("checkpoint truncated");
    return v;
}

}  // namespace

void write_checkpoint(const std::string& path, const BranchedWave& state, const nlohmann::json& config) {
    nlohmann::json header;
    header["grid"] = {{"x_min", state.grid.x_min}, {"x_max", state.grid.x_max}, {"n", state.grid.n}};
    header["masses"] = {state.m1, state.m2};
    header["time"] = state.time;
    header["config"] = config;
    header["branches"] = nlohmann::json::array();
    for (const auto& b : state.branches) {
        nlohmann::json hist = nlohmann::json::array();
        for (const auto& s : b.traj.history) hist.push_back({s.t, s.q1, s.q2});
        header["branches"].push_back({{"label", b.label}, {"q", {b.traj.q1, b.traj.q2}}, {"history", hist}});
    }
    const std::string text = header.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidStateError("cannot open checkpoint '" + path + "' for writing");
    out.write(kMagic, sizeof kMagic);
    put(out, kCheckpointVersion);
    put(out, static_cast<std::uint64_t>(text.size()));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const auto& b : state.branches)
        out.write(reinterpret_cast<const char*>(b.psi.data()), static_cast<std::streamsize>(b.psi.size() * sizeof(cplx)));
    if (!out) throw InvalidStateError("failed writing checkpoint '" + path + "'");
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidStateError("cannot open checkpoint '" + path + "'");
    char magic[8];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw InvalidStateError("'" + path + "' is not a checkpoint");
    const auto version = get<std::uint32_t>(in);
    if (version != kCheckpointVersion)
        throw InvalidStateError("unsupported checkpoint version " + std::to_string(version));
    const auto length = get<std::uint64_t>(in);
    std::string text(length, '\0');
    if (!in.read(text.data(), static_cast<std::streamsize>(length))) throw InvalidStateError("checkpoint truncated");

    Checkpoint ck;
    try {
        const auto h = nlohmann::json::parse(text);
        auto& s = ck.state;
        s.grid = Grid1D{h.at("grid").at("x_min"), h.at("grid").at("x_max"), h.at("grid").at("n")};
        s.m1 = h.at("masses").at(0);
        s.m2 = h.at("masses").at(1);
        s.time = h.at("time");
        ck.config = h.at("config");
        for (const auto& b : h.at("branches")) {
            Branch br;
            br.label = b.at("label");
            br.traj.q1 = b.at("q").at(0);
            br.traj.q2 = b.at("q").at(1);
            for (const auto& e : b.at("history")) br.traj.history.push_back({e.at(0), e.at(1), e.at(2)});
            s.branches.push_back(std::move(br));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidStateError(std::string("malformed checkpoint header: ") + e.what());
    }
    const std::size_t size = ck.state.grid.n * ck.state.grid.n;
    for (auto& b : ck.state.branches) {
        b.psi.resize(size);
        if (!in.read(reinterpret_cast<char*>(b.psi.data()), static_cast<std::streamsize>(size * sizeof(cplx))))
            throw InvalidStateError("checkpoint amplitude payload truncated");
    }
    return ck;
}

}  // namespace semigrav::dynamics
