// Command-line front end: single runs, parameter sweeps, multiplication
// benchmarks, and wire-format tooling. Emits CSV or JSON for plotting.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlnc/simnet.hpp"
#include "rlnc/wire.hpp"

using nlohmann::json;
using namespace rlnc;

namespace {

struct ExperimentConfig {
    std::size_t generation_size = 8;
    std::size_t symbols_per_packet = 4;
    std::string mode = "cod"; // cod (systematic sender) | recod (precoded sender)
    std::string mul_algorithm = "logtable";
    std::size_t max_generations = 8;
    std::size_t replicas_per_trigger = 4;
    std::size_t generations = 4;
    std::uint64_t inter_packet_gap = 1;
    std::size_t redundancy = 2;
    std::size_t switch_count = 1;
    double link_loss = 0.0;
    std::uint64_t link_delay = 1;
    std::uint64_t mul_budget_per_tick = 0;
    std::uint64_t seed = 1;
    std::size_t seeds = 1;
    std::vector<std::size_t> sweep_generation_sizes;
    std::vector<std::size_t> sweep_symbols_per_packet;
    std::vector<std::string> sweep_modes;
    std::vector<double> sweep_losses;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename T>
T parse_number(const std::string& value, const std::string& key)
{
    std::istringstream in(value);
    T out{};
    if (!(in >> out) || !(in >> std::ws).eof())
        throw UsageError("bad value for " + key + ": '" + value + "'");
    return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& value, const std::string& key)
{
    std::vector<T> out;
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) {
        if constexpr (std::is_same_v<T, std::string>)
            out.push_back(item);
        else
            out.push_back(parse_number<T>(item, key));
    }
    return out;
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value)
{
    if (key == "generation_size")
        cfg.generation_size = parse_number<std::size_t>(value, key);
    else if (key == "symbols_per_packet")
        cfg.symbols_per_packet = parse_number<std::size_t>(value, key);
    else if (key == "mode")
        cfg.mode = value;
    else if (key == "mul_algorithm")
        cfg.mul_algorithm = value;
    else if (key == "max_generations")
        cfg.max_generations = parse_number<std::size_t>(value, key);
    else if (key == "replicas_per_trigger")
        cfg.replicas_per_trigger = parse_number<std::size_t>(value, key);
    else if (key == "generations")
        cfg.generations = parse_number<std::size_t>(value, key);
    else if (key == "inter_packet_gap")
        cfg.inter_packet_gap = parse_number<std::uint64_t>(value, key);
    else if (key == "redundancy")
        cfg.redundancy = parse_number<std::size_t>(value, key);
    else if (key == "switch_count")
        cfg.switch_count = parse_number<std::size_t>(value, key);
    else if (key == "link_loss")
        cfg.link_loss = parse_number<double>(value, key);
    else if (key == "link_delay")
        cfg.link_delay = parse_number<std::uint64_t>(value, key);
    else if (key == "mul_budget_per_tick")
        cfg.mul_budget_per_tick = parse_number<std::uint64_t>(value, key);
    else if (key == "seed")
        cfg.seed = parse_number<std::uint64_t>(value, key);
    else if (key == "seeds")
        cfg.seeds = parse_number<std::size_t>(value, key);
    else if (key == "sweep_generation_sizes")
        cfg.sweep_generation_sizes = parse_list<std::size_t>(value, key);
    else if (key == "sweep_symbols_per_packet")
        cfg.sweep_symbols_per_packet = parse_list<std::size_t>(value, key);
    else if (key == "sweep_modes")
        cfg.sweep_modes = parse_list<std::string>(value, key);
    else if (key == "sweep_losses")
        cfg.sweep_losses = parse_list<double>(value, key);
    else
        throw UsageError("unknown config key '" + key + "'");
}

void load_config_file(ExperimentConfig& cfg, const std::string& path, bool& seed_from_config)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open config file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        apply_key(cfg, key, trim(line.substr(eq + 1)));
        if (key == "seed")
            seed_from_config = true;
    }
}

simnet::SenderMode parse_mode(const std::string& mode)
{
    if (mode == "cod" || mode == "encode" || mode == "systematic")
        return simnet::SenderMode::Systematic;
    if (mode == "recod" || mode == "recode" || mode == "precoded")
        return simnet::SenderMode::PreCoded;
    throw UsageError("unknown mode '" + mode + "' (expected cod or recod)");
}

gf::MulAlgorithm parse_mul(const std::string& alg)
{
    if (alg == "logtable")
        return gf::MulAlgorithm::LogTable;
    if (alg == "peasant")
        return gf::MulAlgorithm::Peasant;
    throw UsageError("unknown mul_algorithm '" + alg + "' (expected logtable or peasant)");
}

simnet::SweepSettings to_settings(const ExperimentConfig& cfg)
{
    simnet::SweepSettings s;
    s.field = &gf::Context::default_gf256();
    s.mul_algorithm = parse_mul(cfg.mul_algorithm);
    s.switch_count = cfg.switch_count;
    s.max_generations = cfg.max_generations;
    s.replicas_per_trigger = cfg.replicas_per_trigger;
    s.generations = cfg.generations;
    s.inter_packet_gap = cfg.inter_packet_gap;
    s.redundancy = cfg.redundancy;
    s.mul_budget_per_tick = cfg.mul_budget_per_tick;
    s.link_delay = cfg.link_delay;
    return s;
}

std::vector<std::string> config_metadata(const ExperimentConfig& cfg)
{
    std::vector<std::string> md;
    auto add = [&md](const std::string& k, const auto& v) {
        std::ostringstream os;
        os << k << "=" << v;
        md.push_back(os.str());
    };
    add("generation_size", cfg.generation_size);
    add("symbols_per_packet", cfg.symbols_per_packet);
    add("mode", cfg.mode);
    add("mul_algorithm", cfg.mul_algorithm);
    add("max_generations", cfg.max_generations);
    add("replicas_per_trigger", cfg.replicas_per_trigger);
    add("generations", cfg.generations);
    add("inter_packet_gap", cfg.inter_packet_gap);
    add("redundancy", cfg.redundancy);
    add("switch_count", cfg.switch_count);
    add("link_loss", cfg.link_loss);
    add("link_delay", cfg.link_delay);
    add("mul_budget_per_tick", cfg.mul_budget_per_tick);
    add("seed", cfg.seed);
    add("seeds", cfg.seeds);
    return md;
}

json config_json(const ExperimentConfig& cfg)
{
    json j;
    for (const auto& kv : config_metadata(cfg)) {
        const auto eq = kv.find('=');
        j[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return j;
}

json metrics_json(const simnet::RunMetrics& m)
{
    return json{{"packets_sent", m.packets_sent},
                {"packets_lost", m.packets_lost},
                {"packets_delivered", m.packets_delivered},
                {"generations_attempted", m.generations_attempted},
                {"generations_decoded", m.generations_decoded},
                {"redundant_packets_received", m.redundant_packets_received},
                {"switch_ingress_packets", m.switch_ingress_packets},
                {"overload_dropped", m.overload_dropped},
                {"overload_drop_rate", m.overload_drop_rate()},
                {"mul_operation_count", m.mul_operation_count}};
}

void write_artifact(const std::string& out_path, const std::string& content)
{
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path);
    if (!out)
        throw UsageError("cannot write output file: " + out_path);
    out << content;
}

std::vector<std::uint8_t> parse_hex(const std::string& hex)
{
    std::vector<std::uint8_t> bytes;
    std::string digits;
    std::vector<std::size_t> offsets;
    for (std::size_t i = 0; i < hex.size(); ++i) {
        const char c = hex[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == ':')
            continue;
        if (!std::isxdigit(static_cast<unsigned char>(c)))
            throw UsageError("malformed hex at offset " + std::to_string(i));
        digits.push_back(c);
        offsets.push_back(i);
    }
    if (digits.size() % 2 != 0)
        throw UsageError("odd hex digit count, dangling digit at offset " +
                         std::to_string(offsets.back()));
    for (std::size_t i = 0; i < digits.size(); i += 2)
        bytes.push_back(
            static_cast<std::uint8_t>(std::stoul(digits.substr(i, 2), nullptr, 16)));
    return bytes;
}

std::string to_hex(std::span<const std::uint8_t> bytes)
{
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (const auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

const char* type_name(wire::PacketType t)
{
    switch (t) {
    case wire::PacketType::Uncoded:
        return "uncoded";
    case wire::PacketType::Coded:
        return "coded";
    case wire::PacketType::Ack:
        return "ack";
    }
    return "?";
}

int cmd_run(const ExperimentConfig& cfg, const std::string& out_path, const std::string& format)
{
    simnet::SweepCell cell{cfg.generation_size, cfg.symbols_per_packet, parse_mode(cfg.mode),
                           cfg.link_loss};
    const auto rows = simnet::sweep({cell}, {cfg.seed}, to_settings(cfg));
    const simnet::SweepRow& row = rows.front();
    if (!row.error.empty()) {
        std::cerr << "error: " << row.error << "\n";
        return 1;
    }

    std::ostringstream os;
    if (format == "json") {
        json j;
        j["config"] = config_json(cfg);
        j["metrics"] = metrics_json(row.metrics);
        os << j.dump(2) << "\n";
    } else {
        simnet::write_sweep_csv(os, {row}, config_metadata(cfg));
    }
    write_artifact(out_path, os.str());

    std::cerr << "decoded " << row.metrics.generations_decoded << "/"
              << row.metrics.generations_attempted << " generations, "
              << row.metrics.packets_lost << " packets lost on links, "
              << row.metrics.overload_dropped << " dropped by the processing budget, "
              << row.metrics.mul_operation_count << " field multiplications\n";
    return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::string& out_path,
              const std::string& format)
{
    if (cfg.sweep_generation_sizes.empty() || cfg.sweep_modes.empty())
        throw UsageError("sweep needs sweep_generation_sizes and sweep_modes");
    const auto symbols = cfg.sweep_symbols_per_packet.empty()
                             ? std::vector<std::size_t>{cfg.symbols_per_packet}
                             : cfg.sweep_symbols_per_packet;
    const auto losses =
        cfg.sweep_losses.empty() ? std::vector<double>{cfg.link_loss} : cfg.sweep_losses;

    std::vector<simnet::SweepCell> grid;
    for (const auto g : cfg.sweep_generation_sizes)
        for (const auto n : symbols)
            for (const auto& mode : cfg.sweep_modes)
                for (const auto loss : losses)
                    grid.push_back({g, n, parse_mode(mode), loss});

    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < cfg.seeds; ++i)
        seeds.push_back(cfg.seed + i);

    const auto rows = simnet::sweep(grid, seeds, to_settings(cfg));

    std::ostringstream os;
    if (format == "json") {
        json j;
        j["config"] = config_json(cfg);
        json jr = json::array();
        for (const auto& row : rows) {
            json r;
            r["generation_size"] = row.cell.generation_size;
            r["symbols_per_packet"] = row.cell.symbols_per_packet;
            r["mode"] = simnet::to_string(row.cell.mode);
            r["loss"] = row.cell.loss;
            r["agg"] = row.aggregate;
            if (!row.aggregate)
                r["seed"] = row.seed;
            if (!row.error.empty())
                r["error"] = row.error;
            r["metrics"] = metrics_json(row.metrics);
            if (row.aggregate)
                r["metrics"]["overload_drop_rate"] = row.mean_overload_drop_rate;
            jr.push_back(r);
        }
        j["rows"] = jr;
        os << j.dump(2) << "\n";
    } else {
        simnet::write_sweep_csv(os, rows, config_metadata(cfg));
    }
    write_artifact(out_path, os.str());
    std::cerr << grid.size() << " cells x " << seeds.size() << " seeds swept\n";
    return 0;
}

int cmd_bench(std::uint64_t iterations, const std::string& out_path)
{
    if (iterations == 0)
        throw UsageError("--iterations must be >= 1");
    const auto result =
        simnet::bench_mul_backends(gf::Context::default_gf256(), iterations);
    json j{{"iterations", result.iterations},
           {"peasant_seconds", result.peasant_seconds},
           {"logtable_seconds", result.table_seconds},
           {"ratio_peasant_over_logtable", result.ratio()}};
    write_artifact(out_path, j.dump(2) + "\n");
    std::cerr << "peasant/logtable wall-time ratio: " << result.ratio() << " over "
              << result.iterations << " multiplications\n";
    return 0;
}

int cmd_packet_decode(const std::string& hex)
{
    const auto bytes = parse_hex(hex);
    wire::RlncPacket p;
    try {
        p = wire::deserialize(bytes);
    } catch (const wire::WireError& ex) {
        std::cerr << "decode failed: " << ex.what() << "\n";
        return 1;
    }
    std::cout << "generation_id:   " << p.outer.generation_id << "\n"
              << "generation_size: " << static_cast<unsigned>(p.outer.generation_size) << "\n"
              << "field_size_log2: " << static_cast<unsigned>(p.outer.field_size_log2) << "\n"
              << "symbol_size:     " << static_cast<unsigned>(p.outer.symbol_size) << "\n"
              << "packet_type:     " << type_name(p.inner.packet_type) << "\n"
              << "symbol_count:    " << static_cast<unsigned>(p.inner.symbol_count) << "\n";
    if (!p.coding_vector.empty())
        std::cout << "coding_vector:   " << to_hex(p.coding_vector) << "\n";
    if (!p.symbols.empty())
        std::cout << "symbols:         " << to_hex(p.symbols) << "\n";
    return 0;
}

int cmd_packet_encode(const std::string& type, unsigned generation_id, unsigned generation_size,
                      unsigned symbol_size, const std::string& coding_vector_hex,
                      const std::string& symbols_hex)
{
    wire::RlncPacket p;
    p.outer.generation_id = static_cast<std::uint16_t>(generation_id);
    p.outer.generation_size = static_cast<std::uint8_t>(generation_size);
    p.outer.symbol_size = static_cast<std::uint8_t>(symbol_size);
    if (type == "ack") {
        p.inner.packet_type = wire::PacketType::Ack;
    } else if (type == "coded" || type == "uncoded") {
        p.inner.packet_type =
            type == "coded" ? wire::PacketType::Coded : wire::PacketType::Uncoded;
        p.symbols = parse_hex(symbols_hex);
        if (symbol_size == 0 || p.symbols.size() % symbol_size != 0)
            throw UsageError("symbols length must be a multiple of symbol_size");
        p.inner.symbol_count = static_cast<std::uint8_t>(p.symbols.size() / symbol_size);
        if (type == "coded")
            p.coding_vector = parse_hex(coding_vector_hex);
    } else {
        throw UsageError("unknown packet type '" + type + "'");
    }
    try {
        std::cout << to_hex(wire::serialize(p)) << "\n";
    } catch (const wire::WireError& ex) {
        std::cerr << "encode failed: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"generation-based RLNC codec, coding-switch simulator, and wire tools"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::optional<std::uint64_t> seed_flag;
    std::uint64_t iterations = 1'000'000;

    ExperimentConfig cfg;
    std::vector<std::string> set_args;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config file (key=value lines)");
        sub->add_option("--seed", seed_flag, "base PRNG seed");
        sub->add_option("--out", out_path, "output path ('-' or empty: stdout)");
        sub->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--set", set_args,
                        "override any config key (key=value, repeatable)");
    };

    auto* run_cmd = app.add_subcommand("run", "run a single simulation");
    add_common(run_cmd);
    auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep grid");
    add_common(sweep_cmd);
    auto* bench_cmd =
        app.add_subcommand("bench", "benchmark the two multiplication backends");
    bench_cmd->add_option("--iterations", iterations, "multiplications per backend");
    bench_cmd->add_option("--out", out_path, "output path ('-' or empty: stdout)");

    auto* packet_cmd = app.add_subcommand("packet", "wire-format encode/decode tool");
    std::string pk_action, pk_hex, pk_type = "ack", pk_cv_hex, pk_sym_hex;
    unsigned pk_gen = 0, pk_gsize = 1, pk_ssize = 1;
    packet_cmd->add_option("action", pk_action, "encode or decode")
        ->required()
        ->check(CLI::IsMember({"encode", "decode"}));
    packet_cmd->add_option("hex", pk_hex, "packet bytes as hex (decode)");
    packet_cmd->add_option("--type", pk_type, "uncoded, coded, or ack (encode)");
    packet_cmd->add_option("--generation-id", pk_gen, "generation identifier");
    packet_cmd->add_option("--generation-size", pk_gsize, "generation size G");
    packet_cmd->add_option("--symbol-size", pk_ssize, "bytes per symbol");
    packet_cmd->add_option("--coding-vector", pk_cv_hex, "coefficients as hex (coded)");
    packet_cmd->add_option("--symbols", pk_sym_hex, "payload symbols as hex");

    CLI11_PARSE(app, argc, argv);

    try {
        bool seed_configured = false;
        if (!config_path.empty())
            load_config_file(cfg, config_path, seed_configured);
        for (const auto& kv : set_args) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw UsageError("--set expects key=value, got '" + kv + "'");
            const std::string k = kv.substr(0, eq);
            apply_key(cfg, k, kv.substr(eq + 1));
            if (k == "seed")
                seed_configured = true;
        }
        if (seed_flag) {
            cfg.seed = *seed_flag;
        } else if (!seed_configured) {
            if (const char* env = std::getenv("RLNC_SEED"))
                cfg.seed = parse_number<std::uint64_t>(env, "RLNC_SEED");
        }

        if (run_cmd->parsed())
            return cmd_run(cfg, out_path, format);
        if (sweep_cmd->parsed())
            return cmd_sweep(cfg, out_path, format);
        if (bench_cmd->parsed())
            return cmd_bench(iterations, out_path);
        if (packet_cmd->parsed()) {
            if (pk_action == "decode") {
                if (pk_hex.empty())
                    throw UsageError("packet decode needs a hex argument");
                return cmd_packet_decode(pk_hex);
            }
            return cmd_packet_encode(pk_type, pk_gen, pk_gsize, pk_ssize, pk_cv_hex,
                                     pk_sym_hex);
        }
    } catch (const UsageError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const simnet::ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "internal error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
