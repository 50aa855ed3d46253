// sma: analysis, loss evaluation, gradient checking, synthesis and motion
// transfer experiments over SMAV/PGM video files.
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error,
// 3 numerical failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sma/diffusion.hpp"
#include "sma/gradcheck.hpp"
#include "sma/json_writer.hpp"
#include "sma/noise.hpp"
#include "sma/objective.hpp"
#include "sma/synth.hpp"
#include "sma/transfer.hpp"
#include "sma/video_io.hpp"
#include "sma/wavelet.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::string json_out = "-";
    std::string config_file;
};

struct SmaFlags {
    std::string levels = "auto";
    double delta = 0.05;
    double lambda_g = 0.4;
    double lambda_l = 0.2;
    std::string align = "mse";
};

struct SynthFlags {
    std::string pattern = "translate-square";
    std::size_t frames = 8;
    std::size_t size = 32;
    std::string velocity = "2,0";
    std::size_t object_size = 6;
    std::string background = "flat";
    std::string artifact = "none";
    double artifact_strength = 0.3;
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--json", opts.json_out, "JSON report path, or - for stdout");
    cmd->add_option("--config", opts.config_file,
                    "JSON config file; its keys override the flags");
}

void add_sma_flags(CLI::App* cmd, SmaFlags& f) {
    cmd->add_option("--levels", f.levels, "wavelet levels, or auto");
    cmd->add_option("--delta", f.delta, "frequency weighting exponent");
    cmd->add_option("--lambda-g", f.lambda_g, "global loss weight");
    cmd->add_option("--lambda-l", f.lambda_l, "local loss weight");
    cmd->add_option("--align", f.align, "base alignment kind")
        ->check(CLI::IsMember({"mse", "l1", "cosine"}));
}

void add_synth_flags(CLI::App* cmd, SynthFlags& f) {
    cmd->add_option("--pattern", f.pattern, "synthetic pattern")
        ->check(CLI::IsMember({"translate-square", "translate-impulse", "rotate-bar"}));
    cmd->add_option("--frames", f.frames, "frame count");
    cmd->add_option("--size", f.size, "frame height = width");
    cmd->add_option("--velocity", f.velocity, "object velocity DX,DY in px/frame");
    cmd->add_option("--object-size", f.object_size, "object side length");
    cmd->add_option("--background", f.background, "background kind")
        ->check(CLI::IsMember({"flat", "texture"}));
    cmd->add_option("--artifact", f.artifact, "artifact kind")
        ->check(CLI::IsMember({"none", "fence", "stair", "flicker"}));
    cmd->add_option("--artifact-strength", f.artifact_strength, "artifact amplitude");
    cmd->add_option("--seed", f.seed, "random seed");
}

std::size_t parse_levels(const std::string& levels) {
    if (levels == "auto") return sma::kAutoLevels;
    const auto v = std::stoul(levels);
    if (v < 1)
        throw sma::value_error("--levels must be a positive count or auto");
    return v;
}

std::pair<int, int> parse_velocity(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw sma::value_error("--velocity expects DX,DY");
    try {
        return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw sma::value_error("--velocity expects integers DX,DY");
    }
}

sma::TimestepPolicy parse_timesteps(const std::string& s) {
    sma::TimestepPolicy p;
    if (s == "none") return p;
    if (s.rfind("uniform:", 0) == 0) {
        const auto body = s.substr(8);
        const auto comma = body.find(',');
        if (comma != std::string::npos) {
            p.sample = true;
            p.t_low = std::stoul(body.substr(0, comma));
            p.t_high = std::stoul(body.substr(comma + 1));
            return p;
        }
    }
    throw sma::value_error("--timesteps expects none or uniform:LO,HI");
}

sma::SmaConfig resolve_sma(const SmaFlags& f) {
    sma::SmaConfig cfg;
    cfg.levels = parse_levels(f.levels);
    cfg.delta = f.delta;
    cfg.lambda_g = f.lambda_g;
    cfg.lambda_l = f.lambda_l;
    cfg.align = sma::parse_align_kind(f.align);
    return cfg;
}

sma::SynthSpec resolve_synth(const SynthFlags& f) {
    sma::SynthSpec spec;
    spec.pattern = sma::parse_pattern(f.pattern);
    spec.frames = f.frames;
    spec.size = f.size;
    const auto [dx, dy] = parse_velocity(f.velocity);
    spec.dx = dx;
    spec.dy = dy;
    spec.object_size = f.object_size;
    spec.background = sma::parse_background(f.background);
    spec.artifact = sma::parse_artifact(f.artifact);
    spec.artifact_strength =
        spec.artifact == sma::Artifact::none ? 0.0 : f.artifact_strength;
    spec.seed = f.seed;
    return spec;
}

// Config file keys are the long flag names without the leading dashes.
template <typename Apply>
void apply_config_file(const std::string& path, Apply&& apply) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in)
        throw sma::load_error(sma::load_error::reason::unreadable,
                              "cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw sma::value_error("config file " + path + ": " + e.what());
    }
    if (!j.is_object())
        throw sma::value_error("config file " + path + ": expected a JSON object");
    for (const auto& [key, value] : j.items()) apply(key, value);
}

void emit_report(const std::string& dest, const std::string& json) {
    if (dest.empty()) return;
    if (dest == "-") {
        std::cout << json << "\n";
        return;
    }
    std::ofstream out(dest, std::ios::binary | std::ios::trunc);
    if (!out)
        throw sma::io_error("cannot open " + dest + " for writing");
    out << json << "\n";
}

void write_sma_config(sma::JsonWriter& j, const sma::SmaConfig& cfg) {
    j.key("lambda_g").value(cfg.lambda_g);
    j.key("lambda_l").value(cfg.lambda_l);
    j.key("delta").value(cfg.delta);
    if (cfg.levels == sma::kAutoLevels)
        j.key("levels").value("auto");
    else
        j.key("levels").value(static_cast<std::uint64_t>(cfg.levels));
    j.key("align").value(sma::align_kind_name(cfg.align));
}

void write_synth_config(sma::JsonWriter& j, const sma::SynthSpec& spec) {
    j.key("pattern").value(sma::pattern_name(spec.pattern));
    j.key("frames").value(static_cast<std::uint64_t>(spec.frames));
    j.key("size").value(static_cast<std::uint64_t>(spec.size));
    j.key("velocity").value(std::to_string(spec.dx) + "," + std::to_string(spec.dy));
    j.key("object_size").value(static_cast<std::uint64_t>(spec.object_size));
    j.key("background").value(sma::background_name(spec.background));
    j.key("artifact").value(sma::artifact_name(spec.artifact));
    j.key("artifact_strength").value(spec.artifact_strength);
    j.key("seed").value(spec.seed);
}

int run_synth(const SynthFlags& flags, const std::string& out_path,
              const CommonOpts& common) {
    const sma::SynthSpec spec = resolve_synth(flags);
    const sma::SynthResult result = sma::synth_video(spec);
    if (!out_path.empty()) sma::save_video(result.video, out_path);
    sma::JsonWriter j;
    j.begin_object();
    j.key("command").value("synth");
    j.key("config").begin_object();
    write_synth_config(j, spec);
    j.key("out").value(out_path);
    j.end_object();
    j.key("velocity").begin_object();
    j.key("dx").value(result.velocity_dx);
    j.key("dy").value(result.velocity_dy);
    j.end_object();
    j.end_object();
    emit_report(common.json_out, j.str());
    return 0;
}

int run_loss(const std::string& ref_path, const std::string& pred_path,
             const SmaFlags& flags, const CommonOpts& common) {
    const sma::SmaConfig cfg = resolve_sma(flags);
    const sma::VideoTensor ref = sma::load_video(ref_path);
    const sma::VideoTensor pred = sma::load_video(pred_path);
    if (!ref.same_shape(pred))
        throw sma::value_error("loss: dimension mismatch between " + ref_path + " and " +
                               pred_path);
    const auto m_ref = sma::motion_vectors(ref);
    const auto m_pred = sma::motion_vectors(pred);
    const auto breakdown = sma::sma_loss(m_ref, m_pred, cfg);
    const std::size_t levels = sma::resolve_levels(cfg, m_ref.entries());
    sma::JsonWriter j;
    j.begin_object();
    j.key("l_align").value(breakdown.l_align);
    j.key("l_global").value(breakdown.l_global);
    j.key("l_local_amp").value(breakdown.l_local_amp);
    j.key("l_local_phase").value(breakdown.l_local_phase);
    j.key("total").value(breakdown.total);
    j.key("config").begin_object();
    j.key("lambda_g").value(cfg.lambda_g);
    j.key("lambda_l").value(cfg.lambda_l);
    j.key("delta").value(cfg.delta);
    j.key("levels").value(static_cast<std::uint64_t>(levels));
    j.key("align").value(sma::align_kind_name(cfg.align));
    j.key("ref").value(ref_path);
    j.key("pred").value(pred_path);
    j.end_object();
    j.end_object();
    emit_report(common.json_out, j.str());
    return 0;
}

int run_gradcheck(std::uint64_t seed, std::size_t frames, std::size_t size, double eps,
                  const SmaFlags& flags, const CommonOpts& common) {
    const sma::SmaConfig cfg = resolve_sma(flags);
    const auto report = sma::check_sma_gradient_seeded(seed, frames, size, cfg, eps);
    sma::JsonWriter j;
    j.begin_object();
    j.key("command").value("gradcheck");
    j.key("config").begin_object();
    j.key("seed").value(seed);
    j.key("frames").value(static_cast<std::uint64_t>(frames));
    j.key("size").value(static_cast<std::uint64_t>(size));
    j.key("eps").value(eps);
    write_sma_config(j, cfg);
    j.end_object();
    j.key("max_rel_error").value(report.max_rel_error);
    j.key("checked").value(static_cast<std::uint64_t>(report.checked));
    j.key("skipped").value(static_cast<std::uint64_t>(report.skipped));
    j.key("passed").value(report.passed());
    j.end_object();
    emit_report(common.json_out, j.str());
    if (!report.passed())
        throw sma::numeric_error("gradcheck failed: max relative error " +
                                 sma::format_double(report.max_rel_error));
    return 0;
}

int run_analyze(const std::string& input, const std::string& levels_flag,
                const std::string& out_dir, const CommonOpts& common) {
    const sma::VideoTensor video = sma::load_video(input);
    const auto motion = sma::motion_vectors(video);
    const std::size_t levels = levels_flag == "auto"
                                   ? sma::auto_levels(motion.entries())
                                   : parse_levels(levels_flag);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    {
        sma::VideoTensor as_video(motion.entries(), motion.channels(), motion.height(),
                                  motion.width(), motion.values());
        sma::save_video(as_video, dir / "motion.smav");
    }
    for (std::size_t c = 0; c < motion.channels(); ++c) {
        const fs::path csv = c == 0 ? dir / "spectrum.csv"
                                    : dir / ("spectrum_c" + std::to_string(c) + ".csv");
        std::ofstream out(csv, std::ios::binary | std::ios::trunc);
        if (!out)
            throw sma::io_error("cannot open " + csv.string() + " for writing");
        sma::write_spectrum_csv(out, motion, c);
    }
    {
        std::ofstream out(dir / "wavelet.csv", std::ios::binary | std::ios::trunc);
        if (!out)
            throw sma::io_error("cannot write wavelet.csv in " + out_dir);
        sma::write_wavelet_csv(out, motion, levels);
    }

    // Per-band wavelet energies.
    std::vector<double> detail_energy(levels, 0.0);
    double approx_energy = 0.0;
    for (std::size_t c = 0; c < motion.channels(); ++c)
        for (std::size_t y = 0; y < motion.height(); ++y)
            for (std::size_t x = 0; x < motion.width(); ++x) {
                const auto w = sma::dwt1d(sma::pixel_series(motion, c, y, x), levels);
                for (std::size_t j = 0; j < levels; ++j)
                    for (double v : w.detail[j]) detail_energy[j] += v * v;
                for (double v : w.approx) approx_energy += v * v;
            }

    // High-frequency share of the motion spectra.
    const std::size_t h = motion.height(), w = motion.width();
    const double radius2 = std::pow(static_cast<double>(std::min(h, w)) / 4.0, 2.0);
    double hf = 0.0, total = 0.0;
    for (std::size_t n = 0; n < motion.entries(); ++n)
        for (std::size_t c = 0; c < motion.channels(); ++c) {
            const auto spec = sma::dft2(motion.entry(n).subspan(c * h * w, h * w), h, w);
            for (std::size_t a = 0; a < h; ++a)
                for (std::size_t b = 0; b < w; ++b) {
                    const double amp = spec.amplitude(a, b);
                    const double da = static_cast<double>(a) - static_cast<double>(h) / 2.0;
                    const double db = static_cast<double>(b) - static_cast<double>(w) / 2.0;
                    total += amp * amp;
                    if (da * da + db * db > radius2) hf += amp * amp;
                }
        }

    sma::JsonWriter j;
    j.begin_object();
    j.key("command").value("analyze");
    j.key("config").begin_object();
    j.key("input").value(input);
    j.key("levels").value(static_cast<std::uint64_t>(levels));
    j.key("out").value(out_dir);
    j.end_object();
    j.key("frames").value(static_cast<std::uint64_t>(video.frames()));
    j.key("motion_entries").value(static_cast<std::uint64_t>(motion.entries()));
    j.key("band_energy").begin_object();
    for (std::size_t lvl = 0; lvl < levels; ++lvl)
        j.key("detail_l" + std::to_string(lvl + 1)).value(detail_energy[lvl]);
    j.key("approx").value(approx_energy);
    j.end_object();
    j.key("hf_energy_fraction").value(total > 0.0 ? hf / total : 0.0);
    j.end_object();
    emit_report((dir / "summary.json").string(), j.str());
    if (common.json_out != (dir / "summary.json").string())
        emit_report(common.json_out, j.str());
    return 0;
}

int run_transfer(const std::string& source_path, const SynthFlags& synth_flags,
                 bool synth_requested, const SmaFlags& sma_flags, std::size_t steps,
                 double lr, const std::string& init, const std::string& timesteps,
                 std::uint64_t seed, const std::string& out_path,
                 const std::string& trace_csv, const CommonOpts& common) {
    sma::TransferConfig cfg;
    cfg.steps = steps;
    cfg.step_size = lr;
    cfg.init = sma::parse_init_kind(init);
    cfg.sma = resolve_sma(sma_flags);
    cfg.timesteps = parse_timesteps(timesteps);
    cfg.seed = seed;

    std::optional<sma::VideoTensor> source;
    std::optional<sma::VideoTensor> clean;
    std::optional<sma::Displacement> velocity;
    std::optional<sma::SynthSpec> spec;
    if (!source_path.empty()) {
        source = sma::load_video(source_path);
    } else if (synth_requested) {
        spec = resolve_synth(synth_flags);
        auto made = sma::synth_video(*spec);
        velocity = sma::Displacement{made.velocity_dx, made.velocity_dy};
        source = std::move(made.video);
        if (spec->artifact != sma::Artifact::none) {
            sma::SynthSpec clean_spec = *spec;
            clean_spec.artifact = sma::Artifact::none;
            clean_spec.artifact_strength = 0.0;
            clean = std::move(sma::synth_video(clean_spec).video);
        }
    } else {
        throw sma::value_error("transfer: provide --source or synthesis flags");
    }

    const auto result =
        sma::transfer(*source, cfg, velocity, clean.has_value() ? &*clean : nullptr);
    if (!out_path.empty()) sma::save_video(result.output, out_path);
    if (!trace_csv.empty()) {
        std::ofstream out(trace_csv, std::ios::binary | std::ios::trunc);
        if (!out)
            throw sma::io_error("cannot open " + trace_csv + " for writing");
        sma::write_trace_csv(out, result.report.loss_trace);
    }

    sma::JsonWriter j;
    j.begin_object();
    j.key("command").value("transfer");
    j.key("source").begin_object();
    if (!source_path.empty()) {
        j.key("path").value(source_path);
    } else {
        write_synth_config(j, *spec);
    }
    j.end_object();
    j.key("out").value(out_path);
    j.key("report").raw_value(sma::to_json(result.report, cfg));
    j.end_object();
    emit_report(common.json_out, j.str());
    return 0;
}

int run_ddim_demo(std::size_t frames, std::size_t size, std::size_t steps,
                  std::uint64_t seed, const CommonOpts& common) {
    const sma::NoiseStream rng(seed);
    const std::size_t count = frames * size * size;
    const sma::VideoTensor v0(frames, 1, size, size, rng.gaussians(0, 0, count));
    const sma::VideoTensor terminal(frames, 1, size, size, rng.gaussians(1, 0, count));
    const auto schedule = sma::make_schedule(1000);
    const sma::OracleDenoiser oracle(v0, schedule);
    const auto recon = sma::ddim_roundtrip(v0, terminal, steps, oracle, schedule);
    double max_err = 0.0;
    for (std::size_t i = 0; i < v0.size(); ++i)
        max_err = std::max(max_err, std::abs(recon.values()[i] - v0.values()[i]));
    sma::JsonWriter j;
    j.begin_object();
    j.key("command").value("ddim-demo");
    j.key("config").begin_object();
    j.key("frames").value(static_cast<std::uint64_t>(frames));
    j.key("size").value(static_cast<std::uint64_t>(size));
    j.key("steps").value(static_cast<std::uint64_t>(steps));
    j.key("seed").value(seed);
    j.end_object();
    j.key("max_abs_error").value(max_err);
    j.key("passed").value(max_err <= 1e-6);
    j.end_object();
    emit_report(common.json_out, j.str());
    if (max_err > 1e-6)
        throw sma::numeric_error("ddim-demo: reconstruction error " +
                                 sma::format_double(max_err));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral motion alignment toolbox"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic video");
    SynthFlags synth_flags;
    std::string synth_out;
    CommonOpts synth_common;
    add_synth_flags(synth, synth_flags);
    synth->add_option("--out", synth_out, "output SMAV path");
    add_common(synth, synth_common);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "export spectra and wavelet bands");
    std::string analyze_input, analyze_levels = "auto", analyze_out = "analysis";
    CommonOpts analyze_common;
    analyze->add_option("--input", analyze_input, "input video (SMAV or PGM directory)")
        ->required();
    analyze->add_option("--levels", analyze_levels, "wavelet levels, or auto");
    analyze->add_option("--out", analyze_out, "output directory");
    add_common(analyze, analyze_common);

    // loss
    auto* loss = app.add_subcommand("loss", "evaluate the alignment objective");
    std::string loss_ref, loss_pred;
    SmaFlags loss_sma;
    CommonOpts loss_common;
    loss->add_option("--ref", loss_ref, "reference video")->required();
    loss->add_option("--pred", loss_pred, "predicted video")->required();
    add_sma_flags(loss, loss_sma);
    add_common(loss, loss_common);

    // gradcheck
    auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient check");
    std::uint64_t gc_seed = 42;
    std::size_t gc_frames = 8, gc_size = 16;
    double gc_eps = 1e-5;
    SmaFlags gc_sma;
    CommonOpts gc_common;
    gradcheck->add_option("--seed", gc_seed, "instance seed");
    gradcheck->add_option("--frames", gc_frames, "frame count");
    gradcheck->add_option("--size", gc_size, "frame size");
    gradcheck->add_option("--eps", gc_eps, "finite difference step");
    add_sma_flags(gradcheck, gc_sma);
    add_common(gradcheck, gc_common);

    // transfer
    auto* transfer = app.add_subcommand("transfer", "latent-optimization motion transfer");
    std::string tr_source;
    SynthFlags tr_synth;
    std::size_t tr_steps = 500;
    double tr_lr = 0.05;
    std::string tr_init = "static";
    std::string tr_timesteps = "none";
    std::uint64_t tr_seed = 0;
    std::string tr_out, tr_trace;
    SmaFlags tr_sma;
    CommonOpts tr_common;
    transfer->add_option("--source", tr_source, "source video path");
    add_synth_flags(transfer, tr_synth);
    add_sma_flags(transfer, tr_sma);
    transfer->add_option("--steps", tr_steps, "optimization steps");
    transfer->add_option("--lr", tr_lr, "step length");
    transfer->add_option("--init", tr_init, "target initialization")
        ->check(CLI::IsMember({"random", "static", "static-first-frame", "copy",
                               "copy-target"}));
    transfer->add_option("--timesteps", tr_timesteps, "none or uniform:LO,HI");
    transfer->add_option("--out", tr_out, "output SMAV path");
    transfer->add_option("--trace-csv", tr_trace, "per-step loss CSV path");
    add_common(transfer, tr_common);

    // ddim-demo
    auto* ddim = app.add_subcommand("ddim-demo", "oracle-denoiser DDIM round trip");
    std::size_t dd_frames = 8, dd_size = 16, dd_steps = 50;
    std::uint64_t dd_seed = 0;
    CommonOpts dd_common;
    ddim->add_option("--frames", dd_frames, "frame count");
    ddim->add_option("--size", dd_size, "frame size");
    ddim->add_option("--steps", dd_steps, "DDIM steps");
    ddim->add_option("--seed", dd_seed, "seed");
    add_common(ddim, dd_common);

    // The transfer seed doubles as the synthesis seed unless --seed was set
    // on the synth flags explicitly; keep them as one flag.
    transfer->add_option("--transfer-seed", tr_seed,
                         "optimization seed (defaults to --seed)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) {
            apply_config_file(synth_common.config_file,
                              [&](const std::string& k, const nlohmann::json& v) {
                                  if (k == "pattern") synth_flags.pattern = v.get<std::string>();
                                  else if (k == "frames") synth_flags.frames = v.get<std::size_t>();
                                  else if (k == "size") synth_flags.size = v.get<std::size_t>();
                                  else if (k == "velocity") synth_flags.velocity = v.get<std::string>();
                                  else if (k == "object-size") synth_flags.object_size = v.get<std::size_t>();
                                  else if (k == "background") synth_flags.background = v.get<std::string>();
                                  else if (k == "artifact") synth_flags.artifact = v.get<std::string>();
                                  else if (k == "artifact-strength") synth_flags.artifact_strength = v.get<double>();
                                  else if (k == "seed") synth_flags.seed = v.get<std::uint64_t>();
                                  else if (k == "out") synth_out = v.get<std::string>();
                                  else throw sma::value_error("config: unknown key " + k);
                              });
            return run_synth(synth_flags, synth_out, synth_common);
        }
        if (analyze->parsed()) {
            apply_config_file(analyze_common.config_file,
                              [&](const std::string& k, const nlohmann::json& v) {
                                  if (k == "input") analyze_input = v.get<std::string>();
                                  else if (k == "levels") analyze_levels = v.is_string() ? v.get<std::string>() : std::to_string(v.get<std::size_t>());
                                  else if (k == "out") analyze_out = v.get<std::string>();
                                  else throw sma::value_error("config: unknown key " + k);
                              });
            return run_analyze(analyze_input, analyze_levels, analyze_out, analyze_common);
        }
        if (loss->parsed()) {
            apply_config_file(loss_common.config_file,
                              [&](const std::string& k, const nlohmann::json& v) {
                                  if (k == "ref") loss_ref = v.get<std::string>();
                                  else if (k == "pred") loss_pred = v.get<std::string>();
                                  else if (k == "levels") loss_sma.levels = v.is_string() ? v.get<std::string>() : std::to_string(v.get<std::size_t>());
                                  else if (k == "delta") loss_sma.delta = v.get<double>();
                                  else if (k == "lambda-g") loss_sma.lambda_g = v.get<double>();
                                  else if (k == "lambda-l") loss_sma.lambda_l = v.get<double>();
                                  else if (k == "align") loss_sma.align = v.get<std::string>();
                                  else throw sma::value_error("config: unknown key " + k);
                              });
            return run_loss(loss_ref, loss_pred, loss_sma, loss_common);
        }
        if (gradcheck->parsed()) {
            return run_gradcheck(gc_seed, gc_frames, gc_size, gc_eps, gc_sma, gc_common);
        }
        if (transfer->parsed()) {
            const bool synth_requested = tr_source.empty();
            if (transfer->count("--transfer-seed") == 0) tr_seed = tr_synth.seed;
            return run_transfer(tr_source, tr_synth, synth_requested, tr_sma, tr_steps,
                                tr_lr, tr_init, tr_timesteps, tr_seed, tr_out, tr_trace,
                                tr_common);
        }
        if (ddim->parsed()) {
            return run_ddim_demo(dd_frames, dd_size, dd_steps, dd_seed, dd_common);
        }
    } catch (const sma::numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const sma::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
