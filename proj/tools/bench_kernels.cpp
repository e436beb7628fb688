// Compares the serial reference implementations against the OpenMP kernels
// and checks that both produce identical results.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "railrisk/mc_oracle.hpp"
#include "railrisk/pipeline.hpp"

using railrisk::ExecPolicy;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void row(const std::string& name, double serial_ms, double omp_ms, bool identical) {
    std::printf("%-34s %10.2f ms %10.2f ms %8.2fx   %s\n", name.c_str(), serial_ms, omp_ms,
                serial_ms / omp_ms, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const std::string scenario_path = argc > 1 ? argv[1] : "data/demo.ini";
    const std::string table_dir = argc > 2 ? argv[2] : "data";
    const auto scenario = railrisk::load_scenario(scenario_path);
    const auto tables = railrisk::load_data_tables(table_dir);
    const auto& train = scenario.train(railrisk::TrainType::Unit);
    const auto& seg = scenario.route.front();

    std::printf("railrisk kernel benchmark (OpenMP %s)\n",
                railrisk::openmp_enabled() ? "enabled" : "not built in");
    std::printf("%-34s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    {
        const auto pod = railrisk::pod_pmf(scenario.pod_models.mainline_unit, train.length_cars);
        railrisk::SeverityFamily fam_s, fam_p;
        const double ts = time_ms(
            [&] {
                fam_s = railrisk::linehaul_severity_family(
                    scenario.z_model, railrisk::SeverityContext::Mainline, train, seg,
                    ExecPolicy::Serial);
            },
            5);
        const double tp = time_ms(
            [&] {
                fam_p = railrisk::linehaul_severity_family(
                    scenario.z_model, railrisk::SeverityContext::Mainline, train, seg,
                    ExecPolicy::OpenMP);
            },
            5);
        bool same = fam_s.by_pod.size() == fam_p.by_pod.size();
        for (std::size_t i = 0; same && i < fam_s.by_pod.size(); ++i) {
            same = fam_s.by_pod[i].masses() == fam_p.by_pod[i].masses();
        }
        row("severity family (L=100)", ts, tp, same);

        std::vector<double> pd_s, pd_p;
        const double us = time_ms(
            [&] { pd_s = railrisk::position_derail_probs(pod, fam_s, ExecPolicy::Serial); }, 5);
        const double up = time_ms(
            [&] { pd_p = railrisk::position_derail_probs(pod, fam_p, ExecPolicy::OpenMP); }, 5);
        row("position derail profile", us, up, pd_s == pd_p);
    }

    {
        railrisk::mc::SimConfig cfg;
        cfg.trials = 200000;
        cfg.seed = 42;
        railrisk::DiscretePmf out_s, out_p;
        cfg.policy = ExecPolicy::Serial;
        const double ts = time_ms(
            [&] {
                out_s = railrisk::mc::simulate_release_counts(
                    scenario, railrisk::TrainType::Unit, railrisk::mc::SimContext::MainlineSegment,
                    cfg);
            },
            3);
        cfg.policy = ExecPolicy::OpenMP;
        const double tp = time_ms(
            [&] {
                out_p = railrisk::mc::simulate_release_counts(
                    scenario, railrisk::TrainType::Unit, railrisk::mc::SimContext::MainlineSegment,
                    cfg);
            },
            3);
        row("mc mainline (2e5 trials)", ts, tp, out_s.masses() == out_p.masses());
    }

    {
        railrisk::mc::SimConfig cfg;
        cfg.trials = 1000000;
        cfg.seed = 42;
        railrisk::DiscretePmf out_s, out_p;
        cfg.policy = ExecPolicy::Serial;
        const double ts = time_ms(
            [&] {
                out_s = railrisk::mc::simulate_release_counts(
                    scenario, railrisk::TrainType::Manifest, railrisk::mc::SimContext::AD, cfg);
            },
            3);
        cfg.policy = ExecPolicy::OpenMP;
        const double tp = time_ms(
            [&] {
                out_p = railrisk::mc::simulate_release_counts(
                    scenario, railrisk::TrainType::Manifest, railrisk::mc::SimContext::AD, cfg);
            },
            3);
        row("mc yard A/D (1e6 trials)", ts, tp, out_s.masses() == out_p.masses());
    }

    return 0;
}
