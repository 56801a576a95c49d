// Times the serial and the OpenMP difftest kernels on the same cases and
// checks that both produce the same summary.

#include "fgdet/oracle.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iomanip>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

int main(int argc, char** argv)
{
    CLI::App app{"Compare serial and parallel difftest kernels"};
    fgdet::DifftestConfig cfg;
    cfg.cases = 2000;
    int threads = 0;
    int repeats = 1;
    app.add_option("--seed", cfg.seed, "Seed");
    app.add_option("--cases", cfg.cases, "Cases per run")->check(CLI::PositiveNumber);
    app.add_option("--max-size", cfg.max_size, "Largest formula size");
    app.add_option("--threads", threads, "OpenMP threads (0 = default)");
    app.add_option("--repeats", repeats, "Timed repetitions")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    auto time = [&](auto&& kernel) {
        double best = 1e300;
        fgdet::DifftestSummary sum;
        for (int r = 0; r < repeats; ++r) {
            auto start = std::chrono::steady_clock::now();
            sum = kernel();
            best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        }
        return std::make_pair(best, sum);
    };
    auto [serial_s, serial] = time([&] { return fgdet::run_difftest_serial(cfg); });
    auto [parallel_s, parallel] = time([&] { return fgdet::run_difftest(cfg, threads); });

    int used = 1;
#ifdef _OPENMP
    used = threads > 0 ? threads : omp_get_max_threads();
#endif
    std::cout << std::fixed << std::setprecision(3);
    std::cout << "cases          " << cfg.cases << "\n";
    std::cout << "serial         " << serial_s << " s\n";
    std::cout << "parallel (" << used << ")   " << parallel_s << " s\n";
    std::cout << "speedup        " << serial_s / parallel_s << "\n";
    std::cout << "disagreements  " << serial.disagreements << "\n";
    bool same = serial == parallel;
    std::cout << "summaries      " << (same ? "identical" : "DIFFER") << "\n";
    return same ? 0 : 1;
}
