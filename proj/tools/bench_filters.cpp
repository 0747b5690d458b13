// Times the particle-filter likelihood with the serial reference kernels
// against the OpenMP kernels at increasing particle counts, and checks that
// both paths produce bit-identical estimates.

#include "soilc/simulator.hpp"
#include "soilc/soil_model.hpp"

#include <chrono>
#include <cstdio>

using namespace soilc;
namespace chrono = std::chrono;

namespace {

double time_loglik(const SoilModel& model, const ParameterVector& th, const RandomBank& bank,
                   int reps, double* value) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = chrono::steady_clock::now();
        *value = model.loglik(th, bank);
        const auto t1 = chrono::steady_clock::now();
        best = std::min(best, chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const int horizon = argc > 1 ? std::atoi(argv[1]) : 20;
    ModelSpec spec{Pools::ThreePool, Site::Tarlee};
    ParameterVector th;
    th.s2_eta_c = 0.005;
    th.s2_eta_b = 0.01;
    const auto sim = simulate(make_sim_config(spec, th, horizon, 7, false));

    std::printf("three-pool likelihood, horizon %d, %d fields, workers %d\n", horizon,
                kNumFields, resolve_workers(0));
    std::printf("%10s %14s %14s %10s %8s\n", "particles", "serial (ms)", "openmp (ms)",
                "speedup", "match");
    for (int n : {500, 2000, 8000, 32000}) {
        RbpfOptions serial;
        serial.particles = n;
        serial.exec = Exec::Serial;
        RbpfOptions parallel = serial;
        parallel.exec = Exec::OpenMP;

        SoilModel smodel(spec, sim.data, serial);
        SoilModel pmodel(spec, sim.data, parallel);
        Rng rng(99);
        const auto bank = smodel.make_bank(rng);

        double sval = 0, pval = 0;
        const int reps = n <= 2000 ? 5 : 3;
        const double st = time_loglik(smodel, th, bank, reps, &sval);
        const double pt = time_loglik(pmodel, th, bank, reps, &pval);
        std::printf("%10d %14.2f %14.2f %9.2fx %8s\n", n, st, pt, st / pt,
                    sval == pval ? "exact" : "DIFFER");
        if (sval != pval) return 1;
    }
    return 0;
}
