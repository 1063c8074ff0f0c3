#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "bergman/cli.hpp"
#include "bergman/parallel.hpp"

namespace {

void usage() {
    std::fprintf(stderr, R"(bergman-lab: radial weights, Bergman kernels and small Hankel operators

usage: bergman-lab <command> [flags]

commands:
  weight-info       tail and moment samples for a weight
  class-test        doubling-class diagnostics (--which dhat|dcheck|d|m|all)
  hl-verify         moment series vs tail integral (--p, --alpha, --z s-grid)
  kernel-verify     modified kernel norm vs tail bound (--nu, --p, --N, --z)
  expansion-verify  telescoped kernel expansion identity and coefficient bound
  hankel-verify     Hankel norm vs V-transform sup over symbols (--symbol ...)
  bloch-verify      Bloch norm vs V-transform sup for analytic symbols
  bmo-verify        oscillation norms and projection Bloch ratios

flags: --weight SPEC --nu SPEC --symbol SPEC (repeatable) --p X --N K --n K
       --M K --gamma X --lambda X --r X --z a,b,c --grid-depth K --tol X
       --which NAME --alpha X --out PATH --format json|csv --exploratory
       --config PATH

weight specs:  standard:alpha=A | exp:c=C,a=A | logpow:alpha=A,beta=B |
               table:FILE | SPEC*pow(B) | SPEC*tailof(SPEC) | SPEC*log
symbol specs:  poly:[c0,c1,...] | lacunary:K=N | logsym | conj:SPEC |
               mono:a=A,b=B | grid:FILE | signre[:R=X]

exit codes: 0 pass/report, 3 failed verdict, 1 error.
environment: BERGMAN_LAB_THREADS=<positive integer>
)");
}

}  // namespace

int main(int argc, char** argv) {
    bergman::par::init_from_env();
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "help" || args[0] == "--help") {
        usage();
        return args.empty() ? 1 : 0;
    }
    try {
        auto t0 = std::chrono::steady_clock::now();
        auto config = bergman::parse_config(args);
        auto result = bergman::run(config);
        bergman::emit(result.report, config.format, config.out);
        double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        // wall time goes to stderr only: emitted files stay byte-stable
        std::fprintf(stderr, "[bergman-lab] %s %s in %.2fs\n", config.command.c_str(),
                     result.exit_code == 0 ? "ok" : "verdict-failed", wall);
        return result.exit_code;
    } catch (const bergman::ValidationError& e) {
        nlohmann::ordered_json err;
        err["error"] = {{"type", "validation"}, {"message", e.what()}};
        std::printf("%s\n", err.dump(2).c_str());
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        nlohmann::ordered_json err;
        err["error"] = {{"type", "runtime"}, {"message", e.what()}};
        std::printf("%s\n", err.dump(2).c_str());
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
