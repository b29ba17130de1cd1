#include "mz/job.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>

int main(int argc, char** argv) {
    CLI::App app{"Moduli-space pullback and pushforward jobs"};
    std::string job_path;
    std::string out_path;
    mz::RunOptions options;
    int orbit = -1;
    app.add_option("--job", job_path, "Job document (JSON); '-' reads stdin")->required();
    app.add_option("--out", out_path, "Report path; overrides the job's 'out' field");
    app.add_option("--threads", options.threads, "Worker threads for pushforward columns")
        ->check(CLI::Range(1, 256));
    app.add_option("--max-tuples", options.max_tuples, "Abort when monodromy enumeration exceeds this many tuples (0: no limit)");
    app.add_option("--orbit", orbit, "Braid orbit id to restrict to; overrides the job's 'component'")
        ->check(CLI::NonNegativeNumber);
    CLI11_PARSE(app, argc, argv);
    if (orbit >= 0)
        options.orbit = orbit;

    std::string document;
    if (job_path == "-") {
        document.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(job_path);
        if (!in) {
            std::cerr << "cannot read " << job_path << "\n";
            return 2;
        }
        document.assign(std::istreambuf_iterator<char>(in), {});
    }

    mz::RunResult result = mz::run_document(document, options);
    if (out_path.empty()) {
        try {
            if (auto job = mz::parse_job(document); job.out)
                out_path = *job.out;
        } catch (const mz::JobError&) {
        }
    }
    std::string text = result.report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "cannot write " << out_path << "\n";
            return 2;
        }
        out << text;
    }
    if (result.exit_code == 2 && result.report.contains("error"))
        std::cerr << result.report["error"].get<std::string>() << "\n";
    return result.exit_code;
}
