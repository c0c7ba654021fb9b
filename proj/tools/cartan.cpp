#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"

#include "cartan/driver.hpp"
#include "cartan/errors.hpp"

namespace fs = std::filesystem;
using cartan::json;

namespace {

struct Io {
    std::string in, out, corpus;
    cartan::RunOptions opt;
};

std::string slurp(std::istream& is) { return {std::istreambuf_iterator<char>(is), {}}; }

void emit(const json& j, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(out);
    f << j.dump(2) << "\n";
}

// Parse failures become an input-error report rather than an exception.
cartan::RunResult run_text(const std::string& cmd, const std::string& text, const cartan::RunOptions& opt) {
    json input;
    try {
        input = json::parse(text);
    } catch (const json::parse_error& e) {
        cartan::RunResult r;
        r.report = {{"schema", cartan::kReportSchema}, {"command", cmd}, {"pass", false},
                    {"error", {{"code", "MalformedInput"}, {"message", e.what()}}}};
        r.exit_code = 2;
        return r;
    }
    return cartan::run(cmd, input, opt);
}

int run_command(const std::string& cmd, const Io& io) {
    if (!io.corpus.empty()) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(io.corpus))
            if (e.path().extension() == ".json") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        json runs = json::array();
        int code = 0;
        for (const auto& p : files) {
            std::ifstream f(p);
            auto r = run_text(cmd, slurp(f), io.opt);
            runs.push_back({{"file", p.filename().string()}, {"exit_code", r.exit_code}, {"report", r.report}});
            code = std::max(code, r.exit_code);
        }
        emit({{"schema", cartan::kReportSchema}, {"command", cmd}, {"corpus", io.corpus}, {"pass", code == 0},
              {"runs", runs}},
             io.out);
        return code;
    }
    std::string text;
    if (io.in.empty() || io.in == "-") {
        text = slurp(std::cin);
    } else {
        std::ifstream f(io.in);
        if (!f) {
            std::cerr << "cannot open " << io.in << "\n";
            return 2;
        }
        text = slurp(f);
    }
    auto r = run_text(cmd, text, io.opt);
    emit(r.report, io.out);
    return r.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite groupoids, inverse semigroups and regular inclusions: constructions and round-trip checks"};
    app.require_subcommand(1);

    std::vector<Io> ios(cartan::commands().size());
    std::vector<std::pair<CLI::App*, std::string>> subs;
    for (std::size_t i = 0; i < cartan::commands().size(); ++i) {
        const auto& name = cartan::commands()[i];
        auto* sub = app.add_subcommand(name, "run " + name + " on an instance JSON");
        Io& io = ios[i];
        sub->add_option("--in", io.in, "instance file (default stdin)");
        sub->add_option("--out", io.out, "report file (default stdout)");
        sub->add_option("--seed", io.opt.seed, "seed")->capture_default_str();
        sub->add_option("--cap", io.opt.cap, "enumeration cap")->capture_default_str();
        sub->add_option("--tol", io.opt.tol, "numeric tolerance")->capture_default_str();
        sub->add_option("--corpus", io.corpus, "run on every *.json file of a directory")->check(CLI::ExistingDirectory);
        subs.emplace_back(sub, name);
    }

    cartan::RandomOptions ro;
    std::string rout;
    auto* rnd = app.add_subcommand("random", "emit a seeded random instance");
    rnd->add_option("--kind", ro.kind, "principal-groupoid | group-bundle | transformation-groupoid | "
                                       "coboundary-action | subrelation")
        ->required();
    rnd->add_option("--atoms", ro.atoms, "number of atoms")->capture_default_str();
    rnd->add_option("--group", ro.group, "zN or sN")->capture_default_str();
    rnd->add_option("--max-block", ro.max_block, "largest matrix block of a coboundary action")->capture_default_str();
    rnd->add_flag("--strongly-normal", ro.strongly_normal, "subrelation with equal S-class sizes per R-class");
    rnd->add_flag("--ergodic", ro.ergodic, "subrelation with a single R-class");
    rnd->add_option("--seed", ro.seed, "seed")->capture_default_str();
    rnd->add_option("--out", rout, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (rnd->parsed()) {
        try {
            emit(cartan::random_instance(ro), rout);
            return 0;
        } catch (const cartan::Error& e) {
            std::cerr << e.what() << "\n";
            return 2;
        }
    }
    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i].first->parsed()) return run_command(subs[i].second, ios[i]);
    return 2;
}
