#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ionfilm/runner.hpp"

using namespace ionfilm;

int main(int argc, char** argv) {
    CLI::App app{"ionfilm: steady stress and linear-stability growth rates of a "
                 "viscoelastic film under normal-incidence irradiation"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "csv";
    double gamma_ratio = 0;
    bool have_gamma = false;
    double tol = 0;
    bool have_tol = false;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value config file")->required();
        sub->add_option("--out", out_path, "output path (default: stdout)");
        sub->add_option("--format", format, "csv | json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--gamma-ratio", gamma_ratio, "override B/G")
            ->each([&](const std::string&) { have_gamma = true; });
        sub->add_option("--tol", tol, "verification tolerance (relative)")
            ->each([&](const std::string&) { have_tol = true; });
    };

    CLI::App* steady = app.add_subcommand("steady", "steady stress/strain report");
    CLI::App* dispersion = app.add_subcommand("dispersion", "growth-rate sweep from the full relation");
    CLI::App* neutral = app.add_subcommand("neutral", "neutral-stability curve D*(Q)");
    CLI::App* viscous = app.add_subcommand("viscous", "closed-form viscous incompressible sweep");
    CLI::App* verify = app.add_subcommand("verify", "dual-path analytic vs shooting verification");
    for (CLI::App* sub : {steady, dispersion, neutral, viscous, verify}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    Mode mode = Mode::steady;
    if (dispersion->parsed()) mode = Mode::dispersion;
    else if (neutral->parsed()) mode = Mode::neutral;
    else if (viscous->parsed()) mode = Mode::viscous;
    else if (verify->parsed()) mode = Mode::verify;

    try {
        RunConfig cfg = parse_config_file(mode, config_path);
        cfg.out_path = out_path;
        cfg.format = (format == "json") ? OutputFormat::json : OutputFormat::csv;
        if (have_gamma) cfg.overrides.gamma_ratio = gamma_ratio;
        if (have_tol) cfg.overrides.tol = tol;
        validate_config(cfg);
        return execute(cfg, std::cout);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
