// awfs-forge: command-line driver over instance files and certificates.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "awfs/commands.hpp"

#ifndef AWFS_FIXTURE_DIR
#define AWFS_FIXTURE_DIR "fixtures"
#endif

namespace fs = std::filesystem;
using namespace awfs;

namespace {

std::string resolve_instance(const std::string& positional, const std::string& fixture) {
    if (!fixture.empty()) return std::string(AWFS_FIXTURE_DIR) + "/" + fixture + ".json";
    if (positional.empty()) throw InstanceError("$", "no instance file or --fixture given");
    if (fs::exists(positional)) return positional;
    auto candidate = std::string(AWFS_FIXTURE_DIR) + "/" + positional + ".json";
    if (fs::exists(candidate)) return candidate;
    return positional;
}

int threads_from(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("AWFS_FORGE_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    return 1;
}

void emit(const json& j, const std::string& out) {
    auto text = canonical_dump(j) + "\n";
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw InstanceError(out, "cannot write file");
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Algebraic weak factorization systems on finite presheaf categories"};
    app.set_version_flag("--version", kEngineVersion);
    app.require_subcommand(1);

    std::string instance_path, fixture, out, variant, generators, cert_path;
    int max_steps = 0, max_elements = 0, threads = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("instance", instance_path, "Instance file or fixture name");
        sub->add_option("--fixture", fixture, "Bundled fixture name (FIX-M, FIX-G, FIX-DIV, FIX-LAN, FIX-LAN1)");
        sub->add_option("--out", out, "Write the result here instead of standard output");
    };
    auto add_engine = [&](CLI::App* sub) {
        add_common(sub);
        sub->add_option("--variant", variant, "Small object argument variant")->check(CLI::IsMember({"monic", "standard"}));
        sub->add_option("--max-steps", max_steps, "Stage limit")->check(CLI::PositiveNumber);
        sub->add_option("--max-elements", max_elements, "Stage size limit")->check(CLI::PositiveNumber);
        sub->add_option("--threads", threads, "Worker threads (default: AWFS_FORGE_THREADS or 1)")->check(CLI::PositiveNumber);
        sub->add_option("--generators", generators, "Generator diagram to use");
    };

    auto* validate = app.add_subcommand("validate", "Parse and exhaustively validate an instance");
    add_common(validate);
    std::vector<std::pair<std::string, CLI::App*>> engine;
    for (const char* name : {"soa", "lift", "model", "transport", "quillen-check"}) {
        static const std::map<std::string, std::string> help{
            {"soa", "Run the small object argument on every instance arrow"},
            {"lift", "Lifting functions of free algebras and canonical lifts"},
            {"model", "Comparison map, model axioms, replacements and chi"},
            {"transport", "Transport generators along the instance adjunction"},
            {"quillen-check", "Check the algebraic Quillen adjunction conditions"}};
        auto* sub = app.add_subcommand(name, help.at(name));
        add_engine(sub);
        engine.emplace_back(name, sub);
    }
    auto* verify = app.add_subcommand("verify-cert", "Recheck a certificate against its instance");
    add_common(verify);
    verify->add_option("certificate", cert_path, "Certificate file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            auto path = resolve_instance(instance_path, fixture);
            json doc;
            try {
                doc = read_json_file(path);
            } catch (const InstanceError& e) {
                std::cerr << e.what() << "\n";
                return kFailure;
            }
            auto r = cmd_validate(doc);
            emit(r.certificate, out);
            if (r.exit_code != kOk) std::cerr << r.message << "\n";
            return r.exit_code;
        }
        if (verify->parsed()) {
            auto in = load_instance(resolve_instance(instance_path, fixture));
            auto cert = read_json_file(cert_path);
            auto failure = verify_certificate(in, cert);
            json result{{"status", failure ? "rejected" : "accepted"}};
            if (failure) result["reason"] = *failure;
            emit(result, out);
            if (failure) {
                std::cerr << *failure << "\n";
                return kFailure;
            }
            return kOk;
        }
        for (const auto& [name, sub] : engine) {
            if (!sub->parsed()) continue;
            auto in = load_instance(resolve_instance(instance_path, fixture));
            CommandOptions o;
            if (!variant.empty()) o.variant = variant == "monic" ? Variant::monic : Variant::standard;
            if (max_steps > 0) o.max_steps = max_steps;
            if (max_elements > 0) o.max_elements = max_elements;
            if (!generators.empty()) o.generators = generators;
            o.threads = threads_from(threads);
            auto r = run_command(name, in, o);
            emit(r.certificate, out);
            if (r.exit_code != kOk) std::cerr << r.message << "\n";
            return r.exit_code;
        }
    } catch (const InstanceError& e) {
        std::cerr << e.what() << "\n";
        return kFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}
