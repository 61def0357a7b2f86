#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "tenspec/error.hpp"
#include "tenspec/json_io.hpp"
#include "tenspec/odeco.hpp"
#include "tenspec/random.hpp"
#include "tenspec/spectral.hpp"
#include "tenspec/subdiff.hpp"
#include "tenspec/vonneumann.hpp"

namespace tenspec::cli {

namespace {

using nlohmann::json;

// Raised for flag combinations CLI11 cannot express; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NormFlags {
    double p = 1.0;
    double q = 1.0;
    std::string lambda = "auto";

    SchattenParams resolve(std::size_t order) const {
        if (lambda == "auto") {
            return SchattenParams(p, q, p == 1.0 && q == 1.0 ? 1.0 / static_cast<double>(order) : 1.0);
        }
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(lambda, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != lambda.size()) throw UsageError("--lambda must be a number or 'auto'");
        return SchattenParams(p, q, value);
    }
};

const CLI::Validator& lambda_syntax() {
    static const CLI::Validator v(
        [](std::string& s) -> std::string {
            if (s == "auto") return {};
            try {
                std::size_t used = 0;
                std::stod(s, &used);
                if (used == s.size()) return {};
            } catch (const std::exception&) {
            }
            return "--lambda must be a number or 'auto'";
        },
        "NUMBER|auto");
    return v;
}

void add_norm_flags(CLI::App* cmd, NormFlags& f) {
    cmd->add_option("--p", f.p, "mode exponent p >= 1")->capture_default_str();
    cmd->add_option("--q", f.q, "outer exponent q >= 1")->capture_default_str();
    cmd->add_option("--lambda", f.lambda, "scale, or 'auto' (1/D when p = q = 1, else 1)")
        ->check(lambda_syntax())
        ->capture_default_str();
}

json conjugate_json(const ConjugateValue& v) {
    return {{"finite", v.finite}, {"dual_ratio", v.dual_ratio}, {"value", v.value()}};
}

// Every command fills `result`; run() prints it.
struct Context {
    json result;
};

std::vector<std::string> gen_kinds() { return {"gaussian", "symmetric", "odeco", "symmetric-odeco"}; }

json generate(const std::string& kind, const std::vector<std::size_t>& dims, std::optional<std::size_t> rank,
              std::uint64_t seed) {
    const Shape shape(dims);
    if (kind == "gaussian") return io::to_json(random_gaussian(shape, seed));
    if (kind == "symmetric") {
        if (!shape.is_cubic()) throw DomainError("gen: symmetric tensors need equal mode sizes");
        return io::to_json(symmetrize(random_gaussian(shape, seed)));
    }
    const std::size_t r = rank.value_or(1);
    if (kind == "odeco") return io::to_json(random_odeco(shape, r, seed));
    if (!shape.is_cubic()) throw DomainError("gen: symmetric-odeco tensors need equal mode sizes");
    return io::to_json(random_symmetric_odeco(shape.dim(1), shape.order(), r, seed));
}

void emit(const json& doc, const std::string& path, json& result) {
    if (!path.empty()) io::write_json(path, doc);
    result = doc;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral calculus for dense tensors: HOSVD, Schatten norms, subgradients", "tenspec"};
    app.require_subcommand(1);
    Context ctx;
    std::function<void()> action;

    // gen
    std::string gen_kind = "gaussian", gen_out;
    std::vector<std::size_t> gen_shape;
    std::optional<std::size_t> gen_rank;
    std::uint64_t gen_seed = 0;
    auto* gen = app.add_subcommand("gen", "generate a random tensor or odeco representation");
    gen->add_option("--kind", gen_kind, "gaussian | symmetric | odeco | symmetric-odeco")
        ->check(CLI::IsMember(gen_kinds()))
        ->capture_default_str();
    gen->add_option("--shape", gen_shape, "mode sizes, e.g. 3,3,3")->required()->delimiter(',');
    gen->add_option("--rank", gen_rank, "rank for the odeco kinds (default 1)");
    gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
    gen->add_option("--out", gen_out, "also write the document to this file");
    gen->callback([&] { action = [&] { emit(generate(gen_kind, gen_shape, gen_rank, gen_seed), gen_out, ctx.result); }; });

    // hosvd
    std::string hosvd_in;
    auto* hos = app.add_subcommand("hosvd", "higher-order SVD of a tensor");
    hos->add_option("--in", hosvd_in, "tensor or odeco JSON")->required();
    hos->callback([&] { action = [&] { ctx.result = io::to_json(hosvd(io::read_tensor(hosvd_in))); }; });

    // spectrum
    std::string spec_in;
    auto* spectrum_cmd = app.add_subcommand("spectrum", "mode-d singular values for every mode");
    spectrum_cmd->add_option("--in", spec_in, "tensor or odeco JSON")->required();
    spectrum_cmd->callback([&] {
        action = [&] { ctx.result = {{"spectra", io::to_json(all_mode_spectra(io::read_tensor(spec_in)))}}; };
    });

    // norm
    std::string norm_in;
    NormFlags norm_flags;
    auto* norm = app.add_subcommand("norm", "Schatten-(p,q) tensor norm");
    norm->add_option("--in", norm_in, "tensor or odeco JSON")->required();
    add_norm_flags(norm, norm_flags);
    norm->callback([&] {
        action = [&] {
            const DenseTensor x = io::read_tensor(norm_in);
            ctx.result = {{"value", schatten_norm(x, norm_flags.resolve(x.order()))}};
        };
    });

    // subgrad
    std::string sub_in, sub_out;
    NormFlags sub_flags;
    auto* sub = app.add_subcommand("subgrad", "subgradient of the norm at an odeco tensor");
    sub->add_option("--in", sub_in, "odeco JSON")->required();
    sub->add_option("--out", sub_out, "also write the subgradient tensor to this file");
    add_norm_flags(sub, sub_flags);
    sub->callback([&] {
        action = [&] {
            const OdecoRep rep = io::read_odeco(sub_in);
            emit(io::to_json(subgrad_schatten(rep, sub_flags.resolve(rep.shape().order()))), sub_out, ctx.result);
        };
    });

    // check-subgrad
    std::string cs_x, cs_g;
    NormFlags cs_flags;
    double cs_tol = 1e-9;
    std::size_t cs_trials = 0;
    std::uint64_t cs_seed = 0;
    auto* cs = app.add_subcommand("check-subgrad", "certify that G is a subgradient of the norm at X");
    cs->add_option("--x", cs_x, "point X (tensor or odeco JSON)")->required();
    cs->add_option("--g", cs_g, "candidate G (tensor JSON)")->required();
    add_norm_flags(cs, cs_flags);
    cs->add_option("--tol", cs_tol, "relative tolerance")->capture_default_str();
    cs->add_option("--trials", cs_trials, "also sample the subgradient inequality this many times")
        ->capture_default_str();
    cs->add_option("--seed", cs_seed, "RNG seed for --trials")->capture_default_str();
    cs->callback([&] {
        action = [&] {
            const DenseTensor x = io::read_tensor(cs_x);
            const DenseTensor g = io::read_tensor(cs_g);
            const SchattenParams params = cs_flags.resolve(x.order());
            ctx.result = io::to_json(check_membership(x, g, params, cs_tol));
            if (cs_trials > 0) {
                ctx.result["min_slack"] = subgradient_inequality_test(x, g, params, cs_trials, cs_seed);
            }
        };
    });

    // vn-check
    std::string vn_x, vn_y;
    std::vector<std::string> vn_frames;
    double vn_tol = 1e-10;
    auto* vn = app.add_subcommand("vn-check", "Von Neumann inequality report, optionally with the equality structure");
    vn->add_option("--x", vn_x, "tensor X")->required();
    vn->add_option("--y", vn_y, "tensor Y")->required();
    vn->add_option("--tol", vn_tol, "relative tolerance")->capture_default_str();
    vn->add_option("--frames", vn_frames, "one orthogonal matrix file per mode")->delimiter(',');
    vn->callback([&] {
        action = [&] {
            const DenseTensor x = io::read_tensor(vn_x);
            const DenseTensor y = io::read_tensor(vn_y);
            if (vn_frames.empty()) {
                ctx.result = io::to_json(vn_report(x, y, vn_tol));
                return;
            }
            std::vector<Matrix> frames;
            for (const auto& path : vn_frames) frames.push_back(io::matrix_from_json(io::read_json(path)));
            ctx.result = io::to_json(check_equality_via_structure(x, y, frames, vn_tol));
        };
    });

    // conjugate-check
    std::string cc_in;
    NormFlags cc_flags;
    std::size_t cc_budget = 100000;
    std::uint64_t cc_seed = 0;
    auto* cc = app.add_subcommand("conjugate-check", "estimate the norm's convex conjugate at X");
    cc->add_option("--in", cc_in, "tensor or odeco JSON")->required();
    add_norm_flags(cc, cc_flags);
    cc->add_option("--budget", cc_budget, "number of norm evaluations")->capture_default_str();
    cc->add_option("--seed", cc_seed, "RNG seed")->capture_default_str();
    cc->callback([&] {
        action = [&] {
            const DenseTensor x = io::read_tensor(cc_in);
            const SchattenParams params = cc_flags.resolve(x.order());
            ctx.result = {{"estimate", io::to_json(estimate_tensor_conjugate(x, params, cc_budget, cc_seed))},
                          {"analytic", conjugate_json(analytic_tensor_conjugate(x, params))}};
        };
    });

    // verify
    verify::Config vconfig;
    bool quick = false, skip_cli = false;
    auto* ver = app.add_subcommand("verify", "run the seeded property suite");
    ver->add_option("--seed", vconfig.seed, "suite seed")->capture_default_str();
    auto* quick_flag = ver->add_flag("--quick", quick, "run a tenth of the trials");
    ver->add_option("--fraction", vconfig.fraction, "multiply every trial count")
        ->check(CLI::Range(1e-6, 1.0))
        ->excludes(quick_flag);
    ver->add_flag("--skip-cli-checks", skip_cli, "leave out the in-process CLI checks");
    int verify_status = 0;
    ver->callback([&] {
        action = [&] {
            if (quick) vconfig.fraction = 0.1;
            auto results = verify::run_all(vconfig);
            if (!skip_cli) {
                for (auto& r : results) {
                    if (r.id != 10) continue;
                    auto extra = cli_checks(vconfig.seed, vconfig.fraction);
                    r.checks.insert(r.checks.end(), extra.begin(), extra.end());
                }
            }
            ctx.result = verify::report_json(results, vconfig);
            verify_status = ctx.result["failed"].get<std::size_t>() == 0 ? 0 : 1;
        };
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    if (!action) {
        err << app.help();
        return 2;
    }
    try {
        action();
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const std::exception& e) {
        out << json{{"error", e.what()}}.dump() << '\n';
        return 1;
    }
    out << ctx.result.dump() << '\n';
    return verify_status;
}

namespace {

struct CommandOutput {
    int code = -1;
    json doc;
};

CommandOutput call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CommandOutput r;
    r.code = run(args, out, err);
    if (r.code == 0 || r.code == 1) r.doc = json::parse(out.str());
    return r;
}

class TempDir {
public:
    explicit TempDir(std::uint64_t tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("tenspec-cli-" + std::to_string(tag) + "-" + std::to_string(derive_seed(tag, reinterpret_cast<std::uintptr_t>(this))));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

std::string number(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

}  // namespace

std::vector<verify::Check> cli_checks(std::uint64_t seed, double fraction) {
    verify::Check agree;
    agree.name = "CLI output differs from the API (count)";
    verify::Check det;
    det.name = "verify report differs between identical seeds (count)";
    auto tally = [](verify::Check& c, bool ok) {
        ++c.trials;
        if (!ok) {
            ++c.failures;
            c.worst += 1.0;
        }
    };

    const std::uint64_t base = derive_seed(seed, 10);
    const TempDir dir(base);
    const std::size_t cases = std::max<std::size_t>(1, static_cast<std::size_t>(20 * fraction));
    const std::vector<SchattenParams> param_list = {SchattenParams(1, 1, 1.0 / 3), SchattenParams(2, 2, 1),
                                                   SchattenParams(3, 2, 1), SchattenParams(2, 1, 1)};
    for (std::size_t t = 0; t < cases; ++t) {
        const std::uint64_t s = derive_seed(base, t);
        const Shape shape{2 + t % 2, 3, 2 + (t / 2) % 2};
        const std::string xs = std::to_string(shape.dim(1)) + "," + std::to_string(shape.dim(2)) + "," +
                               std::to_string(shape.dim(3));
        const SchattenParams& params = param_list[t % param_list.size()];
        const std::vector<std::string> pflags = {"--p", number(params.p()), "--q", number(params.q()), "--lambda",
                                                 number(params.lambda())};
        auto with = [&](std::vector<std::string> a) {
            a.insert(a.end(), pflags.begin(), pflags.end());
            return a;
        };

        const std::string xfile = dir.file("x.json"), ofile = dir.file("o.json"), gfile = dir.file("g.json");
        const std::string ss = std::to_string(s);
        auto gx = call({"gen", "--kind", "gaussian", "--shape", xs, "--seed", ss, "--out", xfile});
        const DenseTensor x = random_gaussian(shape, s);
        tally(agree, gx.code == 0 && gx.doc == io::to_json(x) && io::read_tensor(xfile) == x);

        auto go = call({"gen", "--kind", "odeco", "--shape", xs, "--rank", "2", "--seed", ss, "--out", ofile});
        const OdecoRep rep = random_odeco(shape, 2, s);
        tally(agree, go.code == 0 && go.doc == io::to_json(rep));

        auto h = call({"hosvd", "--in", xfile});
        tally(agree, h.code == 0 && h.doc == io::to_json(hosvd(x)));

        auto sp = call({"spectrum", "--in", xfile});
        tally(agree, sp.code == 0 && sp.doc["spectra"] == io::to_json(all_mode_spectra(x)));

        auto nv = call(with({"norm", "--in", xfile}));
        tally(agree, nv.code == 0 && nv.doc["value"].get<double>() == schatten_norm(x, params));

        auto g = call(with({"subgrad", "--in", ofile, "--out", gfile}));
        const DenseTensor gt = subgrad_schatten(rep, params);
        tally(agree, g.code == 0 && g.doc == io::to_json(gt));

        auto cm = call(with({"check-subgrad", "--x", ofile, "--g", gfile, "--tol", "1e-9"}));
        tally(agree, cm.code == 0 && cm.doc == io::to_json(check_membership(to_dense(rep), gt, params, 1e-9)) &&
                         cm.doc["accepted"].get<bool>());

        auto vn = call({"vn-check", "--x", xfile, "--y", ofile, "--tol", "1e-10"});
        tally(agree, vn.code == 0 && vn.doc == io::to_json(vn_report(x, to_dense(rep), 1e-10)));

        auto cc = call(with({"conjugate-check", "--in", ofile, "--budget", "2000", "--seed", ss}));
        const auto est = estimate_tensor_conjugate(to_dense(rep), params, 2000, s);
        tally(agree, cc.code == 0 && cc.doc["estimate"] == io::to_json(est));
    }

    const std::vector<std::string> vargs = {"verify", "--seed", std::to_string(seed), "--fraction", "0.01",
                                            "--skip-cli-checks"};
    std::ostringstream a, b, e;
    const int ca = run(vargs, a, e);
    const int cb = run(vargs, b, e);
    tally(det, ca == cb && a.str() == b.str() && !a.str().empty());
    return {agree, det};
}

}  // namespace tenspec::cli
